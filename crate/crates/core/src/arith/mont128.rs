//! Montgomery arithmetic for odd moduli below 2^128, with R = 2^128.
//!
//! Used by Miller–Rabin and Pollard rho once a cofactor fits in two limbs;
//! that covers the hard split in the 10^36-sized quartic factor of f(t).

#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const LO: u128 = u64::MAX as u128;
    let (a0, a1) = (a & LO, a >> 64);
    let (b0, b1) = (b & LO, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LO) + (p10 & LO);
    let lo = (p00 & LO) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont128 {
    n: u128,
    /// -n^{-1} mod 2^128
    n_neg_inv: u128,
    /// R^2 mod n
    r2: u128,
}

impl Mont128 {
    pub fn new(n: u128) -> Self {
        assert!(
            n % 2 == 1 && n > 1,
            "Montgomery modulus must be odd and > 1"
        );
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        // R mod n, then double it 128 times to reach R^2 mod n.
        let r1 = (u128::MAX % n + 1) % n;
        let mut r2 = r1;
        for _ in 0..128 {
            r2 = Self::add_raw(r2, r2, n);
        }
        Self {
            n,
            n_neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn add_raw(a: u128, b: u128, n: u128) -> u128 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= n {
            s.wrapping_sub(n)
        } else {
            s
        }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.n_neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let carry = u128::from(lo.overflowing_add(ml).1);
        let (s, o1) = hi.overflowing_add(mh);
        let (s, o2) = s.overflowing_add(carry);
        if o1 || o2 || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        Self::add_raw(a, b, self.n)
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }

    pub fn encode(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    #[cfg(test)]
    pub fn decode(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    pub fn one(&self) -> u128 {
        self.encode(1)
    }

    pub fn pow(&self, base: u128, mut exp: u128) -> u128 {
        let mut acc = self.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}
