//! Fixed-width modular arithmetic for odd moduli below 2^63.
//!
//! Products go through `u128`, which is plenty for the moduli that show up
//! in the search (all below 10^9).

use std::fmt;

use num_bigint::BigUint;

use super::ArithError;

/// Largest modulus accepted by [`ModResidue`].
pub const MAX_MODULUS: u64 = 1 << 63;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Inverse modulo `m` by extended Euclid; `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// An element of `Z/mZ` for an odd modulus `2 < m < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModResidue {
    value: u64,
    modulus: u64,
}

impl ModResidue {
    pub fn new(value: u64, modulus: u64) -> Result<Self, ArithError> {
        check_modulus(modulus)?;
        Ok(Self {
            value: value % modulus,
            modulus,
        })
    }

    pub fn from_i64(value: i64, modulus: u64) -> Result<Self, ArithError> {
        check_modulus(modulus)?;
        Ok(Self {
            value: reduce_i64(value, modulus),
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn with(&self, value: u64) -> Self {
        Self {
            value,
            modulus: self.modulus,
        }
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixing residues with different moduli"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        self.with(add_mod(self.value, other.value, self.modulus))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_ring(other);
        self.with(sub_mod(self.value, other.value, self.modulus))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        self.with(mul_mod(self.value, other.value, self.modulus))
    }

    pub fn neg(&self) -> Self {
        self.with(sub_mod(0, self.value, self.modulus))
    }

    pub fn inv(&self) -> Option<Self> {
        inv_mod(self.value, self.modulus).map(|v| self.with(v))
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.with(pow_mod(self.value, exp, self.modulus))
    }

    /// Square-and-multiply with an arbitrary-precision exponent.
    pub fn pow_big(&self, exp: &BigUint) -> Self {
        let mut acc = 1u64;
        let m = self.modulus;
        for i in (0..exp.bits()).rev() {
            acc = mul_mod(acc, acc, m);
            if exp.bit(i) {
                acc = mul_mod(acc, self.value, m);
            }
        }
        self.with(acc)
    }
}

impl fmt::Display for ModResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

fn check_modulus(m: u64) -> Result<(), ArithError> {
    if m < 3 || m.is_multiple_of(2) || m >= MAX_MODULUS {
        return Err(ArithError::InvalidModulus(m));
    }
    Ok(())
}

/// Legendre symbol `(a | l)` for an odd prime `l`, by Euler's criterion.
pub fn legendre(a: i64, l: u64) -> Result<i8, ArithError> {
    check_modulus(l)?;
    Ok(legendre_unchecked(reduce_i64(a, l), l))
}

#[inline]
pub(crate) fn legendre_unchecked(a: u64, l: u64) -> i8 {
    let a = a % l;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

/// Square root modulo a prime (Tonelli–Shanks). Returns the smaller of the
/// two roots.
pub fn sqrt_mod(a: ModResidue) -> Result<ModResidue, ArithError> {
    let l = a.modulus;
    if !super::is_prime_u64(l) {
        return Err(ArithError::InvalidModulus(l));
    }
    let r = sqrt_mod_prime(a.value, l).ok_or(ArithError::NoSquareRoot {
        value: a.value,
        modulus: l,
    })?;
    Ok(a.with(r.min(l - r)))
}

/// Tonelli–Shanks on a known odd prime. `None` for non-residues.
pub(crate) fn sqrt_mod_prime(a: u64, l: u64) -> Option<u64> {
    let a = a % l;
    if a == 0 {
        return Some(0);
    }
    if legendre_unchecked(a, l) != 1 {
        return None;
    }
    if l % 4 == 3 {
        return Some(pow_mod(a, (l + 1) / 4, l));
    }
    let mut q = l - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre_unchecked(z, l) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, l);
    let mut t = pow_mod(a, q, l);
    let mut r = pow_mod(a, q.div_ceil(2), l);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, l);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), l);
        m = i;
        c = mul_mod(b, b, l);
        t = mul_mod(t, c, l);
        r = mul_mod(r, b, l);
    }
    Some(r)
}
