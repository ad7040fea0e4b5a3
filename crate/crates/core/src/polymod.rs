//! Dense univariate polynomials over F_ℓ.
//!
//! Only what the search needs: Euclid, x^ℓ mod f, the distinct-linear
//! splitting test and root extraction by equal-degree splitting. Degrees
//! stay at or below 12, so multiplication is schoolbook.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{add_mod, inv_mod, is_prime_u64, mul_mod, reduce_i64, sub_mod};

/// Default seed for root splitting.
pub const DEFAULT_ROOT_SEED: u64 = 0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("polynomials over F_{0} and F_{1} cannot be combined")]
    ModulusMismatch(u64, u64),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial must have degree at least 1")]
    DegreeTooSmall,
}

/// A polynomial over F_ℓ, coefficients indexed by degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyModP {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(coeffs: Vec<u64>, modulus: u64) -> Result<Self, PolyError> {
        check_modulus(modulus)?;
        Ok(Self::from_raw(
            coeffs.into_iter().map(|c| c % modulus).collect(),
            modulus,
        ))
    }

    pub fn from_i64(coeffs: &[i64], modulus: u64) -> Result<Self, PolyError> {
        check_modulus(modulus)?;
        Ok(Self::from_raw(
            coeffs.iter().map(|&c| reduce_i64(c, modulus)).collect(),
            modulus,
        ))
    }

    pub fn from_bigints(coeffs: &[BigInt], modulus: u64) -> Result<Self, PolyError> {
        check_modulus(modulus)?;
        let m = BigInt::from(modulus);
        let reduced = coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue below modulus"))
            .collect();
        Ok(Self::from_raw(reduced, modulus))
    }

    /// Coefficients must already be reduced and the modulus an odd prime.
    fn from_raw(mut coeffs: Vec<u64>, modulus: u64) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { modulus, coeffs }
    }

    pub fn zero(modulus: u64) -> Result<Self, PolyError> {
        Self::new(Vec::new(), modulus)
    }

    pub fn x(modulus: u64) -> Result<Self, PolyError> {
        Self::new(vec![0, 1], modulus)
    }

    fn constant(&self, c: u64) -> Self {
        Self::from_raw(vec![c % self.modulus], self.modulus)
    }

    fn x_like(&self) -> Self {
        Self::from_raw(vec![0, 1], self.modulus)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        let x = x % m;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, m), c, m))
    }

    pub fn derivative(&self) -> Self {
        let m = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % m, m))
            .collect();
        Self::from_raw(coeffs, m)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.modulus).expect("field element is invertible");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        Self::from_raw(self.coeffs.iter().map(|&a| mul_mod(a, c, m)).collect(), m)
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if self.modulus != other.modulus {
            return Err(PolyError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Euclidean division by a non-zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        self.check_same(divisor)?;
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        Ok(self.div_rem_unchecked(divisor))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                add_mod(a, b, m)
            })
            .collect();
        Self::from_raw(coeffs, m)
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                sub_mod(a, b, m)
            })
            .collect();
        Self::from_raw(coeffs, m)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.modulus;
        if self.is_zero() || other.is_zero() {
            return Self::from_raw(Vec::new(), m);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, m), m);
            }
        }
        Self::from_raw(out, m)
    }

    fn div_rem_unchecked(&self, divisor: &Self) -> (Self, Self) {
        let m = self.modulus;
        let dl = divisor.coeffs.len();
        if self.coeffs.len() < dl {
            return (Self::from_raw(Vec::new(), m), self.clone());
        }
        let inv_lead = inv_mod(divisor.leading(), m).expect("field element is invertible");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dl - 1], inv_lead, m);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(c, d, m), m);
            }
        }
        rem.truncate(dl - 1);
        (Self::from_raw(quot, m), Self::from_raw(rem, m))
    }

    fn rem_unchecked(&self, divisor: &Self) -> Self {
        self.div_rem_unchecked(divisor).1
    }

    /// `self^exp mod f`.
    fn pow_mod(&self, mut exp: u64, f: &Self) -> Self {
        let mut acc = self.constant(1).rem_unchecked(f);
        let mut base = self.rem_unchecked(f);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base).rem_unchecked(f);
            }
            base = base.mul_unchecked(&base).rem_unchecked(f);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Debug for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyModP({self} over F_{})", self.modulus)
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

fn check_modulus(m: u64) -> Result<(), PolyError> {
    if m < 3 || !is_prime_u64(m) {
        return Err(PolyError::InvalidModulus(m));
    }
    Ok(())
}

/// Monic gcd; `gcd(f, 0) = monic(f)`.
pub fn poly_gcd(f: &PolyModP, g: &PolyModP) -> Result<PolyModP, PolyError> {
    f.check_same(g)?;
    Ok(gcd_unchecked(f, g))
}

fn gcd_unchecked(f: &PolyModP, g: &PolyModP) -> PolyModP {
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem_unchecked(&b);
        a = b;
        b = r;
    }
    a.monic()
}

fn require_monic_positive(f: &PolyModP) -> Result<(), PolyError> {
    match f.degree() {
        None | Some(0) => Err(PolyError::DegreeTooSmall),
        _ if !f.is_monic() => Err(PolyError::NotMonic),
        _ => Ok(()),
    }
}

/// `x^ℓ mod f` by repeated squaring.
pub fn frobenius_power(f: &PolyModP) -> Result<PolyModP, PolyError> {
    require_monic_positive(f)?;
    Ok(f.x_like().pow_mod(f.modulus, f))
}

/// True iff `f` is a product of distinct monic linear factors over F_ℓ.
pub fn splits_distinct_linear(f: &PolyModP) -> Result<bool, PolyError> {
    require_monic_positive(f)?;
    let x = f.x_like().rem_unchecked(f);
    if frobenius_power(f)? != x {
        return Ok(false);
    }
    Ok(gcd_unchecked(f, &f.derivative()).degree() == Some(0))
}

/// Distinct roots of a non-zero `f` in `[0, ℓ)`, ascending.
pub fn roots(f: &PolyModP) -> Vec<u64> {
    roots_seeded(f, DEFAULT_ROOT_SEED)
}

/// As [`roots`], with an explicit seed for the splitting PRNG. The output
/// does not depend on the seed.
pub fn roots_seeded(f: &PolyModP, seed: u64) -> Vec<u64> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    if f.degree() == Some(0) {
        return Vec::new();
    }
    let f = f.monic();
    let x = f.x_like();
    let xl = x.pow_mod(f.modulus, &f);
    let linear_part = gcd_unchecked(&f, &xl.sub_unchecked(&x));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    split_linear(linear_part, &mut rng, &mut out);
    out.sort_unstable();
    out
}

/// `g` is monic and a product of distinct linear factors.
fn split_linear(g: PolyModP, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    let m = g.modulus;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(sub_mod(0, g.coeffs[0], m)),
        Some(d) => loop {
            let c = rng.gen_range(0..m);
            let shifted = PolyModP::from_raw(vec![c, 1], m);
            let h = shifted
                .pow_mod((m - 1) / 2, &g)
                .sub_unchecked(&g.constant(1));
            let a = gcd_unchecked(&g, &h);
            let da = a.degree().unwrap_or(0);
            if da > 0 && da < d {
                let b = g.div_rem_unchecked(&a).0;
                split_linear(a, rng, out);
                split_linear(b, rng, out);
                return;
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn p(c: &[i64], m: u64) -> PolyModP {
        PolyModP::from_i64(c, m).unwrap()
    }

    fn brute_roots(f: &PolyModP) -> Vec<u64> {
        (0..f.modulus()).filter(|&x| f.eval(x) == 0).collect()
    }

    #[test]
    fn gcd_examples() {
        let g = poly_gcd(&p(&[-1, 0, 1], 7), &p(&[-1, 1], 7)).unwrap();
        assert_eq!(g, p(&[-1, 1], 7));
        let f = p(&[3, 0, 2], 7);
        assert_eq!(
            poly_gcd(&f, &PolyModP::zero(7).unwrap()).unwrap(),
            f.monic()
        );
        assert_eq!(
            poly_gcd(&p(&[1], 7), &p(&[1], 11)),
            Err(PolyError::ModulusMismatch(7, 11))
        );
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_power(&p(&[-1, 0, 1], 7)).unwrap(), p(&[0, 1], 7));
        assert_eq!(frobenius_power(&p(&[1, 0, 1], 7)).unwrap(), p(&[0, 6], 7));
        assert_eq!(frobenius_power(&p(&[1, 0, 2], 7)), Err(PolyError::NotMonic));
        assert_eq!(frobenius_power(&p(&[1], 7)), Err(PolyError::DegreeTooSmall));
    }

    #[test]
    fn splitting_examples() {
        assert!(splits_distinct_linear(&p(&[-1, 0, 1], 7)).unwrap());
        assert!(!splits_distinct_linear(&p(&[1, 0, 1], 7)).unwrap());
        // (x - 1)^2 has all its roots in F_7 but is not squarefree.
        assert!(!splits_distinct_linear(&p(&[1, -2, 1], 7)).unwrap());
    }

    #[test]
    fn root_examples() {
        assert_eq!(roots(&p(&[-1, 0, 1], 7)), vec![1, 6]);
        assert!(roots(&p(&[1, 0, 1], 7)).is_empty());
        assert_eq!(roots(&p(&[0, 0, 0, 1], 7)), vec![0]);
        assert!(roots(&p(&[5], 7)).is_empty());
        // x^3 - x over F_3 is the product of all linear factors.
        assert_eq!(roots(&p(&[0, -1, 0, 1], 3)), vec![0, 1, 2]);
    }

    #[test]
    fn invalid_modulus() {
        assert_eq!(PolyModP::new(vec![1], 9), Err(PolyError::InvalidModulus(9)));
        assert_eq!(PolyModP::new(vec![1], 2), Err(PolyError::InvalidModulus(2)));
    }

    #[test]
    fn frobenius_matches_naive_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for l in crate::arith::primes_up_to(200)
            .into_iter()
            .filter(|&l| l > 2)
        {
            for _ in 0..10 {
                let deg = rng.gen_range(1..=6);
                let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..l)).collect();
                c.push(1);
                let f = PolyModP::new(c, l).unwrap();
                let x = PolyModP::x(l).unwrap();
                let mut naive = PolyModP::new(vec![1], l).unwrap();
                for _ in 0..l {
                    naive = naive.mul(&x).unwrap().div_rem(&f).unwrap().1;
                }
                assert_eq!(frobenius_power(&f).unwrap(), naive, "f = {f} over F_{l}");
            }
        }
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(
            crate::arith::primes_up_to(500)
                .into_iter()
                .filter(|&l| l > 2)
                .collect::<Vec<_>>(),
        )
    }

    proptest! {
        #[test]
        fn splitting_matches_brute_force(
            l in small_prime(),
            raw in prop::collection::vec(any::<u64>(), 1..=6),
        ) {
            let mut c: Vec<u64> = raw.iter().map(|v| v % l).collect();
            c.push(1);
            let f = PolyModP::new(c, l).unwrap();
            let r = brute_roots(&f);
            let squarefree = poly_gcd(&f, &f.derivative()).unwrap().degree() == Some(0);
            let expected = r.len() == f.degree().unwrap() && squarefree;
            prop_assert_eq!(splits_distinct_linear(&f).unwrap(), expected);
            prop_assert_eq!(roots(&f), r);
        }

        #[test]
        fn products_of_linear_factors_split(
            l in small_prime(),
            picks in prop::collection::btree_set(any::<u64>(), 1..=6),
            seed in any::<u64>(),
        ) {
            let rs: std::collections::BTreeSet<u64> = picks.iter().map(|v| v % l).collect();
            let mut f = PolyModP::new(vec![1], l).unwrap();
            for &r in &rs {
                f = f.mul(&PolyModP::new(vec![(l - r) % l, 1], l).unwrap()).unwrap();
            }
            prop_assert!(splits_distinct_linear(&f).unwrap());
            prop_assert_eq!(roots_seeded(&f, seed), rs.into_iter().collect::<Vec<_>>());
        }

        #[test]
        fn gcd_divides_both(
            l in small_prime(),
            a in prop::collection::vec(any::<u64>(), 1..8),
            b in prop::collection::vec(any::<u64>(), 1..8),
            common in prop::collection::vec(any::<u64>(), 1..4),
        ) {
            let c = PolyModP::new(common, l).unwrap();
            let f = PolyModP::new(a, l).unwrap().mul(&c).unwrap();
            let g = PolyModP::new(b, l).unwrap().mul(&c).unwrap();
            let d = poly_gcd(&f, &g).unwrap();
            if !f.is_zero() || !g.is_zero() {
                prop_assert!(d.is_monic());
                prop_assert!(f.div_rem(&d).unwrap().1.is_zero());
                prop_assert!(g.div_rem(&d).unwrap().1.is_zero());
            }
        }
    }
}
