//! The one-parameter family of curves `E_t` that are 5-congruent to
//! `y^2 = x^3 - x`, seen only through its discriminant polynomial
//! `f(t) = g(t) h(t)` with `g = 5t^4 - 2t^2 + 1` and
//! `h = 25t^8 - 100t^6 - 210t^4 - 20t^2 + 1`, together with `Φ5(X, 1728)`.
//!
//! `Δ(E_t) = 64 f(t)^5`, so a prime divides `Δ(E_t)` exactly when it divides
//! `f(t)`.

mod phi5;
mod resultant;

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{self, add_mod, mul_mod, reduce_i64, FactorBudget};

pub use phi5::{
    phi5_at_1728, phi5_at_1728_form, phi5_table, Phi5Form, Phi5Table, J_1728, PHI5_TABLE,
};
pub use resultant::resultant;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("Phi5 table line {line}: {reason}")]
    Phi5Table { line: usize, reason: String },
    #[error("Phi5 table failed its self-check: {0}")]
    Phi5SelfCheck(String),
    #[error("admissibility is only defined for primes above 5, got {0}")]
    OutOfRange(u64),
}

pub const G_COEFFS: [i64; 5] = [1, 0, -2, 0, 5];
pub const H_COEFFS: [i64; 9] = [1, 0, -20, 0, -210, 0, -100, 0, 25];
pub const DISC_SCALE: i64 = 64;

/// Everything about the family that is computed once.
#[derive(Debug)]
pub struct RsPolynomials {
    pub f: Vec<BigInt>,
    pub disc_scale: BigInt,
    pub res_f_df: BigInt,
    /// Primes dividing `Res(f, f')`, ascending.
    pub bad_primes: Vec<BigUint>,
}

pub fn rs_polynomials() -> &'static RsPolynomials {
    static DATA: OnceLock<RsPolynomials> = OnceLock::new();
    DATA.get_or_init(|| {
        let f = f_coefficients().to_vec();
        let res_f_df = resultant(&f, &resultant::derivative(&f));
        assert!(!res_f_df.is_zero(), "f is squarefree");
        let report = arith::factor(res_f_df.magnitude(), &FactorBudget::default());
        assert!(report.is_complete(), "Res(f, f') factors completely");
        RsPolynomials {
            f,
            disc_scale: BigInt::from(DISC_SCALE),
            res_f_df,
            bad_primes: report.primes().cloned().collect(),
        }
    })
}

/// Coefficients of `f`, index = degree.
pub fn f_coefficients() -> &'static [BigInt] {
    static F: OnceLock<Vec<BigInt>> = OnceLock::new();
    F.get_or_init(|| {
        let mut out = vec![BigInt::zero(); G_COEFFS.len() + H_COEFFS.len() - 1];
        for (i, g) in G_COEFFS.iter().enumerate() {
            for (j, h) in H_COEFFS.iter().enumerate() {
                out[i + j] += BigInt::from(g * h);
            }
        }
        out
    })
}

fn horner(coeffs: &[BigInt], t: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * t + c)
}

fn horner_small(coeffs: &[i64], t: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| acc * t + BigInt::from(c))
}

pub fn f_eval(t: &BigInt) -> BigInt {
    horner(f_coefficients(), t)
}

/// `(g(t), h(t))`, whose product is `f(t)`.
pub fn algebraic_factors(t: &BigInt) -> (BigInt, BigInt) {
    (horner_small(&G_COEFFS, t), horner_small(&H_COEFFS, t))
}

/// `f(t) mod l` with fixed-width arithmetic; `l` any modulus in `[2, 2^63)`.
pub fn f_eval_mod(t: u64, l: u64) -> u64 {
    let t = t % l;
    let coeffs: &[i64] = &F_SMALL;
    coeffs.iter().rev().fold(0, |acc, &c| {
        add_mod(mul_mod(acc, t, l), reduce_i64(c, l), l)
    })
}

/// `f` with machine-sized coefficients, for the modular hot path.
const F_SMALL: [i64; 13] = {
    let mut out = [0i64; 13];
    let mut i = 0;
    while i < G_COEFFS.len() {
        let mut j = 0;
        while j < H_COEFFS.len() {
            out[i + j] += G_COEFFS[i] * H_COEFFS[j];
            j += 1;
        }
        i += 1;
    }
    out
};

/// Reduction of `f` to F_l.
pub fn f_mod(l: u64) -> Result<crate::polymod::PolyModP, crate::polymod::PolyError> {
    crate::polymod::PolyModP::from_i64(&F_SMALL, l)
}

pub fn disc_eval(t: &BigInt) -> BigInt {
    f_eval(t).pow(5) * DISC_SCALE
}

/// Whether `f` and `f'` stay coprime mod `l`, i.e. `l ∤ Res(f, f')`.
pub fn is_admissible(l: u64) -> Result<bool, FamilyError> {
    if l <= 5 {
        return Err(FamilyError::OutOfRange(l));
    }
    let l = BigUint::from(l);
    Ok(rs_polynomials().bad_primes.binary_search(&l).is_err())
}

/// `|Res(f, f')|` as an unsigned integer.
pub fn resultant_magnitude() -> BigUint {
    rs_polynomials().res_f_df.abs().magnitude().clone()
}
