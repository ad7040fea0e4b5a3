//! λ-invariant bookkeeping: the Kida-type formula for a `p`-extension of
//! the anticyclotomic tower, its Herbrand-quotient form, and the corank
//! ledger relating the λ-invariants of two `p`-congruent curves.
//!
//! Nothing here computes a Selmer group. λ, coranks and the hypotheses of
//! the formulas are inputs; the code evaluates, classifies and checks
//! consistency.

mod ledger;
mod tower;

use thiserror::Error;

use crate::curves::Reduction;

pub use ledger::{
    anticyclotomic_sigma_class, congruence_ledger, lambda_difference, sigma_diff_bound, Corank,
    Decomposition, Interval, LambdaDifference, LambdaLedger, LowerBound, Omega0Place, SigmaBound,
};
pub use tower::{
    classify_place, herbrand_ord, kida_lambda, lambda_via_herbrand, Assumptions, PlaceClass,
    PlaceDatum, TowerSpec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IwasawaError {
    #[error("invalid tower spec: {0}")]
    InvalidSpec(String),
    #[error("assumption `{0}` is not satisfied")]
    AssumptionViolation(&'static str),
    #[error("place {0} is in P1 or P2 but is not finitely decomposed (assumption `finitely decomposed`)")]
    DecompositionViolation(String),
    #[error("the Herbrand form needs degree = p, got degree {degree} with p = {p}")]
    DegreeMismatch { degree: u64, p: u64 },
    #[error("invalid ledger: {0}")]
    InvalidLedger(String),
    #[error("place {0} has a negative corank")]
    InvalidCorank(String),
    #[error("E2 cannot have {0:?} reduction when Frobenius acts trivially on E1[p]")]
    ContradictsLemma(Reduction),
    #[error("the bound needs E1 good and E2 bad at the place")]
    NotApplicable,
    #[error("the place is not finitely decomposed in the tower")]
    NotInSigma,
}
