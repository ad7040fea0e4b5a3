//! Search for elliptic curves 5-congruent to `y^2 = x^3 - x` with large
//! anticyclotomic λ-invariant over Q(i), plus evaluators for the
//! Kida-type λ formula and the congruence λ-ledger.

pub mod arith;
pub mod curves;
pub mod iwasawa;
pub mod polymod;
pub mod rsfamily;
pub mod search;
