use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::arith::{crt, factor_parts, is_prime_u64, FactorBudget, FactorReport};
use crate::polymod::roots;
use crate::rsfamily::{algebraic_factors, f_eval, f_eval_mod, f_mod};

/// Properties every member of the family has, which are therefore not
/// re-checked per parameter.
pub const FAMILY_NOTES: [&str; 3] = [
    "E_t[5] and E[5] are isomorphic for every t (family-level property, not checked per t)",
    "E_t has good reduction at 5 for every t (family-level property, not checked per t)",
    "lambda_bound adds 2 per prime to lambda(E/K^ac) = 0 for y^2 = x^3 - x",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TStatus {
    /// Every prime divides `f(t)` and every prime factor of `f(t)` is 1 mod 4.
    Verified,
    /// Divisibility holds but factoring ran out of budget first.
    Unverified,
    /// A supplied prime does not divide `f(t)`, or `f(t)` has a prime factor
    /// that is not 1 mod 4.
    Rejected,
}

impl fmt::Display for TStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TStatus::Verified => "verified",
            TStatus::Unverified => "unverified",
            TStatus::Rejected => "rejected",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisibility {
    pub prime: u64,
    /// `l | f(t)` from the exact value.
    pub exact: bool,
    /// `l | f(t mod l)` with fixed-width arithmetic.
    pub fixed_width: bool,
}

/// Where a candidate came from: one root of `f` per prime, then the
/// `lift`-th representative of the CRT residue class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftOrigin {
    pub roots: Vec<u64>,
    pub lift: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TReport {
    #[serde(with = "crate::arith::decimal")]
    pub t: BigInt,
    pub primes: Vec<u64>,
    #[serde(with = "crate::arith::decimal")]
    pub f_value: BigInt,
    pub divisibility: Vec<Divisibility>,
    /// Absent when divisibility already failed and no factoring was done.
    pub factorization: Option<FactorReport>,
    pub all_factors_1mod4: Option<bool>,
    pub lambda_bound: Option<u64>,
    pub status: TStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<LiftOrigin>,
    pub notes: Vec<String>,
}

fn residue(v: &BigInt, l: u64) -> u64 {
    v.mod_floor(&BigInt::from(l))
        .to_u64()
        .expect("residue below l")
}

/// Checks a parameter `t` against `primes`: divisibility of `f(t)`, then a
/// factorization of `|f(t)|` that stops at the first prime factor which is
/// not 1 mod 4.
pub fn verify_t(t: &BigInt, primes: &[u64], budget: &FactorBudget) -> TReport {
    let f_value = f_eval(t);
    let divisibility: Vec<Divisibility> = primes
        .iter()
        .map(|&l| {
            let (exact, fixed_width) = if l < 2 {
                (false, false)
            } else {
                (residue(&f_value, l) == 0, f_eval_mod(residue(t, l), l) == 0)
            };
            Divisibility {
                prime: l,
                exact,
                fixed_width,
            }
        })
        .collect();
    let mut report = TReport {
        t: t.clone(),
        primes: primes.to_vec(),
        f_value,
        divisibility,
        factorization: None,
        all_factors_1mod4: None,
        lambda_bound: None,
        status: TStatus::Rejected,
        origin: None,
        notes: FAMILY_NOTES.iter().map(|s| s.to_string()).collect(),
    };
    if report.f_value.is_zero() || !report.divisibility.iter().all(|d| d.exact && d.fixed_width) {
        return report;
    }

    let (g, h) = algebraic_factors(t);
    let parts: Vec<BigUint> = [g, h].iter().map(|v| v.magnitude().clone()).collect();
    let not_1mod4 = |p: &BigUint| (p % 4u8) != BigUint::from(1u8);
    let fact = factor_parts(&parts, budget, Some(&not_1mod4));
    if fact.primes().any(not_1mod4) {
        report.all_factors_1mod4 = Some(false);
    } else if fact.is_complete() {
        report.all_factors_1mod4 = Some(true);
        report.lambda_bound = Some(2 * primes.len() as u64);
        report.status = TStatus::Verified;
    } else {
        report.status = TStatus::Unverified;
    }
    report.factorization = Some(fact);
    report
}

fn validate_primes(primes: &[u64]) -> Result<(), SearchError> {
    if primes.is_empty() {
        return Err(SearchError::EmptyInput);
    }
    for (i, &l) in primes.iter().enumerate() {
        if l <= 5 {
            return Err(SearchError::OutOfRange(l));
        }
        if !is_prime_u64(l) {
            return Err(SearchError::NotPrime(l));
        }
        if primes[..i].contains(&l) {
            return Err(SearchError::DuplicatePrime(l));
        }
    }
    Ok(())
}

/// Residue classes mod `∏ l` on which every `l` divides `f(t)`, as
/// `(least non-negative t, root tuple)`, sorted by `t`; and the modulus.
/// A CRT residue class and the root of `f` mod each prime it came from.
pub type RootClass = (BigInt, Vec<u64>);

pub fn root_classes(primes: &[u64]) -> Result<(Vec<RootClass>, BigInt), SearchError> {
    validate_primes(primes)?;
    let mut per_prime = Vec::with_capacity(primes.len());
    for &l in primes {
        let r = roots(&f_mod(l).expect("prime above 5"));
        if r.is_empty() {
            return Err(SearchError::RootNotFound(l));
        }
        per_prime.push(r);
    }
    let moduli: Vec<BigInt> = primes.iter().map(|&l| BigInt::from(l)).collect();
    let mut classes = Vec::new();
    let mut idx = vec![0usize; primes.len()];
    let modulus: BigInt = moduli.iter().product();
    'outer: loop {
        let tuple: Vec<u64> = idx.iter().zip(&per_prime).map(|(&i, r)| r[i]).collect();
        let congruences: Vec<(BigInt, BigInt)> = tuple
            .iter()
            .zip(&moduli)
            .map(|(&r, m)| (BigInt::from(r), m.clone()))
            .collect();
        let (t0, _) = crt(&congruences).expect("distinct primes are coprime");
        classes.push((t0, tuple));
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < per_prime[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    classes.sort();
    Ok((classes, modulus))
}

/// The first `max_candidates` non-negative `t` with every `l | f(t)`, in
/// increasing order, each run through [`verify_t`].
pub fn find_t(
    primes: &[u64],
    max_candidates: usize,
    budget: &FactorBudget,
) -> Result<Vec<TReport>, SearchError> {
    let (classes, modulus) = root_classes(primes)?;
    let candidates: Vec<(BigInt, LiftOrigin)> = (0u64..)
        .flat_map(|j| {
            let shift = &modulus * j;
            classes.iter().map(move |(t0, tuple)| {
                (
                    t0 + &shift,
                    LiftOrigin {
                        roots: tuple.clone(),
                        lift: j,
                    },
                )
            })
        })
        .take(max_candidates)
        .collect();
    Ok(candidates
        .into_par_iter()
        .map(|(t, origin)| {
            let mut report = verify_t(&t, primes, budget);
            report.origin = Some(origin);
            report
        })
        .collect())
}
