//! The prime search and the parameter search.
//!
//! Primes `l` are kept when `l ≡ 1 (mod 20)`, `a_l(E) ≡ 2 (mod 5)` for
//! `E: y^2 = x^3 - x`, `Φ5(X, 1728)` splits into distinct linear factors
//! mod `l`, and `f` stays squarefree mod `l`. A parameter `t` is then lifted
//! by CRT from roots of `f` modulo the chosen primes.

mod cache;
mod filter;
mod sieve;
mod tparam;

use thiserror::Error;

pub use cache::{load_or_search, parse_cache, render_cache, CacheHeader};
pub use filter::{
    candidate_filter, find_candidates, Condition, PrimeCandidate, SearchOptions, SearchOutcome,
    SearchStats, DEFAULT_ORDER, FILTER_VERSION,
};
pub use sieve::{sieve_primes, SEGMENT_ODDS, SIEVE_LIMIT};
pub use tparam::{
    find_t, root_classes, verify_t, Divisibility, LiftOrigin, RootClass, TReport, TStatus,
    FAMILY_NOTES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("bound {bound} exceeds the limit {limit}")]
    CostGuard { bound: u64, limit: u64 },
    #[error("empty range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("{0} is not a prime above 5")]
    OutOfRange(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} appears more than once")]
    DuplicatePrime(u64),
    #[error("f has no root modulo {0}")]
    RootNotFound(u64),
    #[error("no primes supplied")]
    EmptyInput,
    #[error("invalid search options: {0}")]
    InvalidOptions(String),
    #[error("prime cache: {0}")]
    Cache(String),
}
