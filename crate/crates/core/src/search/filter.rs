use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sieve_primes, SearchError, SIEVE_LIMIT};
use crate::arith::is_prime_u64;
use crate::curves::ap_cm;
use crate::polymod::{splits_distinct_linear, PolyModP};
use crate::rsfamily::{is_admissible, phi5_at_1728_form, Phi5Form};

/// Bumped whenever the filter's output for a given bound could change.
pub const FILTER_VERSION: u32 = 1;

/// The five membership tests for the set of usable primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// `l ≡ 1 (mod 5)`
    C1,
    /// `a_l(E) ≡ 2 (mod 5)`
    C2,
    /// `Φ5(X, 1728)` splits into distinct linear factors mod `l`
    C3,
    /// `l ≡ 1 (mod 4)`
    C4,
    /// `f` and `f'` coprime mod `l`
    Adm,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::C4,
        Condition::Adm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::C1 => "c1",
            Condition::C2 => "c2",
            Condition::C3 => "c3",
            Condition::C4 => "c4",
            Condition::Adm => "adm",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| SearchError::InvalidOptions(format!("unknown condition {s:?}")))
    }
}

/// Cheapest first: residue tests, table lookup, Cornacchia, then Frobenius.
pub const DEFAULT_ORDER: [Condition; 5] = [
    Condition::C1,
    Condition::C4,
    Condition::Adm,
    Condition::C2,
    Condition::C3,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Apply the admissibility test.
    pub admissibility: bool,
    pub order: [Condition; 5],
    pub phi5_form: Phi5Form,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            workers: None,
            admissibility: true,
            order: DEFAULT_ORDER,
            phi5_form: Phi5Form::AsTabulated,
        }
    }
}

impl SearchOptions {
    fn validate(&self) -> Result<(), SearchError> {
        let mut seen = self.order.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != 5 {
            return Err(SearchError::InvalidOptions(
                "condition order must list each condition once".into(),
            ));
        }
        if self.workers == Some(0) {
            return Err(SearchError::InvalidOptions(
                "workers must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of the filter for one prime. `None` means not evaluated, either
/// because an earlier condition already failed or because the condition was
/// switched off.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCandidate {
    pub prime: u64,
    pub c1: Option<bool>,
    pub c2: Option<bool>,
    pub c3: Option<bool>,
    pub c4: Option<bool>,
    pub adm: Option<bool>,
    pub first_failure: Option<Condition>,
}

impl PrimeCandidate {
    fn new(prime: u64) -> Self {
        Self {
            prime,
            c1: None,
            c2: None,
            c3: None,
            c4: None,
            adm: None,
            first_failure: None,
        }
    }

    pub fn flag(&self, c: Condition) -> Option<bool> {
        match c {
            Condition::C1 => self.c1,
            Condition::C2 => self.c2,
            Condition::C3 => self.c3,
            Condition::C4 => self.c4,
            Condition::Adm => self.adm,
        }
    }

    fn set(&mut self, c: Condition, v: bool) {
        let slot = match c {
            Condition::C1 => &mut self.c1,
            Condition::C2 => &mut self.c2,
            Condition::C3 => &mut self.c3,
            Condition::C4 => &mut self.c4,
            Condition::Adm => &mut self.adm,
        };
        *slot = Some(v);
    }

    /// Every evaluated condition held. With admissibility switched off this
    /// is membership up to that one test.
    pub fn passes(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn check(l: u64, c: Condition, form: Phi5Form) -> bool {
    match c {
        Condition::C1 => l % 5 == 1,
        Condition::C4 => l % 4 == 1,
        Condition::Adm => is_admissible(l).expect("l > 5"),
        // Supersingular when l ≡ 3 mod 4, so a_l = 0 there.
        Condition::C2 => l % 4 == 1 && ap_cm(l).expect("l ≡ 1 mod 4, l > 5").rem_euclid(5) == 2,
        Condition::C3 => {
            let phi = PolyModP::from_bigints(phi5_at_1728_form(form), l).expect("odd prime");
            splits_distinct_linear(&phi).expect("monic sextic")
        }
    }
}

fn evaluate(l: u64, opts: &SearchOptions) -> PrimeCandidate {
    let mut cand = PrimeCandidate::new(l);
    for &c in &opts.order {
        if c == Condition::Adm && !opts.admissibility {
            continue;
        }
        let ok = check(l, c, opts.phi5_form);
        cand.set(c, ok);
        if !ok {
            cand.first_failure = Some(c);
            break;
        }
    }
    cand
}

/// Runs the conditions on a single prime `l > 5`, in `opts.order`,
/// stopping at the first failure.
pub fn candidate_filter(l: u64, opts: &SearchOptions) -> Result<PrimeCandidate, SearchError> {
    opts.validate()?;
    if l <= 5 {
        return Err(SearchError::OutOfRange(l));
    }
    if !is_prime_u64(l) {
        return Err(SearchError::NotPrime(l));
    }
    Ok(evaluate(l, opts))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub bound: u64,
    /// Primes `7 <= l <= bound` run through the filter.
    pub primes_examined: u64,
    /// How many primes were eliminated by each condition.
    pub first_failures: BTreeMap<Condition, u64>,
    pub survivors: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub primes: Vec<u64>,
    pub stats: SearchStats,
}

const MIN_CHUNK: u64 = 1 << 16;

/// All primes `l <= bound` that pass every enabled condition, ascending.
///
/// The range is cut into disjoint chunks that are sieved and filtered
/// independently; results are concatenated in chunk order, so the output
/// does not depend on the number of workers.
pub fn find_candidates(bound: u64, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    opts.validate()?;
    if bound > SIEVE_LIMIT {
        return Err(SearchError::CostGuard {
            bound,
            limit: SIEVE_LIMIT,
        });
    }
    let mut stats = SearchStats {
        bound,
        ..SearchStats::default()
    };
    if bound < 7 {
        return Ok(SearchOutcome {
            primes: Vec::new(),
            stats,
        });
    }
    let threads = opts
        .workers
        .unwrap_or_else(rayon::current_num_threads)
        .max(1) as u64;
    let chunk = ((bound - 6) / (threads * 8) + 1).max(MIN_CHUNK);
    let ranges: Vec<(u64, u64)> = (0..)
        .map(|i| 7 + i * chunk)
        .take_while(|&lo| lo <= bound)
        .map(|lo| (lo, (lo + chunk - 1).min(bound)))
        .collect();

    let run = || -> Result<Vec<Vec<PrimeCandidate>>, SearchError> {
        ranges
            .par_iter()
            .map(|&(lo, hi)| {
                Ok(sieve_primes(lo, hi)?
                    .into_iter()
                    .map(|l| evaluate(l, opts))
                    .collect())
            })
            .collect()
    };
    let chunks = match opts.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SearchError::InvalidOptions(e.to_string()))?
            .install(run)?,
        None => run()?,
    };

    let mut primes = Vec::new();
    for cand in chunks.into_iter().flatten() {
        stats.primes_examined += 1;
        match cand.first_failure {
            Some(c) => *stats.first_failures.entry(c).or_insert(0) += 1,
            None => primes.push(cand.prime),
        }
    }
    stats.survivors = primes.len() as u64;
    Ok(SearchOutcome { primes, stats })
}
