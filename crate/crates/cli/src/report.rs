use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use kida::iwasawa::{Interval, PlaceClass};
use kida::search::{PrimeCandidate, SearchStats, TReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub bound: u64,
    pub filter_version: u32,
    pub admissibility: bool,
    pub phi5_form: String,
    pub primes: Vec<u64>,
    pub stats: SearchStats,
}

/// Roots of `Φ5(X, 1728)` mod `prime`, with the shifts `c = prime - root`
/// of the linear factors `(x + c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SexticSplitting {
    pub prime: u64,
    pub roots: Vec<u64>,
    pub shifts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindTReport {
    pub primes: Vec<u64>,
    pub candidates: Vec<PrimeCandidate>,
    pub splittings: Vec<SexticSplitting>,
    pub reports: Vec<TReport>,
    pub verified: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceLine {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub above: Option<String>,
    pub e: u64,
    pub class: PlaceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HerbrandCheck {
    pub ord_p: u64,
    pub lambda: u64,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KidaReport {
    pub p: u64,
    pub degree: u64,
    pub lambda_k: u64,
    pub places: Vec<PlaceLine>,
    pub lambda_l: u64,
    pub herbrand: Option<HerbrandCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub p: u64,
    pub lambda_1: i64,
    pub sigma_difference: Interval,
    pub lambda_2: Interval,
    pub imprimitive_lambda: Interval,
    pub statement: String,
}

impl fmt::Display for SieveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} primes up to {} (admissibility {}, table {})",
            self.primes.len(),
            self.bound,
            if self.admissibility { "on" } else { "off" },
            self.phi5_form
        )?;
        for p in &self.primes {
            writeln!(f, "{p}")?;
        }
        write!(
            f,
            "examined {}; first failures:",
            self.stats.primes_examined
        )?;
        for (c, n) in &self.stats.first_failures {
            write!(f, " {c}={n}")?;
        }
        writeln!(f)
    }
}

impl fmt::Display for FindTReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.splittings {
            let factors = s.shifts.iter().fold(String::new(), |mut acc, c| {
                let _ = write!(acc, "(x + {c})");
                acc
            });
            writeln!(f, "Φ5(X, 1728) mod {} = {factors}", s.prime)?;
        }
        for r in &self.reports {
            writeln!(f, "t = {}: {}", r.t, r.status)?;
            if let Some(fact) = &r.factorization {
                writeln!(f, "  |f(t)| = {fact}")?;
            }
            if let Some(b) = r.lambda_bound {
                writeln!(f, "  lambda bound {b}")?;
            }
        }
        writeln!(
            f,
            "{} of {} candidates verified",
            self.verified.len(),
            self.reports.len()
        )
    }
}

impl fmt::Display for KidaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "p = {}, [L:K] = {}, λ(E/K∞) = {}",
            self.p, self.degree, self.lambda_k
        )?;
        for w in &self.places {
            write!(f, "  {} (e = {}): {}", w.label, w.e, w.class)?;
            if let Some(v) = &w.above {
                write!(f, " above {v}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "λ(E/L∞) = {}", self.lambda_l)?;
        if let Some(h) = &self.herbrand {
            writeln!(
                f,
                "Herbrand form: ord_p = {}, λ = {} ({})",
                h.ord_p,
                h.lambda,
                if h.agrees { "agrees" } else { "DISAGREES" }
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for LedgerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}, λ₁ = {}", self.p, self.lambda_1)?;
        writeln!(f, "{}", self.statement)?;
        writeln!(f, "Σ(σ₁ - σ₂) {}", self.sigma_difference)?;
        writeln!(f, "λ₁ + Σσ₁ = λ₂ + Σσ₂ {}", self.imprimitive_lambda)
    }
}
