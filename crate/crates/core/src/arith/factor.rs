//! Partial factorization: trial division to 10^6, then Brent's variant of
//! Pollard rho under an iteration budget.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mont128::Mont128;
use super::primality::is_prime;

pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Number of rho steps between gcd evaluations.
const GCD_BATCH: u64 = 128;

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| super::primes_up_to(TRIAL_DIVISION_LIMIT))
}

/// Iteration caps for Pollard rho.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Rho steps allowed per attempt.
    pub rho_iterations: u64,
    /// Attempts (with fresh polynomial constants) per composite.
    pub restarts: u32,
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            rho_iterations: 1 << 28,
            restarts: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorStatus {
    Complete,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    #[serde(with = "super::decimal")]
    pub input: BigUint,
    /// Certified primes with multiplicity, ascending.
    #[serde(with = "super::decimal::pairs")]
    pub factors: Vec<(BigUint, u32)>,
    /// Unfactored composite part, if the budget ran out.
    #[serde(with = "super::decimal::option")]
    pub cofactor: Option<BigUint>,
    pub status: FactorStatus,
}

impl FactorReport {
    pub fn is_complete(&self) -> bool {
        self.status == FactorStatus::Complete
    }

    /// Product of `prime^exp` times the cofactor.
    pub fn reassemble(&self) -> BigUint {
        let mut acc = self.cofactor.clone().unwrap_or_else(BigUint::one);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }
}

impl fmt::Display for FactorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        if let Some(c) = &self.cofactor {
            terms.push(format!("[{c}]"));
        }
        if terms.is_empty() {
            terms.push("1".into());
        }
        write!(f, "{}", terms.join(" × "))
    }
}

/// Factor `n >= 1` within `budget`.
pub fn factor(n: &BigUint, budget: &FactorBudget) -> FactorReport {
    factor_parts(std::slice::from_ref(n), budget, None)
}

/// Factor a product supplied as known (not necessarily prime) parts.
///
/// When `stop_at` is given and returns true for a newly certified prime,
/// factoring halts and whatever is still unsplit becomes the cofactor.
pub fn factor_parts(
    parts: &[BigUint],
    budget: &FactorBudget,
    stop_at: Option<&dyn Fn(&BigUint) -> bool>,
) -> FactorReport {
    assert!(
        parts.iter().all(|p| !p.is_zero()),
        "factor input must be positive"
    );
    let input: BigUint = parts.iter().product();
    let mut primes: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut pending = Vec::new();
    let mut stopped = false;

    let record = |p: BigUint, e: u32, primes: &mut BTreeMap<BigUint, u32>| -> bool {
        let hit = stop_at.is_some_and(|f| f(&p));
        *primes.entry(p).or_insert(0) += e;
        hit
    };

    // Trial division first, across every part, so cheap rejections happen
    // before any rho work.
    for part in parts {
        let (small, rest) = trial_divide(part);
        for (p, e) in small {
            stopped |= record(BigUint::from(p), e, &mut primes);
        }
        if !rest.is_one() {
            pending.push(rest);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut composites = Vec::new();
    while let Some(x) = pending.pop() {
        if stopped {
            composites.push(x);
            continue;
        }
        if is_prime(&x) {
            stopped |= record(x, 1, &mut primes);
            continue;
        }
        if let Some((root, k)) = perfect_power(&x) {
            for _ in 0..k {
                pending.push(root.clone());
            }
            continue;
        }
        match split(&x, budget, &mut rng) {
            Some(d) => {
                let other = &x / &d;
                pending.push(d);
                pending.push(other);
            }
            None => composites.push(x),
        }
    }

    let cofactor = if composites.is_empty() {
        None
    } else {
        Some(composites.iter().product())
    };
    FactorReport {
        input,
        factors: primes.into_iter().collect(),
        status: if cofactor.is_none() {
            FactorStatus::Complete
        } else {
            FactorStatus::Partial
        },
        cofactor,
    }
}

fn trial_divide(n: &BigUint) -> (Vec<(u64, u32)>, BigUint) {
    let mut out = Vec::new();
    if let Some(mut m) = n.to_u64() {
        for &p in trial_primes() {
            if p * p > m {
                break;
            }
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
        if m > 1 && m <= TRIAL_DIVISION_LIMIT {
            out.push((m, 1));
            m = 1;
        }
        return (out, BigUint::from(m));
    }
    let mut m = n.clone();
    for &p in trial_primes() {
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            out.push((p, e));
            if m.is_one() {
                break;
            }
        }
    }
    (out, m)
}

/// Detects `x = r^k` with `k >= 2`, returning the smallest root.
fn perfect_power(x: &BigUint) -> Option<(BigUint, u32)> {
    // Every prime factor of x exceeds 10^6 at this point, so k <= bits / 19.
    let max_k = (x.bits() / 19) as u32;
    for k in 2..=max_k {
        let r = x.nth_root(k);
        if &r.pow(k) == x {
            return Some((r, k));
        }
    }
    None
}

/// Find a non-trivial divisor of an odd composite `n`.
fn split(n: &BigUint, budget: &FactorBudget, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    for _ in 0..budget.restarts.max(1) {
        let found = match u128::try_from(n) {
            Ok(small) => rho_u128(small, budget.rho_iterations, rng).map(BigUint::from),
            Err(_) => rho_big(n, budget.rho_iterations, rng),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn rho_u128(n: u128, max_steps: u64, rng: &mut ChaCha8Rng) -> Option<u128> {
    let ctx = Mont128::new(n);
    let c = ctx.encode(rng.gen_range(1..n));
    let step = |v: u128| ctx.add(ctx.mul(v, v), c);
    let mut y = ctx.encode(rng.gen_range(0..n));
    let mut x = y;
    let mut ys = y;
    let mut q = ctx.one();
    let mut g = 1u128;
    let mut r = 1u64;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        steps += r;
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let batch = GCD_BATCH.min(r - k);
            for _ in 0..batch {
                y = step(y);
                q = ctx.mul(q, ctx.sub(x, y));
            }
            g = gcd_u128(q, n);
            k += batch;
            steps += batch;
        }
        if steps > max_steps && g == 1 {
            return None;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd_u128(ctx.sub(x, ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, max_steps: u64, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let c = rng.gen_biguint_range(&BigUint::one(), n);
    let step = |v: &BigUint| (v * v + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = rng.gen_biguint_below(n);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        steps += r;
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = GCD_BATCH.min(r - k);
            for _ in 0..batch {
                y = step(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += batch;
            steps += batch;
        }
        if steps > max_steps && g.is_one() {
            return None;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = step(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}
