//! Exact integer arithmetic: residues below 2^63, primality, partial
//! factorization and CRT. Arbitrary precision comes from `num-bigint`.

mod crt;
pub mod decimal;
mod factor;
mod modular;
mod mont128;
mod primality;

use num_bigint::BigInt;
use thiserror::Error;

pub use self::crt::crt;
pub use self::factor::{
    factor, factor_parts, FactorBudget, FactorReport, FactorStatus, TRIAL_DIVISION_LIMIT,
};
pub use self::modular::{
    add_mod, inv_mod, legendre, mul_mod, pow_mod, reduce_i64, sqrt_mod, sub_mod, ModResidue,
    MAX_MODULUS,
};
pub use self::primality::{is_prime, is_prime_u64, PROBABILISTIC_ROUNDS};

pub(crate) use self::modular::{legendre_unchecked, sqrt_mod_prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("invalid modulus {0}: expected an odd modulus 2 < m < 2^63")]
    InvalidModulus(u64),
    #[error("{value} is not a square modulo {modulus}")]
    NoSquareRoot { value: u64, modulus: u64 },
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(BigInt, BigInt),
    #[error("modulus {0} is not positive")]
    NonPositiveModulus(BigInt),
    #[error("empty input")]
    EmptyInput,
}

/// Plain sieve of Eratosthenes, for small tables.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
