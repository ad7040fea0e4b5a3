use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ArithError;

/// Combine `x ≡ r_i (mod m_i)` for pairwise coprime moduli.
///
/// Returns the least non-negative solution together with the product of the
/// moduli.
pub fn crt(congruences: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt), ArithError> {
    let ((r0, m0), rest) = congruences.split_first().ok_or(ArithError::EmptyInput)?;
    if !m0.is_positive() {
        return Err(ArithError::NonPositiveModulus(m0.clone()));
    }
    let mut residue = r0.mod_floor(m0);
    let mut modulus = m0.clone();
    for (r, m) in rest {
        if !m.is_positive() {
            return Err(ArithError::NonPositiveModulus(m.clone()));
        }
        let egcd = modulus.extended_gcd(m);
        if !egcd.gcd.is_one() {
            return Err(ArithError::NotCoprime(modulus.clone(), m.clone()));
        }
        // residue + modulus * k ≡ r (mod m), with k = (r - residue) * modulus^{-1}.
        let inv = egcd.x.mod_floor(m);
        let k = ((r - &residue) * inv).mod_floor(m);
        residue += &modulus * k;
        modulus *= m;
        residue = residue.mod_floor(&modulus);
    }
    debug_assert!(!residue.is_negative() && residue < modulus || modulus.is_zero());
    Ok((residue, modulus))
}
