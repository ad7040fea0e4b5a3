use super::SearchError;
use crate::arith::primes_up_to;

/// Largest upper bound the sieve accepts.
pub const SIEVE_LIMIT: u64 = 1_000_000_000;

/// Odd values per sieve segment.
pub const SEGMENT_ODDS: usize = 1 << 20;

/// All primes in `[lo, hi]`, ascending, by a segmented sieve over odd values.
pub fn sieve_primes(lo: u64, hi: u64) -> Result<Vec<u64>, SearchError> {
    if hi > SIEVE_LIMIT {
        return Err(SearchError::CostGuard {
            bound: hi,
            limit: SIEVE_LIMIT,
        });
    }
    if lo > hi {
        return Err(SearchError::InvalidRange { lo, hi });
    }
    let mut out = Vec::new();
    if lo <= 2 && hi >= 2 {
        out.push(2);
    }
    let base: Vec<u64> = primes_up_to(hi.isqrt()).into_iter().skip(1).collect();
    let mut start = lo.max(3) | 1;
    let mut segment = vec![true; SEGMENT_ODDS];
    while start <= hi {
        let end = hi.min(start + 2 * (SEGMENT_ODDS as u64 - 1));
        let len = ((end - start) / 2 + 1) as usize;
        segment[..len].fill(true);
        for &p in &base {
            if p * p > end {
                break;
            }
            let mut m = (p * p).max(start.div_ceil(p) * p);
            if m % 2 == 0 {
                m += p;
            }
            while m <= end {
                segment[((m - start) / 2) as usize] = false;
                m += 2 * p;
            }
        }
        out.extend(
            segment[..len]
                .iter()
                .enumerate()
                .filter(|(_, &alive)| alive)
                .map(|(i, _)| start + 2 * i as u64),
        );
        start = end + 2;
    }
    Ok(out)
}
