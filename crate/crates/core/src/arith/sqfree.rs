//! The multiplicative weights attached to odd squarefree integers.

use super::interval::{rat, Interval};
use super::primes::{distinct_prime_factors, spf_table};
use crate::error::{domain, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `theta(d) = prod_{p > 2, p | d} (p-1)/(p-2)` for even `d`.
pub fn theta(d: u64) -> Result<BigRational> {
    if d < 2 || d % 2 == 1 {
        return domain(format!("theta needs an even argument, got {d}"));
    }
    Ok(distinct_prime_factors(d)
        .into_iter()
        .filter(|&p| p > 2)
        .fold(BigRational::one(), |acc, p| acc * rat(p as i64 - 1, p as i64 - 2)))
}

fn is_squarefree(k: u64) -> bool {
    let mut n = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// `phi(k) = prod_{p | k} 1/(p-2)` for odd squarefree `k`.
pub fn phi_sqf(k: u64) -> Result<BigRational> {
    if k == 0 || k.is_multiple_of(2) || !is_squarefree(k) {
        return domain(format!("phi needs an odd squarefree argument, got {k}"));
    }
    Ok(distinct_prime_factors(k)
        .into_iter()
        .fold(BigRational::one(), |acc, p| acc * rat(1, p as i64 - 2)))
}

/// Compares the product form of `theta(d)` with the sum of `phi(k)` over the
/// odd squarefree divisors `k` of `d`, exactly.
pub fn theta_divisor_identity_check(d: u64) -> Result<bool> {
    let lhs = theta(d)?;
    let mut rhs = BigRational::zero();
    let mut k = 1;
    while k * k <= d {
        if d.is_multiple_of(k) {
            let pair = if k * k == d { vec![k] } else { vec![k, d / k] };
            for q in pair {
                if q % 2 == 1 && is_squarefree(q) {
                    rhs += phi_sqf(q)?;
                }
            }
        }
        k += 1;
    }
    Ok(lhs == rhs)
}

/// Odd squarefree `k <= n` with `prod_{p | k} (p-2)`.
fn odd_squarefree_weights(n: u64) -> Vec<(u64, u64)> {
    let spf = spf_table(n as usize);
    let mut out = Vec::new();
    'k: for k in (1..=n).step_by(2) {
        let mut m = k;
        let mut den = 1u64;
        while m > 1 {
            let p = spf[m as usize] as u64;
            m /= p;
            if m % p == 0 {
                continue 'k;
            }
            den *= p - 2;
        }
        out.push((k, den));
    }
    out
}

/// Sums above this cutoff are enclosed in fixed point instead of exactly.
pub const PHI_EXACT_LIMIT: u64 = 2_000;
const PHI_FIXED_BITS: u32 = 80;

/// `sum phi(k)` (or `sum phi(k)/k` when `weighted`) over odd squarefree `k <= n`.
/// Exact for `n <= PHI_EXACT_LIMIT`; an outward-rounded enclosure beyond.
pub fn phi_partial_sum(n: u64, weighted: bool) -> Result<Interval> {
    if n < 1 {
        return domain("phi_partial_sum needs N >= 1");
    }
    let terms = odd_squarefree_weights(n);
    let den_of = |k: u64, d: u64| -> u128 { d as u128 * if weighted { k as u128 } else { 1 } };
    if n <= PHI_EXACT_LIMIT {
        let s = terms
            .iter()
            .fold(BigRational::zero(), |acc, &(k, d)| {
                acc + BigRational::new(BigInt::one(), BigInt::from(den_of(k, d)))
            });
        return Ok(Interval::point(s));
    }
    let scale: u128 = 1u128 << PHI_FIXED_BITS;
    let (mut lo, mut hi) = (0u128, 0u128);
    for &(k, d) in &terms {
        let den = den_of(k, d);
        lo += scale / den;
        hi += scale.div_ceil(den);
    }
    let s = BigInt::from(BigUint::from(scale));
    Ok(Interval::new(
        BigRational::new(BigInt::from(lo), s.clone()),
        BigRational::new(BigInt::from(hi), s),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_values() {
        assert_eq!(theta(2).unwrap(), rat(1, 1));
        assert_eq!(theta(6).unwrap(), rat(2, 1));
        assert_eq!(theta(30).unwrap(), rat(8, 3));
        assert!(theta(3).is_err());
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_sqf(1).unwrap(), rat(1, 1));
        assert_eq!(phi_sqf(3).unwrap(), rat(1, 1));
        assert_eq!(phi_sqf(105).unwrap(), rat(1, 15));
        assert!(phi_sqf(9).is_err());
        assert!(phi_sqf(6).is_err());
    }

    #[test]
    fn identity_small() {
        for d in [2, 6, 90, 2 * 9 * 25, 2 * 3 * 5 * 7 * 11] {
            assert!(theta_divisor_identity_check(d).unwrap(), "d = {d}");
        }
    }

    #[test]
    fn partial_sums() {
        assert_eq!(phi_partial_sum(1, false).unwrap(), Interval::one());
        assert_eq!(phi_partial_sum(1, true).unwrap(), Interval::one());
        assert_eq!(phi_partial_sum(5, false).unwrap(), Interval::point(rat(7, 3)));
        assert_eq!(
            phi_partial_sum(5, true).unwrap(),
            Interval::point(rat(1, 1) + rat(1, 3) + rat(1, 15))
        );
        let exact = phi_partial_sum(PHI_EXACT_LIMIT, true).unwrap();
        let fixed = phi_partial_sum(PHI_EXACT_LIMIT + 1, true).unwrap();
        assert!(fixed.lo >= exact.lo);
    }
}
