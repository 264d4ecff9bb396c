use crate::error::{domain, Result};

/// The primes up to `limit`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    pub limit: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }
}

pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return domain(format!("no primes up to {limit}"));
    }
    Ok(PrimeTable { limit, primes: sieve(limit) })
}

pub(crate) fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Smallest-prime-factor table for 0..=n (entries 0 and 1 are 0).
pub(crate) fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] != 0 {
            continue;
        }
        let mut j = i;
        while j <= n {
            if spf[j] == 0 {
                spf[j] = i as u32;
            }
            j += i;
        }
    }
    spf
}

/// Distinct prime factors by trial division, ascending.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn least_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    distinct_prime_factors(n).first().copied()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && least_prime_factor(n) == Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(primes_up_to(10).unwrap().primes, vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap().primes, vec![2]);
        assert!(primes_up_to(1).is_err());
    }

    #[test]
    fn count_matches_trial_division() {
        let t = primes_up_to(997).unwrap();
        let naive = (2..=997u64).filter(|&n| (2..n).all(|d| n % d != 0)).count();
        assert_eq!(t.len(), naive);
        assert_eq!(t.len(), 168);
    }

    #[test]
    fn spf_agrees_with_trial_division() {
        let spf = spf_table(5000);
        for n in 2..=5000u64 {
            assert_eq!(spf[n as usize] as u64, least_prime_factor(n).unwrap());
        }
    }
}
