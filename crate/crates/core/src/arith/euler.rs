//! Euler-type products over primes with rigorous tails.
//!
//! The truncated part is exact when the cut is at most [`EXACT_LIMIT`] and is
//! computed in 256-bit fixed point with outward rounding otherwise. The tail
//! over primes above the cut uses `-t - t^2 <= log(1 - t) <= -t` (valid for
//! `t <= 1/2`) together with prime-power sums bounded over integers `±1 mod 6`.

use super::interval::{rat, Interval};
use super::primes::sieve;
use crate::error::{domain, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const EXACT_LIMIT: u64 = 10_000;
const FIXED_BITS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Exact,
    Outward256,
}

impl Rounding {
    pub fn for_cut(cut: u64) -> Rounding {
        if cut <= EXACT_LIMIT {
            Rounding::Exact
        } else {
            Rounding::Outward256
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rounding::Exact => "exact-rational",
            Rounding::Outward256 => "dyadic-256-outward",
        }
    }
}

fn product_tree(v: &[BigUint]) -> BigUint {
    match v.len() {
        0 => BigUint::one(),
        1 => v[0].clone(),
        n => product_tree(&v[..n / 2]) * product_tree(&v[n / 2..]),
    }
}

/// Product of factors `num/den` each in `[0, 1]`.
pub(crate) fn product<I>(cut: u64, factors: I) -> Interval
where
    I: Iterator<Item = (BigUint, BigUint)>,
{
    match Rounding::for_cut(cut) {
        Rounding::Exact => {
            let (nums, dens): (Vec<_>, Vec<_>) = factors.unzip();
            let q = BigRational::new(
                BigInt::from(product_tree(&nums)),
                BigInt::from(product_tree(&dens)),
            );
            Interval::point(q)
        }
        Rounding::Outward256 => {
            let one = BigUint::one() << FIXED_BITS;
            let (mut lo, mut hi) = (one.clone(), one.clone());
            for (a, b) in factors {
                lo = (&lo * &a) / &b;
                hi = (&hi * &a + &b - 1u32) / &b;
            }
            let den = BigInt::from(one);
            Interval::new(
                BigRational::new(BigInt::from(lo), den.clone()),
                BigRational::new(BigInt::from(hi), den),
            )
        }
    }
}

fn pow_rat(b: u64, s: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(b).pow(s))
}

/// Upper bound on `sum_{p > cut} p^(-s)` for `s >= 2`.
pub fn prime_tail(s: u32, cut: u64) -> BigRational {
    assert!(s >= 2);
    let mut total = BigRational::zero();
    for p in [2u64, 3] {
        if cut < p {
            total += pow_rat(p, s).recip();
        }
    }
    let start = cut.max(3) + 1;
    for r in [1u64, 5] {
        let a = start + (r + 6 - start % 6) % 6;
        // sum_{j>=0} (a+6j)^-s <= a^-s + a^(1-s) / (6(s-1))
        total += pow_rat(a, s).recip();
        total += (pow_rat(a, s - 1) * rat(6 * (s as i64 - 1), 1)).recip();
    }
    total
}

/// Enclosure of `prod_{p > cut} (1 - a p^-s)`, assuming `a (cut+1)^-s <= 1/2`.
fn tail_factor(a: &BigRational, s: u32, cut: u64) -> Result<Interval> {
    if a.is_zero() {
        return Ok(Interval::one());
    }
    if a * rat(2, 1) > pow_rat(cut + 1, s) {
        return domain("tail factor exceeds 1/2; raise the truncation");
    }
    let lo = BigRational::one() - a * prime_tail(s, cut) - a * a * prime_tail(2 * s, cut);
    let lo = if lo < BigRational::zero() { BigRational::zero() } else { lo };
    Ok(Interval::new(lo, BigRational::one()))
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Truncated one-line product `prod_{p <= max(P,x)} (1 - min(p,x)/p^2)`.
pub fn line_white_truncated(x: u64, p_cut: u64) -> Interval {
    let cut = p_cut.max(x);
    product(
        cut,
        sieve(cut).into_iter().map(|p| (big(p * p - p.min(x)), big(p * p))),
    )
}

/// Probability that `x` consecutive points of a line are all white.
pub fn line_white_prob(x: u64, p_cut: u64) -> Result<Interval> {
    if x < 1 || p_cut < 2 {
        return domain("line_white_prob needs x >= 1 and P >= 2");
    }
    let cut = p_cut.max(x);
    let tail = tail_factor(&rat(x as i64, 1), 2, cut)?;
    Ok(line_white_truncated(x, p_cut).mul(&tail))
}

pub(crate) fn pair_factor(p: u64, d: u64, x: u64) -> (u64, u64) {
    let m = p.min(x);
    if d.is_multiple_of(p) {
        (p * p - m, p * p)
    } else {
        (p * p - 2 * m, p * p)
    }
}

/// Truncated two-line product `g_d(x)` over `p <= max(P,x)`.
pub fn pair_line_truncated(d: u64, x: u64, p_cut: u64) -> Interval {
    let cut = p_cut.max(x);
    product(
        cut,
        sieve(cut).into_iter().map(|p| {
            let (a, b) = pair_factor(p, d, x);
            (big(a), big(b))
        }),
    )
}

/// Probability that two parallel lines at distance `d` are white on `x` columns.
pub fn pair_line_prob(d: u64, x: u64, p_cut: u64) -> Result<Interval> {
    if d < 1 || d > x {
        return domain("pair_line_prob needs 1 <= d <= x");
    }
    if p_cut < 2 {
        return domain("pair_line_prob needs P >= 2");
    }
    if d % 2 == 1 {
        return Ok(Interval::zero());
    }
    let cut = p_cut.max(x);
    let tail = tail_factor(&rat(2 * x as i64, 1), 2, cut)?;
    Ok(pair_line_truncated(d, x, p_cut).mul(&tail))
}

/// The twin prime constant `prod_{p>2} (1 - 1/(p-1)^2)`.
pub fn twin_prime_constant(p_cut: u64) -> Result<Interval> {
    if p_cut < 3 {
        return domain("twin_prime_constant needs P >= 3");
    }
    let trunc = product(
        p_cut,
        sieve(p_cut)
            .into_iter()
            .skip(1)
            .map(|p| (big(p * (p - 2)), big((p - 1) * (p - 1)))),
    );
    // (p-1)^-2 <= k^2 p^-2 for p > P with k = (P+1)/P
    let k2 = rat(p_cut as i64 + 1, p_cut as i64).pow(2);
    let lo = BigRational::one() - &k2 * prime_tail(2, p_cut) - &k2 * &k2 * prime_tail(4, p_cut);
    Ok(trunc.mul(&Interval::new(lo, BigRational::one())))
}

/// Enclosure of `1/zeta(d) = prod_p (1 - p^-d)`.
pub fn zeta_inverse(d: u32, p_cut: u64) -> Result<Interval> {
    if d < 2 || p_cut < 2 {
        return domain("zeta_inverse needs d >= 2 and P >= 2");
    }
    let trunc = zeta_inverse_truncated(d, p_cut);
    let tail = tail_factor(&BigRational::one(), d, p_cut)?;
    Ok(trunc.mul(&tail))
}

/// `prod_{p <= P} (1 - p^-d)` with no tail.
pub fn zeta_inverse_truncated(d: u32, p_cut: u64) -> Interval {
    product(
        p_cut,
        sieve(p_cut).into_iter().map(|p| {
            let pd = BigUint::from(p).pow(d);
            (&pd - 1u32, pd)
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn tail_bound_dominates_direct_sum() {
        for cut in [2u64, 3, 10, 100, 1000] {
            let direct: f64 = sieve(200_000)
                .into_iter()
                .filter(|&p| p > cut)
                .map(|p| (p as f64).powi(-2))
                .sum();
            assert!(prime_tail(2, cut).to_f64().unwrap() > direct, "cut {cut}");
        }
    }

    #[test]
    fn fixed_point_encloses_exact() {
        let exact = product(100, sieve(100).into_iter().map(|p| (big(p * p - 1), big(p * p))));
        let fixed = product(EXACT_LIMIT + 1, sieve(100).into_iter().map(|p| (big(p * p - 1), big(p * p))));
        assert!(exact.is_point());
        assert!(fixed.contains_interval(&exact));
        assert!(fixed.width().to_f64().unwrap() < 1e-70);
    }
}
