//! Chebyshev bound on the probability that no row of an `n x x` rectangle is white.

use super::euler::{prime_tail, product, Rounding};
use super::interval::{rat, Interval};
use super::primes::{distinct_prime_factors, sieve};
use crate::error::{domain, Result};
use crate::fmt::sig12;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Bound on `r_n(x) = P(Z = 0)` for the untruncated model: the `f` and `g`
/// enclosures carry the tail over every prime above the cut.
#[derive(Clone, Debug)]
pub struct SecondMomentReport {
    pub n: u64,
    pub x: u64,
    pub p_cut: u64,
    pub f_enclosure: Interval,
    pub offdiag_sum: Interval,
    pub diag_term: Interval,
    pub r_upper: BigRational,
    pub rounding: Rounding,
}

pub const MOMENT_CSV_HEADER: &str = "n,x,P,f_lo,f_hi,r_upper";

impl SecondMomentReport {
    pub fn csv_row(&self) -> String {
        use num_traits::ToPrimitive;
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.x,
            self.p_cut,
            sig12(self.f_enclosure.lo_f64()),
            sig12(self.f_enclosure.hi_f64()),
            sig12(self.r_upper.to_f64().unwrap_or(f64::NAN))
        )
    }
}

struct Parts {
    f: Interval,
    g0_over_f2: Interval,
}

fn parts(x: u64, p_cut: u64) -> Parts {
    let cut = p_cut.max(x);
    let primes = sieve(cut);
    let f_trunc = product(
        cut,
        primes.iter().map(|&p| (BigUint::from(p * p - p.min(x)), BigUint::from(p * p))),
    );
    let g0 = product(
        cut,
        primes.iter().skip(1).map(|&p| {
            (BigUint::from(p * p - 2 * p.min(x)), BigUint::from(p * p))
        }),
    )
    .scale(&rat(1, 2));
    let u2 = prime_tail(2, cut);
    let u4 = prime_tail(4, cut);
    let xr = rat(x as i64, 1);
    let x2u4 = &xr * &xr * &u4;
    let f_lo = BigRational::one() - &xr * &u2 - &x2u4;
    let f_lo = if f_lo.is_negative() { BigRational::zero() } else { f_lo };
    let f = f_trunc.mul(&Interval::new(f_lo, BigRational::one()));
    // log(1-2t) - 2 log(1-t) lies in [-4t^2, 2t^2] for t = x/p^2 <= 1/4
    let tail = Interval::new(
        BigRational::one() - &x2u4 * rat(4, 1),
        (BigRational::one() - &x2u4 * rat(2, 1)).recip(),
    );
    let g0_over_f2 = g0
        .div(&f_trunc.mul(&f_trunc))
        .expect("truncated f is positive")
        .mul(&tail);
    Parts { f, g0_over_f2 }
}

/// `prod_{odd p | d} (p^2 - m)/(p^2 - 2m)` with `m = min(p, x)`: the ratio of
/// `g_d` to its value when no odd prime divides `d`.
fn divisor_boost(d: u64, x: u64) -> BigRational {
    distinct_prime_factors(d)
        .into_iter()
        .filter(|&p| p > 2)
        .fold(BigRational::one(), |acc, p| {
            let m = p.min(x);
            acc * rat((p * p - m) as i64, (p * p - 2 * m) as i64)
        })
}

/// Enclosure of `g_d(x) / f(x)^2` with a joint tail for both products.
pub fn pair_ratio(d: u64, x: u64, p_cut: u64) -> Result<Interval> {
    if d < 1 || d > x || p_cut < 2 {
        return domain("pair_ratio needs 1 <= d <= x and P >= 2");
    }
    if d % 2 == 1 {
        return Ok(Interval::zero());
    }
    Ok(parts(x, p_cut).g0_over_f2.scale(&divisor_boost(d, x)))
}

pub fn second_moment_bound(n: u64, x: u64, p_cut: u64) -> Result<SecondMomentReport> {
    if n < 2 {
        return domain("second_moment_bound needs n >= 2");
    }
    if x < n {
        return domain(format!("second_moment_bound needs x >= n (x = {x}, n = {n})"));
    }
    if p_cut < 2 {
        return domain("second_moment_bound needs P >= 2");
    }
    let parts = parts(x, p_cut);
    let mut weighted = BigRational::zero();
    for d in (2..n).step_by(2) {
        weighted += divisor_boost(d, x) * rat((n - d) as i64, 1);
    }
    let n_r = rat(n as i64, 1);
    let offdiag = parts
        .g0_over_f2
        .scale(&(weighted * rat(2, 1) / (&n_r * &n_r)));
    let diag = parts
        .f
        .scale(&n_r)
        .recip()
        .ok_or_else(|| crate::error::Error::Domain("f enclosure touches zero".into()))?;
    let r = &offdiag.hi + &diag.hi - BigRational::one();
    let r_upper = if r.is_negative() { BigRational::zero() } else { r };
    Ok(SecondMomentReport {
        n,
        x,
        p_cut,
        f_enclosure: parts.f,
        offdiag_sum: offdiag,
        diag_term: diag,
        r_upper,
        rounding: Rounding::for_cut(p_cut.max(x)),
    })
}
