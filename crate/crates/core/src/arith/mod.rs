//! Rigorous enclosures of the number-theoretic constants of the model.
//!
//! * `f(x) = prod_p (1 - min(p,x)/p^2)`: a row of `x` points is white.
//! * `g_d(x)`: two rows at distance `d` are both white; zero for odd `d`.
//! * `theta`, `phi` and the twin prime constant `C_inf`, which govern
//!   `g_d / f^2 ~ 2 C_inf theta(d)`.
//! * `1/zeta(d)`, the density of white points in dimension `d`.
//! * the Chebyshev bound on the chance that no row of an `n x x` rectangle
//!   is white.
//!
//! Every product comes back as an [`Interval`] containing the infinite value.

mod euler;
mod interval;
mod moment;
mod primes;
mod sqfree;

pub use euler::{
    line_white_prob, line_white_truncated, pair_line_prob, pair_line_truncated, prime_tail,
    twin_prime_constant, zeta_inverse, zeta_inverse_truncated, Rounding, EXACT_LIMIT,
};
pub use interval::{rat, Interval};
pub use moment::{pair_ratio, second_moment_bound, SecondMomentReport, MOMENT_CSV_HEADER};
pub use primes::{
    distinct_prime_factors, is_prime, least_prime_factor, primes_up_to, PrimeTable,
};
pub(crate) use primes::sieve;
pub use sqfree::{phi_partial_sum, phi_sqf, theta, theta_divisor_identity_check, PHI_EXACT_LIMIT};
