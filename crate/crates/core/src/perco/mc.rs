use crate::arith::{prime_tail, sieve};
use crate::colouring::{colour_window, sample_with_stream, Colouring, CosetConfig, Window};
use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::lattice::LatticeSpec;
use crate::rng::substream;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

pub const MC_CSV_HEADER: &str = "experiment,n,x,P,trials,successes,estimate,ci_lo,ci_hi,seed";

#[derive(Clone, Debug, PartialEq)]
pub struct McStats {
    pub experiment: String,
    pub n: u64,
    pub x: u64,
    pub p_cut: u64,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

/// Wilson score interval at 95%.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

impl McStats {
    pub fn new(experiment: &str, n: u64, x: u64, p_cut: u64, trials: u64, successes: u64, seed: u64) -> McStats {
        let (ci_lo, ci_hi) = wilson(successes, trials);
        McStats {
            experiment: experiment.to_string(),
            n,
            x,
            p_cut,
            trials,
            successes,
            estimate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_lo,
            ci_hi,
            seed,
        }
    }

    /// Estimate of `1 - P`.
    pub fn complement(&self) -> f64 {
        1.0 - self.estimate
    }

    /// Binomial standard error of the estimate.
    pub fn se(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }

    pub fn overlaps(&self, o: &McStats) -> bool {
        self.ci_lo <= o.ci_hi && o.ci_lo <= self.ci_hi
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.n,
            self.x,
            self.p_cut,
            self.trials,
            self.successes,
            sig12(self.estimate),
            sig12(self.ci_lo),
            sig12(self.ci_hi),
            self.seed
        )
    }
}

/// Smallest `P >= x` of the form `1000·2^k` with `x·Σ_{p>P} p^-2` at most a
/// tenth of the worst-case standard error `0.5/√trials`.
///
/// A crossing seen with primes up to `P` fails in the full model only if
/// some tail prime hits the witness line, which for `p > x` happens with
/// probability at most `x/p^2`.
pub fn default_p_cut(x: u64, trials: u64) -> u64 {
    let target = 0.05 / (trials.max(1) as f64).sqrt();
    let mut p = 1000u64;
    while p < x || x as f64 * prime_tail(2, p).to_f64().unwrap_or(f64::INFINITY) > target {
        p *= 2;
    }
    p
}

/// The upper bound on the crossing bias used by [`default_p_cut`].
pub fn crossing_bias_bound(x: u64, p_cut: u64) -> Result<BigRational> {
    if p_cut < x {
        return Err(Error::Domain("crossing bias bound needs P >= x".into()));
    }
    Ok(prime_tail(2, p_cut) * BigRational::from_integer(x.into()))
}

pub const CROSSING_TAG: &str = "crossing-trial";

/// The configuration of trial `t`: the same stream [`crossing_trial`] reads.
pub fn trial_config(lattice: &LatticeSpec, p_cut: u64, seed: u64, tag: &str, t: u64) -> Result<CosetConfig> {
    sample_with_stream(lattice, p_cut, seed, &mut substream(seed, tag, t))
}

/// `(crossed, Z)` for the horizontal crossing of `[1,x] × [1,n]` on Z^2.
/// Rows are killed prime by prime without building the window.
pub fn crossing_trial(n: u64, x: u64, primes: &[u64], seed: u64, t: u64) -> (bool, u64) {
    let mut rng = substream(seed, CROSSING_TAG, t);
    let mut alive = vec![true; n as usize];
    for &p in primes {
        let pi = p as i64;
        let rx = rng.gen_range(0..pi);
        let ry = rng.gen_range(0..pi);
        // Some i in [1,x] with i ≡ rx (mod p)?
        if p > x && (rx - 1).rem_euclid(pi) as u64 >= x {
            continue;
        }
        let mut j = (ry - 1).rem_euclid(pi) as u64;
        while j < n {
            alive[j as usize] = false;
            j += p;
        }
    }
    let z = alive.iter().filter(|&&a| a).count() as u64;
    (z > 0, z)
}

/// Monte Carlo estimate of the probability of a horizontal crossing of an
/// `n`-row, `x`-column rectangle of Z^2.
pub fn estimate_crossing(n: u64, x: u64, trials: u64, p_cut: u64, seed: u64) -> Result<McStats> {
    if n < 1 || x < 1 {
        return Err(Error::Domain("crossing estimate needs n >= 1 and x >= 1".into()));
    }
    if p_cut < 2 {
        return Err(Error::Domain("truncation P must be >= 2".into()));
    }
    let primes = sieve(p_cut);
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&t| crossing_trial(n, x, &primes, seed, t).0)
        .count() as u64;
    Ok(McStats::new("crossing", n, x, p_cut, trials, successes, seed))
}

/// Generic harness: colour `window` with an independent configuration per
/// trial and count the trials where `event` holds.
pub fn estimate_event<F>(
    experiment: &str,
    lattice: &LatticeSpec,
    window: &Window,
    trials: u64,
    p_cut: u64,
    seed: u64,
    event: F,
) -> Result<McStats>
where
    F: Fn(u64, &Colouring) -> Result<bool> + Sync,
{
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let cfg = trial_config(lattice, p_cut, seed, experiment, t)?;
            event(t, &colour_window(&cfg, window)?)
        })
        .collect::<Result<_>>()?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    let (n, x) = match window.extents.as_slice() {
        [w, h] => (*h, *w),
        e => (e.len() as u64, window.len() as u64),
    };
    Ok(McStats::new(experiment, n, x, p_cut, trials, successes, seed))
}

/// Annulus frequency plus the per-sample cluster consequences.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusStudy {
    pub stats: McStats,
    /// Positive samples whose cluster analysis contradicts the circuit.
    pub violations: u64,
    /// `(trial, witness lines)` of the first positive sample.
    pub first_witness: Option<(u64, Vec<String>)>,
}

/// Samples `[-k-margin, k+margin]^2` per trial and evaluates the annulus
/// event; every positive sample is checked with cluster labels under `s`.
pub fn estimate_annulus(
    k: i64,
    margin: i64,
    trials: u64,
    p_cut: u64,
    seed: u64,
    s: &crate::lattice::GenSet,
) -> Result<AnnulusStudy> {
    use super::events::{annulus_consequences, annulus_event};
    if margin < 0 {
        return Err(Error::Domain("margin must be >= 0".into()));
    }
    let lattice = crate::lattice::standard_spec(&crate::lattice::LatticeKind::Hypercubic(2))?;
    let window = Window::cube(2, -k - margin, k + margin)?;
    let per_trial: Vec<(bool, bool, Vec<String>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let cfg = trial_config(&lattice, p_cut, seed, "annulus", t)?;
            let c = colour_window(&cfg, &window)?;
            let a = annulus_event(&c, k)?;
            if !a.occurred {
                return Ok((false, false, Vec::new()));
            }
            let ok = annulus_consequences(&c, k, s)?.consistent();
            Ok((true, !ok, a.witness_lines()))
        })
        .collect::<Result<_>>()?;
    let successes = per_trial.iter().filter(|r| r.0).count() as u64;
    let violations = per_trial.iter().filter(|r| r.1).count() as u64;
    let first_witness = per_trial.iter().position(|r| r.0).map(|t| (t as u64, per_trial[t].2.clone()));
    let side = window.extents[0];
    Ok(AnnulusStudy {
        stats: McStats::new("annulus", k as u64, side, p_cut, trials, successes, seed),
        violations,
        first_witness,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StaircaseStudy {
    pub stats: McStats,
    /// `(trial, path)` of the first successful sample.
    pub first_path: Option<(u64, Vec<[i64; 2]>)>,
}

/// Frequency with which `A_n` holds for every `n ∈ [n_min, n_max]`, each
/// trial on its own `[0, 2^(n_max+1)]^2` window.
pub fn estimate_staircase(n_min: u32, n_max: u32, trials: u64, p_cut: u64, seed: u64) -> Result<StaircaseStudy> {
    use super::events::staircase;
    if n_min > n_max || n_max > 12 {
        return Err(Error::Domain("staircase estimate needs n_min <= n_max <= 12".into()));
    }
    let lattice = crate::lattice::standard_spec(&crate::lattice::LatticeKind::Hypercubic(2))?;
    let window = Window::cube(2, 0, 1 << (n_max + 1))?;
    let paths: Vec<Option<Vec<[i64; 2]>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let cfg = trial_config(&lattice, p_cut, seed, "staircase", t)?;
            Ok(staircase(&colour_window(&cfg, &window)?, n_min, n_max)?.path)
        })
        .collect::<Result<_>>()?;
    let successes = paths.iter().filter(|p| p.is_some()).count() as u64;
    let first_path = paths.iter().position(|p| p.is_some()).map(|t| (t as u64, paths[t].clone().unwrap()));
    Ok(StaircaseStudy {
        stats: McStats::new("staircase", n_min as u64, n_max as u64, p_cut, trials, successes, seed),
        first_path,
    })
}
