use crate::arith::sieve;
use crate::error::{parse_err, Error, Result};
use crate::lattice::{standard_spec, LatticeKind, LatticeSpec};
use crate::rng::{substream, RNG_ID};
use rand::Rng;

/// For each prime `p <= P`, the basis coefficients (mod p) of the coset
/// representative of `B_p`.
#[derive(Clone, Debug)]
pub struct CosetConfig {
    pub lattice: LatticeSpec,
    pub p_cut: u64,
    pub seed: u64,
    pub rng_id: String,
    pub reps: Vec<(u64, Vec<i64>)>,
}

impl PartialEq for CosetConfig {
    fn eq(&self, o: &Self) -> bool {
        self.lattice.id() == o.lattice.id()
            && self.lattice.basis == o.lattice.basis
            && self.p_cut == o.p_cut
            && self.seed == o.seed
            && self.rng_id == o.rng_id
            && self.reps == o.reps
    }
}

pub const CONFIG_MAGIC: &str = "coprime-config v1";

/// Uniform coefficient vector in `[0, p)^d` per prime, from the substream
/// `(seed, "coset-config", 0)`.
pub fn sample_coset_config(lattice: &LatticeSpec, p_cut: u64, seed: u64) -> Result<CosetConfig> {
    sample_with_stream(lattice, p_cut, seed, &mut substream(seed, "coset-config", 0))
}

pub(crate) fn sample_with_stream(lattice: &LatticeSpec, p_cut: u64, seed: u64, rng: &mut impl Rng) -> Result<CosetConfig> {
    if p_cut < 2 {
        return Err(Error::Domain("truncation P must be >= 2".into()));
    }
    let d = lattice.dim;
    let reps = sieve(p_cut)
        .into_iter()
        .map(|p| (p, (0..d).map(|_| rng.gen_range(0..p as i64)).collect()))
        .collect();
    Ok(CosetConfig { lattice: lattice.clone(), p_cut, seed, rng_id: RNG_ID.to_string(), reps })
}

/// The configuration whose cosets all pass through `x`: rep_p = x mod p.
pub fn config_from_base_point(lattice: &LatticeSpec, p_cut: u64, x: &[i64]) -> Result<CosetConfig> {
    let c = lattice
        .coefficients(x)
        .ok_or_else(|| Error::Domain("base point is not in the lattice".into()))?;
    let reps = sieve(p_cut)
        .into_iter()
        .map(|p| (p, c.iter().map(|v| v.rem_euclid(p as i64)).collect()))
        .collect();
    Ok(CosetConfig { lattice: lattice.clone(), p_cut, seed: 0, rng_id: "base-point".into(), reps })
}

impl CosetConfig {
    pub fn header(&self) -> String {
        format!(
            "{CONFIG_MAGIC} lattice={} P={} seed={} rng={}",
            self.lattice.id(),
            self.p_cut,
            self.seed,
            self.rng_id
        )
    }

    pub fn rep(&self, p: u64) -> Option<&[i64]> {
        self.reps.binary_search_by_key(&p, |r| r.0).ok().map(|i| self.reps[i].1.as_slice())
    }
}

pub fn save_config(c: &CosetConfig) -> String {
    let mut s = c.header();
    s.push('\n');
    for (p, r) in &c.reps {
        s.push_str(&p.to_string());
        for v in r {
            s.push(' ');
            s.push_str(&v.to_string());
        }
        s.push('\n');
    }
    s
}

pub fn load_config(text: &str) -> Result<CosetConfig> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty config"))?;
    let rest = header
        .strip_prefix(CONFIG_MAGIC)
        .ok_or_else(|| parse_err(1, "missing config header"))?;
    let (mut lattice, mut p_cut, mut seed, mut rng) = (None, None, None, None);
    for tok in rest.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| parse_err(1, format!("bad header field '{tok}'")))?;
        match k {
            "lattice" => lattice = Some(v.to_string()),
            "P" => p_cut = Some(v.parse::<u64>().map_err(|_| parse_err(1, "bad P"))?),
            "seed" => seed = Some(v.parse::<u64>().map_err(|_| parse_err(1, "bad seed"))?),
            "rng" => rng = Some(v.to_string()),
            _ => return Err(parse_err(1, format!("unknown header field '{k}'"))),
        }
    }
    let missing = |f: &str| parse_err(1, format!("header lacks {f}"));
    let id = lattice.ok_or_else(|| missing("lattice"))?;
    let p_cut = p_cut.ok_or_else(|| missing("P"))?;
    let seed = seed.ok_or_else(|| missing("seed"))?;
    let rng_id = rng.ok_or_else(|| missing("rng"))?;
    let kind = LatticeKind::parse(&id).map_err(|_| parse_err(1, format!("unknown lattice '{id}'")))?;
    let spec = standard_spec(&kind)?;
    let d = spec.dim;
    let primes = sieve(p_cut);
    let mut reps = Vec::with_capacity(primes.len());
    for (i, line) in lines {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let nums: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| parse_err(ln, format!("bad integer '{t}'"))))
            .collect::<Result<_>>()?;
        if nums.len() != d + 1 {
            return Err(parse_err(ln, format!("expected a prime and {d} residues")));
        }
        let p = nums[0];
        let expect = primes.get(reps.len()).copied();
        if Some(p as u64) != expect || p < 2 {
            return Err(parse_err(ln, format!("expected prime {expect:?}, found {p}")));
        }
        if let Some(r) = nums[1..].iter().find(|&&r| r < 0 || r >= p) {
            return Err(parse_err(ln, format!("residue {r} out of range for p = {p}")));
        }
        reps.push((p as u64, nums[1..].to_vec()));
    }
    if reps.len() != primes.len() {
        return Err(parse_err(text.lines().count(), "config lists fewer primes than P requires"));
    }
    Ok(CosetConfig { lattice: spec, p_cut, seed, rng_id, reps })
}
