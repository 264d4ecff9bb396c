use super::config::CosetConfig;
use super::window::Window;
use crate::arith::sieve;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Vector};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// How window indices map to lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Every integer point of the box (lattices of determinant 1).
    Full,
    /// Lattice points of the box, sorted with the last coordinate most
    /// significant so that axis 0 still varies fastest.
    Sparse(Vec<Vector>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Config { lattice: String, p_cut: u64, seed: u64, rng_id: String },
    Oracle { base: Vec<i64> },
    Synthetic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Config { lattice, p_cut, seed, rng_id } => {
                write!(f, "config lattice={lattice} P={p_cut} seed={seed} rng={rng_id}")
            }
            Provenance::Oracle { base } => write!(f, "oracle X={}", join(base)),
            Provenance::Synthetic => write!(f, "synthetic"),
        }
    }
}

pub(crate) fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Provenance {
    pub fn parse(s: &str) -> Option<Provenance> {
        let mut it = s.split_whitespace();
        match it.next()? {
            "synthetic" => Some(Provenance::Synthetic),
            "oracle" => {
                let base = it.next()?.strip_prefix("X=")?;
                let base = base.split(',').map(|t| t.parse().ok()).collect::<Option<Vec<i64>>>()?;
                Some(Provenance::Oracle { base })
            }
            "config" => {
                let (mut lattice, mut p_cut, mut seed, mut rng_id) = (None, None, None, None);
                for tok in it {
                    let (k, v) = tok.split_once('=')?;
                    match k {
                        "lattice" => lattice = Some(v.to_string()),
                        "P" => p_cut = v.parse().ok(),
                        "seed" => seed = v.parse().ok(),
                        "rng" => rng_id = Some(v.to_string()),
                        _ => return None,
                    }
                }
                Some(Provenance::Config { lattice: lattice?, p_cut: p_cut?, seed: seed?, rng_id: rng_id? })
            }
            _ => None,
        }
    }
}

/// A black/white colouring of the lattice points of a window. White is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    pub window: Window,
    pub layout: Layout,
    bits: Vec<u64>,
    len: usize,
    pub provenance: Provenance,
}

impl Colouring {
    /// A Full-layout colouring with every point white.
    pub fn all_white(window: Window, provenance: Provenance) -> Colouring {
        let len = window.len();
        let mut bits = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *bits.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        Colouring { window, layout: Layout::Full, bits, len, provenance }
    }

    /// A synthetic Full-layout colouring from a predicate on points.
    pub fn from_fn(window: Window, white: impl Fn(&[i64]) -> bool) -> Colouring {
        let mut c = Colouring::all_white(window, Provenance::Synthetic);
        for i in 0..c.len {
            if !white(&c.window.point(i)) {
                c.set(i, false);
            }
        }
        c
    }

    pub(crate) fn from_bits(window: Window, layout: Layout, white: &[bool], provenance: Provenance) -> Colouring {
        let mut bits = vec![0u64; white.len().div_ceil(64)];
        for (i, _) in white.iter().enumerate().filter(|(_, &w)| w) {
            bits[i / 64] |= 1 << (i % 64);
        }
        Colouring { window, layout, bits, len: white.len(), provenance }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn is_full(&self) -> bool {
        self.layout == Layout::Full
    }

    #[inline]
    pub fn is_white(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, white: bool) {
        if white {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn point(&self, i: usize) -> Vector {
        match &self.layout {
            Layout::Full => self.window.point(i),
            Layout::Sparse(pts) => pts[i].clone(),
        }
    }

    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        match &self.layout {
            Layout::Full => self.window.index(x),
            Layout::Sparse(pts) => pts.binary_search_by(|p| rev_cmp(p, x)).ok(),
        }
    }

    /// `Some(white)` for points of the colouring, `None` otherwise.
    pub fn colour_at(&self, x: &[i64]) -> Option<bool> {
        self.index_of(x).map(|i| self.is_white(i))
    }

    pub fn white_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn white_fraction(&self) -> f64 {
        self.white_count() as f64 / self.len as f64
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.is_white(i))
    }
}

fn rev_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

pub(crate) fn require_full(c: &Colouring, what: &str) -> Result<()> {
    if c.is_full() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} needs a colouring of every integer point of the window")))
    }
}

/// Black iff `v` lies in `B_p` for some `p <= P`.
pub fn colour_window(config: &CosetConfig, window: &Window) -> Result<Colouring> {
    let spec = &config.lattice;
    if window.dim() != spec.dim {
        return Err(Error::Domain("window dimension differs from the lattice".into()));
    }
    let provenance = Provenance::Config {
        lattice: spec.id(),
        p_cut: config.p_cut,
        seed: config.seed,
        rng_id: config.rng_id.clone(),
    };
    if spec.det() == 1 {
        let mut c = Colouring::all_white(window.clone(), provenance);
        for (p, rep) in &config.reps {
            clear_coset(&mut c, *p as i64, rep);
        }
        return Ok(c);
    }
    let lo = window.origin.clone();
    let hi: Vec<i64> = (0..window.dim()).map(|k| window.hi(k)).collect();
    let mut pts = spec.points_in_box(&lo, &hi);
    pts.sort_by(|a, b| rev_cmp(a, b));
    let white: Vec<bool> = pts
        .iter()
        .map(|v| {
            let c = spec.coefficients(v).expect("enumerated point lies in the lattice");
            !config.reps.iter().any(|(p, rep)| in_class(&c, *p as i64, rep))
        })
        .collect();
    Ok(Colouring::from_bits(window.clone(), Layout::Sparse(pts), &white, provenance))
}

pub(crate) fn in_class(c: &[i64], p: i64, rep: &[i64]) -> bool {
    c.iter().zip(rep).all(|(x, r)| x.rem_euclid(p) == *r)
}

/// Blackens every window point congruent to `rep` mod `p`, stepping `p`
/// along each axis.
fn clear_coset(c: &mut Colouring, p: i64, rep: &[i64]) {
    let w = &c.window;
    let d = w.dim();
    let mut start = vec![0usize; d];
    for k in 0..d {
        let off = (rep[k] - w.origin[k]).rem_euclid(p) as u64;
        if off >= w.extents[k] {
            return;
        }
        start[k] = off as usize;
    }
    let ext: Vec<usize> = w.extents.iter().map(|&e| e as usize).collect();
    let stride: Vec<usize> = (0..d).map(|k| w.stride(k)).collect();
    let p = p as usize;
    let mut cur = start.clone();
    loop {
        let base: usize = (1..d).map(|k| cur[k] * stride[k]).sum();
        let mut x = start[0];
        while x < ext[0] {
            c.set(base + x, false);
            x += p;
        }
        let mut k = 1;
        loop {
            if k >= d {
                return;
            }
            cur[k] += p;
            if cur[k] < ext[k] {
                break;
            }
            cur[k] = start[k];
            k += 1;
        }
    }
}

/// White iff the coefficients of `v - X` have gcd 1. `X` itself is black.
pub fn oracle_from_origin(spec: &LatticeSpec, x: &[i64], window: &Window) -> Result<Colouring> {
    if spec.det() != 1 {
        return Err(Error::Unsupported(format!("the gcd oracle needs Z^d, not {}", spec.id())));
    }
    if x.len() != window.dim() || spec.dim != window.dim() {
        return Err(Error::Domain("base point dimension differs from the window".into()));
    }
    let mut c = Colouring::all_white(window.clone(), Provenance::Oracle { base: x.to_vec() });
    for i in 0..c.len() {
        let v = c.window.point(i);
        let g = v.iter().zip(x).fold(0u64, |g, (a, b)| num_integer::gcd(g, (a - b).unsigned_abs()));
        if g != 1 {
            c.set(i, false);
        }
    }
    Ok(c)
}

/// `|W| P^(1-d) / (d-1)`, an upper bound on `|W| Σ_{p>P} p^-d`.
pub fn truncation_error_bound(window: &Window, p_cut: u64, d: u32) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::Domain("truncation bound needs d >= 2".into()));
    }
    if p_cut < 2 {
        return Err(Error::Domain("truncation P must be >= 2".into()));
    }
    let den = BigInt::from(p_cut).pow(d - 1) * BigInt::from(d - 1);
    Ok(BigRational::new(BigInt::from(window.len()), den))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetInference {
    /// `(p, residues)` for each prime `p <= p_max`, residues sorted.
    pub candidates: Vec<(u64, Vec<Vec<i64>>)>,
    pub warning: Option<String>,
}

const MAX_CLASSES: u64 = 1 << 24;

/// Residue classes mod `p` that are entirely black inside the window.
pub fn infer_cosets(c: &Colouring, p_max: u64) -> Result<CosetInference> {
    require_full(c, "coset inference")?;
    let d = c.dim() as u32;
    let warning = match &c.provenance {
        Provenance::Config { p_cut, .. } if p_max > *p_cut => Some(format!(
            "p_max = {p_max} exceeds the colouring's P = {p_cut}; larger primes were never removed"
        )),
        _ => None,
    };
    let mut candidates = Vec::new();
    for p in sieve(p_max) {
        let classes = p
            .checked_pow(d)
            .filter(|&n| n <= MAX_CLASSES)
            .ok_or_else(|| Error::Domain(format!("{p}^{d} residue classes is too many to scan")))?
            as usize;
        let mut hit_white = vec![false; classes];
        for i in 0..c.len() {
            if c.is_white(i) {
                hit_white[class_index(&c.window.point(i), p as i64)] = true;
            }
        }
        let list = (0..classes)
            .filter(|&k| !hit_white[k])
            .map(|k| class_vector(k, p as usize, d as usize))
            .collect();
        candidates.push((p, list));
    }
    Ok(CosetInference { candidates, warning })
}

fn class_index(v: &[i64], p: i64) -> usize {
    v.iter().rev().fold(0usize, |acc, x| acc * p as usize + x.rem_euclid(p) as usize)
}

fn class_vector(mut k: usize, p: usize, d: usize) -> Vec<i64> {
    (0..d)
        .map(|_| {
            let r = k % p;
            k /= p;
            r as i64
        })
        .collect()
}

/// Number of axis-aligned `2 × … × 2` blocks inside the window that are
/// entirely white.
pub fn count_white_blocks(c: &Colouring) -> Result<u64> {
    require_full(c, "block counting")?;
    let w = &c.window;
    let d = w.dim();
    if w.extents.iter().any(|&e| e < 2) {
        return Ok(0);
    }
    let inner = Window::new(vec![0; d], w.extents.iter().map(|&e| e - 1).collect())?;
    let stride: Vec<usize> = (0..d).map(|k| w.stride(k)).collect();
    let offsets: Vec<usize> = (0..1usize << d)
        .map(|m| (0..d).filter(|k| m >> k & 1 == 1).map(|k| stride[k]).sum())
        .collect();
    let mut count = 0;
    for j in 0..inner.len() {
        let corner = inner.point(j);
        let base: usize = corner.iter().zip(&stride).map(|(&x, &s)| x as usize * s).sum();
        if offsets.iter().all(|&o| c.is_white(base + o)) {
            count += 1;
        }
    }
    Ok(count)
}
