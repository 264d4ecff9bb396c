use super::golay::{golay, GolayCode, ICOSAHEDRON};
use super::hnf::{coefficients, count_in_box, for_each_in_box, hnf, hnf_det};
use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

pub type Vector = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PNorm {
    L(u32),
    Inf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    /// Z^2 with the quadratic form a^2 - ab + b^2.
    Triangular,
    D(usize),
    E8,
    Leech,
    Hypercubic(usize),
    /// Z^d with the generating set `{x : 0 < |x|_p <= alpha}`.
    SpreadOut { d: usize, norm: PNorm, alpha: i64 },
    Custom,
}

/// An integer lattice given by an HNF row basis.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub name: String,
    pub kind: LatticeKind,
    pub dim: usize,
    pub basis: Vec<Vector>,
    /// Candidate sign-flip symmetries, as coordinate masks. Checked before use.
    pub sign_hints: Vec<u64>,
    /// Candidate coordinate permutations, `perm[j]` is the image of axis `j`.
    pub perm_hints: Vec<Vec<usize>>,
}

/// A finite symmetric generating set with no zero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    pub vectors: Vec<Vector>,
}

impl GenSet {
    /// Sorts, deduplicates and checks `0 ∉ S` and `S = -S`.
    pub fn new(mut vectors: Vec<Vector>) -> Result<GenSet> {
        vectors.sort();
        vectors.dedup();
        if vectors.iter().any(|v| v.iter().all(|&x| x == 0)) {
            return Err(Error::Domain("generating set contains 0".into()));
        }
        let set: HashSet<&Vector> = vectors.iter().collect();
        for v in &vectors {
            let neg: Vector = v.iter().map(|x| -x).collect();
            if !set.contains(&neg) {
                return Err(Error::Domain(format!("generating set not symmetric at {v:?}")));
            }
        }
        Ok(GenSet { vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Vectors with positive first nonzero coordinate: one of each `±s` pair.
    pub fn half(&self) -> Vec<Vector> {
        self.vectors
            .iter()
            .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
            .cloned()
            .collect()
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Triangular => write!(f, "triangular"),
            LatticeKind::D(d) => write!(f, "d{d}"),
            LatticeKind::E8 => write!(f, "e8"),
            LatticeKind::Leech => write!(f, "leech"),
            LatticeKind::Hypercubic(d) => write!(f, "z{d}"),
            LatticeKind::SpreadOut { d, norm, alpha } => match norm {
                PNorm::Inf => write!(f, "spread-d{d}-inf-{alpha}"),
                PNorm::L(p) => write!(f, "spread-d{d}-l{p}-{alpha}"),
            },
            LatticeKind::Custom => write!(f, "custom"),
        }
    }
}

impl LatticeKind {
    /// Parses ids such as `z2`, `square`, `triangular`, `d4`, `e8`, `leech`,
    /// `spread-d2-inf-2`, `spread-d3-l1-2`.
    pub fn parse(s: &str) -> Result<LatticeKind> {
        let bad = || Error::Domain(format!("unknown lattice id '{s}'"));
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "square" => return Ok(LatticeKind::Hypercubic(2)),
            "triangular" => return Ok(LatticeKind::Triangular),
            "e8" => return Ok(LatticeKind::E8),
            "leech" => return Ok(LatticeKind::Leech),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("spread-d") {
            let parts: Vec<&str> = rest.split('-').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let d = parts[0].parse().map_err(|_| bad())?;
            let norm = if parts[1] == "inf" {
                PNorm::Inf
            } else {
                PNorm::L(parts[1].strip_prefix('l').ok_or_else(bad)?.parse().map_err(|_| bad())?)
            };
            let alpha = parts[2].parse().map_err(|_| bad())?;
            return Ok(LatticeKind::SpreadOut { d, norm, alpha });
        }
        if let Some(rest) = s.strip_prefix('z') {
            return Ok(LatticeKind::Hypercubic(rest.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix('d') {
            return Ok(LatticeKind::D(rest.parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

fn unit(d: usize, i: usize, scale: i64) -> Vector {
    let mut v = vec![0; d];
    v[i] = scale;
    v
}

/// Bits of an integer through the 2-adic recursion: bit 0 is the parity and
/// bit k of x is bit k-1 of (x - b)/2, so negative numbers use the arithmetic shift.
#[inline]
pub fn bit(x: i64, k: u32) -> u32 {
    ((x >> k) & 1) as u32
}

pub fn leech_contains(x: &[i64], code: &GolayCode) -> bool {
    if x.len() != 24 {
        return false;
    }
    let b0 = bit(x[0], 0);
    if x.iter().any(|&v| bit(v, 0) != b0) {
        return false;
    }
    let word = x.iter().enumerate().fold(0u32, |w, (k, &v)| w | bit(v, 1) << k);
    if !code.contains(word) {
        return false;
    }
    let s: u32 = x.iter().map(|&v| bit(v, 2)).sum();
    s % 2 == b0
}

fn d_contains(x: &[i64]) -> bool {
    x.iter().sum::<i64>().rem_euclid(2) == 0
}

fn e8_contains(x: &[i64]) -> bool {
    x.len() == 8
        && x.iter().all(|v| v.rem_euclid(2) == x[0].rem_euclid(2))
        && x.iter().sum::<i64>().rem_euclid(4) == 0
}

fn icosahedron_automorphisms() -> Vec<[usize; 12]> {
    let adj: Vec<u32> = (0..12).map(super::golay::adjacency_mask).collect();
    let mut found = Vec::new();
    let mut perm = [usize::MAX; 12];
    fn rec(v: usize, perm: &mut [usize; 12], adj: &[u32], found: &mut Vec<[usize; 12]>) {
        if v == 12 {
            found.push(*perm);
            return;
        }
        for t in 0..12 {
            if perm[..v].contains(&t) {
                continue;
            }
            let ok = (0..v).all(|u| (adj[u] >> v & 1) == (adj[perm[u]] >> t & 1));
            if ok {
                perm[v] = t;
                rec(v + 1, perm, adj, found);
            }
        }
        perm[v] = usize::MAX;
    }
    rec(0, &mut perm, &adj, &mut found);
    found
}

fn leech_hints() -> (Vec<u64>, Vec<Vec<usize>>) {
    let code = golay();
    let signs = code.generators.iter().map(|&g| g as u64).collect();
    let autos = icosahedron_automorphisms();
    let mut perms = Vec::new();
    for target in 1..12 {
        if let Some(a) = autos.iter().find(|a| a[0] == target) {
            perms.push((0..24).map(|j| if j < 12 { a[j] } else { 12 + a[j - 12] }).collect());
        }
    }
    perms.push((0..24).map(|j| (j + 12) % 24).collect());
    debug_assert_eq!(autos.len(), ICOSAHEDRON.len() * 10);
    (signs, perms)
}

fn adjacent_transpositions(d: usize) -> Vec<Vec<usize>> {
    (0..d.saturating_sub(1))
        .map(|i| {
            let mut p: Vec<usize> = (0..d).collect();
            p.swap(i, i + 1);
            p
        })
        .collect()
}

impl LatticeSpec {
    pub fn from_basis(name: &str, rows: &[Vector]) -> Result<LatticeSpec> {
        let dim = rows.first().map_or(0, |r| r.len());
        let basis = hnf(rows, dim)?.ok_or_else(|| Error::Domain("basis is rank deficient".into()))?;
        Ok(LatticeSpec {
            name: name.to_string(),
            kind: LatticeKind::Custom,
            dim,
            basis,
            sign_hints: Vec::new(),
            perm_hints: Vec::new(),
        })
    }

    pub fn id(&self) -> String {
        match self.kind {
            LatticeKind::Custom => self.name.clone(),
            _ => self.kind.to_string(),
        }
    }

    /// |det| of the basis, the index of the lattice in Z^d.
    pub fn det(&self) -> u128 {
        hnf_det(&self.basis)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        match self.kind {
            LatticeKind::D(_) => d_contains(x),
            LatticeKind::E8 => e8_contains(x),
            LatticeKind::Leech => leech_contains(x, golay()),
            LatticeKind::Triangular | LatticeKind::Hypercubic(_) | LatticeKind::SpreadOut { .. } => true,
            LatticeKind::Custom => self.contains_by_basis(x),
        }
    }

    pub fn contains_by_basis(&self, x: &[i64]) -> bool {
        coefficients(&self.basis, x).is_some()
    }

    pub fn coefficients(&self, x: &[i64]) -> Option<Vector> {
        coefficients(&self.basis, x)
    }

    pub fn point(&self, coeffs: &[i64]) -> Vector {
        let mut v = vec![0; self.dim];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            for (k, r) in row.iter().enumerate() {
                v[k] += c * r;
            }
        }
        v
    }

    /// Squared length under the lattice's quadratic form.
    pub fn norm(&self, x: &[i64]) -> i64 {
        match self.kind {
            LatticeKind::Triangular => x[0] * x[0] - x[0] * x[1] + x[1] * x[1],
            _ => x.iter().map(|v| v * v).sum(),
        }
    }

    pub fn points_in_box(&self, lo: &[i64], hi: &[i64]) -> Vec<Vector> {
        let mut out = Vec::new();
        for_each_in_box(&self.basis, lo, hi, |x| out.push(x.to_vec()));
        out
    }

    pub fn count_in_box(&self, lo: &[i64], hi: &[i64]) -> u64 {
        count_in_box(&self.basis, lo, hi)
    }
}

/// Index of the span of `vectors` in the lattice, `None` if that span has
/// lower rank.
pub fn span_index(vectors: &[Vector], spec: &LatticeSpec) -> Result<Option<u128>> {
    if let Some(v) = vectors.iter().find(|v| !spec.contains(v)) {
        return Err(Error::Domain(format!("{v:?} is not in {}", spec.name)));
    }
    let Some(h) = hnf(vectors, spec.dim)? else {
        return Ok(None);
    };
    let (num, den) = (hnf_det(&h), spec.det());
    if num % den != 0 {
        return Err(Error::Internal("span determinant not a multiple of the lattice determinant".into()));
    }
    Ok(Some(num / den))
}

fn leech_generators() -> Vec<Vector> {
    let code = golay();
    let mut rows = Vec::new();
    for i in 0..24 {
        rows.push(unit(24, i, 8));
        if i + 1 < 24 {
            let mut v = unit(24, i, 4);
            v[i + 1] = 4;
            rows.push(v);
        }
    }
    for &g in &code.generators {
        rows.push((0..24).map(|k| if g >> k & 1 == 1 { 2 } else { 0 }).collect());
    }
    let mut v = vec![1; 24];
    v[0] = -3;
    rows.push(v);
    rows
}

/// The named lattice with its standard generating set.
pub fn standard_lattice(kind: &LatticeKind) -> Result<(LatticeSpec, GenSet)> {
    let spec = standard_spec(kind)?;
    let gens = match *kind {
        LatticeKind::SpreadOut { d, norm, alpha } => spread_out_set(d, norm, alpha)?,
        _ => minimal_vectors(&spec)?,
    };
    Ok((spec, GenSet::new(gens)?))
}

/// The named lattice alone.
pub fn standard_spec(kind: &LatticeKind) -> Result<LatticeSpec> {
    let (dim, rows, expect_det): (usize, Vec<Vector>, u128) = match *kind {
        LatticeKind::Triangular => (2, vec![unit(2, 0, 1), unit(2, 1, 1)], 1),
        LatticeKind::Hypercubic(d) | LatticeKind::SpreadOut { d, .. } => {
            if d < 1 {
                return Err(Error::Domain("dimension must be positive".into()));
            }
            (d, (0..d).map(|i| unit(d, i, 1)).collect(), 1)
        }
        LatticeKind::D(d) => {
            if d < 2 {
                return Err(Error::Domain("D_d needs d >= 2".into()));
            }
            let mut rows = vec![unit(d, 0, 2)];
            for i in 1..d {
                let mut v = unit(d, 0, 1);
                v[i] = 1;
                rows.push(v);
            }
            (d, rows, 2)
        }
        LatticeKind::E8 => {
            let mut rows = vec![unit(8, 0, 4), vec![1; 8]];
            for i in 1..8 {
                let mut v = unit(8, 0, 2);
                v[i] = 2;
                rows.push(v);
            }
            (8, rows, 256)
        }
        // bit 0 pattern (2^23), bit 1 in the code (2^12), bit 2 parity (2)
        LatticeKind::Leech => (24, leech_generators(), 1 << 36),
        LatticeKind::Custom => return Err(Error::Unsupported("custom lattices have no standard form".into())),
    };
    let basis = hnf(&rows, dim)?.ok_or_else(|| Error::Internal("standard basis rank deficient".into()))?;
    let (sign_hints, perm_hints) = match *kind {
        LatticeKind::Leech => leech_hints(),
        LatticeKind::E8 => ((0..7).map(|i| 3u64 << i).collect(), adjacent_transpositions(8)),
        LatticeKind::D(d) | LatticeKind::Hypercubic(d) | LatticeKind::SpreadOut { d, .. } => {
            ((0..d).map(|i| 1u64 << i).collect(), adjacent_transpositions(d))
        }
        _ => (Vec::new(), adjacent_transpositions(dim)),
    };
    let spec = LatticeSpec {
        name: kind.to_string(),
        kind: kind.clone(),
        dim,
        basis,
        sign_hints,
        perm_hints,
    };
    if spec.det() != expect_det {
        return Err(Error::Internal(format!("{} basis has determinant {}", spec.name, spec.det())));
    }
    if let Some(r) = rows.iter().find(|r| !spec.contains(r)) {
        return Err(Error::Internal(format!("generator {r:?} fails membership")));
    }
    Ok(spec)
}

fn spread_out_set(d: usize, norm: PNorm, alpha: i64) -> Result<Vec<Vector>> {
    if alpha < 1 {
        return Err(Error::Domain("spread-out radius must be >= 1".into()));
    }
    let lo = vec![-alpha; d];
    let hi = vec![alpha; d];
    let z = LatticeSpec::from_basis("z", &(0..d).map(|i| unit(d, i, 1)).collect::<Vec<_>>())?;
    Ok(z.points_in_box(&lo, &hi)
        .into_iter()
        .filter(|x| x.iter().any(|&v| v != 0))
        .filter(|x| match norm {
            PNorm::Inf => true,
            PNorm::L(p) => x.iter().map(|v| v.abs().pow(p)).sum::<i64>() <= alpha.pow(p),
        })
        .collect())
}

/// Minimal nonzero vectors, sorted lexicographically.
pub fn minimal_vectors(spec: &LatticeSpec) -> Result<Vec<Vector>> {
    let mut out = match spec.kind {
        LatticeKind::Leech => leech_minimal_vectors().to_vec(),
        LatticeKind::Custom => return Err(Error::Unsupported("no search bound for custom lattices".into())),
        _ => {
            // every basis row bounds the minimum; the form dominates (3/4) x_i^2
            let m = spec.basis.iter().map(|r| spec.norm(r)).min().unwrap();
            let b = match spec.kind {
                LatticeKind::Triangular => ((4 * m) as f64 / 3.0).sqrt().floor() as i64 + 1,
                _ => (m as f64).sqrt().floor() as i64 + 1,
            };
            let pts = spec.points_in_box(&vec![-b; spec.dim], &vec![b; spec.dim]);
            let min = pts
                .iter()
                .map(|x| spec.norm(x))
                .filter(|&n| n > 0)
                .min()
                .ok_or_else(|| Error::Internal("no nonzero vector in search box".into()))?;
            pts.into_iter().filter(|x| spec.norm(x) == min).collect()
        }
    };
    out.sort();
    Ok(out)
}

/// Counts of the three Leech shapes `(±4,±4,0..)`, `(±2^8,0..)`, `(∓3,±1^23)`.
pub fn leech_shape_counts(vs: &[Vector]) -> [usize; 3] {
    let mut c = [0; 3];
    for v in vs {
        let m = v.iter().map(|x| x.abs()).max().unwrap_or(0);
        match m {
            4 => c[0] += 1,
            2 => c[1] += 1,
            3 => c[2] += 1,
            _ => {}
        }
    }
    c
}

fn build_leech_minimal() -> Vec<Vector> {
    let code = golay();
    let mut out = Vec::with_capacity(196_560);
    for i in 0..24 {
        for j in i + 1..24 {
            for (a, b) in [(4, 4), (4, -4), (-4, 4), (-4, -4)] {
                let mut v = vec![0; 24];
                v[i] = a;
                v[j] = b;
                out.push(v);
            }
        }
    }
    for &o in &code.octads {
        let pos: Vec<usize> = (0..24).filter(|k| o >> k & 1 == 1).collect();
        for signs in 0u32..256 {
            if signs.count_ones() % 2 == 1 {
                continue;
            }
            let mut v = vec![0; 24];
            for (t, &k) in pos.iter().enumerate() {
                v[k] = if signs >> t & 1 == 1 { -2 } else { 2 };
            }
            out.push(v);
        }
    }
    for &c in &code.codewords {
        for i in 0..24 {
            let v: Vector = (0..24)
                .map(|k| {
                    let base = if k == i { -3 } else { 1 };
                    if c >> k & 1 == 1 { -base } else { base }
                })
                .collect();
            out.push(v);
        }
    }
    out.sort();
    out
}

/// The 196 560 minimal vectors of the Leech lattice, built once.
pub fn leech_minimal_vectors() -> &'static [Vector] {
    static MIN: OnceLock<Vec<Vector>> = OnceLock::new();
    MIN.get_or_init(build_leech_minimal)
}

/// Rescales each coordinate by the gcd `k_i` of its image, so every
/// coordinate map becomes onto Z.
pub fn normalize_coordinates(spec: &LatticeSpec, s: &GenSet) -> Result<(LatticeSpec, GenSet, Vec<i64>)> {
    let d = spec.dim;
    let k: Vec<i64> = (0..d)
        .map(|i| spec.basis.iter().fold(0i64, |g, r| super::hnf::gcd_i64(g, r[i])))
        .collect();
    if k.contains(&0) {
        return Err(Error::Internal("zero coordinate image".into()));
    }
    let scale = |v: &Vector| -> Vector { v.iter().zip(&k).map(|(a, b)| a / b).collect() };
    let rows: Vec<Vector> = spec.basis.iter().map(scale).collect();
    let mut out = LatticeSpec::from_basis(&spec.name, &rows)?;
    if k.iter().all(|&x| x == 1) {
        out.kind = spec.kind.clone();
    }
    out.sign_hints = spec.sign_hints.clone();
    out.perm_hints = spec.perm_hints.clone();
    let vs = s.vectors.iter().map(scale).collect();
    Ok((out, GenSet::new(vs)?, k))
}

pub fn is_normalized(spec: &LatticeSpec) -> bool {
    (0..spec.dim).all(|i| spec.basis.iter().fold(0i64, |g, r| super::hnf::gcd_i64(g, r[i])) == 1)
}
