//! Decision procedures for the two hypotheses on `(Γ, S)` along each axis.
//!
//! Condition 1: the slice `H_i = {x ∈ Γ : x_i = 0}` is connected in the Cayley
//! graph. Checked by a bounded breadth-first search (one-sided), and also
//! exactly: the induced graph on `H_i` uses only steps of `S ∩ H_i`, so it is
//! connected iff those steps generate `H_i`.
//!
//! Condition 2 only depends on the coordinate image `{s_i : s ∈ S}`.

use super::hnf::{hnf, hnf_det};
use super::spec::{is_normalized, span_index, GenSet, LatticeSpec, Vector};
use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Adjacent `x, z` with `x_i < 0 < z_i` have a common-side neighbour in `H_i`.
    Strict,
    /// Adjacent `x, z` with `x_i <= 0 <= z_i` have `x_i = 0` or `z_i = 0`.
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Setup,
    SetupBlack,
}

impl Theorem {
    pub fn mode(self) -> Mode {
        match self {
            Theorem::Setup => Mode::Strict,
            Theorem::SetupBlack => Mode::Weak,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Setup => "setup",
            Theorem::SetupBlack => "setupblack",
        }
    }
}

/// Failure witness for condition 2: a generator `s` and the coordinate `a = x_i`
/// of its tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingWitness {
    pub s: Vector,
    pub a: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingResult {
    pub axis: usize,
    pub mode: Mode,
    pub pass: bool,
    pub witness: Option<CrossingWitness>,
}

pub fn check_crossing_adjacency(spec: &LatticeSpec, s: &GenSet, axis: usize, mode: Mode) -> Result<CrossingResult> {
    if !is_normalized(spec) {
        return Err(Error::Domain("coordinates are not normalized".into()));
    }
    if axis >= spec.dim {
        return Err(Error::Domain("axis out of range".into()));
    }
    let image: HashSet<i64> = s.vectors.iter().map(|v| v[axis]).collect();
    let mut witness = None;
    'outer: for v in &s.vectors {
        let m = v[axis];
        match mode {
            Mode::Weak => {
                if m >= 2 {
                    witness = Some(CrossingWitness { s: v.clone(), a: -1 });
                    break 'outer;
                }
            }
            Mode::Strict => {
                for a in (1 - m)..0 {
                    if !image.contains(&-a) && !image.contains(&-(a + m)) {
                        witness = Some(CrossingWitness { s: v.clone(), a });
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(CrossingResult { axis, mode, pass: witness.is_none(), witness })
}

/// Direct check of condition 2 on every edge `(x, x+s)` with `x` in a box.
/// Exponential in the dimension; meant as an oracle on small instances.
pub fn crossing_adjacency_brute_force(spec: &LatticeSpec, s: &GenSet, axis: usize, mode: Mode, radius: i64) -> bool {
    let d = spec.dim;
    let pts = spec.points_in_box(&vec![-radius; d], &vec![radius; d]);
    for x in &pts {
        for v in &s.vectors {
            let z: Vector = x.iter().zip(v).map(|(a, b)| a + b).collect();
            let (xi, zi) = (x[axis], z[axis]);
            let ok = match mode {
                Mode::Weak => !(xi <= 0 && 0 <= zi) || xi == 0 || zi == 0,
                Mode::Strict => {
                    !(xi < 0 && 0 < zi)
                        || s.vectors.iter().any(|t| xi + t[axis] == 0 || zi + t[axis] == 0)
                }
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

fn apply_perm(v: &[i64], perm: &[usize]) -> Vector {
    let mut out = vec![0; v.len()];
    for (j, &t) in perm.iter().enumerate() {
        out[t] = v[j];
    }
    out
}

fn apply_signs(v: &[i64], mask: u64) -> Vector {
    v.iter().enumerate().map(|(k, &x)| if mask >> k & 1 == 1 { -x } else { x }).collect()
}

fn preserves(spec: &LatticeSpec, set: &HashSet<&Vector>, s: &GenSet, f: impl Fn(&[i64]) -> Vector) -> bool {
    spec.basis.iter().all(|b| spec.contains_by_basis(&f(b))) && s.vectors.iter().all(|v| set.contains(&f(v)))
}

/// The subset of the spec's symmetry hints that are automorphisms of `(Γ, S)`.
pub fn verified_symmetries(spec: &LatticeSpec, s: &GenSet) -> (Vec<u64>, Vec<Vec<usize>>) {
    let set: HashSet<&Vector> = s.vectors.iter().collect();
    let full = if spec.dim >= 64 { u64::MAX } else { (1u64 << spec.dim) - 1 };
    let signs = spec
        .sign_hints
        .iter()
        .copied()
        .filter(|&m| m & !full == 0 && preserves(spec, &set, s, |v| apply_signs(v, m)))
        .collect();
    let perms = spec
        .perm_hints
        .iter()
        .filter(|p| p.len() == spec.dim && preserves(spec, &set, s, |v| apply_perm(v, p)))
        .cloned()
        .collect();
    (signs, perms)
}

/// Canonical representative of `x` under the group generated by sign flips.
/// Returns the representative and the orbit size.
fn canonical(x: &[i64], flips: &[u64]) -> (Vec<i8>, u64) {
    let support = x.iter().enumerate().fold(0u64, |m, (k, &v)| if v != 0 { m | 1 << k } else { m });
    let mut neg = x.iter().enumerate().fold(0u64, |m, (k, &v)| if v < 0 { m | 1 << k } else { m });
    let mut basis: Vec<u64> = Vec::new();
    for &f in flips {
        let mut b = f & support;
        for &e in &basis {
            b = b.min(b ^ e);
        }
        if b != 0 {
            basis.push(b);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    for &e in &basis {
        neg = neg.min(neg ^ e);
    }
    let rep = x
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let a = v.abs() as i8;
            if neg >> k & 1 == 1 { -a } else { a }
        })
        .collect();
    (rep, 1u64 << basis.len())
}

#[derive(Clone, Debug)]
pub struct SliceCertificate {
    pub axis: usize,
    pub certify_radius: i64,
    pub search_radius: i64,
    pub certified: bool,
    /// Slice points in the certify box.
    pub target_points: u64,
    /// Of those, how many the search reached.
    pub reached_points: u64,
    /// Orbit representatives visited by the search.
    pub orbits_visited: usize,
    /// Largest step count from the origin, in the quotient graph.
    pub max_depth: u32,
    pub unreached: Option<Vector>,
    /// Whether `S ∩ H_i` generates `H_i` (decides the infinite statement).
    pub generates_slice: Option<bool>,
    /// Set when the result was transported from another axis by a verified
    /// coordinate permutation.
    pub via_axis: Option<usize>,
}

/// Whether the steps of `S` inside `H_i` generate `Γ ∩ H_i`.
pub fn slice_generation(spec: &LatticeSpec, s: &GenSet, axis: usize) -> Result<bool> {
    let d = spec.dim;
    if d == 1 {
        return Ok(true);
    }
    // move the axis to the front; HNF rows after the first then span Γ ∩ H_i
    let order: Vec<usize> = std::iter::once(axis).chain((0..d).filter(|&j| j != axis)).collect();
    let permute = |v: &Vector| -> Vector { order.iter().map(|&j| v[j]).collect() };
    let rows: Vec<Vector> = spec.basis.iter().map(permute).collect();
    let h = hnf(&rows, d)?.ok_or_else(|| Error::Internal("basis rank".into()))?;
    let slice_basis: Vec<Vector> = h[1..].iter().map(|r| r[1..].to_vec()).collect();
    let steps: Vec<Vector> = s
        .vectors
        .iter()
        .filter(|v| v[axis] == 0)
        .map(|v| permute(v)[1..].to_vec())
        .collect();
    if steps.is_empty() {
        return Ok(false);
    }
    let Some(hs) = hnf(&steps, d - 1)? else {
        return Ok(false);
    };
    Ok(hnf_det(&hs) == hnf_det(&slice_basis))
}

/// Bounded search over `H_i ∩ [-R, R]^d` from the origin. Certifies that all
/// slice points of `[-r, r]^d` are reached.
pub fn check_slice_connectivity(spec: &LatticeSpec, s: &GenSet, axis: usize, r: i64, big_r: i64) -> Result<SliceCertificate> {
    let (flips, _) = verified_symmetries(spec, s);
    slice_search(spec, s, axis, r, big_r, &flips)
}

fn slice_search(spec: &LatticeSpec, s: &GenSet, axis: usize, r: i64, big_r: i64, flips: &[u64]) -> Result<SliceCertificate> {
    if r > big_r || r < 0 {
        return Err(Error::Domain("need 0 <= r <= R".into()));
    }
    if big_r > i8::MAX as i64 {
        return Err(Error::Domain("search radius too large".into()));
    }
    let d = spec.dim;
    let steps: Vec<&Vector> = s.vectors.iter().filter(|v| v[axis] == 0).collect();
    let words = steps.len().div_ceil(64);
    let width = (2 * big_r + 1) as usize;
    // allowed[j][v + R]: steps keeping coordinate j inside [-R, R] from value v
    let mut allowed = vec![vec![vec![0u64; words]; width]; d];
    for (t, st) in steps.iter().enumerate() {
        for j in 0..d {
            for v in -big_r..=big_r {
                if (v + st[j]).abs() <= big_r {
                    allowed[j][(v + big_r) as usize][t / 64] |= 1 << (t % 64);
                }
            }
        }
    }
    let full: Vec<Vec<bool>> = allowed
        .iter()
        .map(|col| {
            col.iter()
                .map(|bits| (0..steps.len()).all(|t| bits[t / 64] >> (t % 64) & 1 == 1))
                .collect()
        })
        .collect();

    let origin = vec![0i64; d];
    let (rep0, size0) = canonical(&origin, flips);
    let mut seen: HashMap<Vec<i8>, (u64, u32)> = HashMap::new();
    seen.insert(rep0.clone(), (size0, 0));
    let mut queue = VecDeque::from([rep0]);
    let mut mask = vec![0u64; words];
    let mut max_depth = 0;
    while let Some(x) = queue.pop_front() {
        let depth = seen[&x].1;
        max_depth = max_depth.max(depth);
        mask.iter_mut().for_each(|w| *w = u64::MAX);
        for j in 0..d {
            let idx = (x[j] as i64 + big_r) as usize;
            if full[j][idx] {
                continue;
            }
            for (m, a) in mask.iter_mut().zip(&allowed[j][idx]) {
                *m &= a;
            }
        }
        for (w, &bits) in mask.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                let t = w * 64 + b.trailing_zeros() as usize;
                b &= b - 1;
                if t >= steps.len() {
                    break;
                }
                let y: Vector = x.iter().zip(steps[t]).map(|(&a, &c)| a as i64 + c).collect();
                let (rep, size) = canonical(&y, flips);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(rep.clone()) {
                    e.insert((size, depth + 1));
                    queue.push_back(rep);
                }
            }
        }
    }
    let reached: u64 = seen
        .iter()
        .filter(|(x, _)| x.iter().all(|&v| (v as i64).abs() <= r))
        .map(|(_, (size, _))| size)
        .sum();
    let mut lo = vec![-r; d];
    let mut hi = vec![r; d];
    lo[axis] = 0;
    hi[axis] = 0;
    let target = spec.count_in_box(&lo, &hi);
    let certified = reached == target;
    let mut unreached = None;
    if !certified {
        super::hnf::for_each_in_box(&spec.basis, &lo, &hi, |x| {
            if unreached.is_none() && !seen.contains_key(&canonical(x, flips).0) {
                unreached = Some(x.to_vec());
            }
        });
    }
    Ok(SliceCertificate {
        axis,
        certify_radius: r,
        search_radius: big_r,
        certified,
        target_points: target,
        reached_points: reached,
        orbits_visited: seen.len(),
        max_depth,
        unreached,
        generates_slice: Some(slice_generation(spec, s, axis)?),
        via_axis: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    PassExact,
    PassBounded,
    Fail(String),
}

impl Verdict {
    pub fn as_str(&self) -> String {
        match self {
            Verdict::PassExact => "pass-exact".into(),
            Verdict::PassBounded => "pass-bounded".into(),
            Verdict::Fail(w) => format!("fail({w})"),
        }
    }

    pub fn is_pass(&self) -> bool {
        !matches!(self, Verdict::Fail(_))
    }
}

#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub lattice: String,
    pub theorem: Theorem,
    pub span_index: Option<u128>,
    pub slices: Vec<SliceCertificate>,
    pub crossings: Vec<CrossingResult>,
    pub condition1: Verdict,
    pub condition2: Verdict,
    pub verdict: Verdict,
}

impl HypothesisReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "lattice={} theorem={} span_index={}\n",
            self.lattice,
            self.theorem.as_str(),
            self.span_index.map_or("infinite".into(), |v| v.to_string())
        );
        for c in &self.slices {
            s.push_str(&format!(
                "condition1 axis={} radius={} search={} certified={} reached={}/{} orbits={} depth={} generates={}{}{}\n",
                c.axis,
                c.certify_radius,
                c.search_radius,
                c.certified,
                c.reached_points,
                c.target_points,
                c.orbits_visited,
                c.max_depth,
                c.generates_slice.map_or("unknown".into(), |b| b.to_string()),
                c.via_axis.map_or(String::new(), |a| format!(" via_axis={a}")),
                c.unreached.as_ref().map_or(String::new(), |u| format!(" unreached={u:?}")),
            ));
        }
        for c in &self.crossings {
            s.push_str(&format!(
                "condition2 axis={} mode={:?} pass={}{}\n",
                c.axis,
                c.mode,
                c.pass,
                c.witness.as_ref().map_or(String::new(), |w| format!(" witness_s={:?} witness_a={}", w.s, w.a)),
            ));
        }
        s.push_str(&format!("condition1={}\n", self.condition1.as_str()));
        s.push_str(&format!("condition2={}\n", self.condition2.as_str()));
        s.push_str(&format!("verdict={}\n", self.verdict.as_str()));
        s
    }
}

/// Orbits of the axes under the verified coordinate permutations.
fn axis_orbits(d: usize, perms: &[Vec<usize>]) -> Vec<usize> {
    let mut rep: Vec<usize> = (0..d).collect();
    fn find(rep: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while rep[i] != i {
            rep[i] = rep[rep[i]];
            i = rep[i];
        }
        i
    }
    for p in perms {
        for j in 0..d {
            let (a, b) = (find(&mut rep, j), find(&mut rep, p[j]));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                rep[hi] = lo;
            }
        }
    }
    (0..d).map(|j| find(&mut rep, j)).collect()
}

/// Checks both conditions of `theorem` along every axis. Slices on axes
/// related by a verified coordinate permutation share one search.
pub fn hypothesis_report(spec: &LatticeSpec, s: &GenSet, theorem: Theorem, r: i64, big_r: i64) -> Result<HypothesisReport> {
    let span = span_index(&s.vectors, spec)?;
    let mut report = HypothesisReport {
        lattice: spec.name.clone(),
        theorem,
        span_index: span,
        slices: Vec::new(),
        crossings: Vec::new(),
        condition1: Verdict::PassExact,
        condition2: Verdict::PassExact,
        verdict: Verdict::PassExact,
    };
    if span != Some(1) {
        let why = "S does not generate the lattice".to_string();
        report.condition1 = Verdict::Fail(why.clone());
        report.condition2 = Verdict::Fail(why.clone());
        report.verdict = Verdict::Fail(why);
        return Ok(report);
    }
    if !is_normalized(spec) {
        return Err(Error::Domain("coordinates are not normalized".into()));
    }
    let (flips, perms) = verified_symmetries(spec, s);
    let orbit = axis_orbits(spec.dim, &perms);
    let mut done: HashMap<usize, SliceCertificate> = HashMap::new();
    for axis in 0..spec.dim {
        let root = orbit[axis];
        let cert = match done.get(&root) {
            Some(c) => SliceCertificate { axis, via_axis: Some(c.axis), ..c.clone() },
            None => {
                let c = slice_search(spec, s, root, r, big_r, &flips)?;
                done.insert(root, c.clone());
                SliceCertificate { axis, via_axis: (root != axis).then_some(root), ..c }
            }
        };
        report.slices.push(cert);
        report.crossings.push(check_crossing_adjacency(spec, s, axis, theorem.mode())?);
    }
    if let Some(c) = report.slices.iter().find(|c| !c.certified) {
        report.condition1 = Verdict::Fail(format!("axis {} unreached {:?}", c.axis, c.unreached));
    } else {
        report.condition1 = Verdict::PassBounded;
    }
    if let Some(c) = report.crossings.iter().find(|c| !c.pass) {
        let w = c.witness.as_ref().unwrap();
        report.condition2 = Verdict::Fail(format!("axis {} s={:?} a={}", c.axis, w.s, w.a));
    }
    report.verdict = match (&report.condition1, &report.condition2) {
        (Verdict::Fail(w), _) | (_, Verdict::Fail(w)) => Verdict::Fail(w.clone()),
        (Verdict::PassBounded, _) | (_, Verdict::PassBounded) => Verdict::PassBounded,
        _ => Verdict::PassExact,
    };
    Ok(report)
}
