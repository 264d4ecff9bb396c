use super::clusters::label_clusters;
use crate::colouring::{require_full, Colouring};
use crate::error::{Error, Result};
use crate::lattice::GenSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    /// Some row `[i1,i2] × {j}`, `j ∈ [j1,j2]`, is white.
    Horizontal,
    /// Some column `{i} × [j1,j2]`, `i ∈ [i1,i2]`, is white.
    Vertical,
}

impl CrossingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossingKind::Horizontal => "horizontal",
            CrossingKind::Vertical => "vertical",
        }
    }
}

/// `[i1,i2] × [j1,j2]`, with `i` horizontal (axis 0) and `j` vertical.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rect {
    pub i1: i64,
    pub i2: i64,
    pub j1: i64,
    pub j2: i64,
}

impl Rect {
    pub fn new(i1: i64, i2: i64, j1: i64, j2: i64) -> Result<Rect> {
        if i1 > i2 || j1 > j2 {
            return Err(Error::Domain("rectangle needs i1 <= i2 and j1 <= j2".into()));
        }
        Ok(Rect { i1, i2, j1, j2 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingResult {
    pub kind: CrossingKind,
    pub rect: Rect,
    pub crossed: bool,
    /// Number of white lines crossing the rectangle.
    pub lines: u64,
    /// Lowest white row (column) index.
    pub witness: Option<i64>,
}

fn white_2d(c: &Colouring, i: i64, j: i64) -> bool {
    let w = &c.window;
    let idx = (i - w.origin[0]) as usize + (j - w.origin[1]) as usize * w.extents[0] as usize;
    c.is_white(idx)
}

fn require_plane(c: &Colouring, r: &Rect) -> Result<()> {
    require_full(c, "crossing events")?;
    if c.dim() != 2 {
        return Err(Error::Domain("crossing events need a 2-dimensional window".into()));
    }
    let w = &c.window;
    if r.i1 < w.origin[0] || r.i2 > w.hi(0) || r.j1 < w.origin[1] || r.j2 > w.hi(1) {
        return Err(Error::Domain("rectangle is not inside the window".into()));
    }
    Ok(())
}

/// Exact scan of every row (column) of the rectangle.
pub fn crossing(c: &Colouring, rect: Rect, kind: CrossingKind) -> Result<CrossingResult> {
    require_plane(c, &rect)?;
    let white_lines: Vec<i64> = match kind {
        CrossingKind::Horizontal => (rect.j1..=rect.j2)
            .filter(|&j| (rect.i1..=rect.i2).all(|i| white_2d(c, i, j)))
            .collect(),
        CrossingKind::Vertical => (rect.i1..=rect.i2)
            .filter(|&i| (rect.j1..=rect.j2).all(|j| white_2d(c, i, j)))
            .collect(),
    };
    Ok(CrossingResult {
        kind,
        rect,
        crossed: !white_lines.is_empty(),
        lines: white_lines.len() as u64,
        witness: white_lines.first().copied(),
    })
}

/// The four crossings making up the annulus event at scale `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusResult {
    pub k: i64,
    pub occurred: bool,
    /// Left and right columns, bottom and top rows, when present.
    pub left: Option<i64>,
    pub right: Option<i64>,
    pub bottom: Option<i64>,
    pub top: Option<i64>,
}

impl AnnulusResult {
    /// Witness lines as text: `column i j1 j2` or `row j i1 i2`.
    pub fn witness_lines(&self) -> Vec<String> {
        let k = self.k;
        let mut out = Vec::new();
        for i in [self.left, self.right].into_iter().flatten() {
            out.push(format!("column {i} {} {k}", -k));
        }
        for j in [self.bottom, self.top].into_iter().flatten() {
            out.push(format!("row {j} {} {k}", -k));
        }
        out
    }
}

/// White columns in `[-k,-k/3]` and `[k/3,k]` spanning `[-k,k]`, and white
/// rows in `[-k,-k/3]` and `[k/3,k]` spanning `[-k,k]`.
pub fn annulus_event(c: &Colouring, k: i64) -> Result<AnnulusResult> {
    if k <= 0 || k % 3 != 0 {
        return Err(Error::Domain(format!("annulus scale k = {k} must be a positive multiple of 3")));
    }
    let t = k / 3;
    let left = crossing(c, Rect::new(-k, -t, -k, k)?, CrossingKind::Vertical)?;
    let right = crossing(c, Rect::new(t, k, -k, k)?, CrossingKind::Vertical)?;
    let bottom = crossing(c, Rect::new(-k, k, -k, -t)?, CrossingKind::Horizontal)?;
    let top = crossing(c, Rect::new(-k, k, t, k)?, CrossingKind::Horizontal)?;
    Ok(AnnulusResult {
        k,
        occurred: left.crossed && right.crossed && bottom.crossed && top.crossed,
        left: left.witness,
        right: right.witness,
        bottom: bottom.witness,
        top: top.witness,
    })
}

/// Cluster facts that must follow from a white circuit around `[-k/3,k/3]^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusConsequences {
    /// A black component meets both the inner box and the window boundary.
    pub black_escapes: bool,
    /// White components meeting both the inner box and the boundary.
    pub white_escaping: usize,
}

impl AnnulusConsequences {
    pub fn consistent(&self) -> bool {
        !self.black_escapes && self.white_escaping <= 1
    }
}

pub fn annulus_consequences(c: &Colouring, k: i64, s: &GenSet) -> Result<AnnulusConsequences> {
    require_plane(c, &Rect::new(-k, k, -k, k)?)?;
    let t = k / 3;
    let inner = |x: &[i64]| x[0].abs() <= t && x[1].abs() <= t;
    let escaping = |white: bool| {
        let cl = label_clusters(c, s, white);
        let mut seen = vec![false; cl.count()];
        for i in 0..c.len() {
            if let Some(l) = cl.label(i) {
                if cl.touches_boundary(l) && inner(&c.point(i)) {
                    seen[l as usize] = true;
                }
            }
        }
        seen.iter().filter(|&&b| b).count()
    };
    Ok(AnnulusConsequences { black_escapes: escaping(false) > 0, white_escaping: escaping(true) })
}

/// `A_n`: for even `n` a horizontal crossing of `[0,2^(n+1)] × [0,2^n]`,
/// for odd `n` a vertical crossing of `[0,2^n] × [0,2^(n+1)]`.
pub fn staircase_event(c: &Colouring, n: u32) -> Result<CrossingResult> {
    let (a, b) = (1i64 << n, 1i64 << (n + 1));
    if n.is_multiple_of(2) {
        crossing(c, Rect::new(0, b, 0, a)?, CrossingKind::Horizontal)
    } else {
        crossing(c, Rect::new(0, a, 0, b)?, CrossingKind::Vertical)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Staircase {
    pub n_min: u32,
    pub n_max: u32,
    /// `(n, A_n)` for each level.
    pub events: Vec<(u32, bool)>,
    /// White nearest-neighbour path through the witness lines.
    pub path: Option<Vec<[i64; 2]>>,
}

fn walk(path: &mut Vec<[i64; 2]>, to: [i64; 2]) {
    let mut cur = *path.last().unwrap();
    while cur != to {
        if cur[0] != to[0] {
            cur[0] += (to[0] - cur[0]).signum();
        } else {
            cur[1] += (to[1] - cur[1]).signum();
        }
        path.push(cur);
    }
}

/// Checks `A_n` for `n ∈ [n_min, n_max]` and, when all hold, concatenates
/// the lowest witness lines into one path, verified point by point.
pub fn staircase(c: &Colouring, n_min: u32, n_max: u32) -> Result<Staircase> {
    if n_min > n_max || n_max > 40 {
        return Err(Error::Domain("staircase needs n_min <= n_max <= 40".into()));
    }
    let mut events = Vec::new();
    let mut lines = Vec::new();
    for n in n_min..=n_max {
        let r = staircase_event(c, n)?;
        events.push((n, r.crossed));
        lines.push(r.witness);
    }
    if lines.iter().any(|l| l.is_none()) {
        return Ok(Staircase { n_min, n_max, events, path: None });
    }
    let lines: Vec<i64> = lines.into_iter().flatten().collect();
    // Even levels are rows at height lines[..], odd levels columns.
    let horizontal = |n: u32| n.is_multiple_of(2);
    let mut path = vec![if horizontal(n_min) { [0, lines[0]] } else { [lines[0], 0] }];
    for (idx, n) in (n_min..n_max).enumerate() {
        let (here, next) = (lines[idx], lines[idx + 1]);
        let meet = if horizontal(n) { [next, here] } else { [here, next] };
        walk(&mut path, meet);
    }
    let last = *lines.last().unwrap();
    let end = 1i64 << (n_max + 1);
    walk(&mut path, if horizontal(n_max) { [end, last] } else { [last, end] });
    let ok = path.windows(2).all(|p| (p[0][0] - p[1][0]).abs() + (p[0][1] - p[1][1]).abs() == 1)
        && path.iter().all(|p| white_2d(c, p[0], p[1]));
    if !ok {
        return Err(Error::Internal("staircase path failed verification".into()));
    }
    Ok(Staircase { n_min, n_max, events, path: Some(path) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningSummary {
    pub points: usize,
    pub white_points: usize,
    pub all_white: bool,
    /// All white and the axis step belongs to S, so the column is a path.
    pub connected: bool,
    pub longest_white_run: usize,
}

/// Whiteness of a window that is a single column along its last axis.
pub fn spanning_stats(c: &Colouring, s: &GenSet) -> Result<SpanningSummary> {
    require_full(c, "spanning statistics")?;
    let d = c.dim();
    if c.window.extents[..d - 1].iter().any(|&e| e != 1) {
        return Err(Error::Domain("spanning statistics need a window of shape 1 × … × 1 × L".into()));
    }
    let mut step = vec![0i64; d];
    step[d - 1] = 1;
    let (mut run, mut best) = (0usize, 0usize);
    for b in c.bits() {
        run = if b { run + 1 } else { 0 };
        best = best.max(run);
    }
    let white_points = c.white_count();
    let all_white = white_points == c.len();
    Ok(SpanningSummary {
        points: c.len(),
        white_points,
        all_white,
        connected: all_white && s.vectors.contains(&step),
        longest_white_run: best,
    })
}
