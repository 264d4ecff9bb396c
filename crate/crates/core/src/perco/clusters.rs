use crate::colouring::{Colouring, Layout, Window};
use crate::lattice::GenSet;

pub const NO_LABEL: u32 = u32::MAX;

/// Connected components of one colour under S-adjacency inside a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabels {
    pub window: Window,
    pub white: bool,
    /// Per point: component index in first-visit order, or `NO_LABEL`.
    pub labels: Vec<u32>,
    pub sizes: Vec<u64>,
    /// Per component: bit `2k` if it touches the low face of axis `k`,
    /// bit `2k+1` for the high face.
    pub faces: Vec<u64>,
}

impl ClusterLabels {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label(&self, i: usize) -> Option<u32> {
        let l = self.labels[i];
        (l != NO_LABEL).then_some(l)
    }

    pub fn touches_boundary(&self, label: u32) -> bool {
        self.faces[label as usize] != 0
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let g = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = g;
            x = g;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

fn face_bits(w: &Window, x: &[i64]) -> u64 {
    let mut f = 0;
    for k in 0..w.dim() {
        if x[k] == w.origin[k] {
            f |= 1 << (2 * k);
        }
        if x[k] == w.hi(k) {
            f |= 1 << (2 * k + 1);
        }
    }
    f
}

/// Union-find over same-colour neighbours `v ~ v + s`, `s ∈ S`.
pub fn label_clusters(c: &Colouring, s: &GenSet, white: bool) -> ClusterLabels {
    let n = c.len();
    let w = &c.window;
    let d = w.dim();
    let half = s.half();
    let mut uf = UnionFind { parent: (0..n as u32).collect() };
    let stride: Vec<i64> = (0..d).map(|k| w.stride(k) as i64).collect();
    let mut x = vec![0i64; d];
    for i in 0..n {
        if c.is_white(i) != white {
            continue;
        }
        match &c.layout {
            Layout::Full => {
                let mut r = i;
                for k in 0..d {
                    let e = w.extents[k] as usize;
                    x[k] = (r % e) as i64;
                    r /= e;
                }
                for v in &half {
                    let mut off = 0i64;
                    let inside = (0..d).all(|k| {
                        let y = x[k] + v[k];
                        off += v[k] * stride[k];
                        y >= 0 && y < w.extents[k] as i64
                    });
                    if inside {
                        let j = (i as i64 + off) as usize;
                        if c.is_white(j) == white {
                            uf.union(i as u32, j as u32);
                        }
                    }
                }
            }
            Layout::Sparse(pts) => {
                for v in &half {
                    let y: Vec<i64> = pts[i].iter().zip(v).map(|(a, b)| a + b).collect();
                    if let Some(j) = c.index_of(&y) {
                        if c.is_white(j) == white {
                            uf.union(i as u32, j as u32);
                        }
                    }
                }
            }
        }
    }
    let mut labels = vec![NO_LABEL; n];
    let mut root_label = vec![NO_LABEL; n];
    let (mut sizes, mut faces) = (Vec::new(), Vec::new());
    for i in 0..n {
        if c.is_white(i) != white {
            continue;
        }
        let r = uf.find(i as u32) as usize;
        if root_label[r] == NO_LABEL {
            root_label[r] = sizes.len() as u32;
            sizes.push(0);
            faces.push(0);
        }
        let l = root_label[r];
        labels[i] = l;
        sizes[l as usize] += 1;
        faces[l as usize] |= face_bits(w, &c.point(i));
    }
    ClusterLabels { window: w.clone(), white, labels, sizes, faces }
}
