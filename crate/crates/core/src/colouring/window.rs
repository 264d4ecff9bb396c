use crate::error::{Error, Result};

/// An axis-aligned box of integer points. Axis 0 is horizontal and varies
/// fastest in every flat ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub origin: Vec<i64>,
    pub extents: Vec<u64>,
}

impl Window {
    pub fn new(origin: Vec<i64>, extents: Vec<u64>) -> Result<Window> {
        if origin.len() != extents.len() || origin.is_empty() {
            return Err(Error::Domain("origin and extents must have the same positive length".into()));
        }
        if extents.contains(&0) {
            return Err(Error::Domain("window extents must be >= 1".into()));
        }
        extents
            .iter()
            .try_fold(1usize, |acc, &e| acc.checked_mul(usize::try_from(e).ok()?))
            .ok_or_else(|| Error::Domain("window too large".into()))?;
        Ok(Window { origin, extents })
    }

    /// The box `[lo, hi]` in every coordinate.
    pub fn cube(d: usize, lo: i64, hi: i64) -> Result<Window> {
        if hi < lo {
            return Err(Error::Domain("empty cube".into()));
        }
        Window::new(vec![lo; d], vec![(hi - lo + 1) as u64; d])
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn len(&self) -> usize {
        self.extents.iter().map(|&e| e as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hi(&self, k: usize) -> i64 {
        self.origin[k] + self.extents[k] as i64 - 1
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim() && (0..self.dim()).all(|k| x[k] >= self.origin[k] && x[k] <= self.hi(k))
    }

    pub fn index(&self, x: &[i64]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let mut idx = 0usize;
        for k in (0..self.dim()).rev() {
            idx = idx * self.extents[k] as usize + (x[k] - self.origin[k]) as usize;
        }
        Some(idx)
    }

    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut x = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let e = self.extents[k] as usize;
            x.push(self.origin[k] + (idx % e) as i64);
            idx /= e;
        }
        x
    }

    /// Flat stride of axis `k`.
    pub fn stride(&self, k: usize) -> usize {
        self.extents[..k].iter().map(|&e| e as usize).product()
    }

    pub fn on_boundary(&self, x: &[i64]) -> bool {
        (0..self.dim()).any(|k| x[k] == self.origin[k] || x[k] == self.hi(k))
    }
}
