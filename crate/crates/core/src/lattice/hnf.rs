//! Hermite normal form and lattice point enumeration.
//!
//! Rows are lattice vectors. A full-rank HNF here is upper triangular with
//! positive pivots and entries above each pivot reduced into `[0, pivot)`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

const MODP: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODP as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn to_mod(v: i64) -> u64 {
    v.rem_euclid(MODP as i64) as u64
}

/// Indices of a maximal subset of rows that is independent modulo 2^61 - 1
/// (hence independent over Q).
pub fn independent_rows(rows: &[Vec<i64>], dim: usize) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut picked = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        let mut v: Vec<u64> = r.iter().map(|&x| to_mod(x)).collect();
        for (lead, b) in &basis {
            let c = v[*lead];
            if c != 0 {
                for k in 0..dim {
                    v[k] = (v[k] + MODP - mulmod(c, b[k])) % MODP;
                }
            }
        }
        if let Some(lead) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[lead], MODP - 2);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv);
            }
            // keep the stored basis fully reduced on its leading columns
            for (_, b) in basis.iter_mut() {
                let c = b[lead];
                if c != 0 {
                    for k in 0..dim {
                        b[k] = (b[k] + MODP - mulmod(c, v[k])) % MODP;
                    }
                }
            }
            basis.push((lead, v));
            picked.push(idx);
            if picked.len() == dim {
                break;
            }
        }
    }
    picked
}

/// Absolute determinant of a square integer matrix by fraction-free elimination.
pub fn det_abs(m: &[Vec<i64>]) -> Result<u128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let overflow = || Error::Internal("determinant overflows i128".into());
    let mut prev: i128 = 1;
    let mut sign = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or_else(overflow)?;
                a[i][j] = t / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    let d = if n == 0 { 1 } else { a[n - 1][n - 1] * sign };
    Ok(d.unsigned_abs())
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Exact HNF of a small generating set over the integers.
fn hnf_exact(mut rows: Vec<Vec<BigInt>>, dim: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..dim {
        loop {
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            nz.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let p = nz[0];
            if nz.len() == 1 {
                let mut piv = rows.swap_remove(p);
                if piv[col].is_negative() {
                    for x in piv.iter_mut() {
                        *x = -x.clone();
                    }
                }
                out.push(piv);
                break;
            }
            let pr = rows[p].clone();
            for &i in &nz[1..] {
                let q = rows[i][col].div_floor(&pr[col]);
                for k in col..dim {
                    let t = &q * &pr[k];
                    rows[i][k] -= t;
                }
            }
        }
    }
    // reduce entries above pivots, earliest pivot first
    for i in 0..out.len() {
        let col = out[i].iter().position(|x| !x.is_zero()).unwrap();
        for r in 0..i {
            let q = out[r][col].div_floor(&out[i][col]);
            if !q.is_zero() {
                let pi = out[i].clone();
                for k in col..dim {
                    let t = &q * &pi[k];
                    out[r][k] -= t;
                }
            }
        }
    }
    out
}

/// HNF rows of the lattice spanned by `rows`, or `None` when they do not
/// span a full-rank lattice.
pub fn hnf(rows: &[Vec<i64>], dim: usize) -> Result<Option<Vec<Vec<i64>>>> {
    let pick = independent_rows(rows, dim);
    if pick.len() < dim {
        return Ok(None);
    }
    let sub: Vec<Vec<i64>> = pick.iter().map(|&i| rows[i].clone()).collect();
    let det = det_abs(&sub)?;
    if det == 0 {
        return Err(Error::Internal("independent rows with zero determinant".into()));
    }
    if det >= 1u128 << 62 {
        return Err(Error::Unsupported("lattice determinant too large for modular HNF".into()));
    }
    let dm = det as i128;
    // rows of h generate the lattice together with dm * Z^dim
    let mut h: Vec<Vec<i128>> = vec![vec![0; dim]; dim];
    for r in rows {
        let mut v: Vec<i128> = r.iter().map(|&x| (x as i128).rem_euclid(dm)).collect();
        for j in 0..dim {
            if v[j] == 0 {
                continue;
            }
            if h[j][j] == 0 {
                h[j] = std::mem::take(&mut v);
                break;
            }
            let (g, a, b) = ext_gcd(h[j][j], v[j]);
            let (hj, vj) = (h[j][j] / g, v[j] / g);
            let old = h[j].clone();
            for k in j..dim {
                let nh = (a * old[k] + b * v[k]).rem_euclid(dm);
                let nv = (hj * v[k] - vj * old[k]).rem_euclid(dm);
                h[j][k] = nh;
                v[k] = nv;
            }
        }
    }
    let mut gens: Vec<Vec<BigInt>> = h
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    for j in 0..dim {
        let mut e = vec![BigInt::zero(); dim];
        e[j] = BigInt::from(dm);
        gens.push(e);
    }
    let exact = hnf_exact(gens, dim);
    if exact.len() != dim {
        return Err(Error::Internal("modular HNF lost rank".into()));
    }
    let out = exact
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_i64().expect("HNF entry fits i64")).collect())
        .collect();
    Ok(Some(out))
}

pub fn hnf_det(h: &[Vec<i64>]) -> u128 {
    h.iter().enumerate().map(|(i, r)| r[i] as u128).product()
}

/// Integer coefficients of `v` in the HNF basis `h`, if `v` lies in the lattice.
pub fn coefficients(h: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let d = h.len();
    let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    let mut c = vec![0i64; d];
    for j in 0..d {
        let p = h[j][j] as i128;
        if w[j] % p != 0 {
            return None;
        }
        let q = w[j] / p;
        c[j] = q as i64;
        if q != 0 {
            for k in j..d {
                w[k] -= q * h[j][k] as i128;
            }
        }
    }
    Some(c)
}

pub fn in_lattice(h: &[Vec<i64>], v: &[i64]) -> bool {
    coefficients(h, v).is_some()
}

/// Calls `visit` on every lattice point with `lo[k] <= x[k] <= hi[k]`, in
/// lexicographic order with coordinate 0 most significant.
pub fn for_each_in_box(h: &[Vec<i64>], lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) {
    let d = h.len();
    let mut x = vec![0i64; d];
    let mut partial = vec![vec![0i64; d]; d + 1];
    fn rec(
        k: usize,
        h: &[Vec<i64>],
        lo: &[i64],
        hi: &[i64],
        x: &mut Vec<i64>,
        partial: &mut Vec<Vec<i64>>,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let d = h.len();
        if k == d {
            visit(x);
            return;
        }
        let p = h[k][k];
        let base = partial[k][k];
        // values base + c p inside [lo, hi]
        let cmin = Integer::div_ceil(&(lo[k] - base), &p);
        let cmax = Integer::div_floor(&(hi[k] - base), &p);
        for c in cmin..=cmax {
            x[k] = base + c * p;
            for j in k + 1..d {
                partial[k + 1][j] = partial[k][j] + c * h[k][j];
            }
            rec(k + 1, h, lo, hi, x, partial, visit);
        }
    }
    rec(0, h, lo, hi, &mut x, &mut partial, &mut visit);
}

/// Number of lattice points in the box.
pub fn count_in_box(h: &[Vec<i64>], lo: &[i64], hi: &[i64]) -> u64 {
    let d = h.len();
    if d == 0 {
        return 1;
    }
    fn rec(k: usize, h: &[Vec<i64>], lo: &[i64], hi: &[i64], partial: &mut Vec<Vec<i64>>) -> u64 {
        let d = h.len();
        let p = h[k][k];
        let base = partial[k][k];
        let cmin = Integer::div_ceil(&(lo[k] - base), &p);
        let cmax = Integer::div_floor(&(hi[k] - base), &p);
        if cmax < cmin {
            return 0;
        }
        if k + 1 == d {
            return (cmax - cmin + 1) as u64;
        }
        let mut total = 0;
        for c in cmin..=cmax {
            for j in k + 1..d {
                partial[k + 1][j] = partial[k][j] + c * h[k][j];
            }
            total += rec(k + 1, h, lo, hi, partial);
        }
        total
    }
    let mut partial = vec![vec![0i64; d]; d + 1];
    rec(0, h, lo, hi, &mut partial)
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
