use crate::error::{Error, Result};
use crate::modp::{inv_mod, mul_mod, sub_mod, val};

use super::GroupRingElement;

/// Determinant over a commutative truncated group ring by elimination.
///
/// The ring is local, so an invertible matrix always has a unit in the
/// pivot column of the remaining block; non-invertible input is reported
/// as [`Error::NotUnit`].
pub fn det_local(mut m: Vec<Vec<GroupRingElement>>) -> Result<GroupRingElement> {
    let n = m.len();
    let proto = m.first().and_then(|r| r.first()).ok_or(Error::OutOfRange { index: 0, len: 0 })?.clone();
    let mut det: Option<GroupRingElement> = None;
    let mut negate = false;
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col].is_unit()).ok_or(Error::NotUnit)?;
        if piv != col {
            m.swap(col, piv);
            negate = !negate;
        }
        det = Some(match det {
            Some(d) => &d * &m[col][col],
            None => m[col][col].clone(),
        });
        if col + 1 == n {
            break;
        }
        let inv = m[col][col].inv()?;
        let pivot_row: Vec<GroupRingElement> = m[col][col..].iter().map(|x| x * &inv).collect();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                m[r][col + j] = &m[r][col + j] - &(&f * pv);
            }
        }
    }
    let det = det.unwrap_or(GroupRingElement::one(proto.group(), proto.k())?);
    Ok(if negate { -&det } else { det })
}

/// Division-free determinant (Berkowitz) over any commutative group ring.
pub fn det_berkowitz(m: &[Vec<GroupRingElement>]) -> Result<GroupRingElement> {
    let n = m.len();
    let proto = m.first().and_then(|r| r.first()).ok_or(Error::OutOfRange { index: 0, len: 0 })?;
    let (g, k) = (proto.group().clone(), proto.k());
    let zero = GroupRingElement::zero(&g, k)?;
    let one = GroupRingElement::one(&g, k)?;
    // characteristic polynomial coefficients of the leading r×r block,
    // highest degree first
    let mut poly = vec![one.clone(), -&m[0][0]];
    for r in 1..n {
        let a = &m[r][r];
        let row: Vec<&GroupRingElement> = (0..r).map(|j| &m[r][j]).collect();
        let mut col: Vec<GroupRingElement> = (0..r).map(|i| m[i][r].clone()).collect();
        // Toeplitz column: 1, -a, -R C, -R A C, -R A² C, ...
        let mut t = vec![one.clone(), -a];
        for _ in 0..r {
            let rc = row.iter().zip(&col).fold(zero.clone(), |s, (x, y)| &s + &(*x * y));
            t.push(-&rc);
            col = (0..r)
                .map(|i| (0..r).fold(zero.clone(), |s, j| &s + &(&m[i][j] * &col[j])))
                .collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut s = zero.clone();
            for j in 0..=i.min(r) {
                if i - j < t.len() {
                    s = &s + &(&t[i - j] * &poly[j]);
                }
            }
            next.push(s);
        }
        poly = next;
    }
    let c = poly.pop().expect("nonempty polynomial");
    Ok(if n % 2 == 0 { c } else { -&c })
}

/// Smith form `P A Q = D` of an `r × c` matrix over `Z/p^k`.
///
/// `D` is diagonal with entries `p^{e_i}` (`e_i = k` for a zero entry);
/// `P` and `Q` are invertible, so `A x = y` reduces to `D z = P y`, `x = Q z`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    p: u64,
    k: u32,
    m: u64,
    rows: usize,
    cols: usize,
    p_mat: Vec<Vec<u64>>,
    q_mat: Vec<Vec<u64>>,
    exps: Vec<u32>,
}

/// Result of solving `A x = y` with a [`SmithForm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// `A x = y`.
    Solution(Vec<u64>),
    /// A row vector `w` with `w A = 0` and `w · y ≠ 0`; `residue` is `w · y`.
    Obstruction { functional: Vec<u64>, residue: u64 },
}

impl SmithForm {
    pub fn new(a: &[Vec<u64>], p: u64, k: u32) -> Result<Self> {
        let m = crate::modp::modulus(p, k)?;
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut d: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
        let mut pm = identity(rows, m);
        let mut qm = identity(cols, m);
        let mut exps = Vec::new();
        for t in 0..rows.min(cols) {
            // pivot of minimal valuation in the remaining block
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 {
                        let v = val(x, p, k);
                        if best.is_none_or(|b| v < b.0) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((e, i, j)) = best else { break };
            d.swap(t, i);
            pm.swap(t, i);
            for row in d.iter_mut() {
                row.swap(t, j);
            }
            for row in qm.iter_mut() {
                row.swap(t, j);
            }
            // normalize the pivot to p^e
            let unit = d[t][t] / p.pow(e);
            let uinv = inv_mod(unit, m).expect("unit part is invertible");
            for x in d[t].iter_mut() {
                *x = mul_mod(*x, uinv, m);
            }
            for x in pm[t].iter_mut() {
                *x = mul_mod(*x, uinv, m);
            }
            let pe = p.pow(e);
            for r in 0..rows {
                if r == t || d[r][t] == 0 {
                    continue;
                }
                let f = d[r][t] / pe;
                for c in 0..cols {
                    d[r][c] = sub_mod(d[r][c], mul_mod(f, d[t][c], m), m);
                }
                for c in 0..rows {
                    pm[r][c] = sub_mod(pm[r][c], mul_mod(f, pm[t][c], m), m);
                }
            }
            for c in 0..cols {
                if c == t || d[t][c] == 0 {
                    continue;
                }
                let f = d[t][c] / pe;
                for row in d.iter_mut() {
                    row[c] = sub_mod(row[c], mul_mod(f, row[t], m), m);
                }
                for row in qm.iter_mut() {
                    row[c] = sub_mod(row[c], mul_mod(f, row[t], m), m);
                }
            }
            exps.push(e);
        }
        Ok(SmithForm { p, k, m, rows, cols, p_mat: pm, q_mat: qm, exps })
    }

    /// Valuations of the nonzero diagonal entries.
    pub fn invariants(&self) -> &[u32] {
        &self.exps
    }

    pub fn left(&self) -> &[Vec<u64>] {
        &self.p_mat
    }

    pub fn right(&self) -> &[Vec<u64>] {
        &self.q_mat
    }

    /// Solves `A x = y`, or returns a functional certifying that `y` is not
    /// in the column span.
    pub fn solve(&self, y: &[u64]) -> SolveOutcome {
        let m = self.m;
        let py: Vec<u64> = self.p_mat.iter().map(|row| dot(row, y, m)).collect();
        let mut z = vec![0u64; self.cols];
        for i in 0..self.rows {
            let e = self.exps.get(i).copied().unwrap_or(self.k);
            let pe = self.p.pow(e);
            if py[i] % pe != 0 {
                let scale = self.p.pow(self.k - e);
                let functional: Vec<u64> = self.p_mat[i].iter().map(|&x| mul_mod(x, scale, m)).collect();
                let residue = dot(&functional, y, m);
                return SolveOutcome::Obstruction { functional, residue };
            }
            if i < self.exps.len() {
                z[i] = py[i] / pe;
            }
        }
        let x = self.q_mat.iter().map(|row| dot(row, &z, m)).collect();
        SolveOutcome::Solution(x)
    }
}

fn identity(n: usize, m: u64) -> Vec<Vec<u64>> {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j) % m).collect()).collect()
}

pub(crate) fn dot(a: &[u64], b: &[u64], m: u64) -> u64 {
    let s: u128 = a.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128 % m as u128).sum();
    (s % m as u128) as u64
}

/// `A x` over `Z/m`.
pub(crate) fn mat_vec(a: &[Vec<u64>], x: &[u64], m: u64) -> Vec<u64> {
    a.iter().map(|row| dot(row, x, m)).collect()
}

/// `w A` over `Z/m`.
pub(crate) fn vec_mat(w: &[u64], a: &[Vec<u64>], m: u64) -> Vec<u64> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = vec![0u64; cols];
    for (wi, row) in w.iter().zip(a) {
        for (o, &x) in out.iter_mut().zip(row) {
            *o = crate::modp::add_mod(*o, mul_mod(*wi, x, m), m);
        }
    }
    out
}
