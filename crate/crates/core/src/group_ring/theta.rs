//! Norms to subquotients, linearized transfer and the conjugation trace.

use std::sync::Arc;

use serde::Serialize;

use super::linalg::{det_local, mat_vec, vec_mat, SmithForm, SolveOutcome};
use super::GroupRingElement;
use crate::error::{Error, Result};
use crate::group::{transfer_element, FiniteGroup, Section, Subgroup};

/// Matrix of right multiplication by `x` on `Λ(H)`, viewed as a free left
/// `Λ(W)`-module on the right cosets `W t_i`, with entries pushed to
/// `Λ(W/D)` for the section `sec = W/D` of `H`.
///
/// Row `i` holds the coordinates of `t_i · x`.
pub fn coset_matrix(x: &GroupRingElement, sec: &Section, transversal: &[usize]) -> Result<Vec<Vec<GroupRingElement>>> {
    let h = x.group();
    let w = sec.top();
    if transversal.len() * w.len() != h.order() {
        return Err(Error::InvalidGroup("transversal has the wrong size".into()));
    }
    let mut coset_of = vec![usize::MAX; h.order()];
    for (j, &t) in transversal.iter().enumerate() {
        for a in w.iter() {
            coset_of[h.mul(a, t)] = j;
        }
    }
    if coset_of.contains(&usize::MAX) {
        return Err(Error::InvalidGroup("not a right transversal".into()));
    }
    let q = sec.group();
    let n = transversal.len();
    let m = x.modulus();
    let mut raw = vec![vec![vec![0u64; q.order()]; n]; n];
    for (i, &t) in transversal.iter().enumerate() {
        for (g, &c) in x.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let y = h.mul(t, g);
            let j = coset_of[y];
            let a = h.mul(y, h.inv(transversal[j]));
            let e = &mut raw[i][j][sec.proj_unchecked(a)];
            *e = crate::modp::add_mod(*e, c, m);
        }
    }
    raw.into_iter()
        .map(|row| row.into_iter().map(|c| GroupRingElement::from_coeffs(q, x.k(), c)).collect())
        .collect()
}

/// `θ_{W/D}(x)`: the determinant of [`coset_matrix`] for the minimal right
/// transversal of `W`. The section must be abelian.
pub fn theta(x: &GroupRingElement, sec: &Section) -> Result<GroupRingElement> {
    theta_with(x, sec, &x.group().right_transversal(sec.top()))
}

/// [`theta`] for a caller-supplied right transversal.
pub fn theta_with(x: &GroupRingElement, sec: &Section, transversal: &[usize]) -> Result<GroupRingElement> {
    if !sec.group().is_abelian() {
        return Err(Error::Domain("determinant target is not abelian".into()));
    }
    if !x.is_unit() {
        return Err(Error::NotUnit);
    }
    det_local(coset_matrix(x, sec, transversal)?)
}

/// `N^U_V x` for `x` over an abelian `U` and a subgroup `V ⊆ U`; the result
/// lives on `Section::subgroup(U, V)`.
pub fn norm(x: &GroupRingElement, v: Subgroup) -> Result<(Section, GroupRingElement)> {
    let sec = Section::subgroup(x.group(), v)?;
    let y = theta(x, &sec)?;
    Ok((sec, y))
}

/// Coset representatives `t` with `top = ⊔ t A`, inside the ambient group.
pub fn transversal_within(h: &FiniteGroup, top: Subgroup, a: Subgroup) -> Vec<usize> {
    let mut seen = Subgroup::empty();
    let mut reps = Vec::new();
    for g in top.iter() {
        if seen.contains(g) {
            continue;
        }
        reps.push(g);
        for b in a.iter() {
            seen.insert(h.mul(g, b));
        }
    }
    reps
}

/// For a group `V` and an abelian subgroup `A`, the transfer `V → A` as a
/// table of ranks in `A`.
pub fn ver_map(v: &FiniteGroup, a: Subgroup) -> Result<Vec<usize>> {
    if !v.is_subgroup(a) {
        return Err(Error::NotSubgroup);
    }
    // transfer_element expects right cosets A t; inverting a left transversal gives one
    let right: Vec<usize> = transversal_within(v, v.whole(), a).into_iter().map(|t| v.inv(t)).collect();
    Ok(v.elements().map(|x| a.rank_of(transfer_element(v, a, &right, x))).collect())
}

/// Linear extension of the transfer `V → A` for `x` over `V`; the result
/// lives on `Section::subgroup(V, A)`.
pub fn ver_linear(x: &GroupRingElement, a: Subgroup) -> Result<(Section, GroupRingElement)> {
    let v = x.group();
    let sec = Section::subgroup(v, a)?;
    if !sec.group().is_abelian() {
        return Err(Error::Domain("transfer target is not abelian".into()));
    }
    let map = ver_map(v, a)?;
    let y = x.pushforward(sec.group(), |g| map[g]);
    Ok((sec, y))
}

/// Conjugation action of `top` on the section `sec`: one index map per
/// coset of `sec.top()` in `top`.
fn conjugation_maps(h: &FiniteGroup, top: Subgroup, sec: &Section) -> Result<Vec<Vec<usize>>> {
    let (a, d) = (sec.top(), sec.bottom());
    if !a.is_subset_of(top) || !h.is_normal_in(a, top) || !h.is_normal_in(d, top) {
        return Err(Error::NotNormal);
    }
    Ok(transversal_within(h, top, a)
        .into_iter()
        .map(|t| (0..sec.order()).map(|q| sec.proj_unchecked(h.conj(t, sec.lift(q)))).collect())
        .collect())
}

/// `σ^U_A(x) = Σ_{gA ∈ U/A} g x g⁻¹` for `x` over the section `sec = A/D`
/// of `h`, with `A, D ⊴ U = top`.
pub fn sigma(x: &GroupRingElement, h: &FiniteGroup, top: Subgroup, sec: &Section) -> Result<GroupRingElement> {
    if !super::same(x.group(), sec.group()) {
        return Err(Error::RingMismatch);
    }
    let maps = conjugation_maps(h, top, sec)?;
    let mut acc = GroupRingElement::zero(x.group(), x.k())?;
    for map in &maps {
        acc = &acc + &x.pushforward(x.group(), |q| map[q]);
    }
    Ok(acc)
}

/// Membership verdict for `y ∈ σ(Λ(A/D))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaMembership {
    pub member: bool,
    /// `x` with `σ(x) = y`, when a member.
    pub witness: Option<Vec<u64>>,
    /// A functional `w` with `w ∘ σ = 0` and `w(y) ≠ 0`, when not a member.
    pub certificate: Option<Vec<u64>>,
    /// `w(y)`, the residue obstructing membership.
    pub residue: Option<u64>,
}

/// Precomputed Smith form of `σ` for repeated membership queries.
#[derive(Debug, Clone)]
pub struct SigmaSolver {
    group: Arc<FiniteGroup>,
    k: u32,
    matrix: Vec<Vec<u64>>,
    smith: SmithForm,
}

impl SigmaSolver {
    pub fn new(h: &FiniteGroup, top: Subgroup, sec: &Section, k: u32) -> Result<Self> {
        let maps = conjugation_maps(h, top, sec)?;
        let n = sec.order();
        let mut matrix = vec![vec![0u64; n]; n];
        // column q is σ(q)
        for map in &maps {
            for (q, &r) in map.iter().enumerate() {
                matrix[r][q] += 1;
            }
        }
        let smith = SmithForm::new(&matrix, h.p(), k)?;
        Ok(SigmaSolver { group: sec.group().clone(), k, matrix, smith })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn member(&self, y: &GroupRingElement) -> Result<SigmaMembership> {
        if !super::same(y.group(), &self.group) || y.k() != self.k {
            return Err(Error::RingMismatch);
        }
        Ok(match self.smith.solve(y.coeffs()) {
            SolveOutcome::Solution(x) => SigmaMembership { member: true, witness: Some(x), certificate: None, residue: None },
            SolveOutcome::Obstruction { functional, residue } => {
                SigmaMembership { member: false, witness: None, certificate: Some(functional), residue: Some(residue) }
            }
        })
    }

    /// Re-checks a verdict from scratch: `σ(witness) = y`, or
    /// `certificate ∘ σ = 0` with `certificate(y) ≠ 0`.
    pub fn verify(&self, y: &GroupRingElement, verdict: &SigmaMembership) -> bool {
        let m = y.modulus();
        match (verdict.member, &verdict.witness, &verdict.certificate) {
            (true, Some(x), _) => mat_vec(&self.matrix, x, m) == y.coeffs(),
            (false, _, Some(w)) => {
                vec_mat(w, &self.matrix, m).iter().all(|&v| v == 0)
                    && super::linalg::dot(w, y.coeffs(), m) != 0
            }
            _ => false,
        }
    }
}

/// One-shot membership test `y ∈ σ^U_A(Λ(A/D))`.
pub fn sigma_image_member(y: &GroupRingElement, h: &FiniteGroup, top: Subgroup, sec: &Section) -> Result<SigmaMembership> {
    SigmaSolver::new(h, top, sec, y.k())?.member(y)
}
