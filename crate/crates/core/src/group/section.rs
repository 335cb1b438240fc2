use std::sync::Arc;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

/// A subquotient `W/D` of an ambient group, with `D ⊴ W`, materialized as
/// its own [`FiniteGroup`] together with projection and lifting data.
///
/// Quotient elements are the cosets `xD` for `x ∈ W`, numbered in order of
/// their smallest ambient element; `lift` returns that smallest element.
#[derive(Debug, Clone)]
pub struct Section {
    top: Subgroup,
    bottom: Subgroup,
    group: Arc<FiniteGroup>,
    proj: Vec<usize>,
    lift: Vec<usize>,
}

impl Section {
    pub fn new(g: &FiniteGroup, top: Subgroup, bottom: Subgroup) -> Result<Self> {
        if !g.is_subgroup(top) || !g.is_subgroup(bottom) || !bottom.is_subset_of(top) {
            return Err(Error::NotSubgroup);
        }
        if !g.is_normal_in(bottom, top) {
            return Err(Error::NotNormal);
        }
        let mut proj = vec![NONE; g.order()];
        let mut lift = Vec::new();
        for x in top.iter() {
            if proj[x] != NONE {
                continue;
            }
            let idx = lift.len();
            lift.push(x);
            for d in bottom.iter() {
                proj[g.mul(x, d)] = idx;
            }
        }
        let n = lift.len();
        let name = if bottom.len() == 1 && top.len() == g.order() {
            g.name().to_string()
        } else {
            format!("{}[{}/{}]", g.name(), top.len(), bottom.len())
        };
        let quotient = FiniteGroup::trusted(name, g.p(), n, |a, b| proj[g.mul(lift[a], lift[b])]);
        Ok(Section { top, bottom, group: Arc::new(quotient), proj, lift })
    }

    /// `U` viewed as a group in its own right.
    pub fn subgroup(g: &FiniteGroup, u: Subgroup) -> Result<Self> {
        Self::new(g, u, g.trivial())
    }

    /// `G/N` for a normal subgroup `N`.
    pub fn quotient(g: &FiniteGroup, n: Subgroup) -> Result<Self> {
        Self::new(g, g.whole(), n)
    }

    /// `G^ab = G/[G,G]`.
    pub fn abelianization(g: &FiniteGroup) -> Self {
        Self::new(g, g.whole(), g.derived_subgroup()).expect("derived subgroup is normal")
    }

    /// `W/(D[W,W])`, the abelianization of this section, as a section of the
    /// same ambient group.
    pub fn abelianized(&self, g: &FiniteGroup) -> Self {
        let comm = g.commutator_of(self.top, self.top);
        let bottom = g.closure(self.bottom.iter().chain(comm.iter()));
        Self::new(g, self.top, bottom).expect("D[W,W] is normal in W")
    }

    pub fn top(&self) -> Subgroup {
        self.top
    }

    pub fn bottom(&self) -> Subgroup {
        self.bottom
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.lift.len()
    }

    /// Image of an ambient element of `W` in `W/D`.
    pub fn proj(&self, x: usize) -> Option<usize> {
        let q = self.proj[x];
        (q != NONE).then_some(q)
    }

    /// Like [`Section::proj`] for elements known to lie in `W`.
    #[inline]
    pub fn proj_unchecked(&self, x: usize) -> usize {
        debug_assert!(self.proj[x] != NONE);
        self.proj[x]
    }

    pub fn lift(&self, q: usize) -> usize {
        self.lift[q]
    }

    /// Image in `W/D` of an ambient subgroup contained in `W`.
    pub fn proj_subgroup(&self, s: Subgroup) -> Subgroup {
        Subgroup::from_elements(s.iter().map(|x| self.proj_unchecked(x)))
    }

    /// Full preimage in `W` of a subset of `W/D`.
    pub fn lift_subgroup(&self, s: Subgroup) -> Subgroup {
        Subgroup::from_elements(self.top.iter().filter(|&x| s.contains(self.proj[x])))
    }

    /// The section `g W g^-1 / g D g^-1`, with quotient elements transported
    /// along conjugation; returns the new section and the induced
    /// isomorphism on quotient indices.
    pub fn conjugate(&self, g: &FiniteGroup, by: usize) -> (Section, Vec<usize>) {
        let top = g.conjugate_subgroup(by, self.top);
        let bottom = g.conjugate_subgroup(by, self.bottom);
        let sec = Section::new(g, top, bottom).expect("conjugate of a section is a section");
        let map = self.lift.iter().map(|&x| sec.proj_unchecked(g.conj(by, x))).collect();
        (sec, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_entry;

    #[test]
    fn heisenberg_abelianization_is_elementary_of_rank_two() {
        let g = catalog_entry("heisenberg", 3, &[]).unwrap();
        let ab = Section::abelianization(&g);
        let q = ab.group();
        assert_eq!(q.order(), 9);
        assert!(q.is_abelian());
        assert_eq!(q.exponent(), 3);
        // projection is a homomorphism
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(ab.proj_unchecked(g.mul(a, b)), q.mul(ab.proj_unchecked(a), ab.proj_unchecked(b)));
            }
        }
    }

    #[test]
    fn quaternion_abelianization_is_klein_four() {
        let g = catalog_entry("quaternion", 2, &[3]).unwrap();
        let q = Section::abelianization(&g).group().clone();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
    }

    #[test]
    fn abelian_group_abelianization_is_identity() {
        let g = catalog_entry("abelian", 3, &[2, 1]).unwrap();
        let ab = Section::abelianization(&g);
        assert_eq!(ab.order(), g.order());
        for x in g.elements() {
            assert_eq!(ab.lift(ab.proj_unchecked(x)), x);
        }
    }

    #[test]
    fn lift_of_projection_recovers_preimage() {
        let g = catalog_entry("modular", 3, &[]).unwrap();
        let z = g.center();
        let sec = Section::quotient(&g, z).unwrap();
        let s = sec.group().closure([1]);
        let pre = sec.lift_subgroup(s);
        assert_eq!(pre.len(), s.len() * z.len());
        assert_eq!(sec.proj_subgroup(pre), s);
    }

    #[test]
    fn non_normal_bottom_is_rejected() {
        let g = catalog_entry("heisenberg", 3, &[]).unwrap();
        let non_normal = g
            .subgroups(false)
            .into_iter()
            .find(|&s| !g.is_normal(s))
            .unwrap();
        assert_eq!(Section::quotient(&g, non_normal).unwrap_err(), Error::NotNormal);
    }
}
