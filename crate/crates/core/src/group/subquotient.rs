use std::collections::HashMap;
use std::sync::Arc;

use super::{FiniteGroup, Section, Subgroup};
use crate::error::{Error, Result};

/// A family of subquotients `W/C` of an ambient group, with `C` normal in
/// the ambient group.
///
/// With a designated central subgroup `Z`, members satisfy `C ∩ Z = 1` and
/// `ZC ⊆ W`, so that `Z` embeds in every member.
#[derive(Debug, Clone)]
pub struct SubquotientSet {
    ambient: Arc<FiniteGroup>,
    z: Subgroup,
    abelian_only: bool,
    members: Vec<Section>,
    index: HashMap<(Subgroup, Subgroup), usize>,
}

impl SubquotientSet {
    /// Every `W/C` with `C ⊴ G` and `C ⊆ W ≤ G`.
    pub fn full(g: &Arc<FiniteGroup>) -> Self {
        Self::with_central(g, g.trivial()).expect("trivial subgroup is central")
    }

    pub fn with_central(g: &Arc<FiniteGroup>, z: Subgroup) -> Result<Self> {
        if !g.is_subgroup(z) {
            return Err(Error::NotSubgroup);
        }
        let center = g.center();
        if !z.is_subset_of(center) {
            return Err(Error::InvalidGroup("designated subgroup is not central".into()));
        }
        let subs = g.subgroups(false);
        let normals: Vec<Subgroup> = subs
            .iter()
            .copied()
            .filter(|&c| g.is_normal(c) && c.intersect(z).len() == 1)
            .collect();
        let mut members = Vec::new();
        for &w in &subs {
            if !z.is_subset_of(w) {
                continue;
            }
            for &c in &normals {
                if c.is_subset_of(w) {
                    members.push(Section::new(g, w, c)?);
                }
            }
        }
        Ok(Self::from_members(g.clone(), z, false, members))
    }

    fn from_members(ambient: Arc<FiniteGroup>, z: Subgroup, abelian_only: bool, members: Vec<Section>) -> Self {
        let index = members
            .iter()
            .enumerate()
            .map(|(i, s)| ((s.top(), s.bottom()), i))
            .collect();
        SubquotientSet { ambient, z, abelian_only, members, index }
    }

    /// Members whose quotient is abelian.
    pub fn abelian(&self) -> Self {
        let members = self.members.iter().filter(|s| s.group().is_abelian()).cloned().collect();
        Self::from_members(self.ambient.clone(), self.z, true, members)
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn central(&self) -> Subgroup {
        self.z
    }

    pub fn is_abelian_only(&self) -> bool {
        self.abelian_only
    }

    pub fn members(&self) -> &[Section] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, top: Subgroup, bottom: Subgroup) -> Option<usize> {
        self.index.get(&(top, bottom)).copied()
    }

    pub fn get(&self, top: Subgroup, bottom: Subgroup) -> Option<&Section> {
        self.position(top, bottom).map(|i| &self.members[i])
    }

    /// Stable identifier of a member, e.g. `W{0,3,6}/C{0}`.
    pub fn label(&self, i: usize) -> String {
        let s = &self.members[i];
        format!("W{:?}/C{:?}", s.top(), s.bottom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_entry;

    fn arc(name: &str, p: u64, params: &[u32]) -> Arc<FiniteGroup> {
        Arc::new(catalog_entry(name, p, params).unwrap())
    }

    #[test]
    fn abelian_group_with_full_center_has_one_member() {
        let g = arc("abelian", 3, &[1, 1]);
        let s = SubquotientSet::with_central(&g, g.whole()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.members()[0].top(), g.whole());
        assert_eq!(s.members()[0].order(), 9);
    }

    #[test]
    fn heisenberg_with_center_matches_exhaustive_pairs() {
        let g = arc("heisenberg", 3, &[]);
        let z = g.center();
        let s = SubquotientSet::with_central(&g, z).unwrap();
        let subs = g.subgroups(false);
        let mut count = 0;
        for &w in &subs {
            for &c in &subs {
                if g.is_normal(c) && c.is_subset_of(w) && c.intersect(z).len() == 1 && z.is_subset_of(w) {
                    count += 1;
                }
            }
        }
        assert_eq!(s.len(), count);
        // every member contains the image of Z
        for m in s.members() {
            assert_eq!(m.proj_subgroup(z).len(), z.len());
        }
    }

    #[test]
    fn abelianizations_of_members_are_abelian_members() {
        for (name, params) in [("heisenberg", vec![]), ("modular", vec![]), ("abelian", vec![2, 1])] {
            let g = arc(name, 3, &params);
            let full = SubquotientSet::full(&g);
            let ab = full.abelian();
            assert!(ab.is_abelian_only());
            for m in full.members() {
                let a = m.abelianized(&g);
                assert!(ab.get(a.top(), a.bottom()).is_some(), "{name}");
            }
        }
    }

    #[test]
    fn non_central_subgroup_is_rejected() {
        let g = arc("heisenberg", 3, &[]);
        let u = g.subgroups(false).into_iter().find(|&s| !g.is_normal(s)).unwrap();
        assert!(SubquotientSet::with_central(&g, u).is_err());
    }
}
