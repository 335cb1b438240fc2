use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::FiniteGroup;
use crate::error::{Error, Result};

/// A set of element indices of some group of order at most 128.
///
/// Used both for subgroups and for plain element sets; the ordering is by
/// size first, then lexicographic on the sorted element lists.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subgroup(u128);

impl Subgroup {
    pub const fn empty() -> Self {
        Subgroup(0)
    }

    pub fn from_elements(elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Subgroup(0);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn from_mask(mask: u128) -> Self {
        Subgroup(mask)
    }

    pub fn mask(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u128 << e;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subgroup) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(self, other: Subgroup) -> Subgroup {
        Subgroup(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn elements(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of `e` within the sorted element list.
    pub fn rank_of(self, e: usize) -> usize {
        (self.0 & ((1u128 << e) - 1)).count_ones() as usize
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Subgroup lattice with Möbius values `μ_G(U)`.
pub(crate) struct Lattice {
    pub subgroups: Vec<Subgroup>,
    pub mobius: Vec<i64>,
}

/// Default cap on the order for subgroup enumeration.
pub const DEFAULT_SUBGROUP_CAP: usize = 128;

impl FiniteGroup {
    fn lattice(&self) -> &Lattice {
        self.lattice.get_or_init(|| {
            let subgroups = enumerate_subgroups(self);
            let mobius = mobius_values(&subgroups);
            Lattice { subgroups, mobius }
        })
    }

    /// All subgroups, ordered by size and then lexicographically, optionally
    /// keeping only the smallest member of each conjugacy class.
    pub fn subgroups(&self, up_to_conjugacy: bool) -> Vec<Subgroup> {
        let all = &self.lattice().subgroups;
        if !up_to_conjugacy {
            return all.clone();
        }
        all.iter()
            .copied()
            .filter(|&s| (0..self.order()).all(|g| self.conjugate_subgroup(g, s) >= s))
            .collect()
    }

    /// Like [`FiniteGroup::subgroups`] with an explicit order cap.
    pub fn subgroups_capped(&self, up_to_conjugacy: bool, cap: usize) -> Result<Vec<Subgroup>> {
        if self.order() > cap {
            return Err(Error::CapExceeded { order: self.order(), cap });
        }
        Ok(self.subgroups(up_to_conjugacy))
    }

    pub fn subgroup_index(&self, s: Subgroup) -> Option<usize> {
        self.lattice().subgroups.binary_search(&s).ok()
    }

    /// `μ_G(U)` from `μ(1) = 1`, `μ(U) = -Σ_{V ⊊ U} μ(V)`.
    pub fn mobius_subgroup(&self, u: Subgroup) -> Result<i64> {
        let lat = self.lattice();
        let i = lat.subgroups.binary_search(&u).map_err(|_| Error::NotSubgroup)?;
        Ok(lat.mobius[i])
    }

    /// Möbius function of the interval `[lower, upper]` of the subgroup
    /// lattice, computed by the same recursion starting at `lower`.
    pub fn mobius_interval(&self, lower: Subgroup, upper: Subgroup) -> Result<i64> {
        if !lower.is_subset_of(upper) {
            return Err(Error::NotComparable);
        }
        let between: Vec<Subgroup> = self
            .lattice()
            .subgroups
            .iter()
            .copied()
            .filter(|s| lower.is_subset_of(*s) && s.is_subset_of(upper))
            .collect();
        Ok(*mobius_values_from(&between).last().unwrap())
    }
}

fn enumerate_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let cyclic: Vec<(Subgroup, usize)> = {
        let mut seen = HashSet::new();
        let mut v = Vec::new();
        for a in g.elements() {
            let c = g.closure([a]);
            if seen.insert(c) {
                v.push((c, a));
            }
        }
        v
    };
    // subgroup -> generators that produced it
    let mut found: Vec<(Subgroup, Vec<usize>)> = vec![(g.trivial(), vec![])];
    let mut seen: HashSet<Subgroup> = HashSet::from([g.trivial()]);
    let mut head = 0;
    while head < found.len() {
        let (s, gens) = found[head].clone();
        head += 1;
        for &(c, a) in &cyclic {
            if c.is_subset_of(s) {
                continue;
            }
            let mut ng = gens.clone();
            ng.push(a);
            let t = g.closure(ng.iter().copied());
            if seen.insert(t) {
                found.push((t, ng));
            }
        }
    }
    let mut subs: Vec<Subgroup> = found.into_iter().map(|(s, _)| s).collect();
    subs.sort();
    subs
}

fn mobius_values(sorted: &[Subgroup]) -> Vec<i64> {
    mobius_values_from(sorted)
}

/// Möbius values relative to the first (smallest) entry; `sorted` must be
/// ordered by size.
fn mobius_values_from(sorted: &[Subgroup]) -> Vec<i64> {
    let mut mu = vec![0i64; sorted.len()];
    for (i, &u) in sorted.iter().enumerate() {
        if i == 0 {
            mu[0] = 1;
            continue;
        }
        let s: i64 = sorted[..i]
            .iter()
            .zip(&mu)
            .filter(|(v, _)| v.is_subset_of(u) && **v != u)
            .map(|(_, m)| *m)
            .sum();
        mu[i] = -s;
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_entry;

    /// Brute force: every subset closed under multiplication containing the
    /// identity (only feasible for tiny groups).
    fn brute_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let s = Subgroup::from_mask(mask as u128);
            if g.is_subgroup(s) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn cyclic_three_has_two_subgroups() {
        let g = catalog_entry("cyclic", 3, &[1]).unwrap();
        assert_eq!(g.subgroups(false).len(), 2);
        assert_eq!(g.mobius_subgroup(g.whole()).unwrap(), -1);
        assert_eq!(g.mobius_subgroup(g.trivial()).unwrap(), 1);
    }

    #[test]
    fn elementary_abelian_nine_matches_brute_force() {
        let g = catalog_entry("elementary_abelian", 3, &[2]).unwrap();
        let subs = g.subgroups(false);
        assert_eq!(subs.len(), 6);
        assert_eq!(subs, brute_subgroups(&g));
        assert_eq!(g.mobius_subgroup(g.whole()).unwrap(), 3);
    }

    #[test]
    fn small_two_groups_match_brute_force() {
        for name in ["dihedral", "quaternion"] {
            let g = catalog_entry(name, 2, &[3]).unwrap();
            assert_eq!(g.subgroups(false), brute_subgroups(&g), "{name}");
        }
        let g = catalog_entry("abelian", 2, &[2, 2]).unwrap();
        assert_eq!(g.subgroups(false), brute_subgroups(&g));
    }

    #[test]
    fn up_to_conjugacy_picks_minimal_representatives() {
        let g = catalog_entry("dihedral", 2, &[3]).unwrap();
        // D8: 10 subgroups, 8 classes
        assert_eq!(g.subgroups(false).len(), 10);
        assert_eq!(g.subgroups(true).len(), 8);
    }

    #[test]
    fn cap_is_enforced() {
        let g = catalog_entry("heisenberg", 3, &[]).unwrap();
        assert!(matches!(g.subgroups_capped(false, 9), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn rank_of_counts_smaller_members() {
        let s = Subgroup::from_elements([1, 4, 9]);
        assert_eq!(s.rank_of(9), 2);
        assert_eq!(s.rank_of(1), 0);
    }
}
