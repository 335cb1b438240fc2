//! Finite p-groups given by dense multiplication tables.
//!
//! Elements are the indices `0..order`. Every group carries its prime `p`,
//! and derived data (conjugacy classes, subgroup lattice, Möbius values,
//! character table) is computed lazily and cached behind `OnceLock`s, so a
//! `FiniteGroup` can be shared freely between threads.

mod catalog;
mod hom;
mod section;
mod spec;
mod subgroup;
mod subquotient;
mod transfer;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

pub use catalog::{catalog, catalog_by_key, catalog_entry, CatalogEntry};
pub use hom::{abelianization, GroupHom, GroupHomJson};
pub use section::Section;
pub use spec::{build_group, GroupSpec};
pub use subgroup::{Subgroup, DEFAULT_SUBGROUP_CAP};
pub use subquotient::SubquotientSet;
pub use transfer::{transfer, transfer_element, transfer_with};

use crate::error::{Error, Result};

/// Largest order supported by the dense representation.
pub const MAX_ORDER: usize = 128;

pub struct FiniteGroup {
    name: String,
    p: u64,
    order: usize,
    identity: usize,
    table: Vec<u8>,
    inverse: Vec<u8>,
    classes: OnceLock<Classes>,
    lattice: OnceLock<subgroup::Lattice>,
    pub(crate) char_table: OnceLock<Arc<crate::character::CharacterTable>>,
    pub(crate) char_poset: OnceLock<Arc<crate::brauer::CharacterPoset>>,
}

struct Classes {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("p", &self.p)
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Returns `a` with `p^a == n`, if any.
pub(crate) fn prime_power_exponent(n: usize, p: u64) -> Option<u32> {
    let mut n = n as u64;
    let mut a = 0;
    while n > 1 {
        if n % p != 0 {
            return None;
        }
        n /= p;
        a += 1;
    }
    (n == 1).then_some(a)
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    pub fn from_table(name: impl Into<String>, p: u64, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::CapExceeded { order: n, cap: MAX_ORDER });
        }
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        if prime_power_exponent(n, p).is_none() {
            return Err(Error::NotPrimePower { order: n, p });
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range")));
                }
                flat.push(x as u8);
            }
        }
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![0u8; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| at(a, b) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            if at(inv, a) != identity {
                return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse")));
            }
            inverse[a] = inv as u8;
        }
        Ok(Self::from_parts(name.into(), p, identity, flat, inverse))
    }

    /// Builds a group from a table already known to be valid.
    pub(crate) fn trusted(name: String, p: u64, n: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                flat.push(mul(a, b) as u8);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] as usize == x))
            .expect("trusted table has an identity");
        let mut inverse = vec![0u8; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| flat[a * n + b] as usize == identity).unwrap() as u8;
        }
        Self::from_parts(name, p, identity, flat, inverse)
    }

    fn from_parts(name: String, p: u64, identity: usize, table: Vec<u8>, inverse: Vec<u8>) -> Self {
        let order = inverse.len();
        FiniteGroup {
            name,
            p,
            order,
            identity,
            table,
            inverse,
            classes: OnceLock::new(),
            lattice: OnceLock::new(),
            char_table: OnceLock::new(),
            char_poset: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g a g^-1`
    #[inline]
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).map(|a| self.element_order(a)).max().unwrap_or(1)
    }

    pub fn log_order(&self) -> u32 {
        prime_power_exponent(self.order, self.p).expect("order is a prime power")
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Multiplication table rows, as accepted by [`FiniteGroup::from_table`].
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    fn class_data(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for a in 0..n {
                if class_of[a] != usize::MAX {
                    continue;
                }
                let idx = classes.len();
                let mut members: Vec<usize> = (0..n).map(|g| self.conj(g, a)).collect();
                members.sort_unstable();
                members.dedup();
                for &m in &members {
                    class_of[m] = idx;
                }
                classes.push(members);
            }
            Classes { classes, class_of }
        })
    }

    /// Conjugacy classes ordered by their smallest element, which is also
    /// the class representative.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.class_data().classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_data().class_of[a]
    }

    pub fn num_classes(&self) -> usize {
        self.class_data().classes.len()
    }

    pub fn class_rep(&self, c: usize) -> usize {
        self.class_data().classes[c][0]
    }

    pub fn centralizer_order(&self, a: usize) -> usize {
        self.order / self.conjugacy_classes()[self.class_of(a)].len()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_elements(0..self.order)
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_elements([self.identity])
    }

    pub fn center(&self) -> Subgroup {
        Subgroup::from_elements(
            (0..self.order).filter(|&z| (0..self.order).all(|g| self.mul(g, z) == self.mul(z, g))),
        )
    }

    /// The subgroup generated by `gens`.
    pub fn closure(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set = Subgroup::from_elements([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// `[A, B]`, the subgroup generated by commutators `[a, b]`.
    pub fn commutator_of(&self, a: Subgroup, b: Subgroup) -> Subgroup {
        let mut gens = Vec::new();
        for x in a.iter() {
            for y in b.iter() {
                gens.push(self.commutator(x, y));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.closure(gens)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.commutator_of(self.whole(), self.whole())
    }

    pub fn is_subgroup(&self, s: Subgroup) -> bool {
        s.contains(self.identity)
            && s.iter().all(|a| s.contains(self.inv(a)) && s.iter().all(|b| s.contains(self.mul(a, b))))
    }

    pub fn is_normal(&self, s: Subgroup) -> bool {
        (0..self.order).all(|g| s.iter().all(|a| s.contains(self.conj(g, a))))
    }

    /// Whether `s` is normalized by every element of `by`.
    pub fn is_normal_in(&self, s: Subgroup, by: Subgroup) -> bool {
        by.iter().all(|g| s.iter().all(|a| s.contains(self.conj(g, a))))
    }

    pub fn conjugate_subgroup(&self, g: usize, s: Subgroup) -> Subgroup {
        Subgroup::from_elements(s.iter().map(|a| self.conj(g, a)))
    }

    pub fn normalizer(&self, s: Subgroup) -> Subgroup {
        Subgroup::from_elements((0..self.order).filter(|&g| self.conjugate_subgroup(g, s) == s))
    }

    /// Right coset representatives `t` with `G = ⊔ U t`; each representative
    /// is the smallest element of its coset.
    pub fn right_transversal(&self, u: Subgroup) -> Vec<usize> {
        let mut seen = Subgroup::empty();
        let mut reps = Vec::new();
        for g in 0..self.order {
            if seen.contains(g) {
                continue;
            }
            reps.push(g);
            for h in u.iter() {
                seen.insert(self.mul(h, g));
            }
        }
        reps
    }

    /// Left coset representatives `t` with `G = ⊔ t U`.
    pub fn left_transversal(&self, u: Subgroup) -> Vec<usize> {
        let mut seen = Subgroup::empty();
        let mut reps = Vec::new();
        for g in 0..self.order {
            if seen.contains(g) {
                continue;
            }
            reps.push(g);
            for h in u.iter() {
                seen.insert(self.mul(g, h));
            }
        }
        reps
    }

    /// Index of the right coset `U g` among `transversal`.
    pub fn right_coset_index(&self, u: Subgroup, transversal: &[usize], g: usize) -> usize {
        transversal
            .iter()
            .position(|&t| u.contains(self.mul(g, self.inv(t))))
            .expect("transversal covers the group")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupJson {
    pub format_version: u32,
    pub name: String,
    pub p: u64,
    pub order: usize,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Deterministic JSON form of the group.
    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            format_version: 1,
            name: self.name.clone(),
            p: self.p,
            order: self.order,
            identity: self.identity,
            table: self.table_rows(),
        }
    }
}
