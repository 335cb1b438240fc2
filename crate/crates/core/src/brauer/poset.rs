use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::character::linear_exponent_tables;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Section, Subgroup};

/// A linear character `φ` of a subgroup `U`.
///
/// `exps[i]` is the exponent of `φ` at the `i`-th smallest element of `U`
/// with respect to `ζ_n`, where `n` is the exponent of the ambient group.
/// The derived ordering (subgroup first, then exponent list) is the one
/// used to pick canonical conjugacy-class representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharacterPair {
    pub subgroup: Subgroup,
    pub exps: Vec<u32>,
}

impl CharacterPair {
    /// Exponent of `φ` at the ambient element `x ∈ U`.
    pub fn exponent_at(&self, x: usize) -> u32 {
        self.exps[self.subgroup.rank_of(x)]
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `Res^U_W φ` for a subgroup `W ⊆ U`.
    pub fn restrict(&self, w: Subgroup) -> CharacterPair {
        debug_assert!(w.is_subset_of(self.subgroup));
        CharacterPair { subgroup: w, exps: w.iter().map(|x| self.exponent_at(x)).collect() }
    }
}

/// The poset `M_G` of pairs `(U, φ)` ordered by `(U, φ) ⊆ (V, ψ)` iff
/// `U ⊆ V` and `Res^V_U ψ = φ`, together with conjugation data.
///
/// Nodes are sorted by [`CharacterPair`]'s ordering, so the canonical
/// representative of a conjugacy class is its smallest node index.
pub struct CharacterPoset {
    conductor: u32,
    order: usize,
    subgroups: Vec<Subgroup>,
    nodes: Vec<CharacterPair>,
    index: HashMap<CharacterPair, usize>,
    subgroup_of: Vec<usize>,
    /// For each subgroup index, the indices of its subgroups (itself last).
    below: Vec<Vec<usize>>,
    /// `restrictions[y][j]` is the node `Res` of `y` to `below[sub(y)][j]`.
    restrictions: Vec<Vec<usize>>,
    canonical: Vec<usize>,
    orbit: Vec<usize>,
    upper: Vec<OnceLock<Vec<(usize, i64)>>>,
}

impl std::fmt::Debug for CharacterPoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterPoset").field("nodes", &self.nodes.len()).finish()
    }
}

impl CharacterPoset {
    pub fn build(g: &FiniteGroup) -> Result<Self> {
        let n = g.exponent() as u32;
        let subgroups = g.subgroups(false);
        let mut nodes = Vec::new();
        let mut subgroup_of = Vec::new();
        for (si, &u) in subgroups.iter().enumerate() {
            let sec = Section::subgroup(g, u)?;
            let mut tables = linear_exponent_tables(sec.group(), n);
            tables.sort();
            for exps in tables {
                nodes.push(CharacterPair { subgroup: u, exps });
                subgroup_of.push(si);
            }
        }
        let index: HashMap<CharacterPair, usize> = nodes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let below: Vec<Vec<usize>> = subgroups
            .iter()
            .map(|&v| (0..subgroups.len()).filter(|&w| subgroups[w].is_subset_of(v)).collect())
            .collect();
        let restrictions = nodes
            .iter()
            .zip(&subgroup_of)
            .map(|(y, &si)| below[si].iter().map(|&w| index[&y.restrict(subgroups[w])]).collect())
            .collect();

        let mut poset = CharacterPoset {
            conductor: n,
            order: g.order(),
            subgroups,
            upper: (0..nodes.len()).map(|_| OnceLock::new()).collect(),
            canonical: (0..nodes.len()).collect(),
            orbit: vec![1; nodes.len()],
            nodes,
            index,
            subgroup_of,
            below,
            restrictions,
        };
        if !g.is_abelian() {
            for i in 0..poset.nodes.len() {
                if poset.canonical[i] != i {
                    continue;
                }
                let mut members: Vec<usize> = g.elements().map(|h| poset.conjugate_node(g, h, i)).collect();
                members.sort_unstable();
                members.dedup();
                // i is the smallest index not yet assigned, hence the minimum
                debug_assert_eq!(members[0], i);
                for &m in &members {
                    poset.canonical[m] = i;
                    poset.orbit[m] = members.len();
                }
            }
        }
        Ok(poset)
    }

    /// Exponent `n` of the ambient group; pair exponents are taken mod `n`.
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[CharacterPair] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &CharacterPair {
        &self.nodes[i]
    }

    pub fn position(&self, pair: &CharacterPair) -> Option<usize> {
        self.index.get(pair).copied()
    }

    fn require(&self, pair: &CharacterPair) -> Result<usize> {
        self.position(pair)
            .ok_or_else(|| Error::InvalidGroup(format!("{:?} is not a linear character of a subgroup", pair.subgroup)))
    }

    /// Node `(hUh⁻¹, φ(h⁻¹ · h))`.
    pub fn conjugate_node(&self, g: &FiniteGroup, h: usize, i: usize) -> usize {
        let x = &self.nodes[i];
        let u2 = g.conjugate_subgroup(h, x.subgroup);
        let mut exps = vec![0u32; x.exps.len()];
        for (r, a) in x.subgroup.iter().enumerate() {
            exps[u2.rank_of(g.conj(h, a))] = x.exps[r];
        }
        self.index[&CharacterPair { subgroup: u2, exps }]
    }

    pub fn canonical_index(&self, i: usize) -> usize {
        self.canonical[i]
    }

    /// Size of the conjugacy class of node `i`.
    pub fn orbit_size(&self, i: usize) -> usize {
        self.orbit[i]
    }

    /// Canonical representative of the conjugacy class of `pair`.
    pub fn canonical(&self, pair: &CharacterPair) -> Result<CharacterPair> {
        Ok(self.nodes[self.canonical[self.require(pair)?]].clone())
    }

    /// Indices of the canonical representatives, in node order.
    pub fn class_representatives(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.canonical[i] == i)
    }

    pub fn subgroup_of(&self, i: usize) -> Subgroup {
        self.subgroups[self.subgroup_of[i]]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        let (u, v) = (self.subgroup_of[x], self.subgroup_of[y]);
        match self.below[v].binary_search(&u) {
            Ok(j) => self.restrictions[y][j] == x,
            Err(_) => false,
        }
    }

    /// All `y ⊇ x` with `μ(x, y)`, ordered by node index (so `x` first).
    ///
    /// Computed on first use by the recursion `μ(x, x) = 1`,
    /// `μ(x, y) = -Σ_{x ⊆ z ⊊ y} μ(x, z)`, where the `z` of the interval are
    /// enumerated as the restrictions of `y` to the subgroups between.
    pub fn upper_set(&self, x: usize) -> &[(usize, i64)] {
        self.upper[x].get_or_init(|| {
            let u = self.subgroup_of[x];
            let mut ys: Vec<usize> = Vec::new();
            for (v, below) in self.below.iter().enumerate() {
                if let Ok(j) = below.binary_search(&u) {
                    ys.extend(self.nodes_on(v).filter(|&y| self.restrictions[y][j] == x));
                }
            }
            ys.sort_unstable();
            let mut mu: HashMap<usize, i64> = HashMap::with_capacity(ys.len());
            let mut out = Vec::with_capacity(ys.len());
            for &y in &ys {
                let value = if y == x {
                    1
                } else {
                    let v = self.subgroup_of[y];
                    let mut s = 0;
                    for (j, &w) in self.below[v].iter().enumerate() {
                        if w != v && self.below[w].binary_search(&u).is_ok() {
                            s += mu[&self.restrictions[y][j]];
                        }
                    }
                    -s
                };
                mu.insert(y, value);
                out.push((y, value));
            }
            out
        })
    }

    fn nodes_on(&self, subgroup: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.subgroup_of.partition_point(|&s| s < subgroup);
        let end = self.subgroup_of.partition_point(|&s| s <= subgroup);
        start..end
    }

    /// `μ(x, y)` by node index.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        let row = self.upper_set(x);
        row.binary_search_by_key(&y, |&(z, _)| z).map(|k| row[k].1).map_err(|_| Error::NotComparable)
    }
}

/// The Möbius function of the character poset at a pair of pairs.
pub fn poset_mobius(m: &CharacterPoset, x: &CharacterPair, y: &CharacterPair) -> Result<i64> {
    m.mobius(m.require(x)?, m.require(y)?)
}

/// The cached character poset of `g`.
pub fn character_poset(g: &Arc<FiniteGroup>) -> Result<Arc<CharacterPoset>> {
    if let Some(m) = g.char_poset.get() {
        return Ok(m.clone());
    }
    let m = Arc::new(CharacterPoset::build(g)?);
    Ok(g.char_poset.get_or_init(|| m).clone())
}

/// One row of [`mobius_comparison`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MobiusRow {
    pub lower: Subgroup,
    pub upper: Subgroup,
    /// Möbius function of the subgroup lattice on `[lower, upper]`.
    pub lattice: i64,
    /// `μ((lower, 1), (upper, 1))` in the character poset.
    pub poset: i64,
}

/// Both Möbius functions side by side for every pair `U ⊆ V` of subgroups.
pub fn mobius_comparison(g: &Arc<FiniteGroup>) -> Result<Vec<MobiusRow>> {
    let m = character_poset(g)?;
    let trivial = |s: Subgroup| CharacterPair { subgroup: s, exps: vec![0; s.len()] };
    let subs = g.subgroups(false);
    let mut rows = Vec::new();
    for &u in &subs {
        for &v in subs.iter().filter(|v| u.is_subset_of(**v)) {
            rows.push(MobiusRow {
                lower: u,
                upper: v,
                lattice: g.mobius_interval(u, v)?,
                poset: poset_mobius(&m, &trivial(u), &trivial(v))?,
            });
        }
    }
    Ok(rows)
}
