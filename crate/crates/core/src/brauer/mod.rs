//! Explicit Brauer induction.
//!
//! `R₊(G)` is modelled by [`BrauerElement`], a finite integer combination of
//! conjugacy classes of pairs `(U, φ)`. [`brauer_coefficients`] evaluates the
//! Möbius formula
//!
//! ```text
//! α_{(U,φ)^G}(ρ) = |U|/|G| Σ_{(U',φ') ~ (U,φ)} Σ_{(U'',φ'') ⊇ (U',φ')} μ((U',φ'), (U'',φ'')) ⟨φ'', Res ρ⟩
//! ```
//!
//! on the character poset. All conjugates of `(U, φ)` contribute the same
//! inner sum, so the outer sum is the orbit size times the sum at the
//! canonical representative.

mod poset;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Serialize, Serializer};

pub use poset::{character_poset, mobius_comparison, poset_mobius, CharacterPair, CharacterPoset, MobiusRow};

use crate::character::Character;
use crate::cyclotomic::CycloInt;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// An element of `R₊(G)`, stored on canonical representatives.
#[derive(Clone)]
pub struct BrauerElement {
    group: Arc<FiniteGroup>,
    poset: Arc<CharacterPoset>,
    terms: BTreeMap<CharacterPair, i64>,
}

impl BrauerElement {
    pub fn zero(g: &Arc<FiniteGroup>) -> Result<Self> {
        Ok(BrauerElement { group: g.clone(), poset: character_poset(g)?, terms: BTreeMap::new() })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Exponent `n` of the group; pair exponents refer to `ζ_n`.
    pub fn conductor(&self) -> u32 {
        self.poset.conductor()
    }

    /// Adds `coefficient · (U, φ)^G`, canonicalizing the pair.
    pub fn add_term(&mut self, pair: &CharacterPair, coefficient: i64) -> Result<()> {
        let key = self.poset.canonical(pair)?;
        self.add_canonical(key, coefficient);
        Ok(())
    }

    fn add_canonical(&mut self, key: CharacterPair, coefficient: i64) {
        let total = self.terms.get(&key).copied().unwrap_or(0) + coefficient;
        if total == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, total);
        }
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&CharacterPair, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn coefficient(&self, pair: &CharacterPair) -> Result<i64> {
        Ok(self.terms.get(&self.poset.canonical(pair)?).copied().unwrap_or(0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The image `Σ α Ind_U^G φ` in `R(G)`.
    pub fn evaluate(&self) -> Character {
        let mut acc = Character::zero(&self.group);
        for (pair, c) in self.terms() {
            acc = &acc + &induce_pair(&self.group, self.conductor(), pair).scale(c);
        }
        acc
    }

    pub fn to_json(&self) -> BrauerElementJson {
        BrauerElementJson {
            format_version: 1,
            group: self.group.name().to_string(),
            conductor: self.conductor(),
            terms: self
                .terms()
                .map(|(pair, c)| BrauerTermJson { subgroup: pair.subgroup.elements(), character: pair.exps.clone(), coefficient: c })
                .collect(),
        }
    }
}

impl PartialEq for BrauerElement {
    fn eq(&self, other: &Self) -> bool {
        crate::character::same_group(&self.group, &other.group) && self.terms == other.terms
    }
}

impl Eq for BrauerElement {}

impl std::fmt::Debug for BrauerElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BrauerElement").field("group", &self.group.name()).field("terms", &self.terms).finish()
    }
}

impl Serialize for BrauerElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().terms.serialize(s)
    }
}

/// One term of an exported [`BrauerElement`]: `character[i]` is the exponent
/// of `ζ_conductor` at the `i`-th smallest element of `subgroup`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrauerTermJson {
    pub subgroup: Vec<usize>,
    pub character: Vec<u32>,
    pub coefficient: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrauerElementJson {
    pub format_version: u32,
    pub group: String,
    pub conductor: u32,
    pub terms: Vec<BrauerTermJson>,
}

/// `Ind_U^G φ`, summing `φ(t g t⁻¹)` over a right transversal.
pub fn induce_pair(g: &Arc<FiniteGroup>, n: u32, pair: &CharacterPair) -> Character {
    let u = pair.subgroup;
    let transversal = g.right_transversal(u);
    let values = (0..g.num_classes())
        .map(|c| {
            let x = g.class_rep(c);
            let mut counts = vec![0i64; n as usize];
            for &t in &transversal {
                let y = g.conj(t, x);
                if u.contains(y) {
                    counts[pair.exponent_at(y) as usize] += 1;
                }
            }
            CycloInt::from_exponent_counts(n, &counts)
        })
        .collect();
    Character::new(g.clone(), values).expect("one value per class")
}

/// `⟨ψ, Res ρ⟩` for every node `(V, ψ)` of the poset.
pub(crate) fn restriction_multiplicities(m: &CharacterPoset, rho: &Character) -> Result<Vec<i64>> {
    let g = rho.group();
    let n = m.conductor();
    let c = num_integer::lcm(n, rho.conductor());
    let shift = c / n;
    let conj_rho: Vec<CycloInt> = rho.values().iter().map(|v| v.lift_to(c).conj()).collect();
    let mut raw = vec![0i64; c as usize];
    m.nodes()
        .iter()
        .map(|y| {
            raw.iter_mut().for_each(|r| *r = 0);
            for (r, v) in y.subgroup.iter().enumerate() {
                let s = (y.exps[r] * shift) as usize;
                for (i, &a) in conj_rho[g.class_of(v)].coeffs().iter().enumerate() {
                    raw[(i + s) % c as usize] += a;
                }
            }
            let total = CycloInt::from_exponent_counts(c, &raw)
                .as_integer()
                .ok_or_else(|| Error::NonIntegral("restriction multiplicity is irrational".into()))?;
            let size = y.subgroup.len() as i64;
            if total % size != 0 {
                return Err(Error::NonIntegral(format!("multiplicity {total}/{size} of a restriction")));
            }
            Ok(total / size)
        })
        .collect()
}

/// `a_G(ρ)` for a virtual character `ρ`.
pub fn brauer_coefficients(rho: &Character) -> Result<BrauerElement> {
    let g = rho.group();
    let m = character_poset(g)?;
    let mult = restriction_multiplicities(&m, rho)?;
    let mut out = BrauerElement { group: g.clone(), poset: m.clone(), terms: BTreeMap::new() };
    for x in m.class_representatives() {
        let inner: i64 = m.upper_set(x).iter().map(|&(y, mu)| mu * mult[y]).sum();
        if inner == 0 {
            continue;
        }
        let num = inner * (m.subgroup_of(x).len() * m.orbit_size(x)) as i64;
        let den = g.order() as i64;
        if num % den != 0 {
            return Err(Error::NonIntegral(format!("coefficient {num}/{den} at {:?}", m.node(x))));
        }
        out.terms.insert(m.node(x).clone(), num / den);
    }
    Ok(out)
}

/// Whether `b` maps to `ρ` under `(U, φ)^G ↦ Ind_U^G φ`.
pub fn verify_section(b: &BrauerElement, rho: &Character) -> bool {
    crate::character::same_group(b.group(), rho.group()) && b.evaluate() == *rho
}

/// Exponents `e[x]` with `χ(x) = ζ_n^{e[x]}`, `n = exp(G)`.
pub fn linear_exponents(chi: &Character) -> Result<Vec<u32>> {
    let g = chi.group();
    let n = g.exponent() as u32;
    let c = num_integer::lcm(n, chi.conductor());
    let roots: Vec<CycloInt> = (0..n).map(|e| CycloInt::root(c, (e * (c / n)) as i64)).collect();
    let by_class: Vec<u32> = chi
        .values()
        .iter()
        .map(|v| {
            let v = v.lift_to(c);
            roots.iter().position(|r| *r == v).map(|e| e as u32)
        })
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Domain("twisting character is not linear".into()))?;
    let exps: Vec<u32> = g.elements().map(|x| by_class[g.class_of(x)]).collect();
    for a in g.elements() {
        for b in g.elements() {
            if (exps[a] + exps[b]) % n != exps[g.mul(a, b)] {
                return Err(Error::Domain("twisting character is not a homomorphism".into()));
            }
        }
    }
    Ok(exps)
}

/// `χ · b`, sending `(U, φ)^G` to `(U, Res χ · φ)^G`.
pub fn twist(chi: &Character, b: &BrauerElement) -> Result<BrauerElement> {
    if !crate::character::same_group(chi.group(), b.group()) {
        return Err(Error::RingMismatch);
    }
    let e = linear_exponents(chi)?;
    let n = b.conductor();
    let mut out = BrauerElement { group: b.group.clone(), poset: b.poset.clone(), terms: BTreeMap::new() };
    for (pair, c) in b.terms() {
        let twisted = CharacterPair {
            subgroup: pair.subgroup,
            exps: pair.subgroup.iter().zip(&pair.exps).map(|(x, &f)| (f + e[x]) % n).collect(),
        };
        out.add_term(&twisted, c)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
