use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{theta, GroupRingElement};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Section, Subgroup, SubquotientSet};

/// Anything that can produce the entry `λ_{W/C}` of a tuple indexed by
/// abelian subquotients.
pub trait TupleSource {
    fn ambient(&self) -> &Arc<FiniteGroup>;

    fn k(&self) -> u32;

    /// `λ_{W/C}` together with the section it lives on.
    fn entry(&self, top: Subgroup, bottom: Subgroup) -> Result<(Section, GroupRingElement)>;
}

/// A tuple `(λ_U)` of group ring elements indexed by the abelian members of
/// a [`SubquotientSet`].
#[derive(Debug, Clone)]
pub struct UnitTuple {
    set: Arc<SubquotientSet>,
    k: u32,
    entries: Vec<GroupRingElement>,
}

impl UnitTuple {
    pub fn new(set: Arc<SubquotientSet>, entries: Vec<GroupRingElement>) -> Result<Self> {
        if !set.is_abelian_only() {
            return Err(Error::Domain("tuples are indexed by abelian members".into()));
        }
        if entries.len() != set.len() {
            return Err(Error::OutOfRange { index: entries.len(), len: set.len() });
        }
        let k = entries.first().map_or(1, |e| e.k());
        for (e, sec) in entries.iter().zip(set.members()) {
            if e.k() != k || !super::same(e.group(), sec.group()) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(UnitTuple { set, k, entries })
    }

    /// `θ(u) = (θ_U(u))_U` over every member of `set`.
    pub fn theta(u: &GroupRingElement, set: Arc<SubquotientSet>) -> Result<Self> {
        if !super::same(u.group(), set.ambient()) {
            return Err(Error::RingMismatch);
        }
        let entries = set.members().iter().map(|sec| theta(u, sec)).collect::<Result<Vec<_>>>()?;
        Self::new(set, entries)
    }

    pub fn set(&self) -> &Arc<SubquotientSet> {
        &self.set
    }

    pub fn entries(&self) -> &[GroupRingElement] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &GroupRingElement {
        &self.entries[i]
    }

    /// Replaces one entry, keeping every other entry.
    pub fn with_entry(&self, i: usize, x: GroupRingElement) -> Result<Self> {
        let mut entries = self.entries.clone();
        if i >= entries.len() {
            return Err(Error::OutOfRange { index: i, len: entries.len() });
        }
        entries[i] = x;
        Self::new(self.set.clone(), entries)
    }

    pub fn to_json(&self) -> UnitTupleJson {
        let g = self.set.ambient();
        UnitTupleJson {
            format_version: 1,
            group: g.name().to_string(),
            p: g.p(),
            k: self.k,
            entries: self
                .set
                .members()
                .iter()
                .zip(&self.entries)
                .map(|(sec, e)| TupleEntryJson {
                    top: sec.top().elements(),
                    bottom: sec.bottom().elements(),
                    coeffs: e.coeffs().to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_json(set: Arc<SubquotientSet>, js: &UnitTupleJson) -> Result<Self> {
        let mut entries: Vec<Option<GroupRingElement>> = vec![None; set.len()];
        for e in &js.entries {
            let top = Subgroup::from_elements(e.top.iter().copied());
            let bottom = Subgroup::from_elements(e.bottom.iter().copied());
            let i = set
                .position(top, bottom)
                .ok_or_else(|| Error::Parse(format!("tuple entry {top:?}/{bottom:?} is not a member")))?;
            entries[i] = Some(GroupRingElement::from_coeffs(set.members()[i].group(), js.k, e.coeffs.clone())?);
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| Error::Uncovered(set.label(i))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(set, entries)
    }
}

impl TupleSource for UnitTuple {
    fn ambient(&self) -> &Arc<FiniteGroup> {
        self.set.ambient()
    }

    fn k(&self) -> u32 {
        self.k
    }

    fn entry(&self, top: Subgroup, bottom: Subgroup) -> Result<(Section, GroupRingElement)> {
        let i = self.set.position(top, bottom).ok_or_else(|| Error::Uncovered(format!("W{top:?}/C{bottom:?}")))?;
        Ok((self.set.members()[i].clone(), self.entries[i].clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleEntryJson {
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
    pub coeffs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitTupleJson {
    pub format_version: u32,
    pub group: String,
    pub p: u64,
    pub k: u32,
    pub entries: Vec<TupleEntryJson>,
}

/// The tuple `θ(u)`, computed entry by entry on demand.
pub struct ThetaSource {
    u: GroupRingElement,
    cache: Mutex<HashMap<(Subgroup, Subgroup), (Section, GroupRingElement)>>,
}

impl ThetaSource {
    pub fn new(u: &GroupRingElement) -> Self {
        ThetaSource { u: u.clone(), cache: Mutex::new(HashMap::new()) }
    }

    pub fn unit(&self) -> &GroupRingElement {
        &self.u
    }
}

impl TupleSource for ThetaSource {
    fn ambient(&self) -> &Arc<FiniteGroup> {
        self.u.group()
    }

    fn k(&self) -> u32 {
        self.u.k()
    }

    fn entry(&self, top: Subgroup, bottom: Subgroup) -> Result<(Section, GroupRingElement)> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&(top, bottom)) {
            return Ok(hit.clone());
        }
        let g = self.u.group();
        if !g.is_normal(bottom) {
            return Err(Error::Uncovered(format!("W{top:?}/C{bottom:?}")));
        }
        let sec = Section::new(g, top, bottom)?;
        let value = theta(&self.u, &sec)?;
        self.cache.lock().expect("cache lock").insert((top, bottom), (sec.clone(), value.clone()));
        Ok((sec, value))
    }
}
