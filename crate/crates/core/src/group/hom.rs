use std::sync::Arc;

use serde::Serialize;

use super::{FiniteGroup, Section, Subgroup};
use crate::error::{Error, Result};

/// A homomorphism between two groups given by its value table.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupHomJson {
    pub format_version: u32,
    pub source: String,
    pub target: String,
    pub map: Vec<usize>,
}

impl GroupHom {
    /// Checks multiplicativity before accepting the table.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidGroup("hom table has the wrong shape".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidGroup(format!("map is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub(crate) fn trusted(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Self {
        GroupHom { source, target, map }
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let map = g.elements().collect();
        GroupHom { source: g.clone(), target: g, map }
    }

    /// The projection `W -> W/D` of a section, with `W` materialized as a
    /// group of its own.
    pub fn from_section(ambient: &FiniteGroup, sec: &Section) -> Self {
        let w = Section::subgroup(ambient, sec.top()).expect("top is a subgroup");
        let map = (0..w.order()).map(|i| sec.proj_unchecked(w.lift(i))).collect();
        GroupHom { source: w.group().clone(), target: sec.group().clone(), map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn kernel(&self) -> Subgroup {
        let e = self.target.identity();
        Subgroup::from_elements(self.source.elements().filter(|&x| self.map[x] == e))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = Subgroup::empty();
        for &y in &self.map {
            hit.insert(y);
        }
        hit.len() == self.target.order()
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if **other.source() != *self.target {
            return Err(Error::RingMismatch);
        }
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        Ok(GroupHom { source: self.source.clone(), target: other.target.clone(), map })
    }

    pub fn to_json(&self) -> GroupHomJson {
        GroupHomJson {
            format_version: 1,
            source: self.source.name().to_string(),
            target: self.target.name().to_string(),
            map: self.map.clone(),
        }
    }
}

/// `G -> G^ab` together with the abelianization itself.
pub fn abelianization(g: &Arc<FiniteGroup>) -> (Arc<FiniteGroup>, GroupHom) {
    let sec = Section::abelianization(g);
    let map = g.elements().map(|x| sec.proj_unchecked(x)).collect();
    let ab = sec.group().clone();
    (ab.clone(), GroupHom::trusted(g.clone(), ab, map))
}
