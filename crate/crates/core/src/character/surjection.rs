use std::sync::Arc;

use serde::Serialize;

use super::{irreducibles, linear_characters, Character};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Section, Subgroup};

/// Result of testing whether every irreducible of `G` has the form
/// `infl(ψ) · infl(ρ)` with `ψ` a character of the abelian quotient
/// `Γ = G/H` and `ρ` an irreducible of `G/Z`.
#[derive(Debug, Clone, Serialize)]
pub struct SurjectionReport {
    pub group: String,
    /// For each irreducible of `G`, the first `(ψ, ρ)` index pair found.
    pub witnesses: Vec<Option<(usize, usize)>>,
    pub covered: usize,
    pub total: usize,
}

impl SurjectionReport {
    pub fn holds(&self) -> bool {
        self.covered == self.total
    }

    pub fn uncovered(&self) -> Vec<usize> {
        self.witnesses.iter().enumerate().filter(|(_, w)| w.is_none()).map(|(i, _)| i).collect()
    }
}

/// Exhaustive twist search. `z` must be central and `h` normal with `G/H`
/// abelian; the report lists witnesses rather than failing.
pub fn irr_surjection_check(g: &Arc<FiniteGroup>, z: Subgroup, h: Subgroup) -> Result<SurjectionReport> {
    if !z.is_subset_of(g.center()) || !g.is_subgroup(z) {
        return Err(Error::InvalidGroup("designated subgroup is not central".into()));
    }
    let gamma = Section::quotient(g, h)?;
    if !gamma.group().is_abelian() {
        return Err(Error::InvalidGroup("the designated quotient is not abelian".into()));
    }
    let gz = Section::quotient(g, z)?;
    let psis: Vec<Character> =
        linear_characters(gamma.group()).iter().map(|c| c.inflate(g, &gamma)).collect();
    let rhos: Vec<Character> =
        irreducibles(gz.group())?.iter().map(|c| c.inflate(g, &gz)).collect();
    let irr = irreducibles(g)?;
    let witnesses: Vec<Option<(usize, usize)>> = irr
        .iter()
        .map(|chi| {
            rhos.iter()
                .enumerate()
                .filter(|(_, r)| r.degree() == chi.degree())
                .find_map(|(j, r)| psis.iter().position(|s| &s.tensor(r) == chi).map(|i| (i, j)))
        })
        .collect();
    let covered = witnesses.iter().filter(|w| w.is_some()).count();
    Ok(SurjectionReport { group: g.name().to_string(), total: irr.len(), covered, witnesses })
}
