//! Perturbed θ-tuples that a given condition must reject.
//!
//! A θ-tuple is changed at a single coordinate by multiplying the entry with
//! a random element of augmentation `≡ 1 mod p`. The result stays a tuple of
//! units, and the targeted check is run on the instances that see the
//! changed coordinate.

use rand::Rng;
use serde::Serialize;

use super::{CongruenceLab, CongruenceReport, Condition, Evidence, Locator};
use crate::error::{Error, Result};
use crate::group_ring::{GroupRingElement, UnitTuple};
use crate::modp::{add_mod, mul_mod};

#[derive(Debug, Clone, Serialize)]
pub struct AdversarialCase {
    pub condition: Condition,
    pub coordinate: usize,
    pub coordinate_label: String,
    /// The factor the entry was multiplied by.
    pub perturbation: Vec<u64>,
    pub attempts: usize,
    pub report: CongruenceReport,
    #[serde(skip)]
    pub tuple: UnitTuple,
}

impl CongruenceLab {
    fn adversarial_coordinates(&self, target: Condition) -> Result<Vec<usize>> {
        let mut coords: Vec<usize> = match target {
            Condition::RW1 => self.edges()?.iter().flat_map(|e| [e.from, e.to]).collect(),
            Condition::RW2 => (0..self.ab.len()).filter(|&i| self.has_transport(i)).collect(),
            Condition::RW3a => {
                let inst = self.rw3_instances()?;
                self.rw3a_indices()?.into_iter().filter_map(|i| inst[i].a_entry()).collect()
            }
            other => return Err(Error::Domain(format!("no adversarial generator for {other}"))),
        };
        coords.sort_unstable();
        coords.dedup();
        Ok(coords)
    }

    fn first_failure(&self, t: &UnitTuple, target: Condition, c: usize) -> Result<Option<CongruenceReport>> {
        let reports: Vec<CongruenceReport> = match target {
            Condition::RW1 => {
                let touching = self.edges()?.iter().enumerate().filter(|(_, e)| e.from == c || e.to == c).map(|(i, _)| i);
                touching.map(|i| self.check_rw1_edge(t, i)).collect::<Result<_>>()?
            }
            Condition::RW2 => self.check_rw2(t)?,
            Condition::RW3a => self.check_rw3a_all(t)?,
            other => return Err(Error::Domain(format!("no adversarial generator for {other}"))),
        };
        Ok(reports.into_iter().find(|r| !r.holds()))
    }

    /// Perturbs `θ(u)` until `target` rejects it, trying at most
    /// `max_attempts` random perturbations. Returns `None` when the
    /// condition has no instance that could fail (RW2 on an abelian group)
    /// or every attempt passed.
    pub fn adversarial(
        &self,
        u: &GroupRingElement,
        target: Condition,
        rng: &mut impl Rng,
        max_attempts: usize,
    ) -> Result<Option<AdversarialCase>> {
        let base = self.theta_tuple(u)?;
        self.adversarial_from(&base, target, rng, max_attempts)
    }

    pub fn adversarial_from(
        &self,
        base: &UnitTuple,
        target: Condition,
        rng: &mut impl Rng,
        max_attempts: usize,
    ) -> Result<Option<AdversarialCase>> {
        let coords = self.adversarial_coordinates(target)?;
        if coords.is_empty() {
            return Ok(None);
        }
        for attempt in 1..=max_attempts {
            let c = coords[rng.gen_range(0..coords.len())];
            let x = base.get(c);
            let v = GroupRingElement::random_one_unit(x.group(), x.k(), rng)?;
            if v.is_one() {
                continue;
            }
            let t = base.with_entry(c, x * &v)?;
            if let Some(report) = self.first_failure(&t, target, c)? {
                return Ok(Some(AdversarialCase {
                    condition: target,
                    coordinate: c,
                    coordinate_label: self.ab.label(c),
                    perturbation: v.coeffs().to_vec(),
                    attempts: attempt,
                    report,
                    tuple: t,
                }));
            }
        }
        Ok(None)
    }

    /// Checks a failing report against the tuple from scratch: mismatches are
    /// recomputed, and an obstruction functional is tested against every
    /// column of `σ` and against the recomputed target.
    pub fn verify_certificate(&self, t: &UnitTuple, report: &CongruenceReport) -> Result<bool> {
        match (report.locator, &report.evidence) {
            (Locator::Edge { index }, Evidence::Mismatch { lhs, rhs }) => {
                let e = &self.edges()?[index];
                let pushed = self.push_along(t, e)?;
                Ok(lhs != rhs && pushed.coeffs() == lhs.as_slice() && t.get(e.to).coeffs() == rhs.as_slice())
            }
            (Locator::Conjugation { member }, Evidence::Mismatch { lhs, rhs }) => {
                let x = t.get(member);
                Ok(lhs != rhs
                    && self.transports()[member].iter().any(|tr| {
                        let target = t.get(tr.to);
                        x.pushforward(target.group(), |q| tr.map[q]).coeffs() == lhs.as_slice()
                            && target.coeffs() == rhs.as_slice()
                    }))
            }
            (Locator::Rw3 { instance } | Locator::Rw3a { instance }, Evidence::SigmaObstruction { target, functional, residue }) => {
                let y = match report.locator {
                    Locator::Rw3 { .. } => self.rw3_sum(t, instance)?,
                    _ => self.rw3a_difference(t, instance)?,
                };
                let solver = self.rw3_solver(instance, y.k())?;
                Ok(y.coeffs() == target.as_slice() && obstructs(solver.matrix(), functional, &y, *residue))
            }
            _ => Ok(false),
        }
    }
}

/// `w ∘ σ = 0` column by column and `w(y) = residue ≠ 0`.
fn obstructs(sigma: &[Vec<u64>], w: &[u64], y: &GroupRingElement, residue: u64) -> bool {
    let m = y.modulus();
    let n = y.coeffs().len();
    if w.len() != n || sigma.len() != n {
        return false;
    }
    let kills = (0..n).all(|col| (0..n).fold(0, |s, row| add_mod(s, mul_mod(w[row], sigma[row][col] % m, m), m)) == 0);
    let value = w.iter().zip(y.coeffs()).fold(0, |s, (&a, &b)| add_mod(s, mul_mod(a, b, m), m));
    kills && value == residue && value != 0
}
