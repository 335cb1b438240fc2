use std::ops::{Add, Mul};
use std::sync::Arc;

use super::GroupRingElement;
use crate::cyclotomic::TruncCyclo;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// An element of `(Z/p^k)[ζ_{p^a}][A]`, the coefficient extension of a
/// truncated group ring. Used for twisting by characters with values in
/// `μ_{p^a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloGroupRingElement {
    group: Arc<FiniteGroup>,
    c: Vec<TruncCyclo>,
}

impl CycloGroupRingElement {
    pub fn from_group_ring(x: &GroupRingElement, a: u32) -> Result<Self> {
        let c = x
            .coeffs()
            .iter()
            .map(|&v| TruncCyclo::from_int(x.p(), x.k(), a, v as i64))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloGroupRingElement { group: x.group().clone(), c })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[TruncCyclo] {
        &self.c
    }

    /// `Σ c_g ζ^{e[g]} g` for an exponent table `e` of a character.
    pub fn twist(&self, exps: &[u32]) -> Result<Self> {
        if exps.len() != self.c.len() {
            return Err(Error::OutOfRange { index: exps.len(), len: self.c.len() });
        }
        let c = self
            .c
            .iter()
            .zip(exps)
            .map(|(x, &e)| Ok(x * &TruncCyclo::root(x.p(), x.k(), x.a(), e as i64)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloGroupRingElement { group: self.group.clone(), c })
    }

    /// `χ(x) = Σ c_g ζ^{e[g]}` for the exponent table of a linear character.
    pub fn evaluate(&self, exps: &[u32]) -> Result<TruncCyclo> {
        let t = self.twist(exps)?;
        let first = t.c.first().ok_or(Error::OutOfRange { index: 0, len: 0 })?;
        let zero = TruncCyclo::zero(first.p(), first.k(), first.a())?;
        Ok(t.c.iter().fold(zero, |s, x| &s + x))
    }
}

impl Add for &CycloGroupRingElement {
    type Output = CycloGroupRingElement;
    fn add(self, rhs: &CycloGroupRingElement) -> CycloGroupRingElement {
        assert!(super::same(&self.group, &rhs.group), "operands over different groups");
        CycloGroupRingElement { group: self.group.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Mul for &CycloGroupRingElement {
    type Output = CycloGroupRingElement;
    fn mul(self, rhs: &CycloGroupRingElement) -> CycloGroupRingElement {
        assert!(super::same(&self.group, &rhs.group), "operands over different groups");
        let g = &self.group;
        let c0 = &self.c[0];
        let zero = TruncCyclo::zero(c0.p(), c0.k(), c0.a()).expect("valid ring");
        let mut c = vec![zero; g.order()];
        for (a, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.c.iter().enumerate() {
                let t = g.mul(a, b);
                c[t] = &c[t] + &(x * y);
            }
        }
        CycloGroupRingElement { group: g.clone(), c }
    }
}
