//! Exact characters of finite p-groups.
//!
//! A [`Character`] stores one cyclotomic integer per conjugacy class, in the
//! class order of its group. Virtual characters (integer combinations) use
//! the same representation. Character tables are computed once per group by
//! inducing linear characters of subgroups and cached on the group.

mod linear;
mod surjection;
mod table;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

pub use linear::{abelian_basis, linear_exponent_tables, AbelianBasis};
pub use surjection::{irr_surjection_check, SurjectionReport};
pub use table::{character_table, irreducibles, CharacterTable, CharacterTableJson, MonomialPair};

use crate::cyclotomic::{Cyclotomic, CycloInt};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Section};

#[derive(Clone)]
pub struct Character {
    group: Arc<FiniteGroup>,
    values: Vec<CycloInt>,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Character {
    /// Builds a class function from integral cyclotomic values, one per class.
    pub fn new(group: Arc<FiniteGroup>, values: Vec<CycloInt>) -> Result<Self> {
        if values.len() != group.num_classes() {
            return Err(Error::OutOfRange { index: values.len(), len: group.num_classes() });
        }
        let n = values.iter().map(CycloInt::conductor).fold(1u32, num_integer::lcm);
        let values = values.iter().map(|v| v.lift_to(n)).collect();
        Ok(Character { group, values })
    }

    pub fn from_cyclotomic(group: Arc<FiniteGroup>, values: &[Cyclotomic]) -> Result<Self> {
        let v = values.iter().map(CycloInt::from_cyclotomic).collect::<Result<Vec<_>>>()?;
        Self::new(group, v)
    }

    pub(crate) fn from_parts(group: Arc<FiniteGroup>, values: Vec<CycloInt>) -> Self {
        Character { group, values }
    }

    pub fn trivial(g: &Arc<FiniteGroup>) -> Self {
        Self::constant(g, 1)
    }

    fn constant(g: &Arc<FiniteGroup>, v: i64) -> Self {
        let n = g.exponent() as u32;
        Character { group: g.clone(), values: vec![CycloInt::from_int(n, v); g.num_classes()] }
    }

    pub fn zero(g: &Arc<FiniteGroup>) -> Self {
        Self::constant(g, 0)
    }

    /// The regular character: `|G|` at the identity, 0 elsewhere.
    pub fn regular(g: &Arc<FiniteGroup>) -> Self {
        let mut c = Self::zero(g);
        let n = c.conductor();
        c.values[g.class_of(g.identity())] = CycloInt::from_int(n, g.order() as i64);
        c
    }

    /// The linear character `x ↦ ζ_n^{e[x]}`.
    pub fn from_exponents(g: &Arc<FiniteGroup>, n: u32, exps: &[u32]) -> Self {
        let values = (0..g.num_classes()).map(|c| CycloInt::root(n, exps[g.class_rep(c)] as i64)).collect();
        Character { group: g.clone(), values }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.values[0].conductor()
    }

    pub fn values(&self) -> &[CycloInt] {
        &self.values
    }

    pub fn value(&self, class: usize) -> Cyclotomic {
        self.values[class].to_cyclotomic()
    }

    pub fn value_int(&self, class: usize) -> &CycloInt {
        &self.values[class]
    }

    /// Value at an element.
    pub fn at(&self, x: usize) -> &CycloInt {
        &self.values[self.group.class_of(x)]
    }

    pub fn degree(&self) -> i64 {
        self.at(self.group.identity()).as_integer().expect("degree is an integer")
    }

    pub fn is_linear(&self) -> bool {
        self.degree() == 1 && self.schur_inner(self) == BigRational::from_integer(1.into())
    }

    pub fn lift_to(&self, m: u32) -> Self {
        Character { group: self.group.clone(), values: self.values.iter().map(|v| v.lift_to(m)).collect() }
    }

    pub fn conj(&self) -> Self {
        Character { group: self.group.clone(), values: self.values.iter().map(CycloInt::conj).collect() }
    }

    pub fn galois(&self, j: i64) -> Self {
        Character { group: self.group.clone(), values: self.values.iter().map(|v| v.galois(j)).collect() }
    }

    pub fn scale(&self, k: i64) -> Self {
        Character { group: self.group.clone(), values: self.values.iter().map(|v| v.scale(k)).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&CycloInt, &CycloInt) -> CycloInt) -> Self {
        assert!(same_group(&self.group, &other.group), "characters of different groups");
        Character { group: self.group.clone(), values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect() }
    }

    /// `χ ⊗ ψ`, the pointwise product.
    pub fn tensor(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    /// `⟨χ, ψ⟩ = (1/|G|) Σ_g χ(g) conj(ψ(g))`.
    pub fn schur_inner(&self, other: &Self) -> BigRational {
        assert!(same_group(&self.group, &other.group), "characters of different groups");
        let g = &self.group;
        let mut acc: Option<CycloInt> = None;
        for (c, class) in g.conjugacy_classes().iter().enumerate() {
            let t = (&self.values[c] * &other.values[c].conj()).scale(class.len() as i64);
            acc = Some(match acc {
                None => t,
                Some(a) => &a + &t,
            });
        }
        let s = acc.expect("at least one class").as_integer().expect("inner product of class functions is rational");
        BigRational::new(s.into(), (g.order() as i64).into())
    }

    /// `Res^G_U`, where `sub` is the section `U/1` of this character's group.
    pub fn restrict(&self, sub: &Section) -> Self {
        assert_eq!(sub.bottom().len(), 1, "restriction needs a subgroup section");
        let u = sub.group();
        let values = (0..u.num_classes()).map(|c| self.at(sub.lift(u.class_rep(c))).clone()).collect();
        Character { group: u.clone(), values }
    }

    /// `Ind_U^G`, where `sub` is the section `U/1` of `ambient` and this
    /// character lives on `sub.group()`.
    ///
    /// Uses `Ind χ(g) = Σ_t χ(t g t⁻¹)` over a right transversal, the sum
    /// running over those `t` with `t g t⁻¹ ∈ U`.
    pub fn induce(&self, ambient: &Arc<FiniteGroup>, sub: &Section) -> Self {
        assert!(same_group(&self.group, sub.group()), "character does not live on the section");
        assert_eq!(sub.bottom().len(), 1, "induction needs a subgroup section");
        let u = sub.top();
        let n = num_integer::lcm(self.conductor(), ambient.exponent() as u32);
        let transversal = ambient.right_transversal(u);
        let values = (0..ambient.num_classes())
            .map(|c| {
                let g = ambient.class_rep(c);
                let mut acc = CycloInt::zero(n);
                for &t in &transversal {
                    let x = ambient.conj(t, g);
                    if u.contains(x) {
                        acc = &acc + &self.at(sub.proj_unchecked(x)).lift_to(n);
                    }
                }
                acc
            })
            .collect();
        Character { group: ambient.clone(), values }
    }

    /// Inflation along `G -> G/N`, where `quotient` is the section `G/N`
    /// and this character lives on `quotient.group()`.
    pub fn inflate(&self, ambient: &Arc<FiniteGroup>, quotient: &Section) -> Self {
        assert!(same_group(&self.group, quotient.group()), "character does not live on the quotient");
        assert_eq!(quotient.top().len(), ambient.order(), "inflation needs a quotient section");
        let values = (0..ambient.num_classes())
            .map(|c| self.at(quotient.proj_unchecked(ambient.class_rep(c))).clone())
            .collect();
        Character { group: ambient.clone(), values }
    }

    /// The Adams operation `ψ_m χ (g) = χ(g^m)`.
    pub fn adams(&self, m: u64) -> Self {
        let g = &self.group;
        let values = (0..g.num_classes()).map(|c| self.at(g.pow(g.class_rep(c), m)).clone()).collect();
        Character { group: g.clone(), values }
    }

    /// Values as exact cyclotomic numbers.
    pub fn cyclotomic_values(&self) -> Vec<Cyclotomic> {
        self.values.iter().map(CycloInt::to_cyclotomic).collect()
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        if !same_group(&self.group, &other.group) {
            return false;
        }
        let m = num_integer::lcm(self.conductor(), other.conductor());
        self.values.iter().zip(&other.values).all(|(a, b)| a.lift_to(m) == b.lift_to(m))
    }
}

impl Eq for Character {}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Character").field("group", &self.group.name()).field("values", &self.values).finish()
    }
}

impl Add for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &Character {
    type Output = Character;
    fn sub(self, rhs: &Character) -> Character {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &Character {
    type Output = Character;
    fn neg(self) -> Character {
        self.scale(-1)
    }
}

impl Mul for &Character {
    type Output = Character;
    fn mul(self, rhs: &Character) -> Character {
        self.tensor(rhs)
    }
}

/// All linear characters of `g` with conductor `exp(G)`, trivial first.
pub fn linear_characters(g: &Arc<FiniteGroup>) -> Vec<Character> {
    let n = g.exponent() as u32;
    linear_exponent_tables(g, n).iter().map(|e| Character::from_exponents(g, n, e)).collect()
}
