//! Truncated group rings `(Z/p^k)[G]`.
//!
//! This is the finite model of the Iwasawa algebra used throughout the
//! crate. Elements are dense coefficient vectors indexed by the elements of
//! the group. Because `G` is a `p`-group, `(Z/p^k)[G]` is a local ring and
//! an element is a unit exactly when its augmentation is prime to `p`.

mod cyclo;
mod linalg;
mod theta;
mod tuple;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use cyclo::CycloGroupRingElement;
pub use linalg::{det_berkowitz, det_local, SmithForm, SolveOutcome};
pub use theta::{
    coset_matrix, norm, sigma, sigma_image_member, theta, theta_with, transversal_within, ver_linear, ver_map,
    SigmaMembership, SigmaSolver,
};
pub use tuple::{ThetaSource, TupleSource, UnitTuple, UnitTupleJson};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};
use crate::modp::{self, add_mod, mul_mod, neg_mod, sub_mod};

#[derive(Clone)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    k: u32,
    m: u64,
    c: Vec<u64>,
}

pub(crate) fn same(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    crate::character::same_group(a, b)
}

impl GroupRingElement {
    pub fn from_coeffs(g: &Arc<FiniteGroup>, k: u32, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != g.order() {
            return Err(Error::OutOfRange { index: coeffs.len(), len: g.order() });
        }
        let m = modp::modulus(g.p(), k)?;
        Ok(GroupRingElement { group: g.clone(), k, m, c: coeffs.into_iter().map(|x| x % m).collect() })
    }

    pub fn from_i64(g: &Arc<FiniteGroup>, k: u32, coeffs: &[i64]) -> Result<Self> {
        let m = modp::modulus(g.p(), k)?;
        Self::from_coeffs(g, k, coeffs.iter().map(|&x| modp::from_i64(x, m)).collect())
    }

    pub fn zero(g: &Arc<FiniteGroup>, k: u32) -> Result<Self> {
        Self::from_coeffs(g, k, vec![0; g.order()])
    }

    /// `s · 1`.
    pub fn scalar_one(g: &Arc<FiniteGroup>, k: u32, s: u64) -> Result<Self> {
        let mut z = Self::zero(g, k)?;
        z.c[g.identity()] = s % z.m;
        Ok(z)
    }

    pub fn one(g: &Arc<FiniteGroup>, k: u32) -> Result<Self> {
        Self::scalar_one(g, k, 1)
    }

    /// The basis element `x`.
    pub fn basis(g: &Arc<FiniteGroup>, k: u32, x: usize) -> Result<Self> {
        let mut z = Self::zero(g, k)?;
        if x >= g.order() {
            return Err(Error::OutOfRange { index: x, len: g.order() });
        }
        z.c[x] = 1 % z.m;
        Ok(z)
    }

    /// Uniformly random element.
    pub fn random(g: &Arc<FiniteGroup>, k: u32, rng: &mut impl Rng) -> Result<Self> {
        let m = modp::modulus(g.p(), k)?;
        Self::from_coeffs(g, k, (0..g.order()).map(|_| rng.gen_range(0..m)).collect())
    }

    /// Uniformly random unit.
    pub fn random_unit(g: &Arc<FiniteGroup>, k: u32, rng: &mut impl Rng) -> Result<Self> {
        loop {
            let u = Self::random(g, k, rng)?;
            if u.is_unit() {
                return Ok(u);
            }
        }
    }

    /// Uniformly random element with augmentation `≡ 1 mod p`.
    pub fn random_one_unit(g: &Arc<FiniteGroup>, k: u32, rng: &mut impl Rng) -> Result<Self> {
        let mut u = Self::random(g, k, rng)?;
        let p = g.p();
        let shift = (u.augmentation() % p + p - 1) % p;
        let e = g.identity();
        u.c[e] = sub_mod(u.c[e], shift, u.m);
        Ok(u)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, x: usize) -> u64 {
        self.c[x]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        let e = self.group.identity();
        self.c.iter().enumerate().all(|(x, &v)| v == if x == e { 1 % self.m } else { 0 })
    }

    /// Sum of the coefficients.
    pub fn augmentation(&self) -> u64 {
        self.c.iter().fold(0, |s, &x| add_mod(s, x, self.m))
    }

    pub fn is_unit(&self) -> bool {
        self.augmentation() % self.p() != 0
    }

    /// Whether the augmentation is `1 mod p`.
    pub fn is_one_unit(&self) -> bool {
        self.augmentation() % self.p() == 1 % self.p()
    }

    /// Minimum valuation of the coefficients (`k` for zero).
    pub fn valuation(&self) -> u32 {
        self.c.iter().map(|&x| modp::val(x, self.p(), self.k)).min().unwrap_or(self.k)
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.k == other.k && same(&self.group, &other.group)
    }

    fn check(&self, other: &Self) {
        assert!(self.same_ring(other), "group ring operands live in different rings");
    }

    pub fn scale(&self, s: u64) -> Self {
        let s = s % self.m;
        self.map(|x| mul_mod(x, s, self.m))
    }

    fn map(&self, f: impl Fn(u64) -> u64) -> Self {
        GroupRingElement { c: self.c.iter().map(|&x| f(x)).collect(), ..self.clone() }
    }

    /// Reduction to precision `k2 <= k`.
    pub fn reduce(&self, k2: u32) -> Self {
        assert!(k2 <= self.k, "cannot reduce to a higher precision");
        let m = self.p().pow(k2);
        GroupRingElement { k: k2, m, c: self.c.iter().map(|&x| x % m).collect(), ..self.clone() }
    }

    /// The lift with coefficients in `[0, p^k)`, read at precision `k2 >= k`.
    pub fn lift_precision(&self, k2: u32) -> Result<Self> {
        assert!(k2 >= self.k, "cannot lift to a lower precision");
        Self::from_coeffs(&self.group, k2, self.c.clone())
    }

    /// Exact division by `p^e` of an element divisible by `p^e`, landing at
    /// precision `k - e`.
    pub fn div_p_pow(&self, e: u32) -> Result<Self> {
        if self.valuation() < e || e > self.k {
            return Err(Error::NonIntegral(format!("element is not divisible by p^{e}")));
        }
        let d = self.p().pow(e);
        Self::from_coeffs(&self.group, self.k - e, self.c.iter().map(|&x| x / d).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.group, self.k).expect("modulus already validated");
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a unit: solve `u y = 1` mod `p` by elimination, then
    /// Newton steps `y ← y (2 - u y)`, each doubling the correct digits.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let g = &self.group;
        let n = g.order();
        let p = self.p();
        // (u e_b)[x] = u[x b⁻¹]
        let mat: Vec<Vec<u64>> =
            (0..n).map(|x| (0..n).map(|b| self.c[g.mul(x, g.inv(b))] % p).collect()).collect();
        let mut rhs = vec![0; n];
        rhs[g.identity()] = 1 % p;
        let y0 = modp::solve_unit(mat, rhs, p, p).ok_or(Error::NotUnit)?;
        let mut y = Self::from_coeffs(g, self.k, y0)?;
        let two = Self::scalar_one(g, self.k, 2)?;
        let mut correct = 1;
        while correct < self.k {
            y = &y * &(&two - &(self * &y));
            correct *= 2;
        }
        debug_assert!((self * &y).is_one());
        Ok(y)
    }

    /// Pushforward along a group homomorphism: `Σ a_x x ↦ Σ a_x f(x)`.
    pub fn deflate(&self, f: &GroupHom) -> Result<Self> {
        if !same(&self.group, f.source()) {
            return Err(Error::RingMismatch);
        }
        let mut c = vec![0u64; f.target().order()];
        for (x, &a) in self.c.iter().enumerate() {
            let y = f.apply(x);
            c[y] = add_mod(c[y], a, self.m);
        }
        Ok(GroupRingElement { group: f.target().clone(), k: self.k, m: self.m, c })
    }

    /// Pushforward along an index map `x ↦ map[x]` into `target`.
    pub(crate) fn pushforward(&self, target: &Arc<FiniteGroup>, map: impl Fn(usize) -> usize) -> Self {
        let mut c = vec![0u64; target.order()];
        for (x, &a) in self.c.iter().enumerate() {
            if a != 0 {
                let y = map(x);
                c[y] = add_mod(c[y], a, self.m);
            }
        }
        GroupRingElement { group: target.clone(), k: self.k, m: self.m, c }
    }

    /// `h · self · h⁻¹`.
    pub fn conjugate(&self, h: usize) -> Self {
        let g = &self.group;
        let mut c = vec![0u64; self.c.len()];
        for (x, &a) in self.c.iter().enumerate() {
            c[g.conj(h, x)] = a;
        }
        GroupRingElement { c, ..self.clone() }
    }

    pub fn to_json(&self) -> GroupRingJson {
        GroupRingJson { group: self.group.name().to_string(), p: self.p(), k: self.k, coeffs: self.c.clone() }
    }

    /// Rebuilds an element of `(Z/p^k)[g]` from its JSON form.
    pub fn from_json(g: &Arc<FiniteGroup>, js: &GroupRingJson) -> Result<Self> {
        if js.p != g.p() {
            return Err(Error::Parse(format!("unit is over p = {}, group has p = {}", js.p, g.p())));
        }
        Self::from_coeffs(g, js.k, js.coeffs.clone())
    }
}

/// `{"group", "p", "k", "coeffs"}` form of a group ring element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRingJson {
    pub group: String,
    pub p: u64,
    pub k: u32,
    pub coeffs: Vec<u64>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.c == other.c
    }
}

impl Eq for GroupRingElement {}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}^{} over {}", self.c, self.p(), self.k, self.group.name())
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check(rhs);
        let m = self.m;
        GroupRingElement { c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| add_mod(a, b, m)).collect(), ..self.clone() }
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check(rhs);
        let m = self.m;
        GroupRingElement { c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| sub_mod(a, b, m)).collect(), ..self.clone() }
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.map(|x| neg_mod(x, self.m))
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check(rhs);
        let g = &self.group;
        let n = g.order();
        let m = self.m;
        let mut acc = vec![0u128; n];
        // n · m² < 2^128 keeps the accumulation exact without reductions
        let lazy = m < (1u64 << 60);
        for (a, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in rhs.c.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let t = g.mul(a, b);
                if lazy {
                    acc[t] += x as u128 * y as u128;
                } else {
                    acc[t] = (acc[t] + x as u128 * y as u128) % m as u128;
                }
            }
        }
        GroupRingElement { c: acc.into_iter().map(|v| (v % m as u128) as u64).collect(), ..self.clone() }
    }
}

impl Add for GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: GroupRingElement) -> GroupRingElement {
        &self + &rhs
    }
}

impl Sub for GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: GroupRingElement) -> GroupRingElement {
        &self - &rhs
    }
}

impl Mul for GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: GroupRingElement) -> GroupRingElement {
        &self * &rhs
    }
}
