use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{basis, Cyclotomic};
use crate::error::{Error, Result};
use crate::modp::{self, add_mod, mul_mod, sub_mod};

/// An element of `(Z/p^k)[ζ_{p^a}]` in the power basis of `Φ_{p^a}`.
///
/// The ring is local with residue field `F_p` (reduction sends `ζ` to 1),
/// so an element is a unit exactly when its coefficient sum is prime to `p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncCyclo {
    p: u64,
    k: u32,
    a: u32,
    m: u64,
    c: Vec<u64>,
}

impl TruncCyclo {
    pub fn from_coeffs(p: u64, k: u32, a: u32, coeffs: Vec<u64>) -> Result<Self> {
        let m = modp::modulus(p, k)?;
        let n = conductor(p, a)?;
        let deg = basis(n).degree;
        if coeffs.len() != deg {
            return Err(Error::OutOfRange { index: coeffs.len(), len: deg });
        }
        Ok(TruncCyclo { p, k, a, m, c: coeffs.into_iter().map(|x| x % m).collect() })
    }

    pub fn zero(p: u64, k: u32, a: u32) -> Result<Self> {
        let n = conductor(p, a)?;
        Self::from_coeffs(p, k, a, vec![0; basis(n).degree])
    }

    pub fn from_int(p: u64, k: u32, a: u32, v: i64) -> Result<Self> {
        let mut z = Self::zero(p, k, a)?;
        z.c[0] = modp::from_i64(v, z.m);
        Ok(z)
    }

    pub fn one(p: u64, k: u32, a: u32) -> Result<Self> {
        Self::from_int(p, k, a, 1)
    }

    /// `ζ_{p^a}^j`
    pub fn root(p: u64, k: u32, a: u32, j: i64) -> Result<Self> {
        let mut z = Self::zero(p, k, a)?;
        let n = z.conductor();
        for &(i, e) in &basis(n).powers[j.rem_euclid(n as i64) as usize] {
            z.c[i] = modp::from_i64(e, z.m);
        }
        Ok(z)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn conductor(&self) -> u32 {
        (self.p as u32).pow(self.a)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 % self.m && self.c[1..].iter().all(|&x| x == 0)
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.a == other.a
    }

    /// Image in the residue field `F_p`.
    pub fn residue(&self) -> u64 {
        self.c.iter().fold(0, |s, &x| (s + x % self.p) % self.p)
    }

    pub fn is_unit(&self) -> bool {
        self.residue() != 0
    }

    /// Minimum `p`-adic valuation of the coefficients; `k` for zero.
    pub fn valuation(&self) -> u32 {
        self.c.iter().map(|&x| modp::val(x, self.p, self.k)).min().unwrap_or(self.k)
    }

    /// Whether `self ≡ 1 mod p`.
    pub fn is_one_mod_p(&self) -> bool {
        let mut d = self.clone();
        d.c[0] = sub_mod(d.c[0], 1 % self.m, self.m);
        d.valuation() >= 1
    }

    pub fn scalar(&self, s: u64) -> Self {
        let s = s % self.m;
        self.map(|x| mul_mod(x, s, self.m))
    }

    fn map(&self, f: impl Fn(u64) -> u64) -> Self {
        TruncCyclo { c: self.c.iter().map(|&x| f(x)).collect(), ..self.clone() }
    }

    /// Exact division by `p`; all coefficients must be divisible by `p`.
    /// The result lives at precision `k - 1`.
    pub fn div_p(&self) -> Result<Self> {
        if self.valuation() < 1 || self.k == 0 {
            return Err(Error::NonIntegral("division by p of a non-multiple".into()));
        }
        let c = self.c.iter().map(|&x| x / self.p).collect();
        Self::from_coeffs(self.p, self.k - 1, self.a, c)
    }

    /// Multiplication by `p`, moving to precision `k + 1`.
    pub fn mul_p(&self) -> Result<Self> {
        let c = self.c.iter().map(|&x| x * self.p).collect();
        Self::from_coeffs(self.p, self.k + 1, self.a, c)
    }

    /// Reduction to a lower precision.
    pub fn reduce(&self, k: u32) -> Self {
        assert!(k <= self.k);
        let m = self.p.pow(k);
        TruncCyclo { k, m, c: self.c.iter().map(|&x| x % m).collect(), ..self.clone() }
    }

    /// The element with the same coefficients in `[0, p^k)`, read modulo
    /// `p^{k2}` for `k2 >= k`.
    pub fn lift_precision(&self, k2: u32) -> Result<Self> {
        assert!(k2 >= self.k);
        Self::from_coeffs(self.p, k2, self.a, self.c.clone())
    }

    /// Image under `ζ_{p^a} ↦ ζ_{p^{a'}}^{p^{a'-a}}`, for `a' >= a`.
    pub fn lift_conductor(&self, a2: u32) -> Self {
        assert!(a2 >= self.a);
        if a2 == self.a {
            return self.clone();
        }
        let step = self.p.pow(a2 - self.a) as usize;
        let b = basis((self.p as u32).pow(a2));
        let mut c = vec![0u64; b.degree];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(j, e) in &b.powers[i * step] {
                c[j] = add_mod(c[j], mul_mod(x, modp::from_i64(e, self.m), self.m), self.m);
            }
        }
        TruncCyclo { a: a2, c, ..self.clone() }
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        assert!(self.p == other.p && self.k == other.k, "operands differ in p or precision");
        let a = self.a.max(other.a);
        (self.lift_conductor(a), other.lift_conductor(a))
    }

    /// `σ_j: ζ ↦ ζ^j`.
    pub fn galois(&self, j: i64) -> Self {
        let n = self.conductor() as i64;
        assert!(j.rem_euclid(self.p as i64) != 0 || n == 1);
        let b = basis(n as u32);
        let mut c = vec![0u64; self.c.len()];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(t, e) in &b.powers[(i as i64 * j).rem_euclid(n) as usize] {
                c[t] = add_mod(c[t], mul_mod(x, modp::from_i64(e, self.m), self.m), self.m);
            }
        }
        TruncCyclo { c, ..self.clone() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p, self.k, self.a).unwrap();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit, solving `M_u x = 1` with unit pivots.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let d = self.c.len();
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = Self::zero(self.p, self.k, self.a)?;
            e.c[j] = 1 % self.m;
            cols.push((self * &e).c);
        }
        let mat = (0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect();
        let mut rhs = vec![0; d];
        rhs[0] = 1 % self.m;
        let x = modp::solve_unit(mat, rhs, self.p, self.m).ok_or(Error::NotUnit)?;
        Ok(TruncCyclo { c: x, ..self.clone() })
    }

    /// Integer-coefficient lift to `Q(ζ_{p^a})` with symmetric representatives.
    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let raw = self
            .c
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(modp::to_i64(x, self.m))))
            .collect();
        Cyclotomic::from_coeffs(self.conductor(), raw)
    }
}

fn conductor(p: u64, a: u32) -> Result<u32> {
    (p as u32).checked_pow(a).filter(|&n| n <= 1 << 12).ok_or(Error::BadConductor { n: u32::MAX, p })
}

impl Add for &TruncCyclo {
    type Output = TruncCyclo;
    fn add(self, rhs: &TruncCyclo) -> TruncCyclo {
        if self.a != rhs.a {
            let (x, y) = self.unify(rhs);
            return &x + &y;
        }
        let m = self.m;
        TruncCyclo { c: self.c.iter().zip(&rhs.c).map(|(&x, &y)| add_mod(x, y, m)).collect(), ..self.clone() }
    }
}

impl Sub for &TruncCyclo {
    type Output = TruncCyclo;
    fn sub(self, rhs: &TruncCyclo) -> TruncCyclo {
        self + &(-rhs)
    }
}

impl Neg for &TruncCyclo {
    type Output = TruncCyclo;
    fn neg(self) -> TruncCyclo {
        self.map(|x| modp::neg_mod(x, self.m))
    }
}

impl Mul for &TruncCyclo {
    type Output = TruncCyclo;
    fn mul(self, rhs: &TruncCyclo) -> TruncCyclo {
        if self.a != rhs.a {
            let (x, y) = self.unify(rhs);
            return &x * &y;
        }
        let m = self.m as u128;
        let d = self.c.len();
        let mut raw = vec![0u128; 2 * d - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in rhs.c.iter().enumerate() {
                raw[i + j] = (raw[i + j] + x as u128 * y as u128) % m;
            }
        }
        let n = self.conductor() as usize;
        let b = basis(n as u32);
        let mut out: Vec<u64> = raw[..d].iter().map(|&x| x as u64).collect();
        for (t, &x) in raw.iter().enumerate().skip(d) {
            if x == 0 {
                continue;
            }
            for &(j, e) in &b.powers[t % n] {
                out[j] = add_mod(out[j], mul_mod(x as u64, modp::from_i64(e, self.m), self.m), self.m);
            }
        }
        TruncCyclo { c: out, ..self.clone() }
    }
}

impl fmt::Debug for TruncCyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}^{} in Z[z{}]", self.c, self.p, self.k, self.conductor())
    }
}
