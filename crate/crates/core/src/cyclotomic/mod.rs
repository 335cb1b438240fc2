//! Exact arithmetic in `Q(ζ_n)` and in truncated rings `(Z/p^k)[ζ_{p^a}]`.
//!
//! A [`Cyclotomic`] is a vector of rationals in the power basis of
//! `Q[x]/Φ_n(x)`. Binary operations first move both operands to the lcm of
//! their conductors, so mixing values from different fields is allowed.

mod basis;
mod int;
mod trunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) use basis::basis;
pub use int::CycloInt;
pub use trunc::TruncCyclo;

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Cyclotomic {
    n: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Self {
        Cyclotomic { n, coeffs: vec![BigRational::zero(); basis(n).degree] }
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(v.into()))
    }

    pub fn from_rational(n: u32, v: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v;
        z
    }

    /// `ζ_n^k` for any integer `k`.
    pub fn root(n: u32, k: i64) -> Self {
        let b = basis(n);
        let e = k.rem_euclid(n as i64) as usize;
        let mut z = Self::zero(n);
        for &(j, c) in &b.powers[e] {
            z.coeffs[j] = BigRational::from_integer(c.into());
        }
        z
    }

    /// Builds an element from power-basis coefficients of any length,
    /// reducing modulo `Φ_n`.
    pub fn from_coeffs(n: u32, raw: Vec<BigRational>) -> Self {
        let b = basis(n);
        let mut z = Self::zero(n);
        for (i, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(j, e) in &b.powers[i % n as usize] {
                z.coeffs[j] += &c * BigRational::from_integer(e.into());
            }
        }
        z
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Re-expresses the element in `Q(ζ_m)` for a multiple `m` of the conductor.
    pub fn lift_to(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "conductor {} does not divide {m}", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let b = basis(m);
        let mut z = Self::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(j, e) in &b.powers[i * step] {
                z.coeffs[j] += c * BigRational::from_integer(e.into());
            }
        }
        z
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let m = a.n.lcm(&b.n);
        (a.lift_to(m), b.lift_to(m))
    }

    /// `σ_j : ζ ↦ ζ^j` for `j` prime to the conductor.
    pub fn galois(&self, j: i64) -> Self {
        let n = self.n as i64;
        assert_eq!(j.gcd(&n), 1, "σ_{j} is not an automorphism of Q(ζ_{n})");
        let b = basis(self.n);
        let mut z = Self::zero(self.n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i as i64 * j).rem_euclid(n) as usize;
            for &(t, s) in &b.powers[e] {
                z.coeffs[t] += c * BigRational::from_integer(s.into());
            }
        }
        z
    }

    /// Complex conjugation `σ_{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, by solving the linear system `M_a x = 1`
    /// where `M_a` is multiplication by `a` on the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.n));
        }
        let d = self.coeffs.len();
        // column j of M is a * x^j
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut xj = Self::zero(self.n);
            xj.coeffs[j] = BigRational::one();
            cols.push((self * &xj).coeffs);
        }
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::DivisionByZero(self.n))?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=d {
                        let t = &f * &m[col][c];
                        m[r][c] -= t;
                    }
                }
            }
        }
        Ok(Cyclotomic { n: self.n, coeffs: m.into_iter().map(|mut r| r.pop().unwrap()).collect() })
    }

    /// Whether every coefficient has non-negative `p`-adic valuation.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coeffs.iter().all(|c| c.denom().gcd(&p).is_one())
    }

    /// Minimum `p`-adic valuation of the coefficients (`None` for zero).
    pub fn p_valuation(&self, p: u64) -> Option<i64> {
        let p = BigInt::from(p);
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| vp_int(c.numer(), &p) - vp_int(c.denom(), &p))
            .min()
    }
}

fn vp_int(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.abs();
    let mut v = 0;
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.n != rhs.n {
            let (a, b) = Cyclotomic::unify(self, rhs);
            return &a + &b;
        }
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.n != rhs.n {
            let (a, b) = Cyclotomic::unify(self, rhs);
            return &a * &b;
        }
        let d = self.coeffs.len();
        let mut raw = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let b = basis(self.n);
        let mut out: Vec<BigRational> = raw.drain(..d).collect();
        for (t, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(j, e) in &b.powers[(t + d) % self.n as usize] {
                out[j] += &c * BigRational::from_integer(e.into());
            }
        }
        Cyclotomic { n: self.n, coeffs: out }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})z{}", self.n),
                _ => format!("({c})z{}^{i}", self.n),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    n: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let js = CycloJson::deserialize(d)?;
        if js.n == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let raw = js
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Cyclotomic::from_coeffs(js.n, raw))
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<BigInt>().map_err(|_| bad())?, b.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Reduces a cyclotomic integer of `p`-power conductor into
/// `(Z/p^k)[ζ_{p^a}]`; coefficients must be `p`-integral.
pub fn embed_mod_pk(x: &Cyclotomic, p: u64, k: u32) -> Result<TruncCyclo> {
    let a = crate::group::prime_power_exponent(x.n as usize, p).ok_or(Error::BadConductor { n: x.n, p })?;
    let m = crate::modp::modulus(p, k)?;
    let mb = BigInt::from(m);
    let coeffs = x
        .coeffs
        .iter()
        .map(|c| {
            let den = (c.denom() % &mb + &mb) % &mb;
            let den = u64::try_from(den).unwrap();
            let inv = crate::modp::inv_mod(den, m).ok_or(Error::NotIntegral(p))?;
            let num = u64::try_from((c.numer() % &mb + &mb) % &mb).unwrap();
            Ok(crate::modp::mul_mod(num, inv, m))
        })
        .collect::<Result<Vec<u64>>>()?;
    TruncCyclo::from_coeffs(p, k, a, coeffs)
}
