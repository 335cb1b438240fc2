use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::{basis, Cyclotomic, TruncCyclo};
use crate::error::{Error, Result};
use crate::modp;

/// A cyclotomic integer in `Z[ζ_n]`, stored in the power basis of `Φ_n`.
///
/// Character values of finite groups live here; arithmetic is plain `i64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloInt {
    n: u32,
    c: Vec<i64>,
}

impl CycloInt {
    pub fn zero(n: u32) -> Self {
        CycloInt { n, c: vec![0; basis(n).degree] }
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = v;
        z
    }

    pub fn root(n: u32, e: i64) -> Self {
        let mut z = Self::zero(n);
        for &(j, s) in &basis(n).powers[e.rem_euclid(n as i64) as usize] {
            z.c[j] = s;
        }
        z
    }

    /// `Σ_e counts[e] ζ_n^e`.
    pub fn from_exponent_counts(n: u32, counts: &[i64]) -> Self {
        let b = basis(n);
        let mut z = Self::zero(n);
        for (e, &k) in counts.iter().enumerate() {
            if k != 0 {
                for &(j, s) in &b.powers[e % n as usize] {
                    z.c[j] += k * s;
                }
            }
        }
        z
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    pub fn lift_to(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "conductor {} does not divide {m}", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let b = basis(m);
        let mut z = Self::zero(m);
        for (i, &x) in self.c.iter().enumerate() {
            if x != 0 {
                for &(j, s) in &b.powers[i * step] {
                    z.c[j] += x * s;
                }
            }
        }
        z
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.n.lcm(&b.n);
        (a.lift_to(m), b.lift_to(m))
    }

    pub fn galois(&self, j: i64) -> Self {
        let n = self.n as i64;
        debug_assert_eq!(j.gcd(&n), 1);
        let b = basis(self.n);
        let mut z = Self::zero(self.n);
        for (i, &x) in self.c.iter().enumerate() {
            if x != 0 {
                for &(t, s) in &b.powers[(i as i64 * j).rem_euclid(n) as usize] {
                    z.c[t] += x * s;
                }
            }
        }
        z
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        CycloInt { n: self.n, c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Exact division by an integer, if every coefficient is divisible.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        self.c
            .iter()
            .all(|x| x % d == 0)
            .then(|| CycloInt { n: self.n, c: self.c.iter().map(|x| x / d).collect() })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::from_int(self.n, 1);
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

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let raw = self.c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        Cyclotomic::from_coeffs(self.n, raw)
    }

    /// Exact inverse of [`CycloInt::to_cyclotomic`] for integral values.
    pub fn from_cyclotomic(x: &Cyclotomic) -> Result<Self> {
        let c = x
            .coeffs()
            .iter()
            .map(|r| {
                if !r.is_integer() {
                    return Err(Error::Parse(format!("{r} is not an integer")));
                }
                i64::try_from(r.to_integer()).map_err(|_| Error::Parse("coefficient overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloInt { n: x.conductor(), c })
    }

    /// Reduction into `(Z/p^k)[ζ_{p^a}]`; the conductor must be a power of `p`.
    pub fn to_trunc(&self, p: u64, k: u32) -> Result<TruncCyclo> {
        let a = crate::group::prime_power_exponent(self.n as usize, p)
            .ok_or(Error::BadConductor { n: self.n, p })?;
        let m = modp::modulus(p, k)?;
        TruncCyclo::from_coeffs(p, k, a, self.c.iter().map(|&x| modp::from_i64(x, m)).collect())
    }
}

impl Add for &CycloInt {
    type Output = CycloInt;
    fn add(self, rhs: &CycloInt) -> CycloInt {
        if self.n != rhs.n {
            let (a, b) = CycloInt::unify(self, rhs);
            return &a + &b;
        }
        CycloInt { n: self.n, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycloInt {
    type Output = CycloInt;
    fn sub(self, rhs: &CycloInt) -> CycloInt {
        self + &(-rhs)
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        self.scale(-1)
    }
}

impl Mul for &CycloInt {
    type Output = CycloInt;
    fn mul(self, rhs: &CycloInt) -> CycloInt {
        if self.n != rhs.n {
            let (a, b) = CycloInt::unify(self, rhs);
            return &a * &b;
        }
        let d = self.c.len();
        let mut raw = vec![0i64; 2 * d - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                for (j, &b) in rhs.c.iter().enumerate() {
                    raw[i + j] += a * b;
                }
            }
        }
        let b = basis(self.n);
        let mut out: Vec<i64> = raw[..d].to_vec();
        for (t, &x) in raw.iter().enumerate().skip(d) {
            if x != 0 {
                for &(j, s) in &b.powers[t % self.n as usize] {
                    out[j] += x * s;
                }
            }
        }
        CycloInt { n: self.n, c: out }
    }
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_cyclotomic(), f)
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_cyclotomic(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts_of_all_roots_vanish() {
        let z = CycloInt::from_exponent_counts(9, &[1; 9]);
        assert!(z.is_zero());
        let t = CycloInt::from_exponent_counts(9, &[9, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(t.as_integer(), Some(9));
    }

    proptest! {
        #[test]
        fn agrees_with_rational_arithmetic(a in proptest::collection::vec(-9i64..9, 6), b in proptest::collection::vec(-9i64..9, 6)) {
            let x = CycloInt::from_exponent_counts(9, &a);
            let y = CycloInt::from_exponent_counts(9, &b);
            prop_assert_eq!((&x * &y).to_cyclotomic(), &x.to_cyclotomic() * &y.to_cyclotomic());
            prop_assert_eq!(x.conj().to_cyclotomic(), x.to_cyclotomic().conj());
            prop_assert_eq!(CycloInt::from_cyclotomic(&x.to_cyclotomic()).unwrap(), x.clone());
            prop_assert_eq!((&x * &y).lift_to(27), &x.lift_to(27) * &y.lift_to(27));
            prop_assert_eq!((&x * &y).to_trunc(3, 4).unwrap(), &x.to_trunc(3, 4).unwrap() * &y.to_trunc(3, 4).unwrap());
        }
    }
}
