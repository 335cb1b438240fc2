use std::fmt;

use serde::Serialize;

use crate::cyclotomic::TruncCyclo;
use crate::error::{Error, Result};
use crate::modp;

/// `⌊log_p n⌋` for `n >= 1`.
pub(crate) fn floor_log(p: u64, mut n: u64) -> u32 {
    let mut e = 0;
    while n >= p {
        n /= p;
        e += 1;
    }
    e
}

/// For `x ∈ pR`, the terms `x^n / n` with `n > n_max` vanish modulo `p^{k0}`.
/// Returns `(n_max, s)` where `s = ⌊log_p n_max⌋` bounds the valuation of
/// every denominator that occurs.
pub(crate) fn series_bound(p: u64, k0: u32) -> (u64, u32) {
    let mut n = 1u64;
    // n - ⌊log_p n⌋ is non-decreasing, so the first hit bounds every later n
    while n - (floor_log(p, n) as u64) < k0 as u64 {
        n += 1;
    }
    let n_max = n - 1;
    (n_max, if n_max == 0 { 0 } else { floor_log(p, n_max) })
}

/// `log q` for `q ≡ 1 mod p` in `(Z/p^k)[ζ]`, correct modulo `p^k`.
///
/// The series is summed from an integral lift at precision `k + s`, so each
/// term `x^n / n` is exact modulo `p^k` after dividing by `p^{v_p(n)}`.
pub fn log_one_unit(q: &TruncCyclo) -> Result<TruncCyclo> {
    if !q.is_one_mod_p() {
        return Err(Error::Domain("logarithm needs an argument congruent to 1 mod p".into()));
    }
    let (p, k, a) = (q.p(), q.k(), q.a());
    let (n_max, s) = series_bound(p, k);
    let work = k + s;
    let one_w = TruncCyclo::one(p, work, a)?;
    let x = &q.lift_precision(work)? - &one_w;
    let mut acc = TruncCyclo::zero(p, k, a)?;
    let mut xn = one_w;
    let m = modp::modulus(p, k)?;
    for n in 1..=n_max {
        xn = &xn * &x;
        let v = modp::val(n, p, 64);
        let unit = n / p.pow(v);
        let mut term = xn.clone();
        for _ in 0..v {
            term = term.div_p()?;
        }
        let term = term.reduce(k).scalar(modp::inv_mod(unit % m, m).expect("unit"));
        acc = if n % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

/// A `p`-adic number `digits / p^shift` with `digits` known modulo
/// `p^prec`, i.e. known to absolute precision `p^{prec - shift}`.
#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PadicFixed {
    p: u64,
    digits: u64,
    prec: u32,
    shift: u32,
}

impl PadicFixed {
    pub fn new(p: u64, digits: u64, prec: u32, shift: u32) -> Result<Self> {
        let m = modp::modulus(p, prec)?;
        Ok(PadicFixed { p, digits: digits % m, prec, shift }.normalized())
    }

    pub fn from_int(p: u64, v: i64, prec: u32) -> Result<Self> {
        let m = modp::modulus(p, prec)?;
        Self::new(p, modp::from_i64(v, m), prec, 0)
    }

    fn normalized(mut self) -> Self {
        while self.shift > 0 && self.prec > 0 && self.digits % self.p == 0 {
            self.digits /= self.p;
            self.prec -= 1;
            self.shift -= 1;
        }
        self
    }

    pub fn digits(&self) -> u64 {
        self.digits
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// Exponent `N` such that the value is known modulo `p^N`.
    pub fn absolute_precision(&self) -> i64 {
        self.prec as i64 - self.shift as i64
    }

    /// Whether the value is known to lie in `Z_p`.
    pub fn is_integral(&self) -> bool {
        self.shift == 0
    }

    /// Whether the value is zero to its known precision.
    pub fn is_zero(&self) -> bool {
        self.digits == 0
    }

    /// `self / p^e`.
    pub fn div_p_pow(&self, e: u32) -> Self {
        PadicFixed { shift: self.shift + e, ..*self }.normalized()
    }

    fn at_shift(&self, s: u32) -> (u64, u32) {
        let up = s - self.shift;
        (self.digits * self.p.pow(up), self.prec + up)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.p, other.p);
        let s = self.shift.max(other.shift);
        let (a, pa) = self.at_shift(s);
        let (b, pb) = other.at_shift(s);
        let prec = pa.min(pb);
        let m = modp::modulus(self.p, prec)?;
        Self::new(self.p, modp::add_mod(a % m, b % m, m), prec, s)
    }

    pub fn neg(&self) -> Self {
        let m = self.p.pow(self.prec);
        PadicFixed { digits: modp::neg_mod(self.digits, m), ..*self }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Equality to the common known precision.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }
}

impl fmt::Debug for PadicFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{} + O({}^{})", self.digits, self.p, self.prec)
        } else {
            write!(f, "{}/{}^{} + O({}^{})", self.digits, self.p, self.shift, self.p, self.absolute_precision())
        }
    }
}

impl fmt::Display for PadicFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
