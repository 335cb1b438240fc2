//! Arithmetic in `Z/p^k` with `p^k < 2^63`.

use num_integer::Integer;

use crate::error::{Error, Result};

/// `p^k`, failing when it does not fit comfortably in a `u64`.
pub fn modulus(p: u64, k: u32) -> Result<u64> {
    let m = (p as u128).checked_pow(k).filter(|&m| m < (1u128 << 62));
    m.map(|m| m as u64)
        .ok_or_else(|| Error::InsufficientPrecision(format!("{p}^{k} exceeds the 62-bit modulus limit")))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub fn from_i64(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

/// Symmetric representative in `(-m/2, m/2]`.
pub fn to_i64(x: u64, m: u64) -> i64 {
    if x > m / 2 {
        x as i64 - m as i64
    } else {
        x as i64
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    (g.gcd == 1).then(|| g.x.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of a nonzero residue; `k` for zero.
pub fn val(x: u64, p: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut v = 0;
    let mut x = x;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Solves `M x = b` over `Z/p^k` for a matrix that is invertible mod `p`.
pub fn solve_unit(mut mat: Vec<Vec<u64>>, mut rhs: Vec<u64>, p: u64, m: u64) -> Option<Vec<u64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| mat[r][col] % p != 0)?;
        mat.swap(col, piv);
        rhs.swap(col, piv);
        let inv = inv_mod(mat[col][col], m)?;
        for j in col..n {
            mat[col][j] = mul_mod(mat[col][j], inv, m);
        }
        rhs[col] = mul_mod(rhs[col], inv, m);
        for r in 0..n {
            if r != col && mat[r][col] != 0 {
                let f = mat[r][col];
                for j in col..n {
                    mat[r][j] = sub_mod(mat[r][j], mul_mod(f, mat[col][j], m), m);
                }
                rhs[r] = sub_mod(rhs[r], mul_mod(f, rhs[col], m), m);
            }
        }
    }
    Some(rhs)
}
