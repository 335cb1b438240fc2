use serde::Serialize;

use super::spec::direct_product;
use super::{is_prime, FiniteGroup, GroupSpec, MAX_ORDER};
use crate::error::{Error, Result};

/// A named built-in group.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    /// Short display name, e.g. `Heis3` or `C9xC3`.
    pub key: String,
    pub p: u64,
    pub order: usize,
    pub spec: GroupSpec,
}

impl CatalogEntry {
    pub fn build(&self) -> FiniteGroup {
        super::build_group(&self.spec).expect("catalog entries are valid")
    }
}

fn pow(p: u64, a: u32) -> usize {
    (p as usize).pow(a)
}

fn check_order(p: u64, log: u32) -> Result<usize> {
    let n = (p as u128).checked_pow(log).unwrap_or(u128::MAX);
    if n > MAX_ORDER as u128 {
        return Err(Error::CapExceeded { order: n.min(usize::MAX as u128) as usize, cap: MAX_ORDER });
    }
    Ok(n as usize)
}

fn cyclic(p: u64, a: u32) -> Result<FiniteGroup> {
    let n = check_order(p, a)?;
    Ok(FiniteGroup::trusted(format!("C{n}"), p, n, |x, y| (x + y) % n))
}

fn abelian(p: u64, exps: &[u32]) -> Result<FiniteGroup> {
    check_order(p, exps.iter().sum())?;
    let mut acc = cyclic(p, 0)?;
    for (i, &a) in exps.iter().enumerate() {
        let c = cyclic(p, a)?;
        acc = if i == 0 { c } else { direct_product(&acc, &c)? };
    }
    Ok(acc)
}

/// Upper unitriangular 3x3 matrices over `F_p`: `(a, b, c)` at `a + p b + p² c`.
fn heisenberg(p: u64) -> Result<FiniteGroup> {
    let n = check_order(p, 3)?;
    let q = p as usize;
    let split = |x: usize| (x % q, x / q % q, x / (q * q));
    Ok(FiniteGroup::trusted(format!("Heis{p}"), p, n, |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        (a + a2) % q + q * ((b + b2) % q) + q * q * ((c + c2 + a * b2) % q)
    }))
}

/// `C_{p^a} ⋊ C_{p^b}` where the generator of the second factor acts by
/// `x ↦ x^r`; the pair `(x, y)` sits at `x + p^a y`.
fn semidirect(p: u64, a: u32, b: u32, r: u64, name: String) -> Result<FiniteGroup> {
    let n = check_order(p, a + b)?;
    let m = pow(p, a) as u64;
    let l = pow(p, b);
    if m > 1 && (r % p == 0 || mod_pow(r, l as u64, m) != 1 % m) {
        return Err(Error::InvalidGroup(format!("x -> x^{r} is not an automorphism of order dividing {l}")));
    }
    let rpow: Vec<u64> = (0..l).map(|y| mod_pow(r, y as u64, m)).collect();
    let m = m as usize;
    Ok(FiniteGroup::trusted(name, p, n, |s, t| {
        let (x1, y1) = (s % m, s / m);
        let (x2, y2) = (t % m, t / m);
        (x1 + rpow[y1] as usize * x2) % m + m * ((y1 + y2) % l)
    }))
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Generalized quaternion group of order `2^n`: `x^i y^j` at `i + m j`.
fn quaternion(n: u32) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidGroup("quaternion groups need order at least 8".into()));
    }
    let order = check_order(2, n)?;
    let m = order / 2;
    Ok(FiniteGroup::trusted(format!("Q{order}"), 2, order, |s, t| {
        let (i1, j1) = (s % m, s / m);
        let (i2, j2) = (t % m, t / m);
        let i = if j1 == 0 { i1 + i2 } else { i1 + m - i2 };
        if j1 == 1 && j2 == 1 {
            (i + m / 2) % m
        } else {
            i % m + m * (j1 ^ j2)
        }
    }))
}

/// Builds a catalog group by family name and integer parameters.
///
/// | family | params | group |
/// |---|---|---|
/// | `cyclic` | `[a]` | `C_{p^a}` |
/// | `abelian` | `[a1, a2, ...]` | `C_{p^a1} × C_{p^a2} × ...` |
/// | `elementary_abelian` | `[n]` | `C_p^n` |
/// | `heisenberg`, `extraspecial` | `[]` | order `p³`, exponent `p` for odd `p` |
/// | `modular` | `[]` | `C_{p²} ⋊ C_p`, order `p³`, exponent `p²` |
/// | `semidirect` | `[a, b, r]` | `C_{p^a} ⋊_r C_{p^b}` |
/// | `dihedral` | `[n]` | dihedral of order `2^n` (`p = 2`) |
/// | `quaternion` | `[n]` | generalized quaternion of order `2^n` (`p = 2`) |
pub fn catalog_entry(name: &str, p: u64, params: &[u32]) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidGroup(format!("{p} is not prime")));
    }
    let arity = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidGroup(format!("`{name}` takes {k} parameter(s), got {}", params.len())))
        }
    };
    match name {
        "cyclic" => {
            arity(1)?;
            cyclic(p, params[0])
        }
        "abelian" => abelian(p, params),
        "elementary_abelian" => {
            arity(1)?;
            abelian(p, &vec![1; params[0] as usize])
        }
        "heisenberg" | "extraspecial" => {
            arity(0)?;
            heisenberg(p)
        }
        "modular" => {
            arity(0)?;
            semidirect(p, 2, 1, 1 + p, format!("Mod{p}"))
        }
        "semidirect" => {
            arity(3)?;
            let (a, b, r) = (params[0], params[1], params[2] as u64);
            semidirect(p, a, b, r, format!("C{}:{r}C{}", pow(p, a), pow(p, b)))
        }
        "dihedral" | "quaternion" if p != 2 => {
            Err(Error::InvalidGroup(format!("`{name}` is only defined for p = 2")))
        }
        "dihedral" => {
            arity(1)?;
            let n = params[0];
            if n < 2 {
                return Err(Error::InvalidGroup("dihedral groups need order at least 4".into()));
            }
            let m = pow(2, n - 1) as u64;
            semidirect(2, n - 1, 1, m - 1, format!("D{}", 2 * m))
        }
        "quaternion" => {
            arity(1)?;
            quaternion(params[0])
        }
        _ => Err(Error::UnknownCatalog(name.to_string())),
    }
}

fn entry(spec: GroupSpec) -> CatalogEntry {
    let g = super::build_group(&spec).expect("catalog entries are valid");
    CatalogEntry { key: g.name().to_string(), p: g.p(), order: g.order(), spec }
}

/// The built-in groups, ordered by prime and then by order.
pub fn catalog() -> Vec<CatalogEntry> {
    let c = GroupSpec::catalog;
    let prod = |f: Vec<GroupSpec>| GroupSpec::DirectProduct { factors: f };
    let mut specs = vec![
        c("cyclic", 2, &[1]),
        c("cyclic", 2, &[2]),
        c("abelian", 2, &[1, 1]),
        c("cyclic", 2, &[3]),
        c("abelian", 2, &[2, 1]),
        c("abelian", 2, &[1, 1, 1]),
        c("dihedral", 2, &[3]),
        c("quaternion", 2, &[3]),
        c("cyclic", 3, &[1]),
        c("cyclic", 3, &[2]),
        c("abelian", 3, &[1, 1]),
        c("cyclic", 3, &[3]),
        c("abelian", 3, &[2, 1]),
        c("abelian", 3, &[1, 1, 1]),
        c("heisenberg", 3, &[]),
        c("modular", 3, &[]),
        c("cyclic", 3, &[4]),
        c("abelian", 3, &[3, 1]),
        c("abelian", 3, &[2, 2]),
        c("abelian", 3, &[2, 1, 1]),
        c("abelian", 3, &[1, 1, 1, 1]),
        prod(vec![c("heisenberg", 3, &[]), c("cyclic", 3, &[1])]),
        prod(vec![c("modular", 3, &[]), c("cyclic", 3, &[1])]),
        c("cyclic", 5, &[1]),
        c("cyclic", 5, &[2]),
        c("abelian", 5, &[1, 1]),
        c("heisenberg", 5, &[]),
        c("modular", 5, &[]),
    ];
    specs.dedup();
    specs.into_iter().map(entry).collect()
}

/// Looks up a catalog group by its display name.
pub fn catalog_by_key(key: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.key == key)
        .ok_or_else(|| Error::UnknownCatalog(key.to_string()))
}

impl FiniteGroup {
    /// Invariants `[a1 ≥ a2 ≥ ...]` with `G ≅ ∏ C_{p^ai}`, for abelian `G`.
    pub fn abelian_invariants(&self) -> Option<Vec<u32>> {
        if !self.is_abelian() {
            return None;
        }
        let p = self.p();
        // d[i] = log_p #{x : x^{p^i} = 1}
        let mut d = vec![0u32];
        let mut q = 1u64;
        loop {
            q *= p;
            let cnt = self.elements().filter(|&x| self.pow(x, q) == self.identity()).count();
            let l = super::prime_power_exponent(cnt, p).expect("p-subgroup");
            d.push(l);
            if cnt == self.order() {
                break;
            }
        }
        // number of cyclic factors of exponent ≥ i is d[i] - d[i-1]
        let ge: Vec<u32> = d.windows(2).map(|w| w[1] - w[0]).collect();
        let mut inv = Vec::new();
        for (i, &c) in ge.iter().enumerate() {
            let next = ge.get(i + 1).copied().unwrap_or(0);
            for _ in 0..(c - next) {
                inv.push(i as u32 + 1);
            }
        }
        inv.sort_unstable_by(|a, b| b.cmp(a));
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Section;

    #[test]
    fn every_catalog_group_passes_table_validation() {
        for e in catalog() {
            let g = e.build();
            let rebuilt = FiniteGroup::from_table(e.key.clone(), e.p, g.table_rows()).unwrap();
            assert_eq!(rebuilt, g, "{}", e.key);
            assert_eq!(g.identity(), 0);
        }
    }

    #[test]
    fn heisenberg_center_has_order_p_by_brute_force() {
        for p in [3, 5] {
            let g = catalog_entry("heisenberg", p, &[]).unwrap();
            let n = g.order();
            let brute = (0..n)
                .filter(|&z| (0..n).all(|x| g.mul(x, z) == g.mul(z, x)))
                .count();
            assert_eq!(brute, p as usize);
            assert_eq!(g.exponent(), p as usize);
        }
    }

    #[test]
    fn order_27_nonabelian_groups_have_exponents_3_and_9() {
        let nonab: Vec<_> = catalog()
            .into_iter()
            .filter(|e| e.order == 27)
            .map(|e| e.build())
            .filter(|g| !g.is_abelian())
            .map(|g| g.exponent())
            .collect();
        assert_eq!(nonab, vec![3, 9]);
    }

    #[test]
    fn dihedral_and_quaternion_are_distinguished_by_involutions() {
        let d = catalog_entry("dihedral", 2, &[3]).unwrap();
        let q = catalog_entry("quaternion", 2, &[3]).unwrap();
        let inv = |g: &FiniteGroup| g.elements().filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(inv(&d), 5);
        assert_eq!(inv(&q), 1);
    }

    #[test]
    fn abelian_invariants_round_trip() {
        let g = catalog_entry("abelian", 3, &[1, 2, 1]).unwrap();
        assert_eq!(g.abelian_invariants(), Some(vec![2, 1, 1]));
        let h = catalog_entry("heisenberg", 3, &[]).unwrap();
        let ab = Section::abelianization(&h);
        assert_eq!(ab.group().abelian_invariants(), Some(vec![1, 1]));
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(matches!(catalog_entry("nope", 3, &[]), Err(Error::UnknownCatalog(_))));
        assert!(catalog_entry("semidirect", 3, &[2, 1, 2]).is_err());
        assert!(catalog_entry("cyclic", 3, &[5]).is_err());
        assert!(catalog_entry("dihedral", 3, &[3]).is_err());
    }
}
