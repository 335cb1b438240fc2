use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{catalog_entry, FiniteGroup, MAX_ORDER};
use crate::error::{Error, Result};

/// JSON description of a group.
///
/// ```json
/// {"kind": "catalog", "name": "heisenberg", "p": 3}
/// {"kind": "table", "p": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]}
/// {"kind": "permutation", "p": 2, "generators": [[1,2,3,0],[3,2,1,0]]}
/// {"kind": "direct_product", "factors": [...]}
/// ```
///
/// Permutations are image lists, multiplied as functions: `(ab)(x) = a(b(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        p: u64,
        table: Vec<Vec<usize>>,
    },
    Catalog {
        name: String,
        p: u64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<u32>,
    },
    Permutation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        p: u64,
        generators: Vec<Vec<usize>>,
    },
    DirectProduct {
        factors: Vec<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn catalog(name: &str, p: u64, params: &[u32]) -> Self {
        GroupSpec::Catalog { name: name.to_string(), p, params: params.to_vec() }
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Table { name, p, table } => {
            FiniteGroup::from_table(name.clone().unwrap_or_else(|| "table".into()), *p, table.clone())
        }
        GroupSpec::Catalog { name, p, params } => catalog_entry(name, *p, params),
        GroupSpec::Permutation { name, p, generators } => {
            from_permutations(name.clone().unwrap_or_else(|| "perm".into()), *p, generators)
        }
        GroupSpec::DirectProduct { factors } => {
            let mut it = factors.iter();
            let first = it.next().ok_or_else(|| Error::InvalidGroup("empty product".into()))?;
            let mut acc = build_group(first)?;
            for f in it {
                acc = direct_product(&acc, &build_group(f)?)?;
            }
            Ok(acc)
        }
    }
}

/// `G × H`, with the pair `(g, h)` stored at index `g + |G| h`.
pub(crate) fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    if g.p() != h.p() {
        return Err(Error::InvalidGroup("factors belong to different primes".into()));
    }
    let n = g.order() * h.order();
    if n > MAX_ORDER {
        return Err(Error::CapExceeded { order: n, cap: MAX_ORDER });
    }
    let m = g.order();
    let name = format!("{}x{}", g.name(), h.name());
    Ok(FiniteGroup::trusted(name, g.p(), n, |a, b| {
        g.mul(a % m, b % m) + m * h.mul(a / m, b / m)
    }))
}

fn from_permutations(name: String, p: u64, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
    let degree = gens.first().map_or(0, Vec::len);
    for g in gens {
        let mut seen = vec![false; degree];
        if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::InvalidGroup("generator is not a permutation of 0..n".into()));
        }
    }
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
    let id: Vec<usize> = (0..degree).collect();
    let mut elems = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        head += 1;
        for g in gens {
            let y = compose(&x, g);
            if !index.contains_key(&y) {
                if elems.len() == MAX_ORDER {
                    return Err(Error::CapExceeded { order: MAX_ORDER + 1, cap: MAX_ORDER });
                }
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
    }
    elems.sort();
    let index: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
        .collect();
    FiniteGroup::from_table(name, p, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_generators_of_d8() {
        let spec = GroupSpec::Permutation {
            name: None,
            p: 2,
            generators: vec![vec![1, 2, 3, 0], vec![3, 2, 1, 0]],
        };
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.identity(), 0);
        assert!(!g.is_abelian());
        assert_eq!(g.center().len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let js = r#"{"kind":"catalog","name":"heisenberg","p":3}"#;
        let spec: GroupSpec = serde_json::from_str(js).unwrap();
        assert_eq!(spec, GroupSpec::catalog("heisenberg", 3, &[]));
        assert_eq!(serde_json::to_string(&spec).unwrap(), js);
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order(), 27);
    }

    #[test]
    fn direct_product_of_specs() {
        let spec = GroupSpec::DirectProduct {
            factors: vec![GroupSpec::catalog("heisenberg", 3, &[]), GroupSpec::catalog("cyclic", 3, &[1])],
        };
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order(), 81);
        assert_eq!(g.center().len(), 9);
    }

    #[test]
    fn mixed_primes_are_rejected() {
        let spec = GroupSpec::DirectProduct {
            factors: vec![GroupSpec::catalog("cyclic", 3, &[1]), GroupSpec::catalog("cyclic", 2, &[1])],
        };
        assert!(build_group(&spec).is_err());
    }

    #[test]
    fn non_permutation_is_rejected() {
        let spec = GroupSpec::Permutation { name: None, p: 2, generators: vec![vec![0, 0]] };
        assert!(build_group(&spec).is_err());
    }
}
