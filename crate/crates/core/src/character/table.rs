use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use super::{linear_exponent_tables, Character};
use crate::cyclotomic::{Cyclotomic, CycloInt};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Section, Subgroup};

/// A pair `(U, φ)` with `Ind_U^G φ` irreducible. `exps[i]` is the exponent
/// of `φ` at the `i`-th smallest element of `U`, with respect to `ζ_n`,
/// `n = exp(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonomialPair {
    pub subgroup: Subgroup,
    pub exps: Vec<u32>,
}

/// Irreducible characters of a group, stored without a back-reference to
/// the group so that the table can be cached on it.
#[derive(Debug)]
pub struct CharacterTable {
    conductor: u32,
    values: Vec<Vec<CycloInt>>,
    monomial: Vec<MonomialPair>,
    num_linear: usize,
    identity_class: usize,
}

impl CharacterTable {
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn num_linear(&self) -> usize {
        self.num_linear
    }

    /// The pair the `i`-th irreducible was induced from.
    pub fn monomial_pair(&self, i: usize) -> &MonomialPair {
        &self.monomial[i]
    }

    pub fn character(&self, g: &Arc<FiniteGroup>, i: usize) -> Character {
        Character::from_parts(g.clone(), self.values[i].clone())
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.values.iter().map(|v| v[self.identity_class].as_integer().unwrap_or(0)).collect()
    }

    pub fn to_json(&self, g: &FiniteGroup) -> CharacterTableJson {
        let classes = g
            .conjugacy_classes()
            .iter()
            .map(|c| ClassJson { representative: c[0], size: c.len() })
            .collect();
        let id = g.class_of(g.identity());
        let characters = self
            .values
            .iter()
            .map(|row| CharacterJson {
                degree: row[id].as_integer().unwrap_or(0),
                values: row.iter().map(CycloInt::to_cyclotomic).collect(),
            })
            .collect();
        CharacterTableJson { format_version: 1, group: g.name().to_string(), conductor: self.conductor, classes, characters }
    }

    /// One row per irreducible: `index,degree,<value per class>`.
    pub fn to_csv(&self, g: &FiniteGroup) -> String {
        let mut out = String::from("index,degree");
        for c in 0..g.num_classes() {
            out.push_str(&format!(",class_{}", g.class_rep(c)));
        }
        out.push('\n');
        let id = g.class_of(g.identity());
        for (i, row) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{}", row[id].as_integer().unwrap_or(0)));
            for v in row {
                out.push_str(&format!(",\"{v}\""));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassJson {
    pub representative: usize,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterJson {
    pub degree: i64,
    pub values: Vec<Cyclotomic>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTableJson {
    pub format_version: u32,
    pub group: String,
    pub conductor: u32,
    pub classes: Vec<ClassJson>,
    pub characters: Vec<CharacterJson>,
}

/// `Σ_c |c| χ(c) conj χ(c)`, which equals `|G|` exactly for irreducibles.
fn weighted_norm(g: &FiniteGroup, values: &[CycloInt]) -> Option<i64> {
    let mut acc = CycloInt::zero(values[0].conductor());
    for (c, class) in g.conjugacy_classes().iter().enumerate() {
        acc = &acc + &(&values[c] * &values[c].conj()).scale(class.len() as i64);
    }
    acc.as_integer()
}

fn compute(g: &FiniteGroup) -> Result<CharacterTable> {
    let n = g.exponent() as u32;
    let order = g.order() as i64;
    let nc = g.num_classes();
    let reps: Vec<usize> = (0..nc).map(|c| g.class_rep(c)).collect();

    let mut values = Vec::new();
    let mut monomial = Vec::new();
    let mut seen: HashSet<Vec<CycloInt>> = HashSet::new();
    let whole = g.whole();
    for exps in linear_exponent_tables(g, n) {
        let row: Vec<CycloInt> = reps.iter().map(|&r| CycloInt::root(n, exps[r] as i64)).collect();
        seen.insert(row.clone());
        values.push(row);
        monomial.push(MonomialPair { subgroup: whole, exps });
    }
    let num_linear = values.len();
    let mut sum_sq = num_linear as i64;

    // A degree-d irreducible is induced from a subgroup of index d, and
    // d² <= [G : Z(G)].
    let bound = order / g.center().len() as i64;
    let mut subs: Vec<Subgroup> = g
        .subgroups(true)
        .into_iter()
        .filter(|u| {
            let idx = (g.order() / u.len()) as i64;
            idx > 1 && idx * idx <= bound
        })
        .collect();
    subs.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));

    let mut found: Vec<(i64, Vec<CycloInt>, MonomialPair)> = Vec::new();
    'outer: for u in subs {
        if sum_sq == order {
            break;
        }
        let sec = Section::subgroup(g, u)?;
        let ug = sec.group();
        let transversal = g.right_transversal(u);
        // hits[c]: U-indices of the conjugates t g t⁻¹ lying in U
        let hits: Vec<Vec<usize>> = reps
            .iter()
            .map(|&r| {
                transversal
                    .iter()
                    .map(|&t| g.conj(t, r))
                    .filter(|&x| u.contains(x))
                    .map(|x| sec.proj_unchecked(x))
                    .collect()
            })
            .collect();
        for exps in linear_exponent_tables(ug, n) {
            let row: Vec<CycloInt> = hits
                .iter()
                .map(|h| {
                    let mut counts = vec![0i64; n as usize];
                    for &x in h {
                        counts[exps[x] as usize] += 1;
                    }
                    CycloInt::from_exponent_counts(n, &counts)
                })
                .collect();
            if weighted_norm(g, &row) != Some(order) || seen.contains(&row) {
                continue;
            }
            let d = row[g.class_of(g.identity())].as_integer().expect("degree is rational");
            sum_sq += d * d;
            seen.insert(row.clone());
            found.push((d, row, MonomialPair { subgroup: u, exps }));
            if sum_sq == order {
                break 'outer;
            }
        }
    }
    if sum_sq != order {
        return Err(Error::Engine(format!(
            "character table of {} incomplete: Σ χ(1)² = {sum_sq}, |G| = {order}",
            g.name()
        )));
    }
    found.sort_by_key(|(d, _, _)| *d);
    for (_, row, pair) in found {
        values.push(row);
        monomial.push(pair);
    }
    Ok(CharacterTable { conductor: n, values, monomial, num_linear, identity_class: g.class_of(g.identity()) })
}

/// The cached character table of `g`.
pub fn character_table(g: &Arc<FiniteGroup>) -> Result<Arc<CharacterTable>> {
    if let Some(t) = g.char_table.get() {
        return Ok(t.clone());
    }
    let t = Arc::new(compute(g)?);
    Ok(g.char_table.get_or_init(|| t).clone())
}

/// All irreducible characters: linear ones first (trivial first), then the
/// rest by increasing degree.
pub fn irreducibles(g: &Arc<FiniteGroup>) -> Result<Vec<Character>> {
    let t = character_table(g)?;
    Ok((0..t.len()).map(|i| t.character(g, i)).collect())
}
