use std::collections::HashMap;

use serde::Serialize;

use super::{CongruenceLab, CongruenceReport, Condition, EdgeKind, Evidence, Locator, Verdict};
use crate::character::Character;
use crate::cyclotomic::TruncCyclo;
use crate::error::{Error, Result};
use crate::group::Section;
use crate::group_ring::TupleSource;
use crate::logdet::PadicFixed;

/// Two members of the full set related by a projection `W/C → W/C'` or an
/// inclusion `W'/C ⊆ W/C` (kind [`EdgeKind::Norm`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FunctorialPair {
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
}

impl CongruenceLab {
    pub fn functorial_pairs(&self) -> Vec<FunctorialPair> {
        let members = self.full.members();
        let mut out = Vec::new();
        for (i, si) in members.iter().enumerate() {
            for (j, sj) in members.iter().enumerate() {
                if i == j {
                    continue;
                }
                if si.top() == sj.top() && si.bottom().is_subset_of(sj.bottom()) {
                    out.push(FunctorialPair { kind: EdgeKind::Projection, from: i, to: j });
                } else if si.bottom() == sj.bottom() && sj.top().is_subset_of(si.top()) {
                    out.push(FunctorialPair { kind: EdgeKind::Norm, from: i, to: j });
                }
            }
        }
        out
    }

    /// For every pair `U → V`: `Ξ_U(infl ρ) = Ξ_V(ρ)` along projections,
    /// `Ξ_U(Ind ρ) = Ξ_V(ρ)` along inclusions, and `pr(t_U) = t_V` along
    /// projections.
    pub fn check_functoriality(&self, src: &dyn TupleSource) -> Result<Vec<CongruenceReport>> {
        let pairs = self.functorial_pairs();
        let mut xi: HashMap<usize, Vec<TruncCyclo>> = HashMap::new();
        let mut t: HashMap<usize, Vec<PadicFixed>> = HashMap::new();
        let mut out = Vec::new();
        for (pi, pair) in pairs.iter().enumerate() {
            for m in [pair.from, pair.to] {
                if !xi.contains_key(&m) {
                    let ctx = self.context(m)?;
                    let values = ctx.xi_all(src)?;
                    t.insert(m, ctx.trace_invert(&ctx.bold_l(&values)?)?);
                    xi.insert(m, values);
                }
            }
            out.extend(self.xi_pair(pi, pair, &xi[&pair.from], &xi[&pair.to], src.k())?);
            if pair.kind == EdgeKind::Projection {
                out.push(self.t_pair(pi, pair, &t[&pair.from], &t[&pair.to], src.k())?);
            }
        }
        Ok(out)
    }

    fn xi_pair(
        &self,
        pi: usize,
        pair: &FunctorialPair,
        xi_u: &[TruncCyclo],
        xi_v: &[TruncCyclo],
        k: u32,
    ) -> Result<Vec<CongruenceReport>> {
        let (su, sv) = (&self.full.members()[pair.from], &self.full.members()[pair.to]);
        let (cu, cv) = (self.context(pair.from)?, self.context(pair.to)?);
        let ug = su.group();
        let word = match pair.kind {
            EdgeKind::Projection => "pr",
            EdgeKind::Norm => "N",
        };
        let local = match pair.kind {
            EdgeKind::Norm => Some(Section::subgroup(ug, su.proj_subgroup(sv.top()))?),
            EdgeKind::Projection => None,
        };
        let mut out = Vec::new();
        for (i, rho) in cv.irreducibles().iter().enumerate() {
            let lhs = match &local {
                None => {
                    let values = (0..ug.num_classes())
                        .map(|c| rho.at(sv.proj_unchecked(su.lift(ug.class_rep(c)))).clone())
                        .collect();
                    let inflated = Character::new(ug.clone(), values)?;
                    let j = cu
                        .irreducibles()
                        .iter()
                        .position(|x| *x == inflated)
                        .ok_or_else(|| Error::Engine("inflation of an irreducible is not irreducible".into()))?;
                    xi_u[j].clone()
                }
                Some(loc) => {
                    let h = loc.group();
                    let values = (0..h.num_classes())
                        .map(|c| rho.at(sv.proj_unchecked(su.lift(loc.lift(h.class_rep(c))))).clone())
                        .collect();
                    let induced = Character::new(h.clone(), values)?.induce(ug, loc);
                    cu.eval_virtual(xi_u, &cu.decompose(&induced)?)?
                }
            };
            let rhs = &xi_v[i];
            let ok = lhs == *rhs;
            let evidence = if ok {
                Evidence::Equal { value: lhs.coeffs().to_vec() }
            } else {
                Evidence::Mismatch { lhs: lhs.coeffs().to_vec(), rhs: rhs.coeffs().to_vec() }
            };
            out.push(CongruenceReport {
                condition: Condition::Functorial,
                group: self.g.name().to_string(),
                instance: format!("Xi {word} {} -> {} rho#{i}", self.full.label(pair.from), self.full.label(pair.to)),
                locator: Locator::Functorial { pair: pi, irreducible: i },
                p: self.g.p(),
                k,
                verdict: if ok { Verdict::Holds } else { Verdict::Fails },
                evidence,
            });
        }
        Ok(out)
    }

    fn t_pair(&self, pi: usize, pair: &FunctorialPair, t_u: &[PadicFixed], t_v: &[PadicFixed], k: u32) -> Result<CongruenceReport> {
        let (su, sv) = (&self.full.members()[pair.from], &self.full.members()[pair.to]);
        let (ug, vg) = (su.group(), sv.group());
        let p = self.g.p();
        let mut pushed: Vec<Option<PadicFixed>> = vec![None; vg.num_classes()];
        for (c, x) in t_u.iter().enumerate() {
            let d = vg.class_of(sv.proj_unchecked(su.lift(ug.class_rep(c))));
            pushed[d] = Some(match pushed[d] {
                None => *x,
                Some(acc) => acc.add(x)?,
            });
        }
        let pushed = pushed
            .into_iter()
            .map(|x| x.map_or_else(|| PadicFixed::from_int(p, 0, k), Ok))
            .collect::<Result<Vec<_>>>()?;
        let mut ok = true;
        for (a, b) in pushed.iter().zip(t_v) {
            ok &= a.agrees_with(b)?;
        }
        Ok(CongruenceReport {
            condition: Condition::Functorial,
            group: self.g.name().to_string(),
            instance: format!("t pr {} -> {}", self.full.label(pair.from), self.full.label(pair.to)),
            locator: Locator::FunctorialTrace { pair: pi },
            p,
            k,
            verdict: if ok { Verdict::Holds } else { Verdict::Fails },
            evidence: Evidence::Padic {
                lhs: pushed.iter().map(|x| x.to_string()).collect(),
                rhs: t_v.iter().map(|x| x.to_string()).collect(),
            },
        })
    }
}
