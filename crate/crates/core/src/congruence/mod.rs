//! Congruence checks on tuples `(λ_U)` indexed by abelian subquotients.
//!
//! A [`CongruenceLab`] is built once per group. It precomputes the finite
//! instance tables (edges between abelian members, conjugation transports,
//! Möbius-weighted transfer terms, index-`p` subgroups) and caches the Smith
//! forms of the conjugation trace `σ` per precision, so that sweeps over many
//! tuples only pay for the tuple-dependent arithmetic.
//!
//! Every check returns [`CongruenceReport`]s. A report that holds carries a
//! witness (the common value, or a `σ`-preimage that has been multiplied back
//! out); a report that fails carries the two disagreeing sides or a linear
//! functional that kills the image of `σ` but not the tested element.

mod adversarial;
mod functorial;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

pub use adversarial::AdversarialCase;
pub use functorial::FunctorialPair;

use crate::brauer::{character_poset, induce_pair, linear_exponents, CharacterPair};
use crate::character::{linear_characters, Character};
use crate::error::{Error, Result};
use crate::group::{transfer_element, FiniteGroup, Section, Subgroup, SubquotientSet};
use crate::group_ring::{theta, transversal_within, GroupRingElement, SigmaSolver, TupleSource, UnitTuple};
use crate::logdet::DetContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    RW1,
    RW2,
    RW3,
    RW3a,
    RW4,
    Wall,
    Snaith,
    Functorial,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Candidate,
    Rejected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Candidate => "candidate",
            Verdict::Rejected => "rejected",
        })
    }
}

/// Where in the lab's instance tables a report comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Locator {
    Edge { index: usize },
    Conjugation { member: usize },
    Rw3 { instance: usize },
    Rw3a { instance: usize },
    Wall { index: usize },
    Rw4 { member: usize, irreducible: usize },
    Snaith { irreducible: usize },
    Functorial { pair: usize, irreducible: usize },
    FunctorialTrace { pair: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Both sides agree on this value.
    Equal { value: Vec<u64> },
    Mismatch { lhs: Vec<u64>, rhs: Vec<u64> },
    /// `σ(preimage) = target`, re-verified by multiplication.
    SigmaPreimage { target: Vec<u64>, preimage: Vec<u64> },
    /// `functional ∘ σ = 0` and `functional(target) = residue ≠ 0`.
    SigmaObstruction { target: Vec<u64>, functional: Vec<u64>, residue: u64 },
    /// Values of the same quantity along several routes.
    Values { labels: Vec<String>, values: Vec<Vec<u64>> },
    /// Class functions with `p`-adic values, printed as `d/p^s + O(p^N)`.
    Padic { lhs: Vec<String>, rhs: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub condition: Condition,
    pub group: String,
    pub instance: String,
    pub locator: Locator,
    pub p: u64,
    pub k: u32,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl CongruenceReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Holds | Verdict::Candidate)
    }
}

/// Aggregate of every tuple-level condition.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub group: String,
    pub p: u64,
    pub k: u32,
    pub verdict: Verdict,
    pub checked: usize,
    pub reports: Vec<CongruenceReport>,
}

impl MembershipReport {
    pub fn failures(&self) -> impl Iterator<Item = &CongruenceReport> {
        self.reports.iter().filter(|r| !r.holds())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// `pr: W/C → W/C'` for `C ⊆ C'`.
    Projection,
    /// `N: Λ(W/C) → Λ(W'/C)` for `W' ⊆ W`.
    Norm,
}

/// A map between two abelian members along which RW1 is tested.
#[derive(Debug, Clone)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
    map: Vec<usize>,
    local: Option<Section>,
}

/// An admissible pair `(U, A)`: `U` a member of the full set, `A` an
/// abelian normal subgroup of the group `U`.
#[derive(Debug, Clone)]
pub struct Rw3Instance {
    pub member: usize,
    pub a: Subgroup,
    pub index: usize,
    sec_a: Section,
    terms: Vec<Rw3Term>,
}

impl Rw3Instance {
    pub fn is_index_p(&self, p: u64) -> bool {
        self.index as u64 == p
    }

    /// `A` as a section `A/[A,A]` of the ambient group, where σ values live.
    pub fn section(&self) -> &Section {
        &self.sec_a
    }

    /// The abelian member holding `λ_A`, when `[U:A] = p`.
    pub fn a_entry(&self) -> Option<usize> {
        self.terms.iter().find(|t| t.is_bottom).map(|t| t.entry)
    }
}

#[derive(Debug, Clone)]
struct Rw3Term {
    entry: usize,
    mu: i64,
    is_bottom: bool,
    is_top: bool,
    ver: Vec<usize>,
}

/// `G' ⊆ G` of index `p`, with `ver: G^ab → G'^ab` as an index table.
#[derive(Debug, Clone)]
pub struct WallInstance {
    pub subgroup: Subgroup,
    sec: Section,
    gab: Section,
    ver: Vec<usize>,
}

impl WallInstance {
    /// `G'^ab` as a section of the ambient group.
    pub fn section(&self) -> &Section {
        &self.sec
    }
}

struct Transport {
    to: usize,
    by: usize,
    map: Vec<usize>,
}

/// A labelled Brauer expression `Σ n (V, φ)` of a character.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub label: String,
    pub terms: Vec<(CharacterPair, i64)>,
}

type SolverCache = Mutex<HashMap<(usize, u32), Arc<SigmaSolver>>>;

pub struct CongruenceLab {
    g: Arc<FiniteGroup>,
    full: Arc<SubquotientSet>,
    ab: Arc<SubquotientSet>,
    edges: OnceLock<Result<Vec<Edge>>>,
    transports: OnceLock<Vec<Vec<Transport>>>,
    rw3: OnceLock<Result<Vec<Rw3Instance>>>,
    walls: OnceLock<Result<Vec<WallInstance>>>,
    contexts: Vec<OnceLock<Result<Arc<DetContext>>>>,
    decompositions: Vec<OnceLock<Result<Vec<Vec<Decomposition>>>>>,
    rw3_solvers: SolverCache,
    wall_solvers: SolverCache,
}

impl fmt::Debug for CongruenceLab {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CongruenceLab").field("group", &self.g.name()).field("members", &self.full.len()).finish()
    }
}

fn sub_label(s: Subgroup) -> String {
    format!("{s:?}")
}

impl CongruenceLab {
    pub fn new(g: &Arc<FiniteGroup>) -> Self {
        let full = Arc::new(SubquotientSet::full(g));
        let ab = Arc::new(full.abelian());
        let n = full.len();
        CongruenceLab {
            g: g.clone(),
            full,
            ab,
            edges: OnceLock::new(),
            transports: OnceLock::new(),
            rw3: OnceLock::new(),
            walls: OnceLock::new(),
            contexts: (0..n).map(|_| OnceLock::new()).collect(),
            decompositions: (0..n).map(|_| OnceLock::new()).collect(),
            rw3_solvers: Mutex::new(HashMap::new()),
            wall_solvers: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn full(&self) -> &Arc<SubquotientSet> {
        &self.full
    }

    pub fn abelian(&self) -> &Arc<SubquotientSet> {
        &self.ab
    }

    pub fn theta_tuple(&self, u: &GroupRingElement) -> Result<UnitTuple> {
        UnitTuple::theta(u, self.ab.clone())
    }

    /// The tuple with every entry equal to `1`.
    pub fn one_tuple(&self, k: u32) -> Result<UnitTuple> {
        let entries = self.ab.members().iter().map(|s| GroupRingElement::one(s.group(), k)).collect::<Result<_>>()?;
        UnitTuple::new(self.ab.clone(), entries)
    }

    fn report(&self, condition: Condition, instance: String, locator: Locator, k: u32, ok: bool, evidence: Evidence) -> CongruenceReport {
        CongruenceReport {
            condition,
            group: self.g.name().to_string(),
            instance,
            locator,
            p: self.g.p(),
            k,
            verdict: if ok { Verdict::Holds } else { Verdict::Fails },
            evidence,
        }
    }

    fn compare(&self, condition: Condition, instance: String, locator: Locator, lhs: &GroupRingElement, rhs: &GroupRingElement) -> CongruenceReport {
        let ok = lhs.coeffs() == rhs.coeffs();
        let evidence = if ok {
            Evidence::Equal { value: lhs.coeffs().to_vec() }
        } else {
            Evidence::Mismatch { lhs: lhs.coeffs().to_vec(), rhs: rhs.coeffs().to_vec() }
        };
        self.report(condition, instance, locator, lhs.k(), ok, evidence)
    }

    fn sigma_report(
        &self,
        condition: Condition,
        instance: String,
        locator: Locator,
        solver: &SigmaSolver,
        y: &GroupRingElement,
    ) -> Result<CongruenceReport> {
        let m = solver.member(y)?;
        if !solver.verify(y, &m) {
            return Err(Error::Engine(format!("{condition} verdict at {instance} failed re-verification")));
        }
        let target = y.coeffs().to_vec();
        let evidence = match (m.witness, m.certificate, m.residue) {
            (Some(preimage), _, _) => Evidence::SigmaPreimage { target, preimage },
            (None, Some(functional), Some(residue)) => Evidence::SigmaObstruction { target, functional, residue },
            _ => return Err(Error::Engine("σ verdict without evidence".into())),
        };
        Ok(self.report(condition, instance, locator, y.k(), m.member, evidence))
    }

    fn check_tuple(&self, t: &UnitTuple) -> Result<()> {
        if !Arc::ptr_eq(t.set(), &self.ab) && t.set().len() != self.ab.len() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    // ---- RW1 ----

    pub fn edges(&self) -> Result<&[Edge]> {
        self.edges.get_or_init(|| self.build_edges()).as_ref().map(|v| v.as_slice()).map_err(Clone::clone)
    }

    fn build_edges(&self) -> Result<Vec<Edge>> {
        let members = self.ab.members();
        let mut out = Vec::new();
        for (i, si) in members.iter().enumerate() {
            for (j, sj) in members.iter().enumerate() {
                if i == j {
                    continue;
                }
                if si.top() == sj.top() && si.bottom().is_subset_of(sj.bottom()) {
                    let map = (0..si.order()).map(|q| sj.proj_unchecked(si.lift(q))).collect();
                    out.push(Edge { kind: EdgeKind::Projection, from: i, to: j, map, local: None });
                } else if si.bottom() == sj.bottom() && sj.top().is_subset_of(si.top()) {
                    let local = Section::subgroup(si.group(), si.proj_subgroup(sj.top()))?;
                    let map = (0..local.order()).map(|r| sj.proj_unchecked(si.lift(local.lift(r)))).collect();
                    out.push(Edge { kind: EdgeKind::Norm, from: i, to: j, map, local: Some(local) });
                }
            }
        }
        Ok(out)
    }

    /// Image of `λ_from` along an edge, as an element over the `to` member.
    pub fn push_along(&self, t: &UnitTuple, e: &Edge) -> Result<GroupRingElement> {
        let to = self.ab.members()[e.to].group();
        let x = t.get(e.from);
        Ok(match (&e.kind, &e.local) {
            (EdgeKind::Projection, _) => x.pushforward(to, |q| e.map[q]),
            (EdgeKind::Norm, Some(local)) => theta(x, local)?.pushforward(to, |r| e.map[r]),
            (EdgeKind::Norm, None) => unreachable!("norm edges carry their section"),
        })
    }

    pub fn check_rw1_edge(&self, t: &UnitTuple, index: usize) -> Result<CongruenceReport> {
        let e = &self.edges()?[index];
        let lhs = self.push_along(t, e)?;
        let word = match e.kind {
            EdgeKind::Projection => "pr",
            EdgeKind::Norm => "N",
        };
        let instance = format!("{word} {} -> {}", self.ab.label(e.from), self.ab.label(e.to));
        Ok(self.compare(Condition::RW1, instance, Locator::Edge { index }, &lhs, t.get(e.to)))
    }

    /// One report per surjection and per inclusion between abelian members.
    pub fn check_rw1(&self, t: &UnitTuple) -> Result<Vec<CongruenceReport>> {
        self.check_tuple(t)?;
        (0..self.edges()?.len()).map(|i| self.check_rw1_edge(t, i)).collect()
    }

    // ---- RW2 ----

    fn transports(&self) -> &[Vec<Transport>] {
        self.transports.get_or_init(|| {
            let g = &self.g;
            let members = self.ab.members();
            members
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut seen: Vec<(usize, Vec<usize>)> = Vec::new();
                    let mut out = Vec::new();
                    for by in g.elements() {
                        let top = g.conjugate_subgroup(by, s.top());
                        let bottom = g.conjugate_subgroup(by, s.bottom());
                        let j = self.ab.position(top, bottom).expect("conjugates of members are members");
                        let target = &members[j];
                        let map: Vec<usize> = (0..s.order()).map(|q| target.proj_unchecked(g.conj(by, s.lift(q)))).collect();
                        if j == i && map.iter().enumerate().all(|(q, &r)| q == r) {
                            continue;
                        }
                        if seen.iter().any(|(j2, m2)| *j2 == j && *m2 == map) {
                            continue;
                        }
                        seen.push((j, map.clone()));
                        out.push(Transport { to: j, by, map });
                    }
                    out
                })
                .collect()
        })
    }

    /// Whether some conjugation moves member `i` or acts on it nontrivially.
    pub fn has_transport(&self, i: usize) -> bool {
        !self.transports()[i].is_empty()
    }

    pub fn check_rw2_member(&self, t: &UnitTuple, i: usize) -> Result<CongruenceReport> {
        let x = t.get(i);
        for tr in &self.transports()[i] {
            let target = t.get(tr.to);
            let moved = x.pushforward(target.group(), |q| tr.map[q]);
            if moved.coeffs() != target.coeffs() {
                let instance = format!("{} by g={} -> {}", self.ab.label(i), tr.by, self.ab.label(tr.to));
                return Ok(self.compare(Condition::RW2, instance, Locator::Conjugation { member: i }, &moved, target));
            }
        }
        Ok(self.compare(Condition::RW2, self.ab.label(i), Locator::Conjugation { member: i }, x, x))
    }

    /// `λ_{gWg⁻¹/gCg⁻¹} = g λ_{W/C} g⁻¹` for every member and every `g`.
    pub fn check_rw2(&self, t: &UnitTuple) -> Result<Vec<CongruenceReport>> {
        self.check_tuple(t)?;
        (0..self.ab.len()).map(|i| self.check_rw2_member(t, i)).collect()
    }

    // ---- RW3 / RW3a ----

    pub fn rw3_instances(&self) -> Result<&[Rw3Instance]> {
        self.rw3.get_or_init(|| self.build_rw3()).as_ref().map(|v| v.as_slice()).map_err(Clone::clone)
    }

    fn build_rw3(&self) -> Result<Vec<Rw3Instance>> {
        let g = &self.g;
        let mut out = Vec::new();
        for (mi, sec) in self.full.members().iter().enumerate() {
            let ug = sec.group();
            let subs = ug.subgroups(false);
            for &a in &subs {
                if !ug.is_normal(a) || !a.iter().all(|x| a.iter().all(|y| ug.mul(x, y) == ug.mul(y, x))) {
                    continue;
                }
                let sec_a = Section::subgroup(ug, a)?;
                let mut terms = Vec::new();
                for &v in subs.iter().filter(|v| a.is_subset_of(**v)) {
                    let mu = ug.mobius_interval(a, v)?;
                    if mu == 0 {
                        continue;
                    }
                    let v_amb = sec.lift_subgroup(v);
                    let bottom = g.closure(sec.bottom().iter().chain(g.commutator_of(v_amb, v_amb).iter()));
                    let entry = self
                        .ab
                        .position(v_amb, bottom)
                        .ok_or_else(|| Error::Uncovered(format!("W{v_amb:?}/C{bottom:?}")))?;
                    let es = &self.ab.members()[entry];
                    let right: Vec<usize> = transversal_within(ug, v, a).into_iter().map(|t| ug.inv(t)).collect();
                    let ver = (0..es.order())
                        .map(|q| sec_a.proj_unchecked(transfer_element(ug, a, &right, sec.proj_unchecked(es.lift(q)))))
                        .collect();
                    terms.push(Rw3Term { entry, mu, is_bottom: v == a, is_top: v.len() == ug.order(), ver });
                }
                out.push(Rw3Instance { member: mi, a, index: ug.order() / a.len(), sec_a, terms });
            }
        }
        Ok(out)
    }

    fn rw3_solver(&self, index: usize, k: u32) -> Result<Arc<SigmaSolver>> {
        if let Some(s) = self.rw3_solvers.lock().expect("solver cache").get(&(index, k)) {
            return Ok(s.clone());
        }
        let inst = &self.rw3_instances()?[index];
        let ug = self.full.members()[inst.member].group();
        let s = Arc::new(SigmaSolver::new(ug, ug.whole(), &inst.sec_a, k)?);
        self.rw3_solvers.lock().expect("solver cache").insert((index, k), s.clone());
        Ok(s)
    }

    fn rw3_label(&self, inst: &Rw3Instance) -> String {
        format!("U={} A={}", self.full.label(inst.member), sub_label(inst.a))
    }

    /// `Σ_{A⊆V⊆U} μ_{U/A}(V/A) ver^V_A(λ_{V^ab})` as an element of `Λ(A)`.
    pub fn rw3_sum(&self, t: &UnitTuple, index: usize) -> Result<GroupRingElement> {
        let inst = &self.rw3_instances()?[index];
        let target = inst.sec_a.group();
        let mut acc = GroupRingElement::zero(target, t.get(0).k())?;
        for term in &inst.terms {
            let v = t.get(term.entry).pushforward(target, |q| term.ver[q]);
            let m = v.modulus();
            acc = &acc + &v.scale(crate::modp::from_i64(term.mu, m));
        }
        Ok(acc)
    }

    pub fn check_rw3(&self, t: &UnitTuple, index: usize) -> Result<CongruenceReport> {
        self.check_tuple(t)?;
        let inst = &self.rw3_instances()?[index];
        let y = self.rw3_sum(t, index)?;
        let solver = self.rw3_solver(index, y.k())?;
        self.sigma_report(Condition::RW3, self.rw3_label(inst), Locator::Rw3 { instance: index }, &solver, &y)
    }

    pub fn check_rw3_all(&self, t: &UnitTuple) -> Result<Vec<CongruenceReport>> {
        (0..self.rw3_instances()?.len()).map(|i| self.check_rw3(t, i)).collect()
    }

    /// `ver^U_A(λ_{U^ab}) − λ_A` for an instance with `[U:A] = p`.
    pub fn rw3a_difference(&self, t: &UnitTuple, index: usize) -> Result<GroupRingElement> {
        let inst = &self.rw3_instances()?[index];
        if !inst.is_index_p(self.g.p()) {
            return Err(Error::Domain("torsion congruence needs [U:A] = p".into()));
        }
        let target = inst.sec_a.group();
        let top = inst.terms.iter().find(|x| x.is_top).ok_or(Error::Engine("missing U term".into()))?;
        let bottom = inst.terms.iter().find(|x| x.is_bottom).ok_or(Error::Engine("missing A term".into()))?;
        let ver = t.get(top.entry).pushforward(target, |q| top.ver[q]);
        let la = t.get(bottom.entry).pushforward(target, |q| bottom.ver[q]);
        Ok(&ver - &la)
    }

    pub fn check_rw3a(&self, t: &UnitTuple, index: usize) -> Result<CongruenceReport> {
        self.check_tuple(t)?;
        let inst = &self.rw3_instances()?[index];
        let y = self.rw3a_difference(t, index)?;
        let solver = self.rw3_solver(index, y.k())?;
        self.sigma_report(Condition::RW3a, self.rw3_label(inst), Locator::Rw3a { instance: index }, &solver, &y)
    }

    pub fn rw3a_indices(&self) -> Result<Vec<usize>> {
        let p = self.g.p();
        Ok(self.rw3_instances()?.iter().enumerate().filter(|(_, x)| x.is_index_p(p)).map(|(i, _)| i).collect())
    }

    pub fn check_rw3a_all(&self, t: &UnitTuple) -> Result<Vec<CongruenceReport>> {
        self.rw3a_indices()?.into_iter().map(|i| self.check_rw3a(t, i)).collect()
    }

    // ---- Wall ----

    pub fn wall_instances(&self) -> Result<&[WallInstance]> {
        self.walls.get_or_init(|| self.build_walls()).as_ref().map(|v| v.as_slice()).map_err(Clone::clone)
    }

    fn build_walls(&self) -> Result<Vec<WallInstance>> {
        let g = &self.g;
        let gab = Section::abelianization(g);
        g.subgroups(false)
            .into_iter()
            .filter(|s| s.len() as u64 * g.p() == g.order() as u64)
            .map(|sub| {
                let sec = Section::new(g, sub, g.commutator_of(sub, sub))?;
                let right = g.right_transversal(sub);
                let ver = (0..gab.order()).map(|q| sec.proj_unchecked(transfer_element(g, sub, &right, gab.lift(q)))).collect();
                Ok(WallInstance { subgroup: sub, sec, gab: gab.clone(), ver })
            })
            .collect()
    }

    /// `θ_{G'}(u) − ver(pr_{G^ab} u)` on `Λ(G'^ab)`.
    pub fn wall_difference(&self, u: &GroupRingElement, index: usize) -> Result<GroupRingElement> {
        let w = &self.wall_instances()?[index];
        let lhs = theta(u, &w.sec)?;
        let pr = u.pushforward(w.gab.group(), |x| w.gab.proj_unchecked(x));
        let rhs = pr.pushforward(w.sec.group(), |q| w.ver[q]);
        Ok(&lhs - &rhs)
    }

    pub fn check_wall(&self, u: &GroupRingElement, index: usize) -> Result<CongruenceReport> {
        if !crate::character::same_group(u.group(), &self.g) {
            return Err(Error::RingMismatch);
        }
        let y = self.wall_difference(u, index)?;
        let key = (index, y.k());
        let cached = self.wall_solvers.lock().expect("solver cache").get(&key).cloned();
        let solver = match cached {
            Some(s) => s,
            None => {
                let w = &self.wall_instances()?[index];
                let s = Arc::new(SigmaSolver::new(&self.g, self.g.whole(), &w.sec, y.k())?);
                self.wall_solvers.lock().expect("solver cache").insert(key, s.clone());
                s
            }
        };
        let label = format!("G'={}", sub_label(self.wall_instances()?[index].subgroup));
        self.sigma_report(Condition::Wall, label, Locator::Wall { index }, &solver, &y)
    }

    pub fn check_wall_all(&self, u: &GroupRingElement) -> Result<Vec<CongruenceReport>> {
        (0..self.wall_instances()?.len()).map(|i| self.check_wall(u, i)).collect()
    }

    // ---- RW4 ----

    /// Character data for a member of the full set.
    pub fn context(&self, member: usize) -> Result<Arc<DetContext>> {
        self.contexts[member]
            .get_or_init(|| DetContext::member(&self.g, self.full.members()[member].clone()).map(Arc::new))
            .clone()
    }

    /// Several Brauer expressions of each irreducible of a member, each one
    /// checked to sum to the character.
    pub fn decompositions(&self, member: usize) -> Result<&[Vec<Decomposition>]> {
        self.decompositions[member]
            .get_or_init(|| self.build_decompositions(member))
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    fn build_decompositions(&self, member: usize) -> Result<Vec<Vec<Decomposition>>> {
        let ctx = self.context(member)?;
        let ug = ctx.group().clone();
        let poset = character_poset(&ug)?;
        let n = ug.exponent() as u32;
        let center = ug.center();
        // a few elements acting nontrivially by conjugation
        let movers: Vec<usize> = ug.elements().filter(|x| !center.contains(*x)).take(2).collect();
        let mut all = Vec::new();
        for (i, rho) in ctx.irreducibles().iter().enumerate() {
            let mut ds = Vec::new();
            let canonical: Vec<(CharacterPair, i64)> =
                ctx.brauer(i)?.terms().map(|(pair, c)| (pair.clone(), c)).collect();
            for &h in &movers {
                let terms = canonical
                    .iter()
                    .map(|(pair, c)| {
                        let idx = poset.position(pair).ok_or(Error::BadDecomposition)?;
                        Ok((poset.node(poset.conjugate_node(&ug, h, idx)).clone(), *c))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ds.push(Decomposition { label: format!("canonical^g{h}"), terms });
            }
            ds.insert(0, Decomposition { label: "canonical".into(), terms: canonical });
            for (j, pair) in ctx.monomial_pairs(i)?.into_iter().enumerate() {
                ds.push(Decomposition { label: format!("monomial#{j}"), terms: vec![(pair, 1)] });
            }
            if rho.is_linear() {
                if let Some(d) = restriction_relation(&ug, rho)? {
                    ds.push(d);
                }
            }
            for d in &ds {
                let mut sum = Character::zero(&ug);
                for (pair, c) in &d.terms {
                    sum = &sum + &induce_pair(&ug, n, pair).scale(*c);
                }
                if sum != *rho {
                    return Err(Error::BadDecomposition);
                }
            }
            all.push(ds);
        }
        Ok(all)
    }

    /// Compares `Ξ_U(ρ)` across the given decompositions.
    pub fn check_rw4_with(
        &self,
        src: &dyn TupleSource,
        member: usize,
        irreducible: usize,
        decompositions: &[Decomposition],
    ) -> Result<CongruenceReport> {
        let ctx = self.context(member)?;
        let values = decompositions
            .iter()
            .map(|d| ctx.xi_of_terms(src, d.terms.iter().cloned()))
            .collect::<Result<Vec<_>>>()?;
        let ok = values.windows(2).all(|w| w[0] == w[1]);
        let evidence = Evidence::Values {
            labels: decompositions.iter().map(|d| d.label.clone()).collect(),
            values: values.iter().map(|v| v.coeffs().to_vec()).collect(),
        };
        let instance = format!("U={} rho#{irreducible}", self.full.label(member));
        Ok(self.report(Condition::RW4, instance, Locator::Rw4 { member, irreducible }, src.k(), ok, evidence))
    }

    pub fn check_rw4(&self, src: &dyn TupleSource, member: usize, irreducible: usize) -> Result<CongruenceReport> {
        let ds = &self.decompositions(member)?[irreducible];
        self.check_rw4_with(src, member, irreducible, ds)
    }

    pub fn check_rw4_all(&self, src: &dyn TupleSource) -> Result<Vec<CongruenceReport>> {
        let mut out = Vec::new();
        for member in 0..self.full.len() {
            for i in 0..self.decompositions(member)?.len() {
                out.push(self.check_rw4(src, member, i)?);
            }
        }
        Ok(out)
    }

    // ---- Snaith ----

    /// `Det(u)(χ)^p / Det(u)(ψ_p χ) ≡ 1 mod p` on every irreducible of `G`.
    pub fn check_snaith(&self, u: &GroupRingElement) -> Result<Vec<CongruenceReport>> {
        let whole = self.full.position(self.g.whole(), self.g.trivial()).expect("G/1 is a member");
        let ctx = self.context(whole)?;
        let values = ctx.det_all(u)?;
        (0..values.len())
            .map(|i| {
                let q = ctx.snaith_quotient(&values, i)?;
                let ok = q.is_one_mod_p();
                let evidence = Evidence::Values { labels: vec!["quotient".into()], values: vec![q.coeffs().to_vec()] };
                Ok(self.report(Condition::Snaith, format!("chi#{i}"), Locator::Snaith { irreducible: i }, u.k(), ok, evidence))
            })
            .collect()
    }

    // ---- aggregate ----

    /// RW1, RW2, RW3, RW3a and RW4 on one tuple. The verdict is `candidate`
    /// when every instance holds and `rejected` otherwise; holding every
    /// condition is necessary for lying in the image of `θ`, not sufficient.
    pub fn phi_tilde_membership(&self, t: &UnitTuple) -> Result<MembershipReport> {
        let mut reports = self.check_rw1(t)?;
        reports.extend(self.check_rw2(t)?);
        reports.extend(self.check_rw3_all(t)?);
        reports.extend(self.check_rw3a_all(t)?);
        reports.extend(self.check_rw4_all(t)?);
        let ok = reports.iter().all(|r| r.holds());
        Ok(MembershipReport {
            group: self.g.name().to_string(),
            p: self.g.p(),
            k: t.get(0).k(),
            verdict: if ok { Verdict::Candidate } else { Verdict::Rejected },
            checked: reports.len(),
            reports,
        })
    }
}

/// For linear `ρ` and a maximal subgroup `V`:
/// `ρ = Ind_V Res_V ρ − Σ_{χ ≠ 1, χ|_V = 1} ρχ`.
fn restriction_relation(ug: &Arc<FiniteGroup>, rho: &Character) -> Result<Option<Decomposition>> {
    let p = ug.p() as usize;
    let Some(v) = ug.subgroups(false).into_iter().find(|s| s.len() * p == ug.order()) else {
        return Ok(None);
    };
    let n = ug.exponent() as u32;
    let e = linear_exponents(rho)?;
    let mut terms = vec![(CharacterPair { subgroup: v, exps: v.iter().map(|x| e[x]).collect() }, 1)];
    for chi in linear_characters(ug) {
        let f = linear_exponents(&chi)?;
        if v.iter().all(|x| f[x] == 0) && ug.elements().any(|x| f[x] != 0) {
            let exps = ug.elements().map(|x| (e[x] + f[x]) % n).collect();
            terms.push((CharacterPair { subgroup: ug.whole(), exps }, -1));
        }
    }
    Ok(Some(Decomposition { label: format!("restriction to {v:?}"), terms }))
}
