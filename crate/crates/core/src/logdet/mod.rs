//! Integral logarithm, the trace map and the determinant `Det`.
//!
//! Class functions on a group are represented twice: additively as
//! [`TraceElement`]s (coefficients on conjugacy classes, i.e. elements of
//! `Λ(G)/[Λ(G), Λ(G)]`), and through their values on the irreducible
//! characters. [`DetContext`] carries the per-group data needed to move
//! between the two and to evaluate `Det` and `Ξ`.

mod padic;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;
use serde::Serialize;

pub use padic::{log_one_unit, PadicFixed};

use crate::brauer::{brauer_coefficients, character_poset, BrauerElement, CharacterPair};
use crate::character::{character_table, irreducibles, Character};
use crate::cyclotomic::TruncCyclo;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Section, Subgroup};
use crate::group_ring::{coset_matrix, theta, CycloGroupRingElement, GroupRingElement, TupleSource};
use crate::modp::{self, add_mod, mul_mod, sub_mod};

/// An element of `(Z/p^k)[Conj(G)]`.
#[derive(Clone, PartialEq, Eq)]
pub struct TraceElement {
    group: Arc<FiniteGroup>,
    k: u32,
    m: u64,
    coeffs: Vec<u64>,
}

impl TraceElement {
    pub fn new(g: &Arc<FiniteGroup>, k: u32, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != g.num_classes() {
            return Err(Error::OutOfRange { index: coeffs.len(), len: g.num_classes() });
        }
        let m = modp::modulus(g.p(), k)?;
        Ok(TraceElement { group: g.clone(), k, m, coeffs: coeffs.into_iter().map(|x| x % m).collect() })
    }

    pub fn zero(g: &Arc<FiniteGroup>, k: u32) -> Result<Self> {
        Self::new(g, k, vec![0; g.num_classes()])
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0)
    }

    pub fn reduce(&self, k2: u32) -> Self {
        let m = self.group.p().pow(k2);
        TraceElement { k: k2, m, coeffs: self.coeffs.iter().map(|&x| x % m).collect(), group: self.group.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.k == other.k, "trace elements at different precisions");
        let m = self.m;
        TraceElement { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| add_mod(a, b, m)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.k == other.k, "trace elements at different precisions");
        let m = self.m;
        TraceElement { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| sub_mod(a, b, m)).collect(), ..self.clone() }
    }

    /// Coefficients in symmetric representatives, by class.
    pub fn signed_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&x| modp::to_i64(x, self.m)).collect()
    }
}

impl std::fmt::Debug for TraceElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} mod {}^{} on classes of {}", self.signed_coeffs(), self.group.p(), self.k, self.group.name())
    }
}

/// `τ`: sum of the coefficients over each conjugacy class.
pub fn tau(x: &GroupRingElement) -> TraceElement {
    let g = x.group();
    let m = x.modulus();
    let mut c = vec![0u64; g.num_classes()];
    for (e, &a) in x.coeffs().iter().enumerate() {
        let i = g.class_of(e);
        c[i] = add_mod(c[i], a, m);
    }
    TraceElement { group: g.clone(), k: x.k(), m, coeffs: c }
}

/// `Φ`: the class of `g` goes to the class of `g^p`.
pub fn frobenius_phi(t: &TraceElement) -> TraceElement {
    let g = &t.group;
    let mut c = vec![0u64; g.num_classes()];
    for (i, &a) in t.coeffs.iter().enumerate() {
        let j = g.class_of(g.pow(g.class_rep(i), g.p()));
        c[j] = add_mod(c[j], a, t.m);
    }
    TraceElement { coeffs: c, ..t.clone() }
}

/// The integral logarithm `𝕃(u) = τ(log u) - Φ(τ(log u))/p`, modulo `p^k`.
///
/// `u` must be a unit known to precision at least `k + 1`; `𝕃(u) mod p^k`
/// depends only on `u mod p^{k+1}`. With `N = (p-1)·|G|`, `w = u^N` is
/// congruent to 1 modulo `p`, since the augmentation ideal of `F_p[G]` is
/// nilpotent of index at most `|G|`. Then `𝕃(u) = 𝕃(w)/N`, and with
/// `z = τ(log w)/(p-1)` this is `(p z - Φ(z)) / |G|p`. The final division is
/// checked coefficient by coefficient; a failure is reported as
/// [`Error::NonIntegral`].
pub fn integral_log(u: &GroupRingElement, k: u32) -> Result<TraceElement> {
    let g = u.group();
    let p = g.p();
    if !u.is_unit() {
        return Err(Error::NotUnit);
    }
    if u.k() < k + 1 {
        return Err(Error::InsufficientPrecision(format!("integral log mod p^{k} needs the unit mod p^{}", k + 1)));
    }
    let j = g.log_order();
    let k0 = k + j + 1;
    let (n_max, s) = padic::series_bound(p, k0);
    let work = k0 + s;
    let lift = if u.k() >= work { u.reduce(work) } else { u.lift_precision(work)? };
    let w = lift.pow((p - 1) * p.pow(j));
    let one = GroupRingElement::one(g, work)?;
    let x = &w - &one;
    if x.valuation() < 1 {
        return Err(Error::Domain("u^N is not congruent to 1 mod p".into()));
    }
    let m0 = modp::modulus(p, k0)?;
    let mut log = GroupRingElement::zero(g, k0)?;
    let mut xn = one;
    for n in 1..=n_max {
        xn = &xn * &x;
        let v = modp::val(n, p, 64);
        let unit = (n / p.pow(v)) % m0;
        let term = xn.div_p_pow(v)?.reduce(k0).scale(modp::inv_mod(unit, m0).expect("unit"));
        log = if n % 2 == 1 { &log + &term } else { &log - &term };
    }
    let t = tau(&log);
    let z = TraceElement {
        coeffs: t.coeffs.iter().map(|&c| mul_mod(c, modp::inv_mod((p - 1) % m0, m0).expect("unit"), m0)).collect(),
        ..t
    };
    let phi = frobenius_phi(&z);
    let d = p.pow(j + 1);
    let mut out = Vec::with_capacity(z.coeffs.len());
    for (&a, &b) in z.coeffs.iter().zip(&phi.coeffs) {
        let v = sub_mod(mul_mod(a, p, m0), b, m0);
        if v % d != 0 {
            return Err(Error::NonIntegral(format!("coefficient {v} is not divisible by {d}")));
        }
        out.push(v / d);
    }
    TraceElement::new(g, k, out)
}

/// The usual trace `Λ(U)/[,] → Λ(V)/[,]` for `V ⊆ U`: the trace of the
/// matrix of right multiplication on the cosets of `V`.
pub fn trace_transfer(t: &TraceElement, v: Subgroup) -> Result<(Section, TraceElement)> {
    let g = &t.group;
    let mut x = GroupRingElement::zero(g, t.k)?;
    for (c, &a) in t.coeffs.iter().enumerate() {
        x = &x + &GroupRingElement::basis(g, t.k, g.class_rep(c))?.scale(a);
    }
    let sec = Section::subgroup(g, v)?;
    let mat = coset_matrix(&x, &sec, &g.right_transversal(v))?;
    let mut diag = GroupRingElement::zero(sec.group(), t.k)?;
    for (i, row) in mat.iter().enumerate() {
        diag = &diag + &row[i];
    }
    let tr = tau(&diag);
    Ok((sec, tr))
}

/// `𝕃_V(θ_V(u)) - Tr^G_V(𝕃_G(u))` for an abelian `V ⊆ G`.
///
/// Norm compatibility of the integral logarithm holds for a modified trace
/// that is not implemented here; this reports how far the plain trace is
/// from it.
pub fn trace_norm_discrepancy(u: &GroupRingElement, v: Subgroup, k: u32) -> Result<TraceElement> {
    let (sec, tr) = trace_transfer(&integral_log(u, k)?, v)?;
    let lv = integral_log(&theta(u, &sec)?, k)?;
    Ok(lv.sub(&TraceElement { group: lv.group.clone(), ..tr }))
}

/// `Tw_φ(x)` on `(Z/p^k)[ζ][A]`, multiplying each `a ∈ A` by `φ(a)`.
pub fn twist_operator(x: &GroupRingElement, exps: &[u32], a: u32) -> Result<CycloGroupRingElement> {
    CycloGroupRingElement::from_group_ring(x, a)?.twist(exps)
}

/// Per-group data for evaluating `Det`, `Ξ`, `L`, `Tr` and `Tr⁻¹`.
///
/// The group is a member `W/C` of an ambient group, given by its section;
/// use [`DetContext::ambient`] for the ambient group itself. All cyclotomic
/// values are returned at the conductor `exp` of the ambient group.
pub struct DetContext {
    ambient: Arc<FiniteGroup>,
    sec: Section,
    a: u32,
    n_local: u32,
    irr: Vec<Character>,
    monomial: Vec<CharacterPair>,
    adams: Vec<Vec<(usize, i64)>>,
    ab_sections: Mutex<HashMap<Subgroup, Section>>,
    brauer: Vec<OnceLock<BrauerElement>>,
}

/// Serializable snapshot of a context's irreducibles.
#[derive(Debug, Clone, Serialize)]
pub struct IrreducibleInfo {
    pub index: usize,
    pub degree: i64,
    pub adams: Vec<(usize, i64)>,
}

impl DetContext {
    pub fn ambient(g: &Arc<FiniteGroup>) -> Result<Self> {
        Self::member(g, Section::new(g, g.whole(), g.trivial())?)
    }

    pub fn member(g: &Arc<FiniteGroup>, sec: Section) -> Result<Self> {
        let p = g.p();
        let a = crate::group::prime_power_exponent(g.exponent(), p).expect("p-group exponent");
        let h = sec.group().clone();
        let n_local = h.exponent() as u32;
        let table = character_table(&h)?;
        let irr = irreducibles(&h)?;
        let monomial = (0..table.len())
            .map(|i| {
                let mp = table.monomial_pair(i);
                CharacterPair { subgroup: mp.subgroup, exps: mp.exps.clone() }
            })
            .collect();
        let adams = irr
            .iter()
            .map(|chi| {
                let psi = chi.adams(p);
                irr.iter()
                    .enumerate()
                    .filter_map(|(j, eta)| {
                        let c = psi.schur_inner(eta);
                        let c = c.to_integer().to_i64().filter(|_| c.is_integer());
                        match c {
                            Some(0) => None,
                            Some(v) => Some(Ok((j, v))),
                            None => Some(Err(Error::Engine("Adams operation is not a virtual character".into()))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let brauer = irr.iter().map(|_| OnceLock::new()).collect();
        Ok(DetContext { ambient: g.clone(), sec, a, n_local, irr, monomial, adams, ab_sections: Mutex::new(HashMap::new()), brauer })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.sec.group()
    }

    pub fn section(&self) -> &Section {
        &self.sec
    }

    pub fn ambient_group(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    /// `log_p` of the ambient exponent; the conductor exponent of all values.
    pub fn conductor_exponent(&self) -> u32 {
        self.a
    }

    pub fn irreducibles(&self) -> &[Character] {
        &self.irr
    }

    /// `ψ_p χ_i = Σ m_j χ_j`, as the nonzero `(j, m_j)`.
    pub fn adams_decomposition(&self, i: usize) -> &[(usize, i64)] {
        &self.adams[i]
    }

    pub fn info(&self) -> Vec<IrreducibleInfo> {
        self.irr
            .iter()
            .enumerate()
            .map(|(i, c)| IrreducibleInfo { index: i, degree: c.degree(), adams: self.adams[i].clone() })
            .collect()
    }

    fn is_whole(&self) -> bool {
        self.sec.top() == self.ambient.whole() && self.sec.bottom().len() == 1
    }

    fn root(&self, k: u32, e: u32) -> Result<TruncCyclo> {
        let p = self.ambient.p();
        let a_local = crate::group::prime_power_exponent(self.n_local as usize, p).expect("p-power exponent");
        Ok(TruncCyclo::root(p, k, a_local, e as i64)?.lift_conductor(self.a))
    }

    /// `Σ_q x_q φ(q)` for `x` over a section `on = V/D` of the ambient group
    /// and a linear character `φ` of a subgroup of this context's group.
    fn pair_value(&self, x: &GroupRingElement, on: &Section, pair: &CharacterPair) -> Result<TruncCyclo> {
        let p = self.ambient.p();
        let mut counts = vec![0u64; self.n_local as usize];
        let m = x.modulus();
        for (q, &c) in x.coeffs().iter().enumerate() {
            let y = self.sec.proj_unchecked(on.lift(q));
            let e = pair.exponent_at(y) as usize;
            counts[e] = add_mod(counts[e], c, m);
        }
        let mut acc = TruncCyclo::zero(p, x.k(), self.a)?;
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                acc = &acc + &self.root(x.k(), e as u32)?.scalar(c);
            }
        }
        Ok(acc)
    }

    fn ab_section(&self, u: Subgroup) -> Result<Section> {
        if let Some(s) = self.ab_sections.lock().expect("lock").get(&u) {
            return Ok(s.clone());
        }
        let g = &self.ambient;
        let s = Section::new(g, u, g.commutator_of(u, u))?;
        self.ab_sections.lock().expect("lock").insert(u, s.clone());
        Ok(s)
    }

    /// `Det(u)(Ind_U^G φ) = φ(θ_U(u))` for a pair of the ambient group.
    pub fn det_via_pair(&self, u: &GroupRingElement, pair: &CharacterPair) -> Result<TruncCyclo> {
        if !self.is_whole() {
            return Err(Error::Domain("Det of a unit is evaluated on the ambient group".into()));
        }
        let sec = self.ab_section(pair.subgroup)?;
        let t = theta(u, &sec)?;
        self.pair_value(&t, &sec, pair)
    }

    /// `Det(u)(χ_i)` through the monomial pair stored with the table.
    pub fn det(&self, u: &GroupRingElement, i: usize) -> Result<TruncCyclo> {
        self.det_via_pair(u, &self.monomial[i])
    }

    /// `Det(u)` on every irreducible.
    pub fn det_all(&self, u: &GroupRingElement) -> Result<Vec<TruncCyclo>> {
        (0..self.irr.len()).map(|i| self.det(u, i)).collect()
    }

    /// Every pair `(U, φ)` with `Ind_U^G φ = χ_i`.
    pub fn monomial_pairs(&self, i: usize) -> Result<Vec<CharacterPair>> {
        let h = self.group();
        let poset = character_poset(h)?;
        let mult = crate::brauer::restriction_multiplicities(&poset, &self.irr[i])?;
        let deg = self.irr[i].degree() as usize;
        Ok(poset
            .nodes()
            .iter()
            .zip(mult)
            .filter(|(pair, m)| *m > 0 && pair.subgroup.len() * deg == h.order())
            .map(|(pair, _)| pair.clone())
            .collect())
    }

    /// `a(χ_i)`, computed once per context.
    pub fn brauer(&self, i: usize) -> Result<&BrauerElement> {
        let cell = self.brauer.get(i).ok_or(Error::OutOfRange { index: i, len: self.irr.len() })?;
        if let Some(b) = cell.get() {
            return Ok(b);
        }
        let b = brauer_coefficients(&self.irr[i])?;
        Ok(cell.get_or_init(|| b))
    }

    /// `Ξ(χ_i) = Π Det(λ_{V^ab})(φ)^{n}` over the Brauer terms
    /// `n (V, φ)` of `a(χ_i)`.
    pub fn xi(&self, src: &dyn TupleSource, i: usize) -> Result<TruncCyclo> {
        let b = self.brauer(i)?;
        self.xi_of_terms(src, b.terms().map(|(pair, n)| (pair.clone(), n)))
    }

    /// `Π Det(λ_{V^ab})(φ)^n` for an arbitrary list of terms `(V, φ), n`.
    pub fn xi_of_terms(
        &self,
        src: &dyn TupleSource,
        terms: impl IntoIterator<Item = (CharacterPair, i64)>,
    ) -> Result<TruncCyclo> {
        let g = &self.ambient;
        let mut acc = TruncCyclo::one(g.p(), src.k(), self.a)?;
        for (pair, n) in terms {
            let top = self.sec.lift_subgroup(pair.subgroup);
            let bottom = g.closure(self.sec.bottom().iter().chain(g.commutator_of(top, top).iter()));
            let (on, lambda) = src.entry(top, bottom)?;
            let v = self.pair_value(&lambda, &on, &pair)?;
            let f = if n >= 0 { v.pow(n as u64) } else { v.inv()?.pow(n.unsigned_abs()) };
            acc = &acc * &f;
        }
        Ok(acc)
    }

    /// `Ξ` on every irreducible.
    pub fn xi_all(&self, src: &dyn TupleSource) -> Result<Vec<TruncCyclo>> {
        (0..self.irr.len()).map(|i| self.xi(src, i)).collect()
    }

    /// `f(Σ m_j χ_j) = Π f(χ_j)^{m_j}`.
    pub fn eval_virtual(&self, values: &[TruncCyclo], mults: &[(usize, i64)]) -> Result<TruncCyclo> {
        let first = values.first().ok_or(Error::OutOfRange { index: 0, len: 0 })?;
        let mut acc = TruncCyclo::one(first.p(), first.k(), first.a())?;
        for &(j, m) in mults {
            let f = if m >= 0 { values[j].pow(m as u64) } else { values[j].inv()?.pow(m.unsigned_abs()) };
            acc = &acc * &f;
        }
        Ok(acc)
    }

    /// Multiplicities of a virtual character in the irreducibles.
    pub fn decompose(&self, rho: &Character) -> Result<Vec<(usize, i64)>> {
        self.irr
            .iter()
            .enumerate()
            .filter_map(|(j, eta)| {
                let c = rho.schur_inner(eta);
                match c.to_integer().to_i64().filter(|_| c.is_integer()) {
                    Some(0) => None,
                    Some(v) => Some(Ok((j, v))),
                    None => Some(Err(Error::Engine("not a virtual character".into()))),
                }
            })
            .collect()
    }

    /// `f(χ_i)^p / f(ψ_p χ_i)`.
    pub fn snaith_quotient(&self, values: &[TruncCyclo], i: usize) -> Result<TruncCyclo> {
        let p = self.ambient.p();
        let denom = self.eval_virtual(values, &self.adams[i])?;
        Ok(&values[i].pow(p) * &denom.inv()?)
    }

    /// `L(f)(χ) = (1/p) log(f(χ)^p / f(ψ_p χ))` on every irreducible.
    ///
    /// Values known modulo `p^k` give `L(f)` modulo `p^{k-1}`.
    pub fn bold_l(&self, values: &[TruncCyclo]) -> Result<Vec<TruncCyclo>> {
        (0..self.irr.len())
            .map(|i| {
                let q = self.snaith_quotient(values, i)?;
                if !q.is_one_mod_p() {
                    return Err(Error::Domain(format!("quotient at irreducible {i} is not 1 mod p")));
                }
                log_one_unit(&q)?.div_p()
            })
            .collect()
    }

    /// `Tr(t)(χ_i) = Σ_c t_c χ_i(g_c)` on every irreducible.
    pub fn trace_eval(&self, t: &TraceElement) -> Result<Vec<TruncCyclo>> {
        let h = self.group();
        if !crate::character::same_group(t.group(), h) {
            return Err(Error::RingMismatch);
        }
        self.irr
            .iter()
            .map(|chi| {
                let mut acc = TruncCyclo::zero(h.p(), t.k, self.a)?;
                for (c, &a) in t.coeffs.iter().enumerate() {
                    if a != 0 {
                        let v = chi.value_int(c).to_trunc(h.p(), t.k)?.lift_conductor(self.a);
                        acc = &acc + &v.scalar(a);
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    /// `Tr⁻¹`: the class function `t` with `Tr(t)(χ_i) = v_i`, by column
    /// orthogonality `t_c = |C(g_c)|⁻¹ Σ_i v_i conj χ_i(g_c)`.
    ///
    /// Dividing by the centralizer order costs up to `log_p |G|` digits of
    /// precision; coefficients come back as [`PadicFixed`].
    pub fn trace_invert(&self, values: &[TruncCyclo]) -> Result<Vec<PadicFixed>> {
        let h = self.group();
        let first = values.first().ok_or(Error::OutOfRange { index: 0, len: 0 })?;
        let (p, k) = (first.p(), first.k());
        (0..h.num_classes())
            .map(|c| {
                let mut acc = TruncCyclo::zero(p, k, self.a)?;
                for (v, chi) in values.iter().zip(&self.irr) {
                    let w = chi.value_int(c).conj().to_trunc(p, k)?.lift_conductor(self.a);
                    acc = &acc + &(v * &w);
                }
                if acc.coeffs()[1..].iter().any(|&x| x != 0) {
                    return Err(Error::Domain("values are not Galois equivariant".into()));
                }
                let e = modp::val(h.centralizer_order(h.class_rep(c)) as u64, p, 64);
                Ok(PadicFixed::new(p, acc.coeffs()[0], k, 0)?.div_p_pow(e))
            })
            .collect()
    }

    /// `t = Tr⁻¹(L(Ξ))` for a tuple.
    pub fn t_element(&self, src: &dyn TupleSource) -> Result<Vec<PadicFixed>> {
        self.trace_invert(&self.bold_l(&self.xi_all(src)?)?)
    }
}
