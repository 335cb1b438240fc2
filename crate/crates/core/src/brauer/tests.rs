use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::character::{irreducibles, linear_characters};
use crate::group::{catalog, catalog_entry, Section};

fn arc(name: &str, p: u64, params: &[u32]) -> Arc<FiniteGroup> {
    Arc::new(catalog_entry(name, p, params).unwrap())
}

fn heis() -> Arc<FiniteGroup> {
    static G: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    G.get_or_init(|| arc("heisenberg", 3, &[])).clone()
}

fn modular() -> Arc<FiniteGroup> {
    static G: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    G.get_or_init(|| arc("modular", 3, &[])).clone()
}

fn leq(x: &CharacterPair, y: &CharacterPair) -> bool {
    x.subgroup.is_subset_of(y.subgroup) && x.subgroup.iter().all(|a| x.exponent_at(a) == y.exponent_at(a))
}

/// Möbius value as the alternating count of strict chains from `x` to `y`.
fn mobius_by_chains(nodes: &[CharacterPair], x: usize, y: usize) -> i64 {
    let interval: Vec<usize> =
        (0..nodes.len()).filter(|&z| leq(&nodes[x], &nodes[z]) && leq(&nodes[z], &nodes[y])).collect();
    fn walk(nodes: &[CharacterPair], interval: &[usize], at: usize, y: usize, len: i64) -> i64 {
        if at == y {
            return if len % 2 == 0 { 1 } else { -1 };
        }
        interval
            .iter()
            .filter(|&&z| z != at && leq(&nodes[at], &nodes[z]))
            .map(|&z| walk(nodes, interval, z, y, len + 1))
            .sum()
    }
    walk(nodes, &interval, x, y, 0)
}

fn pair_character(g: &Arc<FiniteGroup>, n: u32, pair: &CharacterPair) -> (Section, Character) {
    let sec = Section::subgroup(g, pair.subgroup).unwrap();
    let phi = Character::from_exponents(sec.group(), n, &pair.exps);
    (sec, phi)
}

/// Direct evaluation of the formula: every pair in the class, every pair
/// above it, chain-counted Möbius values and Schur products on sections.
fn coefficients_by_brute_force(rho: &Character) -> BTreeMap<CharacterPair, i64> {
    let g = rho.group();
    let m = character_poset(g).unwrap();
    let n = m.conductor();
    let nodes = m.nodes();
    let conj = |h: usize, x: &CharacterPair| {
        let u = g.conjugate_subgroup(h, x.subgroup);
        let mut exps = vec![0; x.exps.len()];
        for (r, a) in x.subgroup.iter().enumerate() {
            exps[u.rank_of(g.conj(h, a))] = x.exps[r];
        }
        CharacterPair { subgroup: u, exps }
    };
    let mut inner_at: Vec<BigRational> = Vec::new();
    for y in nodes {
        let (sec, phi) = pair_character(g, n, y);
        inner_at.push(phi.schur_inner(&rho.restrict(&sec)));
    }
    let mut out = BTreeMap::new();
    for x in nodes {
        let class: std::collections::BTreeSet<CharacterPair> = g.elements().map(|h| conj(h, x)).collect();
        if class.iter().next().unwrap() != x {
            continue;
        }
        let mut total = BigRational::from_integer(0.into());
        for xp in &class {
            let i = m.position(xp).unwrap();
            for (j, y) in nodes.iter().enumerate() {
                if leq(xp, y) {
                    total += &inner_at[j] * BigRational::from_integer(mobius_by_chains(nodes, i, j).into());
                }
            }
        }
        total = total * BigRational::new((x.subgroup.len() as i64).into(), (g.order() as i64).into());
        assert!(total.is_integer(), "non-integral coefficient at {x:?}");
        let v: i64 = total.to_integer().try_into().unwrap();
        if v != 0 {
            out.insert(x.clone(), v);
        }
    }
    out
}

fn as_map(b: &BrauerElement) -> BTreeMap<CharacterPair, i64> {
    b.terms().map(|(k, v)| (k.clone(), v)).collect()
}

#[test]
fn mobius_diagonal_and_cover() {
    let g = arc("cyclic", 3, &[1]);
    let m = character_poset(&g).unwrap();
    assert_eq!(m.len(), 1 + 3);
    let bottom = CharacterPair { subgroup: g.trivial(), exps: vec![0] };
    for y in m.nodes() {
        let mu = poset_mobius(&m, &bottom, y).unwrap();
        assert_eq!(mu, if *y == bottom { 1 } else { -1 });
        assert_eq!(poset_mobius(&m, y, y).unwrap(), 1);
    }
    let a = CharacterPair { subgroup: g.whole(), exps: vec![0, 1, 2] };
    let b = CharacterPair { subgroup: g.whole(), exps: vec![0, 2, 1] };
    assert_eq!(poset_mobius(&m, &a, &b), Err(Error::NotComparable));
}

#[test]
fn mobius_on_elementary_abelian_interval_matches_chain_count() {
    let g = arc("abelian", 3, &[1, 1]);
    let m = character_poset(&g).unwrap();
    let x = m.position(&CharacterPair { subgroup: g.trivial(), exps: vec![0] }).unwrap();
    let y = m.position(&CharacterPair { subgroup: g.whole(), exps: vec![0; 9] }).unwrap();
    let expected = mobius_by_chains(m.nodes(), x, y);
    assert_eq!(expected, 3);
    assert_eq!(m.mobius(x, y).unwrap(), expected);
    for i in 0..m.len() {
        for j in 0..m.len() {
            match m.mobius(i, j) {
                Ok(v) => assert_eq!(v, mobius_by_chains(m.nodes(), i, j)),
                Err(_) => assert!(!leq(m.node(i), m.node(j))),
            }
        }
    }
}

#[test]
fn poset_is_a_partial_order() {
    let g = heis();
    let m = character_poset(&g).unwrap();
    for i in 0..m.len() {
        assert!(m.leq(i, i));
        for j in 0..m.len() {
            assert_eq!(m.leq(i, j), leq(m.node(i), m.node(j)));
            if i != j && m.leq(i, j) {
                assert!(!m.leq(j, i), "antisymmetry");
            }
        }
    }
}

#[test]
fn poset_mobius_agrees_with_the_lattice_mobius() {
    for g in [heis(), arc("quaternion", 2, &[3]), arc("abelian", 2, &[1, 1, 1])] {
        for row in mobius_comparison(&g).unwrap() {
            assert_eq!(row.lattice, row.poset, "{:?} ⊆ {:?}", row.lower, row.upper);
        }
    }
}

#[test]
fn linear_characters_map_to_themselves() {
    for g in [heis(), arc("cyclic", 5, &[2]), arc("dihedral", 2, &[3])] {
        for chi in linear_characters(&g) {
            let b = brauer_coefficients(&chi).unwrap();
            assert_eq!(b.len(), 1);
            let (pair, c) = b.terms().next().unwrap();
            assert_eq!(c, 1);
            assert_eq!(pair.subgroup, g.whole());
            assert!(verify_section(&b, &chi));
        }
        let triv = brauer_coefficients(&Character::trivial(&g)).unwrap();
        assert!(triv.terms().next().unwrap().0.is_trivial());
    }
}

#[test]
fn heisenberg_degree_three_coefficients_match_brute_force() {
    let g = heis();
    for rho in irreducibles(&g).unwrap().into_iter().filter(|r| r.degree() == 3) {
        let b = brauer_coefficients(&rho).unwrap();
        assert_eq!(as_map(&b), coefficients_by_brute_force(&rho));
        assert!(verify_section(&b, &rho));
    }
}

#[test]
fn quaternion_and_modular_coefficients_match_brute_force() {
    for g in [arc("quaternion", 2, &[3]), modular()] {
        for rho in irreducibles(&g).unwrap().into_iter().filter(|r| r.degree() > 1) {
            assert_eq!(as_map(&brauer_coefficients(&rho).unwrap()), coefficients_by_brute_force(&rho));
        }
    }
}

#[test]
fn section_holds_on_small_catalog_groups() {
    for e in catalog().into_iter().filter(|e| e.order <= 27) {
        let g = Arc::new(e.build());
        for rho in irreducibles(&g).unwrap() {
            let b = brauer_coefficients(&rho).unwrap();
            assert!(verify_section(&b, &rho), "{} {:?}", e.key, rho);
        }
    }
}

#[test]
fn virtual_characters_are_handled_additively() {
    let g = heis();
    let irr = irreducibles(&g).unwrap();
    let v = &irr[10].scale(2) - &irr[3];
    let b = brauer_coefficients(&v).unwrap();
    assert!(verify_section(&b, &v));
    let reg = brauer_coefficients(&Character::regular(&g)).unwrap();
    assert!(verify_section(&reg, &Character::regular(&g)));
}

#[test]
fn perturbed_element_is_not_a_section() {
    let g = heis();
    let rho = irreducibles(&g).unwrap().pop().unwrap();
    let mut b = brauer_coefficients(&rho).unwrap();
    let pair = b.terms().next().unwrap().0.clone();
    b.add_term(&pair, 1).unwrap();
    assert!(!verify_section(&b, &rho));
}

#[test]
fn twist_by_trivial_is_identity_and_twist_is_an_action() {
    let g = heis();
    let irr = irreducibles(&g).unwrap();
    let lin = linear_characters(&g);
    let b = brauer_coefficients(&irr[9]).unwrap();
    assert_eq!(twist(&Character::trivial(&g), &b).unwrap(), b);
    for a in &lin {
        for c in &lin {
            let lhs = twist(&a.tensor(c), &b).unwrap();
            let rhs = twist(a, &twist(c, &b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
    assert!(twist(&irr[9], &b).is_err());
}

#[test]
fn json_export_lists_terms() {
    let g = arc("quaternion", 2, &[3]);
    let rho = irreducibles(&g).unwrap().pop().unwrap();
    let b = brauer_coefficients(&rho).unwrap();
    let js = serde_json::to_value(&b).unwrap();
    let arr = js.as_array().unwrap();
    assert_eq!(arr.len(), b.len());
    for t in arr {
        assert!(t["subgroup"].is_array() && t["character"].is_array() && t["coefficient"].is_i64());
    }
    assert_eq!(b.to_json().conductor, 4);
}

#[test]
fn canonical_representatives_are_class_minima() {
    let g = modular();
    let m = character_poset(&g).unwrap();
    for i in 0..m.len() {
        let c = m.canonical_index(i);
        let orbit: Vec<usize> = g.elements().map(|h| m.conjugate_node(&g, h, i)).collect();
        assert_eq!(c, *orbit.iter().min().unwrap());
        let mut uniq = orbit.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(m.orbit_size(i), uniq.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn twist_compatibility_on_order_27(which in 0usize..2, ci in 0usize..9, ri in 0usize..11) {
        let g = if which == 0 { heis() } else { modular() };
        let chi = &linear_characters(&g)[ci];
        let rho = &irreducibles(&g).unwrap()[ri];
        let lhs = brauer_coefficients(&chi.tensor(rho)).unwrap();
        let rhs = twist(chi, &brauer_coefficients(rho).unwrap()).unwrap();
        prop_assert_eq!(as_map(&lhs), as_map(&rhs));
    }

    #[test]
    fn mobius_is_conjugation_invariant(which in 0usize..2, h in 0usize..27, xi in 0usize..10_000, step in 0usize..10_000) {
        let g = if which == 0 { heis() } else { modular() };
        let m = character_poset(&g).unwrap();
        let x = xi % m.len();
        let up = m.upper_set(x);
        let (y, mu) = up[step % up.len()];
        let (cx, cy) = (m.conjugate_node(&g, h, x), m.conjugate_node(&g, h, y));
        prop_assert_eq!(m.mobius(cx, cy).unwrap(), mu);
    }
}
