use crate::group::{FiniteGroup, Section};

/// A cyclic decomposition of an abelian group: elements `b_i` of order
/// `o_i` such that every element is uniquely `∏ b_i^{x_i}`, `0 <= x_i < o_i`.
#[derive(Debug, Clone)]
pub struct AbelianBasis {
    pub generators: Vec<(usize, usize)>,
    /// `coords[x]` are the exponents `x_i` of element `x`.
    pub coords: Vec<Vec<usize>>,
}

/// Greedy decomposition: take an element of maximal order modulo the span
/// of the generators chosen so far, then replace it by an element of the
/// same coset whose order equals that quotient order.
pub fn abelian_basis(a: &FiniteGroup) -> AbelianBasis {
    assert!(a.is_abelian(), "abelian_basis needs an abelian group");
    let mut span = a.trivial();
    let mut generators = Vec::new();
    while span.len() < a.order() {
        let quotient_order = |x: usize| {
            let mut y = x;
            let mut m = 1;
            while !span.contains(y) {
                y = a.mul(y, x);
                m += 1;
            }
            m
        };
        let (m, x) = a.elements().map(|x| (quotient_order(x), x)).max_by_key(|&(m, x)| (m, std::cmp::Reverse(x))).unwrap();
        let b = span
            .iter()
            .map(|s| a.mul(x, s))
            .filter(|&y| a.element_order(y) == m)
            .min()
            .expect("a coset representative of the quotient order exists");
        generators.push((b, m));
        span = a.closure(span.iter().chain([b]));
    }
    let mut coords = vec![Vec::new(); a.order()];
    let mut x = vec![0usize; generators.len()];
    loop {
        let mut e = a.identity();
        for (i, &(b, _)) in generators.iter().enumerate() {
            e = a.mul(e, a.pow(b, x[i] as u64));
        }
        coords[e] = x.clone();
        // odometer, last coordinate fastest
        let mut i = generators.len();
        loop {
            if i == 0 {
                return AbelianBasis { generators, coords };
            }
            i -= 1;
            x[i] += 1;
            if x[i] < generators[i].1 {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Exponent tables `e` of all linear characters of `g`, so that the
/// character sends `x` to `ζ_n^{e[x]}`; `n` must be a multiple of the
/// exponent of `G^ab`. The trivial character comes first, then the others
/// in lexicographic order of their coordinates on the dual basis.
pub fn linear_exponent_tables(g: &FiniteGroup, n: u32) -> Vec<Vec<u32>> {
    let ab = Section::abelianization(g);
    let q = ab.group();
    let basis = abelian_basis(q);
    let orders: Vec<usize> = basis.generators.iter().map(|&(_, o)| o).collect();
    for &o in &orders {
        assert!(n as usize % o == 0, "conductor {n} is not a multiple of {o}");
    }
    let total: usize = orders.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut y = vec![0usize; orders.len()];
    for _ in 0..total {
        let table = g
            .elements()
            .map(|x| {
                let c = &basis.coords[ab.proj_unchecked(x)];
                let e: usize = c.iter().zip(&y).zip(&orders).map(|((ci, yi), oi)| ci * yi * (n as usize / oi)).sum();
                (e % n as usize) as u32
            })
            .collect();
        out.push(table);
        for i in (0..y.len()).rev() {
            y[i] += 1;
            if y[i] < orders[i] {
                break;
            }
            y[i] = 0;
        }
    }
    out
}
