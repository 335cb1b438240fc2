use super::{FiniteGroup, GroupHom, Section, Subgroup};
use crate::error::{Error, Result};

/// Transfer of `x ∈ G` into `U`, before abelianizing.
///
/// For the right transversal `t_1, ..., t_n` of `U` in `G`, write
/// `t_i x = h_i t_{j(i)}` with `h_i ∈ U`; the result is `h_1 h_2 ⋯ h_n`.
/// Only its class in `U^ab` is independent of the transversal.
pub fn transfer_element(g: &FiniteGroup, u: Subgroup, transversal: &[usize], x: usize) -> usize {
    let mut acc = g.identity();
    for &t in transversal {
        let tx = g.mul(t, x);
        let j = g.right_coset_index(u, transversal, tx);
        let h = g.mul(tx, g.inv(transversal[j]));
        debug_assert!(u.contains(h));
        acc = g.mul(acc, h);
    }
    acc
}

/// `ver: G^ab -> U^ab`, computed with the minimal right transversal.
pub fn transfer(g: &FiniteGroup, u: Subgroup) -> Result<GroupHom> {
    transfer_with(g, u, &g.right_transversal(u))
}

/// `ver: G^ab -> U^ab` computed with a caller-supplied right transversal.
pub fn transfer_with(g: &FiniteGroup, u: Subgroup, transversal: &[usize]) -> Result<GroupHom> {
    if !g.is_subgroup(u) {
        return Err(Error::NotSubgroup);
    }
    if transversal.len() * u.len() != g.order() {
        return Err(Error::InvalidGroup("transversal has the wrong size".into()));
    }
    let g_ab = Section::abelianization(g);
    let u_ab = Section::new(g, u, g.commutator_of(u, u))?;
    let map = (0..g_ab.order())
        .map(|q| u_ab.proj_unchecked(transfer_element(g, u, transversal, g_ab.lift(q))))
        .collect();
    Ok(GroupHom::trusted(g_ab.group().clone(), u_ab.group().clone(), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_entry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_transversal(g: &FiniteGroup, u: Subgroup, rng: &mut impl Rng) -> Vec<usize> {
        g.right_transversal(u)
            .into_iter()
            .map(|t| {
                let us: Vec<usize> = u.iter().collect();
                g.mul(us[rng.gen_range(0..us.len())], t)
            })
            .collect()
    }

    #[test]
    fn transfer_to_whole_group_is_identity() {
        let g = catalog_entry("heisenberg", 3, &[]).unwrap();
        let v = transfer(&g, g.whole()).unwrap();
        for q in 0..v.source().order() {
            assert_eq!(v.apply(q), q);
        }
    }

    #[test]
    fn transfer_from_c9_to_c3_is_cubing() {
        // element index i is the residue i mod 9
        let g = catalog_entry("cyclic", 3, &[2]).unwrap();
        let u = g.closure([3]);
        let t = g.right_transversal(u);
        for x in g.elements() {
            assert_eq!(transfer_element(&g, u, &t, x), g.pow(x, 3));
        }
    }

    #[test]
    fn transfer_is_independent_of_transversal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["heisenberg", "modular"] {
            let g = catalog_entry(name, 3, &[]).unwrap();
            for u in g.subgroups(false) {
                let a = transfer(&g, u).unwrap();
                for _ in 0..3 {
                    let t = random_transversal(&g, u, &mut rng);
                    let b = transfer_with(&g, u, &t).unwrap();
                    assert_eq!(a.table(), b.table(), "{name} {u:?}");
                }
            }
        }
    }
}
