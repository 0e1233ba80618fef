//! Isomorphism invariants cheap enough to compute for every candidate group.
//!
//! The fingerprint bundles series layer dimensions with abelian invariants
//! of characteristic subgroups and of the maximal subgroups. Equal groups
//! get equal fingerprints, so fingerprint buckets bound the number of
//! expensive isomorphism tests during descendant deduplication.

use super::abelian;
use super::quotient;
use super::series;
use super::subgroup::Igs;
use super::{Elt, PcGroup};
use crate::fplin;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Fingerprint {
    pub order_exp: u32,
    pub class: u32,
    pub pclass: u32,
    pub coclass: u32,
    pub rank: u32,
    /// dims of gamma_i / gamma_{i+1}
    pub gamma_layers: Vec<u32>,
    /// dims of P_i / P_{i+1}
    pub pseries_layers: Vec<u32>,
    /// dims of the derived series terms, whole group first
    pub derived_dims: Vec<u32>,
    pub abelianization: Vec<u32>,
    /// abelian invariants of gamma_2, gamma_3, ...
    pub gamma_abelian: Vec<Vec<u32>>,
    /// sorted abelian invariants of all maximal subgroups (rank <= 3 only)
    pub maximal_abelian: Vec<Vec<u32>>,
}

fn layer_dims(series: &[Igs<'_>]) -> Vec<u32> {
    series
        .windows(2)
        .map(|w| (w[0].dim() - w[1].dim()) as u32)
        .collect()
}

pub fn fingerprint(g: &PcGroup) -> Fingerprint {
    let gamma = series::lower_central(g);
    let pser = series::lower_exponent_p(g);
    let der = series::derived(g);
    let class = gamma.len() as u32 - 1;
    let rank = if pser.len() > 1 {
        (g.ngens() - pser[1].dim()) as u32
    } else {
        g.ngens() as u32
    };
    let gamma_abelian = gamma[1..gamma.len().saturating_sub(1)]
        .iter()
        .map(abelian::abelian_invariants)
        .collect();
    Fingerprint {
        order_exp: g.order_exp(),
        class,
        pclass: pser.len() as u32 - 1,
        coclass: g.order_exp() - class,
        rank,
        gamma_layers: layer_dims(&gamma),
        pseries_layers: layer_dims(&pser),
        derived_dims: der.iter().map(|t| t.dim() as u32).collect(),
        abelianization: abelian::abelianization(g),
        gamma_abelian,
        maximal_abelian: maximal_subgroup_types(g, &pser),
    }
}

/// Element counts by order, count of order-p^k elements at index k.
/// Walks the whole group, so callers should keep it to seven or eight
/// digits of order; above thirteen it reports nothing rather than stall.
/// Groups the fingerprint cannot separate often differ here, saving a
/// full isomorphism search during deduplication.
pub fn order_profile(g: &PcGroup) -> Vec<u64> {
    let n = g.ngens();
    if g.order_exp() > 13 {
        return Vec::new();
    }
    let p = g.p();
    let mut counts = vec![0u64; n + 1];
    let mut v = g.one();
    loop {
        let mut x = v.clone();
        let mut k = 0;
        while !fplin::is_zero(&x) {
            x = g.pow(&x, p as i64);
            k += 1;
        }
        counts[k] += 1;
        let mut pos = 0;
        loop {
            if pos == n {
                while counts.last() == Some(&0) {
                    counts.pop();
                }
                return counts;
            }
            v[pos] += 1;
            if v[pos] < p {
                break;
            }
            v[pos] = 0;
            pos += 1;
        }
    }
}

/// Abelian invariants of every maximal subgroup, as a sorted multiset.
/// Maximal subgroups are the preimages of the hyperplanes of G/Phi(G).
fn maximal_subgroup_types(g: &PcGroup, pser: &[Igs<'_>]) -> Vec<Vec<u32>> {
    if pser.len() < 2 {
        return Vec::new();
    }
    let phi = &pser[1];
    let d = g.ngens() - phi.dim();
    if d > 3 {
        return Vec::new();
    }
    let Ok((quot, proj)) = quotient::quotient(g, phi) else {
        return Vec::new();
    };
    debug_assert_eq!(quot.ngens(), d);
    let mut out = Vec::new();
    for hyper in fplin::subspaces(g.p(), d, d.saturating_sub(1)) {
        let mut gens: Vec<Elt> = phi.basis().to_vec();
        for row in &hyper {
            let mut lift = g.one();
            for (k, &e) in row.iter().enumerate() {
                lift[proj.surviving()[k]] = e;
            }
            gens.push(lift);
        }
        let h = Igs::subgroup_closure(g, &gens);
        debug_assert_eq!(h.dim(), g.ngens() - 1);
        out.push(abelian::abelian_invariants(&h));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn extraspecials_have_distinct_fingerprints() {
        let a = fingerprint(&catalog::extraspecial_exponent_p());
        let b = fingerprint(&catalog::extraspecial_exponent_p2());
        assert_eq!(a.class, 2);
        assert_eq!(a.coclass, 1);
        assert_eq!(a.gamma_layers, vec![2, 1]);
        assert_eq!(a.gamma_layers, b.gamma_layers);
        assert_eq!(a.abelianization, b.abelianization);
        // only the maximal subgroup types tell them apart
        assert_eq!(a.maximal_abelian, vec![vec![1, 1]; 4]);
        assert_eq!(
            b.maximal_abelian,
            vec![vec![1, 1], vec![2], vec![2], vec![2]]
        );
        assert_ne!(a, b);
    }

    #[test]
    fn cyclic_fingerprint() {
        let c = fingerprint(&catalog::cyclic(3, 3).unwrap());
        assert_eq!(c.class, 1);
        assert_eq!(c.pclass, 3);
        assert_eq!(c.rank, 1);
        assert_eq!(c.abelianization, vec![3]);
        assert_eq!(c.maximal_abelian, vec![vec![2]]);
    }

    #[test]
    fn elementary_fingerprint() {
        let e = fingerprint(&PcGroup::elementary_abelian(3, 2));
        assert_eq!(e.rank, 2);
        assert_eq!(e.maximal_abelian, vec![vec![1]; 4]);
    }

    #[test]
    fn order_profiles_of_small_groups() {
        assert_eq!(order_profile(&catalog::extraspecial_exponent_p()), vec![1, 26]);
        assert_eq!(order_profile(&catalog::extraspecial_exponent_p2()), vec![1, 8, 18]);
        assert_eq!(order_profile(&catalog::cyclic(3, 3).unwrap()), vec![1, 2, 6, 18]);
        assert_eq!(order_profile(&PcGroup::elementary_abelian(3, 2)), vec![1, 8]);
    }
}
