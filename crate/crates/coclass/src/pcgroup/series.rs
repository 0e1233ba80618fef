//! Characteristic series: lower central, lower exponent-p, derived.

use super::subgroup::Igs;
use super::{Elt, PcGroup};

pub fn whole_group(g: &PcGroup) -> Igs<'_> {
    let gens: Vec<Elt> = (0..g.ngens()).map(|i| g.gen_elt(i)).collect();
    Igs::subgroup_closure(g, &gens)
}

fn commutators_with_gens(g: &PcGroup, h: &Igs<'_>) -> Vec<Elt> {
    let mut out = Vec::new();
    for b in h.basis() {
        for i in 0..g.ngens() {
            out.push(g.comm(b, &g.gen_elt(i)));
        }
    }
    out
}

/// gamma_1 = G, gamma_{i+1} = [gamma_i, G]; the list ends with the first
/// trivial term, so its length is the nilpotency class plus one.
pub fn lower_central(g: &PcGroup) -> Vec<Igs<'_>> {
    let mut series = vec![whole_group(g)];
    loop {
        let cur = series.last().unwrap();
        if cur.dim() == 0 {
            return series;
        }
        let next = Igs::normal_closure(g, &commutators_with_gens(g, cur));
        debug_assert!(next.dim() < cur.dim(), "lower central series must shrink");
        series.push(next);
    }
}

/// P_1 = G, P_{i+1} = [P_i, G] P_i^p; ends with the first trivial term.
pub fn lower_exponent_p(g: &PcGroup) -> Vec<Igs<'_>> {
    let mut series = vec![whole_group(g)];
    loop {
        let cur = series.last().unwrap();
        if cur.dim() == 0 {
            return series;
        }
        let mut gens = commutators_with_gens(g, cur);
        for b in cur.basis() {
            gens.push(g.pow(b, g.p() as i64));
        }
        let next = Igs::normal_closure(g, &gens);
        debug_assert!(next.dim() < cur.dim(), "exponent-p series must shrink");
        series.push(next);
    }
}

/// G^(0) = G, G^(k+1) = [G^(k), G^(k)]; ends with the first trivial term.
pub fn derived(g: &PcGroup) -> Vec<Igs<'_>> {
    let mut series = vec![whole_group(g)];
    loop {
        let cur = series.last().unwrap();
        if cur.dim() == 0 {
            return series;
        }
        let mut gens = Vec::new();
        for a in cur.basis() {
            for b in cur.basis() {
                gens.push(g.comm(a, b));
            }
        }
        let next = Igs::normal_closure(g, &gens);
        if next.dim() == cur.dim() {
            // perfect tail cannot happen in a p-group
            unreachable!("derived series stalled");
        }
        series.push(next);
    }
}

pub fn nilpotency_class(g: &PcGroup) -> u32 {
    lower_central(g).len() as u32 - 1
}

pub fn exponent_p_class(g: &PcGroup) -> u32 {
    lower_exponent_p(g).len() as u32 - 1
}

/// Derived subgroup [G, G].
pub fn derived_subgroup(g: &PcGroup) -> Igs<'_> {
    let mut gens = Vec::new();
    for j in 0..g.ngens() {
        for i in 0..j {
            gens.push(g.comm_rhs(j, i).clone());
        }
    }
    Igs::normal_closure(g, &gens)
}

/// For each pc generator, the largest k with g_i in P_k(G).
pub fn exponent_p_weights(g: &PcGroup) -> Vec<u32> {
    let series = lower_exponent_p(g);
    (0..g.ngens())
        .map(|i| {
            let e = g.gen_elt(i);
            let mut w = 1;
            for (k, term) in series.iter().enumerate().skip(1) {
                if term.contains(&e) {
                    w = k as u32 + 1;
                } else {
                    break;
                }
            }
            w
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn heisenberg_series() {
        let g = catalog::extraspecial_exponent_p();
        let gamma = lower_central(&g);
        assert_eq!(gamma.iter().map(|t| t.dim()).collect::<Vec<_>>(), vec![3, 1, 0]);
        assert_eq!(nilpotency_class(&g), 2);
        assert_eq!(exponent_p_class(&g), 2);
        assert_eq!(derived(&g).iter().map(|t| t.dim()).collect::<Vec<_>>(), vec![3, 1, 0]);
        assert_eq!(exponent_p_weights(&g), vec![1, 1, 2]);
    }

    #[test]
    fn cyclic_series() {
        let c = catalog::cyclic(3, 3).unwrap();
        assert_eq!(nilpotency_class(&c), 1);
        assert_eq!(exponent_p_class(&c), 3);
        assert_eq!(exponent_p_weights(&c), vec![1, 2, 3]);
    }

    #[test]
    fn elementary_abelian_series() {
        let g = crate::pcgroup::PcGroup::elementary_abelian(3, 2);
        assert_eq!(nilpotency_class(&g), 1);
        assert_eq!(exponent_p_class(&g), 1);
        assert_eq!(exponent_p_weights(&g), vec![1, 1]);
    }

    #[test]
    fn annotation_matches_computed_weights() {
        for g in [catalog::extraspecial_exponent_p(), catalog::extraspecial_exponent_p2()] {
            assert_eq!(exponent_p_weights(&g), g.weights());
        }
    }
}
