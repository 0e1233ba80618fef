//! Abelian invariants of subgroups, without re-presenting the subgroup.
//!
//! For a subgroup H with derived subgroup H', the image of the p^k-th power
//! map on H/H' has order p^(s_k) where s_k = dim(H'{h^(p^k)}) - dim(H').
//! The differences s_(k-1) - s_k count cyclic factors of order >= p^k, which
//! recovers the type of H/H' from subgroup dimensions alone.

use super::series;
use super::subgroup::Igs;
use super::{Elt, PcGroup};

/// Derived subgroup of a subgroup: generated by commutators of basis pairs,
/// closed under conjugation by the basis.
pub fn subgroup_derived<'a>(h: &Igs<'a>) -> Igs<'a> {
    let g = h.group();
    let mut gens: Vec<Elt> = Vec::new();
    for a in h.basis() {
        for b in h.basis() {
            gens.push(g.comm(a, b));
        }
    }
    Igs::closure_with_conjugators(g, &gens, h.basis())
}

/// Type of H/H' as descending prime-power exponents, so Z/9 x Z/3 is [2, 1].
pub fn abelian_invariants(h: &Igs<'_>) -> Vec<u32> {
    let g = h.group();
    let der = subgroup_derived(h);
    let base = der.dim();
    let mut s = vec![h.dim() - base];
    let mut k = 0u32;
    while *s.last().unwrap() > 0 {
        k += 1;
        let mut gens: Vec<Elt> = der.basis().to_vec();
        for b in h.basis() {
            let mut x = b.clone();
            for _ in 0..k {
                x = g.pow(&x, g.p() as i64);
            }
            gens.push(x);
        }
        let ak = Igs::closure_with_conjugators(g, &gens, h.basis());
        s.push(ak.dim() - base);
    }
    let mut counts = Vec::new();
    for k in 1..s.len() {
        counts.push((s[k - 1] - s[k]) as u32);
    }
    // counts[k-1] = number of cyclic factors of order >= p^k
    let mut out = Vec::new();
    for (k, &c) in counts.iter().enumerate().rev() {
        let next = if k + 1 < counts.len() { counts[k + 1] } else { 0 };
        for _ in 0..c.saturating_sub(next) {
            out.push(k as u32 + 1);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Invariants of G/[G,G].
pub fn abelianization(g: &PcGroup) -> Vec<u32> {
    abelian_invariants(&series::whole_group(g))
}

/// Logarithmic type string: [2, 1] renders as "(21)", the trivial type as "()".
pub fn type_string(t: &[u32]) -> String {
    let mut s = String::from("(");
    for e in t {
        s.push_str(&e.to_string());
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn extraspecial_abelianizations() {
        let e3 = catalog::extraspecial_exponent_p();
        assert_eq!(abelianization(&e3), vec![1, 1]);
        let e9 = catalog::extraspecial_exponent_p2();
        assert_eq!(abelianization(&e9), vec![1, 1]);
    }

    #[test]
    fn cyclic_group_and_subgroup() {
        let c = catalog::cyclic(3, 3).unwrap();
        assert_eq!(abelianization(&c), vec![3]);
        let h = Igs::subgroup_closure(&c, &[c.gen_elt(1)]);
        assert_eq!(h.dim(), 2);
        assert_eq!(abelian_invariants(&h), vec![2]);
    }

    #[test]
    fn mixed_subgroup_of_exponent_p2_extraspecial() {
        let g = catalog::extraspecial_exponent_p2();
        // g1 has order 9 and g3 = g1^3, so this subgroup is cyclic of order 9
        let h = Igs::subgroup_closure(&g, &[g.gen_elt(0), g.gen_elt(2)]);
        assert_eq!(h.dim(), 2);
        assert_eq!(abelian_invariants(&h), vec![2]);
        // while in the exponent-3 group the same subgroup is (3,3)
        let g = catalog::extraspecial_exponent_p();
        let h = Igs::subgroup_closure(&g, &[g.gen_elt(0), g.gen_elt(2)]);
        assert_eq!(abelian_invariants(&h), vec![1, 1]);
    }

    #[test]
    fn elementary_abelian_rank() {
        let g = PcGroup::elementary_abelian(3, 4);
        assert_eq!(abelianization(&g), vec![1, 1, 1, 1]);
        assert_eq!(type_string(&abelianization(&g)), "(1111)");
        assert_eq!(type_string(&[]), "()");
    }

    #[test]
    fn derived_of_whole_group_matches_series() {
        let g = catalog::extraspecial_exponent_p();
        let whole = series::whole_group(&g);
        assert_eq!(subgroup_derived(&whole).dim(), 1);
    }
}
