//! Quotients by normal subgroups.
//!
//! Coset representatives are the sift normal forms, which are exactly the
//! exponent vectors vanishing at the basis leads of the normal subgroup.
//! The surviving coordinates therefore carry an induced pc presentation,
//! and a counting argument (the presented group surjects onto G/N and has
//! at most as many normal forms) makes it consistent for free.

use super::series;
use super::subgroup::Igs;
use super::{Definition, Elt, PcGroup};
use crate::error::{Error, Result};
use crate::fplin;

/// Indices of the generators of G that survive in the quotient, in order.
#[derive(Debug, Clone)]
pub struct Projection {
    surviving: Vec<usize>,
}

impl Projection {
    pub fn surviving(&self) -> &[usize] {
        &self.surviving
    }

    /// Image of a group element under the quotient map.
    pub fn project(&self, n: &Igs<'_>, x: &Elt) -> Elt {
        let s = n.sift(x);
        self.surviving.iter().map(|&i| s[i]).collect()
    }
}

/// G/N for a normal subgroup N, with the projection data.
/// Weights are recomputed from the exponent-p series of the quotient;
/// definitions survive only where the defining relation still matches.
pub fn quotient(g: &PcGroup, n: &Igs<'_>) -> Result<(PcGroup, Projection)> {
    debug_assert!(n.is_normal(), "quotient requires a normal subgroup");
    let leads: std::collections::BTreeSet<usize> = n.leads().into_iter().collect();
    let surviving: Vec<usize> = (0..g.ngens()).filter(|i| !leads.contains(i)).collect();
    let proj = Projection { surviving: surviving.clone() };
    let m = surviving.len();
    let restrict = |x: &Elt| -> Elt {
        let s = n.sift(x);
        debug_assert!(fplin::lead(&s).map_or(true, |l| !leads.contains(&l)));
        surviving.iter().map(|&i| s[i]).collect()
    };
    let mut powers = Vec::with_capacity(m);
    for &s in &surviving {
        powers.push(restrict(g.power_rhs(s)));
    }
    let mut comms = Vec::with_capacity(m * (m - 1) / 2);
    for j in 1..m {
        for i in 0..j {
            comms.push(restrict(g.comm_rhs(surviving[j], surviving[i])));
        }
    }
    let provisional = PcGroup::from_tables(g.p(), powers, comms, vec![1; m], vec![None; m])?;
    let weights = series::exponent_p_weights(&provisional);
    let pos_of: std::collections::BTreeMap<usize, usize> =
        surviving.iter().enumerate().map(|(q, &s)| (s, q)).collect();
    let mut defs: Vec<Option<Definition>> = vec![None; m];
    for (q, &s) in surviving.iter().enumerate() {
        let unit_at = |v: &Elt| -> Option<usize> {
            let l = fplin::lead(v)?;
            if v[l] == 1 && v.iter().enumerate().all(|(i, &e)| i == l || e == 0) {
                Some(l)
            } else {
                None
            }
        };
        defs[q] = match g.definition(s) {
            Some(Definition::Power(i)) => pos_of.get(&i).and_then(|&qi| {
                (unit_at(provisional.power_rhs(qi)) == Some(q)).then_some(Definition::Power(qi))
            }),
            Some(Definition::Commutator(j, i)) => match (pos_of.get(&j), pos_of.get(&i)) {
                (Some(&qj), Some(&qi)) if qj > qi => {
                    (unit_at(provisional.comm_rhs(qj, qi)) == Some(q))
                        .then_some(Definition::Commutator(qj, qi))
                }
                _ => None,
            },
            None => None,
        };
    }
    let q = provisional.with_annotations(weights, defs)?;
    Ok((q, proj))
}

/// G modulo the last nontrivial term of its lower central series.
pub fn parent(g: &PcGroup) -> Result<(PcGroup, Projection)> {
    let gamma = series::lower_central(g);
    if gamma.len() < 3 {
        return Err(Error::RootReached);
    }
    let last = &gamma[gamma.len() - 2];
    quotient(g, last)
}

/// G modulo its second derived subgroup.
pub fn metabelianization(g: &PcGroup) -> Result<(PcGroup, Projection)> {
    let der = series::derived(g);
    if der.len() < 3 {
        let n = Igs::trivial(g);
        return quotient(g, &n);
    }
    let dd = &der[2];
    quotient(g, dd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::oracle;

    #[test]
    fn extraspecial_mod_center_is_elementary() {
        let g = catalog::extraspecial_exponent_p();
        let z = Igs::normal_closure(&g, &[g.gen_elt(2)]);
        let (q, _) = quotient(&g, &z).unwrap();
        assert_eq!(q.ngens(), 2);
        assert!(q.is_consistent());
        assert_eq!(series::nilpotency_class(&q), 1);
        assert!(q.power_rhs(0).iter().all(|&e| e == 0));
        assert!(q.comm_rhs(1, 0).iter().all(|&e| e == 0));
    }

    #[test]
    fn exponent_p2_extraspecial_mod_center() {
        let g = catalog::extraspecial_exponent_p2();
        let z = Igs::normal_closure(&g, &[g.gen_elt(2)]);
        let (q, _) = quotient(&g, &z).unwrap();
        // the image is elementary even though g1 has order 9 upstairs
        assert_eq!(q.ngens(), 2);
        assert!(q.power_rhs(0).iter().all(|&e| e == 0));
    }

    #[test]
    fn cyclic_quotient_keeps_definitions() {
        let c = catalog::cyclic(3, 3).unwrap();
        let n = Igs::normal_closure(&c, &[c.gen_elt(2)]);
        let (q, _) = quotient(&c, &n).unwrap();
        assert_eq!(q.ngens(), 2);
        assert_eq!(q.weights(), &[1, 2]);
        assert_eq!(q.definition(1), Some(crate::pcgroup::Definition::Power(0)));
        oracle::check_all_products(&q);
    }

    #[test]
    fn parent_of_extraspecial() {
        let g = catalog::extraspecial_exponent_p();
        let (q, _) = parent(&g).unwrap();
        assert_eq!(q.ngens(), 2);
        assert!(parent(&q).is_err());
    }

    #[test]
    fn projection_is_a_homomorphism() {
        let g = catalog::extraspecial_exponent_p2();
        let z = Igs::normal_closure(&g, &[g.gen_elt(2)]);
        let (q, pr) = quotient(&g, &z).unwrap();
        for a in oracle::all_elements(&g) {
            for b in oracle::all_elements(&g) {
                let lhs = pr.project(&z, &g.mul(&a, &b));
                let rhs = q.mul(&pr.project(&z, &a), &pr.project(&z, &b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn metabelian_already_unchanged() {
        let g = catalog::extraspecial_exponent_p();
        let (q, _) = metabelianization(&g).unwrap();
        assert_eq!(q.ngens(), 3);
        assert!(q.is_consistent());
    }
}
