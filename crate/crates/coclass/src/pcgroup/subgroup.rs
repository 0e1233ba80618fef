//! Subgroups as induced generating sequences.
//!
//! A subgroup is stored as a triangular basis: elements with strictly
//! increasing leading coordinates, each with leading exponent 1. Left
//! sifting (multiplying by basis powers to kill lead coordinates in
//! ascending order) sends every element of a coset to the same lead-free
//! vector, so membership, coset representatives and subgroup size all come
//! from the basis alone.

use super::{Elt, PcGroup};
use crate::fplin;

#[derive(Debug, Clone)]
pub struct Igs<'a> {
    g: &'a PcGroup,
    basis: Vec<Elt>,
}

impl<'a> Igs<'a> {
    pub fn trivial(g: &'a PcGroup) -> Self {
        Igs { g, basis: Vec::new() }
    }

    /// Smallest subgroup containing the given elements.
    pub fn subgroup_closure(g: &'a PcGroup, gens: &[Elt]) -> Self {
        Igs::closure_with_conjugators(g, gens, &[])
    }

    /// Smallest normal subgroup containing the given elements.
    pub fn normal_closure(g: &'a PcGroup, gens: &[Elt]) -> Self {
        let conj: Vec<Elt> = (0..g.ngens()).map(|i| g.gen_elt(i)).collect();
        Igs::closure_with_conjugators(g, gens, &conj)
    }

    /// Smallest subgroup containing the given elements that is also closed
    /// under conjugation by each listed conjugator and its inverse.
    pub fn closure_with_conjugators(g: &'a PcGroup, gens: &[Elt], conjugators: &[Elt]) -> Self {
        let mut h = Igs::trivial(g);
        h.close(gens, conjugators);
        h
    }

    pub fn group(&self) -> &'a PcGroup {
        self.g
    }

    pub fn basis(&self) -> &[Elt] {
        &self.basis
    }

    /// log_p of the subgroup order.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn leads(&self) -> Vec<usize> {
        self.basis.iter().map(|b| fplin::lead(b).unwrap()).collect()
    }

    /// Kill lead coordinates in ascending order. The result is the unique
    /// representative of the right coset H*x with zeros at every lead.
    pub fn sift(&self, x: &Elt) -> Elt {
        let mut cur = x.clone();
        for b in &self.basis {
            let l = fplin::lead(b).unwrap();
            let e = cur[l];
            if e != 0 {
                let corr = self.g.pow(b, (self.g.p() - e) as i64);
                cur = self.g.mul(&corr, &cur);
                debug_assert_eq!(cur[l], 0);
            }
        }
        cur
    }

    pub fn contains(&self, x: &Elt) -> bool {
        self.g.is_one(&self.sift(x))
    }

    /// Insert one element; on growth, return the basis row it became.
    fn insert(&mut self, x: &Elt) -> Option<Elt> {
        let mut s = self.sift(x);
        let l = fplin::lead(&s)?;
        let k = fplin::inv_mod(s[l], self.g.p());
        if k != 1 {
            s = self.g.pow(&s, k as i64);
            debug_assert_eq!(s[l], 1);
        }
        let pos = self
            .basis
            .iter()
            .position(|b| fplin::lead(b).unwrap() > l)
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, s.clone());
        Some(s)
    }

    /// Worklist closure. Obligations are generous (products and conjugations
    /// in both orders, inverses, p-th powers) so the sift-to-identity set is
    /// guaranteed to be the generated subgroup; every inserted row is also
    /// conjugated by the external conjugators and their inverses.
    fn close(&mut self, gens: &[Elt], conjugators: &[Elt]) {
        let g = self.g;
        let mut queue: Vec<Elt> = gens.to_vec();
        while let Some(x) = queue.pop() {
            if g.is_one(&x) {
                continue;
            }
            let Some(b) = self.insert(&x) else {
                continue;
            };
            queue.push(g.inv(&b));
            queue.push(g.pow(&b, g.p() as i64));
            for c in self.basis.clone() {
                queue.push(g.mul(&b, &c));
                queue.push(g.mul(&c, &b));
                queue.push(g.conj(&b, &c));
                queue.push(g.conj(&c, &b));
                queue.push(g.conj(&b, &g.inv(&c)));
                queue.push(g.conj(&c, &g.inv(&b)));
            }
            for t in conjugators {
                queue.push(g.conj(&b, t));
                queue.push(g.conj(&b, &g.inv(t)));
            }
        }
    }

    pub fn is_normal(&self) -> bool {
        let g = self.g;
        self.basis.iter().all(|b| {
            (0..g.ngens()).all(|i| {
                let gi = g.gen_elt(i);
                self.contains(&g.conj(b, &gi)) && self.contains(&g.conj(b, &g.inv(&gi)))
            })
        })
    }

    /// Every element of the subgroup; exponential in dim, for small cases.
    pub fn elements(&self) -> Vec<Elt> {
        let g = self.g;
        let p = g.p();
        let mut out = vec![g.one()];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * p as usize);
            for e in 0..p {
                let be = g.pow(b, e as i64);
                for x in &out {
                    next.push(g.mul(&be, x));
                }
            }
            out = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::oracle;
    use std::collections::HashSet;

    #[test]
    fn heisenberg_derived_subgroup() {
        let g = catalog::extraspecial_exponent_p();
        let c = g.comm(&g.gen_elt(1), &g.gen_elt(0));
        let h = Igs::normal_closure(&g, &[c]);
        assert_eq!(h.dim(), 1);
        assert!(h.contains(&g.gen_elt(2)));
        assert!(!h.contains(&g.gen_elt(0)));
    }

    #[test]
    fn closure_is_a_subgroup() {
        let g = catalog::extraspecial_exponent_p();
        let h = Igs::subgroup_closure(&g, &[g.gen_elt(0), g.gen_elt(2)]);
        let elts = h.elements();
        assert_eq!(elts.len(), 9);
        let set: HashSet<Elt> = elts.iter().cloned().collect();
        assert_eq!(set.len(), 9);
        for a in &elts {
            for b in &elts {
                assert!(set.contains(&g.mul(a, b)));
            }
            assert!(set.contains(&g.inv(a)));
        }
    }

    #[test]
    fn sift_constant_on_cosets() {
        let g = catalog::extraspecial_exponent_p();
        let h = Igs::subgroup_closure(&g, &[g.gen_elt(1)]);
        for x in oracle::all_elements(&g) {
            let r = h.sift(&x);
            for m in h.elements() {
                assert_eq!(h.sift(&g.mul(&m, &x)), r);
            }
        }
    }

    #[test]
    fn whole_group_closure() {
        let g = catalog::extraspecial_exponent_p();
        let h = Igs::subgroup_closure(&g, &[g.gen_elt(0), g.gen_elt(1)]);
        assert_eq!(h.dim(), 3);
        for x in oracle::all_elements(&g) {
            assert!(h.contains(&x));
        }
    }
}
