//! Isomorphism testing and the inverting-automorphism search.
//!
//! Maps are searched by lifting images of the weight-1 generators of the
//! domain along the exponent-p series of the codomain. A node at level k
//! fixes the images modulo P_k; its children refine them modulo P_{k+1}.
//! Images of higher-weight generators are forced by their definitions, so
//! a surviving full-depth node is a genuine epimorphism between groups of
//! equal order, hence an isomorphism.

use super::invariants;
use super::series;
use super::subgroup::Igs;
use super::{Definition, Elt, PcGroup};
use crate::error::{Error, Result};
use crate::fplin;

fn identical_tables(a: &PcGroup, b: &PcGroup) -> bool {
    if a.p() != b.p() || a.ngens() != b.ngens() {
        return false;
    }
    let n = a.ngens();
    (0..n).all(|i| a.power_rhs(i) == b.power_rhs(i))
        && (1..n).all(|j| (0..j).all(|i| a.comm_rhs(j, i) == b.comm_rhs(j, i)))
}

/// Evaluate a normal-form vector of the domain at generator images.
fn eval_vec(h: &PcGroup, imgs: &[Elt], v: &Elt) -> Elt {
    let mut acc = h.one();
    for (m, &e) in v.iter().enumerate() {
        if e != 0 {
            acc = h.mul(&acc, &h.pow(&imgs[m], e as i64));
        }
    }
    acc
}

struct Search<'h> {
    g: &'h PcGroup,
    h: &'h PcGroup,
    /// exponent-p series of the codomain, P_1 first, trivial term last
    pser: Vec<Igs<'h>>,
    /// layers[k] spans P_k modulo P_{k+1}; index 1 is the top layer
    layers: Vec<Vec<Elt>>,
    top: usize,
    /// per weight-1 generator of the domain, the subgroup its image must
    /// multiply into at each level (inversion constraint), if any
    sigma_joins: Option<Vec<Igs<'h>>>,
    /// positions of the layer basis vectors when every layer consists of
    /// plain generator vectors; lets coordinates be read off normal forms
    unit_layers: Option<Vec<Vec<usize>>>,
    budget: u64,
    nodes: u64,
}

struct Node {
    level: usize,
    imgs: Vec<Elt>,
}

impl<'h> Search<'h> {
    fn new(g: &'h PcGroup, h: &'h PcGroup, budget: u64, sigma: bool) -> Self {
        let pser = series::lower_exponent_p(h);
        let top = pser.len() - 1;
        let mut layers: Vec<Vec<Elt>> = vec![Vec::new(); top + 1];
        for k in 1..=top {
            let mut ext = pser[k].clone();
            let mut layer = Vec::new();
            for b in pser[k - 1].basis() {
                if !ext.contains(b) {
                    layer.push(b.clone());
                    ext = Igs::subgroup_closure(h, &[ext.basis(), &[b.clone()]].concat());
                }
            }
            layers[k] = layer;
        }
        let sigma_joins = sigma.then(|| {
            let der = series::derived_subgroup(h);
            (1..=top + 1)
                .map(|k| {
                    let pk = if k <= top { pser[k - 1].basis() } else { &[] };
                    Igs::subgroup_closure(h, &[der.basis(), pk].concat())
                })
                .collect()
        });
        let unit_layers = {
            let mut per: Vec<Vec<usize>> = vec![Vec::new()];
            let mut total = 0;
            let mut plain = true;
            'scan: for layer in &layers[1..] {
                let mut pos = Vec::with_capacity(layer.len());
                for b in layer {
                    let nz: Vec<usize> =
                        (0..b.len()).filter(|&i| b[i] != 0).collect();
                    if nz.len() != 1 || b[nz[0]] != 1 {
                        plain = false;
                        break 'scan;
                    }
                    pos.push(nz[0]);
                }
                total += pos.len();
                per.push(pos);
            }
            (plain && total == h.ngens()).then_some(per)
        };
        Search { g, h, pser, layers, top, sigma_joins, unit_layers, budget, nodes: 0 }
    }

    fn rank(&self) -> usize {
        self.g.rank()
    }

    /// Forced images of every generator, or None when a definition image
    /// escapes the required filtration level.
    fn forced_images(&self, tuple: &[Elt]) -> Option<Vec<Elt>> {
        let g = self.g;
        let h = self.h;
        let d = self.rank();
        let mut imgs: Vec<Elt> = Vec::with_capacity(g.ngens());
        for m in 0..g.ngens() {
            let img = if m < d {
                tuple[m].clone()
            } else {
                match g.definition(m) {
                    Some(Definition::Power(i)) => h.pow(&imgs[i], h.p() as i64),
                    Some(Definition::Commutator(j, i)) => h.comm(&imgs[j], &imgs[i]),
                    None => return None,
                }
            };
            let w = g.weight(m) as usize;
            if w > 1 {
                let term = if w - 1 < self.pser.len() { &self.pser[w - 1] } else { return None };
                if !term.contains(&img) {
                    return None;
                }
            }
            imgs.push(img);
        }
        Some(imgs)
    }

    /// Relations of weight below the level must already hold modulo P_level.
    /// Levels past the series bottom test against the trivial subgroup.
    fn relations_hold(&self, imgs: &[Elt], level: usize) -> bool {
        let g = self.g;
        let h = self.h;
        let modulus = &self.pser[(level - 1).min(self.pser.len() - 1)];
        for i in 0..g.ngens() {
            let w = g.weight(i) + 1;
            if (w as usize) < level {
                let lhs = h.pow(&imgs[i], h.p() as i64);
                let rhs = eval_vec(h, imgs, g.power_rhs(i));
                if !modulus.contains(&h.mul(&lhs, &h.inv(&rhs))) {
                    return false;
                }
            }
        }
        for j in 1..g.ngens() {
            for i in 0..j {
                let w = g.weight(j) + g.weight(i);
                if (w as usize) < level {
                    let lhs = h.comm(&imgs[j], &imgs[i]);
                    let rhs = eval_vec(h, imgs, g.comm_rhs(j, i));
                    if !modulus.contains(&h.mul(&lhs, &h.inv(&rhs))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Defect lhs.rhs^-1 of one relation row: the power row of i when
    /// j == i, otherwise the commutator row (j, i).
    fn defect_of(&self, imgs: &[Elt], j: usize, i: usize) -> Elt {
        let h = self.h;
        if j == i {
            let lhs = h.pow(&imgs[i], h.p() as i64);
            let rhs = eval_vec(h, imgs, self.g.power_rhs(i));
            h.mul(&lhs, &h.inv(&rhs))
        } else {
            let lhs = h.comm(&imgs[j], &imgs[i]);
            let rhs = eval_vec(h, imgs, self.g.comm_rhs(j, i));
            h.mul(&lhs, &h.inv(&rhs))
        }
    }

    /// Images with a tail product appended to each: digit block i*r..(i+1)*r
    /// gives the layer exponents multiplied into image i.
    fn tailed(&self, imgs: &[Elt], layer: &[Elt], digits: &[u8]) -> Vec<Elt> {
        let r = layer.len();
        let mut out = imgs.to_vec();
        for (i, img) in out.iter_mut().enumerate() {
            for (k, z) in layer.iter().enumerate() {
                let e = digits[i * r + k];
                if e != 0 {
                    *img = self.h.mul(img, &self.h.pow(z, e as i64));
                }
            }
        }
        out
    }

    /// Coordinates of x over the layer at this index modulo the next term,
    /// or None when x does not even lie in the enclosing term. Past the
    /// series bottom the only member of the trivial layer is the identity.
    fn coords(&self, x: &Elt, layer_idx: usize) -> Option<Vec<u8>> {
        if layer_idx > self.top {
            return fplin::is_zero(x).then(Vec::new);
        }
        if let Some(unit) = &self.unit_layers {
            for pos in unit[1..layer_idx].iter().flatten() {
                if x[*pos] != 0 {
                    return None;
                }
            }
            return Some(unit[layer_idx].iter().map(|&i| x[i]).collect());
        }
        let layer: &[Elt] = &self.layers[layer_idx];
        let modulus = &self.pser[layer_idx.min(self.pser.len() - 1)];
        let p = self.h.p();
        let mut digits = vec![0u8; layer.len()];
        loop {
            let mut y = x.clone();
            for (b, &e) in layer.iter().zip(&digits) {
                if e != 0 {
                    y = self.h.mul(&y, &self.h.pow(b, -(e as i64)));
                }
            }
            if modulus.contains(&y) {
                return Some(digits);
            }
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return None;
                }
                digits[pos] += 1;
                if digits[pos] < p {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }

    /// The tails worth refining a node by, or None when the caller should
    /// fall back to plain enumeration.
    ///
    /// Tails are central modulo the following term and have order p there,
    /// so one level down every relation defect is an affine function of the
    /// tail digits over F_p. Probing the zero tail and each unit tail gives
    /// the rows; an all-ones probe cross-checks the model before it is
    /// trusted. Rows are consumed freshest weight first and stop at full
    /// rank, so a few relations usually settle the system. Unused rows can
    /// only let extra tails through, and those die at their own level test.
    fn tail_solutions(&mut self, node: &Node) -> Result<Option<Vec<Vec<u8>>>> {
        let level = node.level;
        let d = self.rank();
        let r = self.layers[level].len();
        let nvar = d * r;
        let child_level = level + 2;
        let g = self.g;
        let row_weight = |&(j, i): &(usize, usize)| {
            if j == i {
                (g.weight(i) + 1) as usize
            } else {
                (g.weight(j) + g.weight(i)) as usize
            }
        };
        let mut rels: Vec<(usize, usize)> = Vec::new();
        for i in 0..g.ngens() {
            rels.push((i, i));
        }
        for j in 1..g.ngens() {
            for i in 0..j {
                rels.push((j, i));
            }
        }
        rels.retain(|r| row_weight(r) < child_level);
        if rels.is_empty() {
            return Ok(None);
        }
        rels.sort_by_key(|r| std::cmp::Reverse(row_weight(r)));

        let layer = &self.layers[level];
        let mut probes: Vec<Vec<u8>> = Vec::with_capacity(nvar + 2);
        probes.push(vec![0; nvar]);
        for k in 0..nvar {
            let mut dg = vec![0; nvar];
            dg[k] = 1;
            probes.push(dg);
        }
        probes.push(vec![1; nvar]);
        let mut fulls: Vec<Vec<Elt>> = Vec::with_capacity(probes.len());
        for dg in &probes {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { limit: self.budget });
            }
            let imgs = self.tailed(&node.imgs, layer, dg);
            match self.forced_images(&imgs) {
                Some(full) => fulls.push(full),
                None => return Ok(None),
            }
        }

        let p = self.h.p() as i32;
        let mut ech = fplin::Echelon::new(self.h.p(), nvar + 1);
        let mut rows: Vec<(Vec<u8>, u8)> = Vec::new();
        'rows: for &(j, i) in &rels {
            let mut cs: Vec<Vec<u8>> = Vec::with_capacity(fulls.len());
            for full in &fulls {
                let def = self.defect_of(full, j, i);
                match self.coords(&def, level + 1) {
                    Some(c) => cs.push(c),
                    None => return Ok(None),
                }
            }
            for q in 0..cs[0].len() {
                let base = cs[0][q] as i32;
                let mut pred = base;
                for k in 0..nvar {
                    pred += cs[k + 1][q] as i32 - base;
                }
                if pred.rem_euclid(p) != cs[nvar + 1][q] as i32 {
                    return Ok(None);
                }
                let a: Vec<u8> = (0..nvar)
                    .map(|k| (cs[k + 1][q] as i32 - base).rem_euclid(p) as u8)
                    .collect();
                let b = (-base).rem_euclid(p) as u8;
                if fplin::is_zero(&a) && b == 0 {
                    continue;
                }
                let mut aug = a.clone();
                aug.push(b);
                ech.insert(aug);
                if ech.pivots().contains(&nvar) {
                    return Ok(Some(Vec::new()));
                }
                rows.push((a, b));
                if ech.rank() == nvar {
                    break 'rows;
                }
            }
        }
        Ok(Some(fplin::solve_affine(self.h.p(), nvar, &rows)))
    }

    fn sigma_ok(&self, tuple: &[Elt], level: usize) -> bool {
        let Some(joins) = &self.sigma_joins else {
            return true;
        };
        let join = &joins[level - 1];
        tuple
            .iter()
            .enumerate()
            .all(|(i, img)| join.contains(&self.h.mul(img, &self.h.gen_elt(i))))
    }

    /// Exact validity of a finished tuple: the defining relations and, in
    /// the inverting search, the inversion condition itself.
    fn accepts(&self, imgs: &[Elt]) -> bool {
        if !self.sigma_ok(imgs, self.top + 1) {
            return false;
        }
        match self.forced_images(imgs) {
            Some(full) => self.relations_hold(&full, self.top + 2),
            None => false,
        }
    }

    /// Depth-first search over level-2 seed tuples and their refinements.
    ///
    /// A node carries images exact modulo P_level. Survivors of the level
    /// checks are refined by layer tails; the tails worth pushing are read
    /// off the affine system of the next-level relation tests, falling back
    /// to enumeration of the whole tail box when the system does not close.
    /// Full-depth survivors are re-verified exactly before being reported.
    fn run(&mut self, seeds: Vec<Vec<Elt>>) -> Result<bool> {
        let mut stack: Vec<Node> = seeds
            .into_iter()
            .rev()
            .map(|imgs| Node { level: 2, imgs })
            .collect();
        while let Some(node) = stack.pop() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { limit: self.budget });
            }
            if node.level == self.top + 1 {
                if self.accepts(&node.imgs) {
                    return Ok(true);
                }
                continue;
            }
            if !self.sigma_ok(&node.imgs, node.level + 1) {
                continue;
            }
            let Some(full) = self.forced_images(&node.imgs) else {
                continue;
            };
            if !self.relations_hold(&full, node.level + 1) {
                continue;
            }
            let d = self.rank();
            let r = self.layers[node.level].len();
            if r == 0 {
                stack.push(Node { level: node.level + 1, imgs: node.imgs });
                continue;
            }
            if let Some(tails) = self.tail_solutions(&node)? {
                let layer = &self.layers[node.level];
                for dg in &tails {
                    let imgs = self.tailed(&node.imgs, layer, dg);
                    stack.push(Node { level: node.level + 1, imgs });
                }
                continue;
            }
            // odometer over all layer products for each of the d images
            let layer = &self.layers[node.level];
            let mut digits = vec![0u8; d * r];
            loop {
                stack.push(Node {
                    level: node.level + 1,
                    imgs: self.tailed(&node.imgs, layer, &digits),
                });
                let mut pos = 0;
                loop {
                    if pos == digits.len() {
                        break;
                    }
                    digits[pos] += 1;
                    if digits[pos] < self.h.p() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == digits.len() {
                    break;
                }
            }
        }
        Ok(false)
    }

    /// All tuples of products of the top layer with invertible coefficient
    /// matrices: the candidate images modulo P_2.
    fn gl_seeds(&self) -> Vec<Vec<Elt>> {
        let d = self.rank();
        let basis = &self.layers[1];
        if basis.len() != d {
            return Vec::new();
        }
        let p = self.h.p();
        let mut seeds = Vec::new();
        let mut mat = vec![0u8; d * d];
        loop {
            let mut ech = fplin::Echelon::new(p, d);
            for row in 0..d {
                ech.insert(mat[row * d..(row + 1) * d].to_vec());
            }
            if ech.rank() == d {
                let tuple: Vec<Elt> = (0..d)
                    .map(|i| {
                        let mut acc = self.h.one();
                        for (k, b) in basis.iter().enumerate() {
                            let e = mat[i * d + k];
                            if e != 0 {
                                acc = self.h.mul(&acc, &self.h.pow(b, e as i64));
                            }
                        }
                        acc
                    })
                    .collect();
                seeds.push(tuple);
            }
            let mut pos = 0;
            loop {
                if pos == mat.len() {
                    return seeds;
                }
                mat[pos] += 1;
                if mat[pos] < p {
                    break;
                }
                mat[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Isomorphism test. The side with definitions becomes the domain; budget
/// exhaustion is an error distinct from a negative answer.
pub fn is_isomorphic(a: &PcGroup, b: &PcGroup, budget: u64) -> Result<bool> {
    if a.p() != b.p() {
        return Err(Error::PrimeMismatch(a.p(), b.p()));
    }
    if a.ngens() != b.ngens() {
        return Ok(false);
    }
    if identical_tables(a, b) {
        return Ok(true);
    }
    if invariants::fingerprint(a) != invariants::fingerprint(b) {
        return Ok(false);
    }
    let (dom, cod) = if a.has_definitions() {
        (a, b)
    } else if b.has_definitions() {
        (b, a)
    } else {
        return Err(Error::MalformedPresentation(
            "isomorphism test needs definitions on at least one side".into(),
        ));
    };
    let mut search = Search::new(dom, cod, budget, false);
    let seeds = search.gl_seeds();
    search.run(seeds)
}

/// Does G admit an automorphism that inverts every element of G/[G,G]?
pub fn has_inverting_automorphism(g: &PcGroup, budget: u64) -> Result<bool> {
    if !g.has_definitions() {
        return Err(Error::MalformedPresentation(
            "automorphism search needs definitions".into(),
        ));
    }
    let mut search = Search::new(g, g, budget, true);
    let d = search.rank();
    let seed: Vec<Elt> = (0..d).map(|i| g.inv(&g.gen_elt(i))).collect();
    search.run(vec![seed])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const BUDGET: u64 = 1_000_000;

    #[test]
    fn group_is_isomorphic_to_itself_after_permuting_generators() {
        let g = catalog::extraspecial_exponent_p();
        // swap the two weight-1 generators: [g2', g1'] = [g1, g2] = g3^-1
        let n = 3;
        let mut comms = vec![vec![0u8; n]; 3];
        comms[0] = vec![0, 0, 2];
        let h = PcGroup::from_tables(
            3,
            vec![vec![0; n]; n],
            comms,
            vec![1, 1, 2],
            vec![None, None, None],
        )
        .unwrap();
        assert!(is_isomorphic(&g, &h, BUDGET).unwrap());
    }

    #[test]
    fn extraspecials_are_not_isomorphic() {
        let a = catalog::extraspecial_exponent_p();
        let b = catalog::extraspecial_exponent_p2();
        assert!(!is_isomorphic(&a, &b, BUDGET).unwrap());
    }

    #[test]
    fn cyclic_and_elementary_differ() {
        let a = catalog::cyclic(3, 2).unwrap();
        let b = PcGroup::elementary_abelian(3, 2);
        assert!(!is_isomorphic(&a, &b, BUDGET).unwrap());
        assert!(is_isomorphic(&b, &PcGroup::elementary_abelian(3, 2), BUDGET).unwrap());
    }

    #[test]
    fn abelian_groups_admit_inversion() {
        for g in [PcGroup::elementary_abelian(3, 2), catalog::cyclic(3, 3).unwrap()] {
            assert!(has_inverting_automorphism(&g, BUDGET).unwrap());
        }
    }

    #[test]
    fn heisenberg_admits_inversion() {
        // x -> x^-1, y -> y^-1 sends [y,x] to [y^-1,x^-1] = [y,x] modulo
        // higher terms, and the class is 2, so this extends
        let g = catalog::extraspecial_exponent_p();
        assert!(has_inverting_automorphism(&g, BUDGET).unwrap());
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        let g = catalog::extraspecial_exponent_p();
        let h = {
            let n = 3;
            let mut comms = vec![vec![0u8; n]; 3];
            comms[0] = vec![0, 0, 2];
            PcGroup::from_tables(
                3,
                vec![vec![0; n]; n],
                comms,
                vec![1, 1, 2],
                vec![None, None, None],
            )
            .unwrap()
        };
        match is_isomorphic(&g, &h, 1) {
            Err(Error::BudgetExceeded { limit: 1 }) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
