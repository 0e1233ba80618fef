//! The p-covering group.
//!
//! For a group G of exponent-p class c, given by a standardized presentation
//! with definitions, the cover G* is built by appending a central elementary
//! abelian tail generator to every non-defining relation of weight at most
//! c+1 and then forcing consistency. The surviving tails span the
//! p-multiplicator M; the tails of weight exactly c+1 span the nucleus
//! P_{c+1}(G*). Immediate descendants are quotients G*/U by allowable
//! subgroups U <= M (those with U + nucleus = M).

use crate::error::{Error, Result};
use crate::fplin::{self, Echelon};
use crate::pcgroup::{Definition, Elt, PcGroup};

#[derive(Debug, Clone)]
pub struct Cover {
    group: PcGroup,
    n_orig: usize,
    /// per tail coordinate (offset by n_orig): the relation it came from
    tail_rel: Vec<Definition>,
    c: u32,
}

impl Cover {
    pub fn group(&self) -> &PcGroup {
        &self.group
    }

    pub fn original_gens(&self) -> usize {
        self.n_orig
    }

    /// Exponent-p class of the covered group.
    pub fn class(&self) -> u32 {
        self.c
    }

    pub fn multiplicator_rank(&self) -> u32 {
        (self.group.ngens() - self.n_orig) as u32
    }

    pub fn nuclear_rank(&self) -> u32 {
        self.nucleus_positions().len() as u32
    }

    /// Positions within the tail block of the tails spanning the nucleus.
    pub fn nucleus_positions(&self) -> Vec<usize> {
        (self.n_orig..self.group.ngens())
            .filter(|&k| self.group.weight(k) == self.c + 1)
            .map(|k| k - self.n_orig)
            .collect()
    }

    pub fn tail_relation(&self, pos: usize) -> Definition {
        self.tail_rel[pos]
    }
}

/// Relation weight: a power g_i^p weighs w_i + 1, a commutator [g_j, g_i]
/// weighs w_j + w_i.
fn relation_weight(g: &PcGroup, r: Definition) -> u32 {
    match r {
        Definition::Power(i) => g.weight(i) + 1,
        Definition::Commutator(j, i) => g.weight(j) + g.weight(i),
    }
}

fn relation_rhs<'g>(g: &'g PcGroup, r: Definition) -> &'g Elt {
    match r {
        Definition::Power(i) => g.power_rhs(i),
        Definition::Commutator(j, i) => g.comm_rhs(j, i),
    }
}

pub fn p_cover(g: &PcGroup) -> Result<Cover> {
    if !g.has_definitions() {
        return Err(Error::MalformedPresentation(
            "p-cover requires definitions for every generator of weight >= 2".into(),
        ));
    }
    let n = g.ngens();
    let p = g.p();
    let c = g.max_weight();
    let defined: std::collections::HashSet<Definition> =
        g.definitions().iter().flatten().copied().collect();
    let mut rels: Vec<(Definition, u32)> = Vec::new();
    for i in 0..n {
        let r = Definition::Power(i);
        if !defined.contains(&r) {
            rels.push((r, relation_weight(g, r)));
        }
    }
    for j in 1..n {
        for i in 0..j {
            let r = Definition::Commutator(j, i);
            if !defined.contains(&r) {
                rels.push((r, relation_weight(g, r)));
            }
        }
    }
    // relations at or beyond weight c+1 must already be trivial in G
    for &(r, w) in &rels {
        if w >= c + 1 && !fplin::is_zero(relation_rhs(g, r)) {
            return Err(Error::MalformedPresentation(format!(
                "relation of weight {w} has nontrivial right-hand side; weights are not the exponent-p weights"
            )));
        }
    }
    let mut tailed: Vec<(Definition, u32)> =
        rels.into_iter().filter(|&(_, w)| w <= c + 1).collect();
    // ascending tail weights keep echelon leads at minimal weight, which
    // preserves the grading when reductions rewrite right-hand sides
    tailed.sort_by_key(|&(_, w)| w);
    let t = tailed.len();
    let nn = n + t;
    let ext = |v: &Elt| -> Elt {
        let mut w = v.clone();
        w.resize(nn, 0);
        w
    };
    let mut powers: Vec<Elt> = (0..n).map(|i| ext(g.power_rhs(i))).collect();
    powers.extend(std::iter::repeat(vec![0u8; nn]).take(t));
    let mut comms: Vec<Elt> = Vec::with_capacity(nn * (nn - 1) / 2);
    for j in 1..nn {
        for i in 0..j {
            if j < n {
                comms.push(ext(g.comm_rhs(j, i)));
            } else {
                comms.push(vec![0u8; nn]);
            }
        }
    }
    for (a, &(r, _)) in tailed.iter().enumerate() {
        let k = n + a;
        match r {
            Definition::Power(i) => powers[i][k] = 1,
            Definition::Commutator(j, i) => comms[j * (j - 1) / 2 + i][k] = 1,
        }
    }
    let mut weights: Vec<u32> = g.weights().to_vec();
    weights.extend(tailed.iter().map(|&(_, w)| w));
    let mut defs: Vec<Option<Definition>> = g.definitions().to_vec();
    defs.extend(std::iter::repeat(None).take(t));
    let mut group = PcGroup::from_tables(p, powers, comms, weights, defs)?;
    let mut tail_rel: Vec<Definition> = tailed.iter().map(|&(r, _)| r).collect();

    // force consistency: discrepancies are pure tail vectors; quotient them
    // away and repeat. The cover presentation is graded of class c+1, so
    // test words of weight up to (c+1)+1 form a sufficient set.
    loop {
        let bad = group.consistency_failures(Some(c + 2));
        if bad.is_empty() {
            break;
        }
        let t_cur = group.ngens() - n;
        let mut ech = Echelon::new(p, t_cur);
        for (lhs, rhs) in &bad {
            assert_eq!(
                &lhs[..n],
                &rhs[..n],
                "consistency discrepancy is not a pure tail vector"
            );
            let d: Vec<u8> = (n..group.ngens())
                .map(|k| (lhs[k] + p - rhs[k]) % p)
                .collect();
            ech.insert(d);
        }
        assert!(ech.rank() > 0);
        let (killed_group, killed_rel) = kill_tails(&group, n, &tail_rel, &ech)?;
        group = killed_group;
        tail_rel = killed_rel;
    }
    Ok(Cover { group, n_orig: n, tail_rel, c })
}

/// Quotient the cover by a span of tail vectors, renumbering the surviving
/// tail coordinates. Tails are central and elementary abelian, so this is
/// pure linear algebra on the tail block of every right-hand side.
fn kill_tails(
    group: &PcGroup,
    n: usize,
    tail_rel: &[Definition],
    ech: &Echelon,
) -> Result<(PcGroup, Vec<Definition>)> {
    let t_old = group.ngens() - n;
    let pivots: std::collections::BTreeSet<usize> = ech.pivots().iter().copied().collect();
    let surviving: Vec<usize> = (0..t_old).filter(|a| !pivots.contains(a)).collect();
    let nn = n + surviving.len();
    let map = |v: &Elt| -> Elt {
        let reduced = ech.reduce(v[n..].to_vec());
        let mut w = Vec::with_capacity(nn);
        w.extend_from_slice(&v[..n]);
        w.extend(surviving.iter().map(|&a| reduced[a]));
        w
    };
    let mut powers = Vec::with_capacity(nn);
    for i in 0..n {
        powers.push(map(group.power_rhs(i)));
    }
    powers.extend(std::iter::repeat(vec![0u8; nn]).take(surviving.len()));
    let mut comms = Vec::with_capacity(nn * (nn - 1) / 2);
    for j in 1..nn {
        for i in 0..j {
            if j < n {
                comms.push(map(group.comm_rhs(j, i)));
            } else {
                comms.push(vec![0u8; nn]);
            }
        }
    }
    let mut weights: Vec<u32> = group.weights()[..n].to_vec();
    weights.extend(surviving.iter().map(|&a| group.weight(n + a)));
    let mut defs: Vec<Option<Definition>> = group.definitions()[..n].to_vec();
    defs.extend(std::iter::repeat(None).take(surviving.len()));
    let new_group = PcGroup::from_tables(group.p(), powers, comms, weights, defs)?;
    let new_rel = surviving.iter().map(|&a| tail_rel[a]).collect();
    Ok((new_group, new_rel))
}

/// Weight-1 images extended to every cover generator, or None when the
/// candidate breaks a relation. Ordinary generators follow their definitions;
/// a tail generator is recovered from the relation it was appended to, which
/// reads lhs = w * t with w supported on the original generators. A returned
/// map satisfies the whole presentation exactly and is surjective whenever
/// the seed is invertible modulo the Frattini subgroup, hence an
/// automorphism.
fn cover_endomorphism(cov: &Cover, seed: &[Elt]) -> Option<Vec<Elt>> {
    let g = &cov.group;
    let n = cov.n_orig;
    let nn = g.ngens();
    let p = g.p();
    let d = seed.len();
    let eval = |img: &[Elt], v: &Elt| -> Option<Elt> {
        let mut acc = g.one();
        for (k, &e) in v.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if k >= img.len() {
                return None;
            }
            acc = g.mul(&acc, &g.pow(&img[k], e as i64));
        }
        Some(acc)
    };
    let mut img: Vec<Elt> = seed.to_vec();
    for k in d..n {
        let e = match g.definition(k)? {
            Definition::Power(i) => g.pow(&img[i], p as i64),
            Definition::Commutator(j, i) => g.comm(&img[j], &img[i]),
        };
        img.push(e);
    }
    for a in 0..nn - n {
        let r = cov.tail_rel[a];
        let (lhs, row) = match r {
            Definition::Power(i) => (g.pow(&img[i], p as i64), g.power_rhs(i)),
            Definition::Commutator(j, i) => (g.comm(&img[j], &img[i]), g.comm_rhs(j, i)),
        };
        if row[n + a] != 1 {
            return None;
        }
        let mut w = row.clone();
        w[n + a] = 0;
        let base = eval(&img[..n], &w)?;
        img.push(g.mul(&g.inv(&base), &lhs));
    }
    for i in 0..nn {
        if g.pow(&img[i], p as i64) != eval(&img, g.power_rhs(i))? {
            return None;
        }
    }
    for j in 1..nn {
        for i in 0..j {
            if g.comm(&img[j], &img[i]) != eval(&img, g.comm_rhs(j, i))? {
                return None;
            }
        }
    }
    Some(img)
}

/// Automorphisms of the cover found without any search, as the matrices by
/// which they act on the multiplicator. Candidates are linear substitutions
/// on the weight-1 layer and single-generator twists of the identity; each
/// is validated relation by relation, so the list is a subset of the true
/// stabilizer of the multiplicator and orbit merging under it stays sound.
fn cover_symmetries(cov: &Cover) -> Vec<Vec<Vec<u8>>> {
    let g = &cov.group;
    let n = cov.n_orig;
    let nn = g.ngens();
    let mu = nn - n;
    let p = g.p();
    let d = (0..nn).take_while(|&k| g.weight(k) == 1).count();
    let mut seeds: Vec<Vec<Elt>> = Vec::new();
    if d == 2 {
        for digits in 0..(p as u32).pow(4) {
            let m: Vec<u8> = (0..4)
                .map(|q| ((digits / (p as u32).pow(q)) % p as u32) as u8)
                .collect();
            if (m[0] as i32 * m[3] as i32 - m[1] as i32 * m[2] as i32).rem_euclid(p as i32) == 0 {
                continue;
            }
            let row = |a: u8, b: u8| {
                g.mul(&g.pow(&g.gen_elt(0), a as i64), &g.pow(&g.gen_elt(1), b as i64))
            };
            seeds.push(vec![row(m[0], m[1]), row(m[2], m[3])]);
        }
    }
    for i in 0..d {
        for k in d..nn {
            let mut seed: Vec<Elt> = (0..d).map(|q| g.gen_elt(q)).collect();
            seed[i] = g.mul(&seed[i], &g.gen_elt(k));
            seeds.push(seed);
        }
    }
    let mut mats: Vec<Vec<Vec<u8>>> = Vec::new();
    for seed in &seeds {
        let Some(img) = cover_endomorphism(cov, seed) else {
            continue;
        };
        let mut rows = Vec::with_capacity(mu);
        for a in 0..mu {
            let t = &img[n + a];
            if !t[..n].iter().all(|&x| x == 0) {
                rows.clear();
                break;
            }
            rows.push(t[n..].to_vec());
        }
        if rows.len() != mu {
            continue;
        }
        let identity = rows
            .iter()
            .enumerate()
            .all(|(a, r)| r.iter().enumerate().all(|(q, &x)| x == u8::from(q == a)));
        if !identity && !mats.contains(&rows) {
            mats.push(rows);
        }
    }
    mats
}

type LookalikeKey = (Vec<u64>, Option<(u32, u32)>, Option<(u32, u32, u32, u32)>);

/// Invariants a shade deeper than the fingerprint, computed only when two
/// candidates collide there: order statistics, cover ranks, and for
/// two-generator groups the transfer-kernel counters.
fn lookalike_key(g: &PcGroup) -> LookalikeKey {
    let profile = crate::pcgroup::invariants::order_profile(g);
    let ranks = p_cover(g)
        .ok()
        .map(|c| (c.nuclear_rank(), c.multiplicator_rank()));
    let kernels = if g.rank() == 2 {
        crate::artin::artin_pattern(g)
            .ok()
            .map(|p| (p.n_total, p.n_fixed, p.occupation, p.repetitions))
    } else {
        None
    };
    (profile, ranks, kernels)
}

/// Immediate descendants of step size s: the quotients of the cover by the
/// allowable subgroups of that codimension, one representative per
/// isomorphism class. Terminal groups (nuclear rank 0) have none.
pub fn descendants(g: &PcGroup, s: u32, budget: u64) -> Result<Vec<PcGroup>> {
    if s == 0 {
        return Err(Error::MalformedPresentation("step size must be positive".into()));
    }
    let cov = p_cover(g)?;
    let nu = cov.nuclear_rank();
    if nu == 0 {
        return Ok(Vec::new());
    }
    if s > nu {
        return Err(Error::StepSizeExceedsNuclearRank { s, nu });
    }
    let mu = cov.multiplicator_rank() as usize;
    let p = g.p();
    let nucleus = cov.nucleus_positions();
    let sym = cover_symmetries(&cov);
    let mut claimed: std::collections::HashSet<Vec<u8>> = std::collections::HashSet::new();
    type Keyed = (crate::pcgroup::invariants::Fingerprint, Option<LookalikeKey>, PcGroup);
    let mut reps: Vec<Keyed> = Vec::new();
    for basis in fplin::subspaces(p, mu, mu - s as usize) {
        let mut u = Echelon::new(p, mu);
        for row in &basis {
            u.insert(row.clone());
        }
        // allowable: U plus the nucleus spans the whole multiplicator
        let mut span = u.clone();
        for &pos in &nucleus {
            let mut v = vec![0u8; mu];
            v[pos] = 1;
            span.insert(v);
        }
        if span.rank() < mu {
            continue;
        }
        // subspaces in one symmetry orbit give isomorphic quotients; keep the
        // first and mark the rest before they come up in enumeration order
        if claimed.contains(&basis.concat()) {
            continue;
        }
        let mut queue: Vec<Vec<Vec<u8>>> = vec![basis.clone()];
        claimed.insert(basis.concat());
        while let Some(b) = queue.pop() {
            for m in &sym {
                let mut ech = Echelon::new(p, mu);
                for row in &b {
                    ech.insert(fplin::vec_mat(p, row, m));
                }
                let image = ech.reduced_rows();
                if claimed.insert(image.concat()) {
                    queue.push(image);
                }
            }
        }
        let child = cover_quotient(&cov, &u)?;
        let fp = crate::pcgroup::invariants::fingerprint(&child);
        let mut child_key: Option<LookalikeKey> = None;
        let mut seen = false;
        for (rfp, rkey, rep) in reps.iter_mut() {
            if *rfp != fp {
                continue;
            }
            let ck = child_key.get_or_insert_with(|| lookalike_key(&child));
            let rk = rkey.get_or_insert_with(|| lookalike_key(rep));
            if ck != rk {
                continue;
            }
            if crate::pcgroup::iso::is_isomorphic(&child, rep, budget)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push((fp, child_key, child));
        }
    }
    Ok(reps.into_iter().map(|(_, _, g)| g).collect())
}

/// Quotient of the cover by a subgroup U of the multiplicator, presented on
/// a generator basis in which every new generator is defined by a relation
/// of weight c+1. Tails of such relations span the new layer in any
/// allowable quotient, so the resulting presentation is standardized: new
/// generators carry weight c+1 and strict definitions.
pub(crate) fn cover_quotient(cov: &Cover, u: &Echelon) -> Result<PcGroup> {
    let g = &cov.group;
    let n = cov.n_orig;
    let p = g.p();
    let mu = g.ngens() - n;
    let surviving: Vec<usize> = {
        let pivots: std::collections::BTreeSet<usize> = u.pivots().iter().copied().collect();
        (0..mu).filter(|a| !pivots.contains(a)).collect()
    };
    let s = surviving.len();
    let restrict = |tail: &[u8]| -> Vec<u8> {
        let r = u.reduce(tail.to_vec());
        surviving.iter().map(|&a| r[a]).collect()
    };
    // choose defining relations: nucleus tails whose images form a basis
    let mut chosen: Vec<(Definition, Vec<u8>)> = Vec::new();
    let mut ech = Echelon::new(p, s);
    for &pos in &cov.nucleus_positions() {
        let mut unit = vec![0u8; mu];
        unit[pos] = 1;
        let img = restrict(&unit);
        if ech.insert(img.clone()) {
            chosen.push((cov.tail_rel[pos], img));
        }
        if chosen.len() == s {
            break;
        }
    }
    assert_eq!(chosen.len(), s, "nucleus tails must span the new layer");
    let bmat: Vec<Vec<u8>> = (0..s)
        .map(|row| (0..s).map(|col| chosen[col].1[row]).collect())
        .collect();
    let binv = fplin::invert(p, &bmat).expect("chosen tail images are a basis");
    let nn = n + s;
    let map = |v: &Elt| -> Elt {
        let mut w = Vec::with_capacity(nn);
        w.extend_from_slice(&v[..n]);
        w.extend(fplin::mat_vec(p, &binv, &restrict(&v[n..])));
        w
    };
    let mut powers = Vec::with_capacity(nn);
    for i in 0..n {
        powers.push(map(g.power_rhs(i)));
    }
    powers.extend(std::iter::repeat(vec![0u8; nn]).take(s));
    let mut comms = Vec::with_capacity(nn * (nn - 1) / 2);
    for j in 1..nn {
        for i in 0..j {
            if j < n {
                comms.push(map(g.comm_rhs(j, i)));
            } else {
                comms.push(vec![0u8; nn]);
            }
        }
    }
    let mut weights = g.weights()[..n].to_vec();
    weights.extend(std::iter::repeat(cov.c + 1).take(s));
    let mut defs = g.definitions()[..n].to_vec();
    defs.extend(chosen.iter().map(|&(r, _)| Some(r)));
    PcGroup::from_tables(p, powers, comms, weights, defs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::pcgroup::series;

    #[test]
    fn cover_of_elementary_rank2() {
        let g = PcGroup::elementary_abelian(3, 2);
        let cov = p_cover(&g).unwrap();
        assert_eq!(cov.group().ngens(), 5);
        assert_eq!(cov.multiplicator_rank(), 3);
        assert_eq!(cov.nuclear_rank(), 3);
        assert!(cov.group().is_consistent());
    }

    #[test]
    fn cover_of_heisenberg() {
        let g = catalog::extraspecial_exponent_p();
        let cov = p_cover(&g).unwrap();
        // p-multiplicator rank 4 = rank of the Schur multiplier plus the
        // rank of the abelianization; nucleus allows steps of size up to 2
        assert_eq!(cov.multiplicator_rank(), 4);
        assert_eq!(cov.nuclear_rank(), 2);
        assert!(cov.group().is_consistent());
    }

    #[test]
    fn exponent_p2_extraspecial_is_terminal() {
        let g = catalog::extraspecial_exponent_p2();
        let cov = p_cover(&g).unwrap();
        assert_eq!(cov.nuclear_rank(), 0);
        assert!(cov.group().is_consistent());
    }

    #[test]
    fn cover_of_cyclic_9_is_cyclic_27() {
        let g = catalog::cyclic(3, 2).unwrap();
        let cov = p_cover(&g).unwrap();
        assert_eq!(cov.multiplicator_rank(), 1);
        assert_eq!(cov.nuclear_rank(), 1);
        assert_eq!(series::nilpotency_class(cov.group()), 1);
        assert_eq!(
            crate::pcgroup::abelian::abelianization(cov.group()),
            vec![3]
        );
    }

    #[test]
    fn nucleus_matches_series_computation() {
        for g in [
            PcGroup::elementary_abelian(3, 2),
            catalog::extraspecial_exponent_p(),
            catalog::extraspecial_exponent_p2(),
            catalog::cyclic(3, 2).unwrap(),
        ] {
            let cov = p_cover(&g).unwrap();
            // series[k] is P_{k+1}, so the nucleus P_{c+1} sits at index c
            let series = series::lower_exponent_p(cov.group());
            let at = cov.class() as usize;
            let dim = if at < series.len() { series[at].dim() } else { 0 };
            assert_eq!(dim as u32, cov.nuclear_rank(), "nucleus mismatch");
            for pos in cov.nucleus_positions() {
                let e = cov.group().gen_elt(cov.original_gens() + pos);
                assert!(series[at].contains(&e));
            }
        }
    }

    #[test]
    fn cover_projects_back_onto_the_group() {
        use crate::pcgroup::subgroup::Igs;
        let g = catalog::extraspecial_exponent_p();
        let cov = p_cover(&g).unwrap();
        let tails: Vec<Elt> = (g.ngens()..cov.group().ngens())
            .map(|k| cov.group().gen_elt(k))
            .collect();
        let m = Igs::normal_closure(cov.group(), &tails);
        assert_eq!(m.dim() as u32, cov.multiplicator_rank());
        let (q, _) = crate::pcgroup::quotient::quotient(cov.group(), &m).unwrap();
        assert_eq!(q.ngens(), g.ngens());
        for j in 1..q.ngens() {
            for i in 0..j {
                assert_eq!(q.comm_rhs(j, i), g.comm_rhs(j, i));
            }
        }
        for i in 0..q.ngens() {
            assert_eq!(q.power_rhs(i), g.power_rhs(i));
        }
    }

    const BUDGET: u64 = 1_000_000;

    #[test]
    fn elementary_rank2_step1_descendants() {
        // the three groups of order 27 with elementary Frattini quotient of
        // rank 2: both extraspecials plus Z9 x Z3
        let v = PcGroup::elementary_abelian(3, 2);
        let kids = descendants(&v, 1, BUDGET).unwrap();
        assert_eq!(kids.len(), 3);
        let n = 3;
        let mut powers = vec![vec![0u8; n]; n];
        powers[0][2] = 1;
        let comms = vec![vec![0u8; n]; n * (n - 1) / 2];
        let z9z3 =
            PcGroup::from_tables(3, powers, comms, vec![1, 1, 2], vec![None; n]).unwrap();
        for target in [
            catalog::extraspecial_exponent_p(),
            catalog::extraspecial_exponent_p2(),
            z9z3,
        ] {
            let hits = kids
                .iter()
                .filter(|k| crate::pcgroup::iso::is_isomorphic(k, &target, BUDGET).unwrap())
                .count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn elementary_rank2_step2_descendants() {
        let v = PcGroup::elementary_abelian(3, 2);
        let kids = descendants(&v, 2, BUDGET).unwrap();
        assert_eq!(kids.len(), 3);
        for k in &kids {
            assert_eq!(k.order_exp(), 4);
            assert!(k.is_consistent());
            assert!(k.has_definitions());
            assert_eq!(series::exponent_p_class(k), 2);
        }
        // Z9 x Z9 is one of them
        let n = 4;
        let mut powers = vec![vec![0u8; n]; n];
        powers[0][2] = 1;
        powers[1][3] = 1;
        let comms = vec![vec![0u8; n]; n * (n - 1) / 2];
        let z9z9 =
            PcGroup::from_tables(3, powers, comms, vec![1, 1, 2, 2], vec![None; n]).unwrap();
        let hits = kids
            .iter()
            .filter(|k| crate::pcgroup::iso::is_isomorphic(k, &z9z9, BUDGET).unwrap())
            .count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn elementary_rank2_step3_is_the_cover_itself() {
        let v = PcGroup::elementary_abelian(3, 2);
        let cov = p_cover(&v).unwrap();
        let kids = descendants(&v, 3, BUDGET).unwrap();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].order_exp(), 5);
        assert!(crate::pcgroup::iso::is_isomorphic(&kids[0], cov.group(), BUDGET).unwrap());
    }

    #[test]
    fn cyclic_nine_descends_to_cyclic_twentyseven() {
        let g = catalog::cyclic(3, 2).unwrap();
        let kids = descendants(&g, 1, BUDGET).unwrap();
        assert_eq!(kids.len(), 1);
        let c27 = catalog::cyclic(3, 3).unwrap();
        assert!(crate::pcgroup::iso::is_isomorphic(&kids[0], &c27, BUDGET).unwrap());
    }

    #[test]
    fn terminal_group_has_no_descendants() {
        let g = catalog::extraspecial_exponent_p2();
        assert!(descendants(&g, 1, BUDGET).unwrap().is_empty());
        assert!(descendants(&g, 5, BUDGET).unwrap().is_empty());
    }

    #[test]
    fn step_size_bounds_are_enforced() {
        let v = PcGroup::elementary_abelian(3, 2);
        assert!(matches!(
            descendants(&v, 0, BUDGET),
            Err(Error::MalformedPresentation(_))
        ));
        assert!(matches!(
            descendants(&v, 4, BUDGET),
            Err(Error::StepSizeExceedsNuclearRank { s: 4, nu: 3 })
        ));
    }

    #[test]
    fn extraspecial_children_form_the_coclass_one_quartet() {
        let g = catalog::extraspecial_exponent_p();
        let kids = descendants(&g, 1, BUDGET).unwrap();
        assert_eq!(kids.len(), 4);
        for k in &kids {
            assert_eq!(k.order_exp(), 4);
            assert!(k.is_consistent());
            assert!(k.has_definitions());
            assert_eq!(series::nilpotency_class(k), 3);
            assert_eq!(k.order_exp() - series::nilpotency_class(k), 1);
            assert_eq!(k.rank(), 2);
            for w in 1..k.ngens() {
                assert!(k.weight(w - 1) <= k.weight(w));
            }
            // the parent is recovered as the quotient by the last layer
            let pser = series::lower_exponent_p(k);
            let (q, _) = crate::pcgroup::quotient::quotient(k, &pser[2]).unwrap();
            assert!(crate::pcgroup::iso::is_isomorphic(&q, &g, BUDGET).unwrap());
        }
    }
}
