//! Transfer kernels and targets for groups with abelianization (p,p).
//!
//! The four maximal subgroups are generated over the derived subgroup by
//! the list A = (y, x, xy, xy^2) with transversal witnesses B = (x, y, y,
//! y), where x, y are the first two pc generators. The transfer into M_i
//! is evaluated on that pair only: it factors through the abelianization,
//! so the kernel is read off from the nine cosets of the derived subgroup.

use crate::error::{Error, Result};
use crate::pcgroup::{abelian, iso, series, subgroup::Igs, Elt, PcGroup};
use crate::pcover;

/// Named transfer kernel types that occur in the trees studied here. The
/// counter predicates below are mutually exclusive, so a pattern either
/// pins down one name or stays unclassified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Tkt {
    C18,
    C21,
    E6,
    E8,
    E9,
    E14,
    G16,
    H4,
}

impl std::fmt::Display for Tkt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tkt::C18 => "c.18",
            Tkt::C21 => "c.21",
            Tkt::E6 => "E.6",
            Tkt::E8 => "E.8",
            Tkt::E9 => "E.9",
            Tkt::E14 => "E.14",
            Tkt::G16 => "G.16",
            Tkt::H4 => "H.4",
        };
        write!(f, "{}", s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ArtinPattern {
    /// kernel digits in A-list order; 0 means the kernel is all of G
    pub kappa: Vec<u8>,
    pub n_total: u32,
    pub n_fixed: u32,
    pub occupation: u32,
    pub repetitions: u32,
    pub intersection: u32,
    /// logarithmic abelian type of each maximal subgroup, A-list order
    pub tau: Vec<Vec<u32>>,
    pub classification: Option<Tkt>,
}

impl ArtinPattern {
    /// Target types as a sorted multiset, largest first.
    pub fn tau_sorted(&self) -> Vec<Vec<u32>> {
        let mut v = self.tau.clone();
        v.sort();
        v.reverse();
        v
    }
}

impl std::fmt::Display for ArtinPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "κ=(")?;
        for d in &self.kappa {
            write!(f, "{}", d)?;
        }
        write!(
            f,
            ") [N={},F={},O={},R={},I={}] type={} τ=[",
            self.n_total,
            self.n_fixed,
            self.occupation,
            self.repetitions,
            self.intersection,
            match self.classification {
                Some(t) => t.to_string(),
                None => "unclassified".into(),
            }
        )?;
        for (k, t) in self.tau.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", abelian::type_string(t))?;
        }
        write!(f, "]")
    }
}

fn counters(kappa: &[u8]) -> (u32, u32, u32, u32, u32) {
    let n_total = kappa.iter().filter(|&&d| d == 0).count() as u32;
    let n_fixed = kappa
        .iter()
        .enumerate()
        .filter(|&(i, &d)| d as usize == i + 1)
        .count() as u32;
    let mut seen: Vec<u8> = Vec::new();
    for &d in kappa {
        if !seen.contains(&d) {
            seen.push(d);
        }
    }
    let occupation = seen.len() as u32;
    let mut repetitions = 0u32;
    let mut doublet = 0usize;
    for digit in 1..=kappa.len() {
        let count = kappa.iter().filter(|&&d| d as usize == digit).count() as u32;
        if count >= 2 {
            doublet = digit;
        }
        if count > repetitions {
            repetitions = count;
        }
    }
    let intersection = if doublet >= 1 && kappa[doublet - 1] as usize == doublet {
        1
    } else {
        0
    };
    (n_total, n_fixed, occupation, repetitions, intersection)
}

fn classify(n_total: u32, n_fixed: u32, occupation: u32, repetitions: u32) -> Option<Tkt> {
    match (n_total, n_fixed) {
        (1, 2) => Some(Tkt::C21),
        (1, 0) => Some(Tkt::C18),
        (0, 3) => Some(Tkt::E8),
        (0, 1) => Some(Tkt::E6),
        (0, 2) if occupation == 3 => Some(Tkt::E9),
        (0, 2) if occupation == 4 => Some(Tkt::G16),
        (0, 0) if occupation == 3 => Some(Tkt::E14),
        (0, 0) if repetitions == 3 => Some(Tkt::H4),
        _ => None,
    }
}

/// Generator list A, transversal list B and the maximal subgroups they
/// pick out.
fn setup(g: &PcGroup) -> Result<(Vec<Elt>, Vec<Elt>, Igs<'_>)> {
    let ab = abelian::abelianization(g);
    if ab != vec![1, 1] {
        return Err(Error::AbelianizationNotPP(abelian::type_string(&ab)));
    }
    let p = g.p();
    let x = g.gen_elt(0);
    let y = g.gen_elt(1);
    let mut a_list = vec![y.clone()];
    let mut b_list = vec![x.clone()];
    for e in 0..p {
        a_list.push(g.mul(&x, &g.pow(&y, e as i64)));
        b_list.push(y.clone());
    }
    let dg = series::derived_subgroup(g);
    Ok((a_list, b_list, dg))
}

/// Kernel digits, counters and target types of the four transfers.
pub fn artin_pattern(g: &PcGroup) -> Result<ArtinPattern> {
    let p = g.p();
    let (a_list, b_list, dg) = setup(g)?;
    let k = p as usize + 1;
    let mut kappa = Vec::with_capacity(k);
    let mut tau = Vec::with_capacity(k);
    for i in 0..k {
        let ai = &a_list[i];
        let bi = &b_list[i];
        let mut gens = vec![ai.clone()];
        gens.extend(dg.basis().iter().cloned());
        let m = Igs::subgroup_closure(g, &gens);
        debug_assert_eq!(m.dim(), g.ngens() - 1, "maximal subgroup has index p");
        tau.push(abelian::abelian_invariants(&m));
        let dm = abelian::subgroup_derived(&m);
        let im_a = g.mul(
            &g.pow(&g.mul(ai, &g.inv(bi)), p as i64),
            &g.pow(bi, p as i64),
        );
        let im_b = g.pow(bi, p as i64);
        for v in [
            g.pow(&im_a, p as i64),
            g.pow(&im_b, p as i64),
            g.comm(&im_a, &im_b),
        ] {
            if !dm.contains(&v) {
                return Err(Error::HypothesisViolation(
                    "transfer images do not define a homomorphism on G/G'".into(),
                ));
            }
        }
        let mut pairs = Vec::new();
        for s in 0..p {
            for t in 0..p {
                let v = g.mul(&g.pow(&im_a, s as i64), &g.pow(&im_b, t as i64));
                if dm.contains(&v) {
                    pairs.push((s, t));
                }
            }
        }
        if pairs.len() == (p as usize) * (p as usize) {
            kappa.push(0);
            continue;
        }
        if pairs.len() == 1 {
            return Err(Error::KernelOfOrderOne(i + 1));
        }
        assert_eq!(pairs.len(), p as usize, "kernel is a subgroup of (p,p)");
        let (s, t) = *pairs.iter().find(|&&(s, t)| (s, t) != (0, 0)).unwrap();
        let rep = g.mul(&g.pow(ai, s as i64), &g.pow(bi, t as i64));
        let mut kt_gens = vec![rep];
        kt_gens.extend(dg.basis().iter().cloned());
        let kt = Igs::subgroup_closure(g, &kt_gens);
        let digit = (0..k)
            .find(|&j| kt.contains(&a_list[j]))
            .expect("an index-p kernel contains exactly one A entry");
        kappa.push(digit as u8 + 1);
    }
    let (n_total, n_fixed, occupation, repetitions, intersection) = counters(&kappa);
    Ok(ArtinPattern {
        kappa,
        n_total,
        n_fixed,
        occupation,
        repetitions,
        intersection,
        tau,
        classification: classify(n_total, n_fixed, occupation, repetitions),
    })
}

/// Child filter used while walking trees. Flag 0 asks for the capable
/// scaffold child (c.21 or c.18 depending on the root); from class 5 on,
/// terminal children share the scaffold counters, so capability is what
/// singles out the vertex the tree continues through. Flag 1 asks for
/// E.8 or E.6, flag 2 for E.9 or E.14.
pub fn is_admissible(
    g: &PcGroup,
    flag: u8,
    variant: crate::catalog::RootVariant,
) -> Result<bool> {
    use crate::catalog::RootVariant::*;
    let pat = artin_pattern(g)?;
    let (nt, nf, occ) = (pat.n_total, pat.n_fixed, pat.occupation);
    Ok(match (variant, flag) {
        (Eight, 0) => nt == 1 && nf == 2 && pcover::p_cover(g)?.nuclear_rank() >= 1,
        (Eight, 1) => nt == 0 && nf == 3,
        (Eight, 2) => nt == 0 && nf == 2 && occ == 3,
        (Six, 0) => nt == 1 && nf == 0 && pcover::p_cover(g)?.nuclear_rank() >= 1,
        (Six, 1) => nt == 0 && nf == 1,
        (Six, 2) => nt == 0 && nf == 0 && occ == 3,
        _ => {
            return Err(Error::CatalogDomain(format!(
                "admissibility flag must be 0, 1 or 2, got {}",
                flag
            )))
        }
    })
}

/// True when some automorphism inverts the abelianization.
pub fn is_sigma(g: &PcGroup, budget: u64) -> Result<bool> {
    iso::has_inverting_automorphism(g, budget)
}

/// Schur σ-group test: two generators, two relations, and an inverting
/// automorphism.
pub fn is_schur_sigma(g: &PcGroup, budget: u64) -> Result<bool> {
    if g.rank() != 2 {
        return Ok(false);
    }
    if pcover::p_cover(g)?.multiplicator_rank() != 2 {
        return Ok(false);
    }
    is_sigma(g, budget)
}
