//! Known groups and parametrized families, given by explicit presentations.
//!
//! The two-generator pro-3 groups behind the mainline and cover families
//! are stated on generators a, t. Presentations that are usually written
//! with auxiliary generators (u, y, z for the cover limit) are rewritten
//! here on a, t alone by eliminating each auxiliary generator through its
//! defining relation, since the class-by-class quotient machinery insists
//! on minimal generating sets.

use crate::error::{Error, Result};
use crate::pcgroup::{Definition, PcGroup};
use crate::pquotient::words::Word;
use crate::pquotient::FpPresentation;

fn tri(j: usize, i: usize) -> usize {
    j * (j - 1) / 2 + i
}

/// Extraspecial group of order 27 and exponent 3 (the Heisenberg group).
pub fn extraspecial_exponent_p() -> PcGroup {
    let n = 3;
    let mut comms = vec![vec![0u8; n]; tri(n - 1, 0) + n - 1];
    comms[tri(1, 0)] = vec![0, 0, 1];
    PcGroup::from_tables(
        3,
        vec![vec![0; n]; n],
        comms,
        vec![1, 1, 2],
        vec![None, None, Some(Definition::Commutator(1, 0))],
    )
    .expect("valid tables")
}

/// Extraspecial group of order 27 and exponent 9.
pub fn extraspecial_exponent_p2() -> PcGroup {
    let n = 3;
    let mut powers = vec![vec![0u8; n]; n];
    powers[0] = vec![0, 0, 1];
    let mut comms = vec![vec![0u8; n]; 3];
    comms[tri(1, 0)] = vec![0, 0, 1];
    PcGroup::from_tables(
        3,
        powers,
        comms,
        vec![1, 1, 2],
        vec![None, None, Some(Definition::Power(0))],
    )
    .expect("valid tables")
}

/// Cyclic group of order p^n as a pc presentation.
pub fn cyclic(p: u8, n: usize) -> Result<PcGroup> {
    let mut powers = vec![vec![0u8; n]; n];
    for i in 0..n.saturating_sub(1) {
        powers[i][i + 1] = 1;
    }
    let comms = vec![vec![0u8; n]; n * (n - 1) / 2];
    let weights = (1..=n as u32).collect();
    let mut defs: Vec<Option<Definition>> = vec![None; n];
    for (i, d) in defs.iter_mut().enumerate().skip(1) {
        *d = Some(Definition::Power(i - 1));
    }
    PcGroup::from_tables(p, powers, comms, weights, defs)
}

/// Which of the two order-243 coclass-2 roots a tree walk is anchored at.
/// The variant fixes the sign of the limit presentation and the variant e
/// of the cover limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RootVariant {
    Six,
    Eight,
}

impl RootVariant {
    pub fn sign(self) -> i8 {
        match self {
            RootVariant::Six => -1,
            RootVariant::Eight => 1,
        }
    }

    pub fn e(self) -> u8 {
        match self {
            RootVariant::Six => 0,
            RootVariant::Eight => 1,
        }
    }
}

impl std::fmt::Display for RootVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootVariant::Six => write!(f, "<243,6>"),
            RootVariant::Eight => write!(f, "<243,8>"),
        }
    }
}

fn a() -> Word {
    Word::gen(0)
}

fn t() -> Word {
    Word::gen(1)
}

/// The pro-3 group ⟨a,t | (at)^3 = a^3, [[t,a],t] = a^(3 sign)⟩ whose
/// finite quotients run through the mainlines.
pub fn limit_presentation(sign: i8) -> Result<FpPresentation> {
    if sign != 1 && sign != -1 {
        return Err(Error::CatalogDomain(format!(
            "mainline sign must be +1 or -1, got {}",
            sign
        )));
    }
    let relators = vec![
        Word::prod([Word::pow(Word::prod([a(), t()]), 3), Word::pow(a(), -3)]),
        Word::prod([
            Word::comm([t(), a(), t()]),
            Word::pow(a(), -3 * sign as i64),
        ]),
    ];
    Ok(FpPresentation { ngens: 2, relators })
}

/// Finite mainline vertex presentation: the limit group capped by
/// a^(3^r), and by [t,a]^(3^l) for odd class c = 2l+1 or t^(3^l) for even
/// c = 2l. Its class-c quotient is the mainline vertex of coclass r.
pub fn mainline_quotient(sign: i8, r: u32, c: u32) -> Result<FpPresentation> {
    if r < 2 || c < 2 * r - 1 {
        return Err(Error::CatalogDomain(format!(
            "mainline index (r={}, c={}) needs r >= 2 and c >= 2r-1",
            r, c
        )));
    }
    let mut pres = limit_presentation(sign)?;
    pres.relators.push(Word::pow(a(), 3i64.pow(r)));
    let l = c / 2;
    if c % 2 == 1 {
        pres.relators
            .push(Word::pow(Word::comm([t(), a()]), 3i64.pow(l)));
    } else {
        pres.relators.push(Word::pow(t(), 3i64.pow(l)));
    }
    Ok(pres)
}

fn u_word() -> Word {
    Word::conj(t(), a())
}

fn z_word() -> Word {
    Word::prod([Word::pow(a(), 3), Word::comm([t(), a(), t()])])
}

fn y_word(e: u8) -> Word {
    // u^a t u y = [u,t]^e solved for y
    Word::prod([
        Word::inv(Word::prod([Word::conj(u_word(), a()), t(), u_word()])),
        Word::pow(Word::comm([u_word(), t()]), e as i64),
    ])
}

/// The cover limit: an infinite pro-3 group with two central order-3
/// generators y, z riding on the metabelian skeleton. Stated on a, t with
/// u = t^a, z = a^3 [t,a,t] and y solved from u^a t u y = [u,t]^e.
pub fn cover_limit(e: u8) -> Result<FpPresentation> {
    if e > 1 {
        return Err(Error::CatalogDomain(format!(
            "cover limit variant e must be 0 or 1, got {}",
            e
        )));
    }
    let u = u_word();
    let y = y_word(e);
    let z = z_word();
    let relators = vec![
        Word::comm([u.clone(), t(), t()]),
        Word::comm([u.clone(), t(), u.clone()]),
        Word::pow(y.clone(), 3),
        Word::comm([a(), y.clone()]),
        Word::comm([t(), y.clone()]),
        Word::comm([u.clone(), y.clone()]),
        Word::comm([z.clone(), y]),
        Word::pow(z.clone(), 3),
        Word::comm([t(), z.clone()]),
        Word::comm([u, z]),
    ];
    Ok(FpPresentation { ngens: 2, relators })
}

/// w_c = [t, a, ..., a] with c-1 copies of a; lives in the c-th term of
/// the lower central series.
fn w_word(c: u32) -> Word {
    Word::comm(std::iter::once(t()).chain(std::iter::repeat(a()).take(c as usize - 1)))
}

/// v_c = [w_(c-2), [t,a]], also of lower-central weight c.
fn v_word(c: u32) -> Word {
    Word::comm([w_word(c - 2), Word::comm([t(), a()])])
}

/// Class-c quotient with parameter k of the cover limit: two more
/// relators y w_c^k v_c and z w_c pin the central generators to the last
/// lower-central layer.
pub fn cover_quotient(e: u8, k: i8, c: u32) -> Result<FpPresentation> {
    if c < 4 {
        return Err(Error::CatalogDomain(format!(
            "cover quotients need class c >= 4, got {}",
            c
        )));
    }
    if !(-1..=1).contains(&k) {
        return Err(Error::CatalogDomain(format!(
            "cover quotient parameter k must be -1, 0 or +1, got {}",
            k
        )));
    }
    let mut pres = cover_limit(e)?;
    pres.relators.push(Word::prod([
        y_word(e),
        Word::pow(w_word(c), k as i64),
        v_word(c),
    ]));
    pres.relators.push(Word::prod([z_word(), w_word(c)]));
    Ok(pres)
}

/// Metabelian coclass-2 vertex of class c >= 5 at depth <= 1, as a direct
/// pc presentation on x, y, s2, t3, s3, ..., sc of order 3^(c+2). The
/// parameter pair selects the transfer kernel type.
pub fn coclass2_group(c: u32, alpha: u8, beta: u8) -> Result<PcGroup> {
    if c < 5 {
        return Err(Error::CatalogDomain(format!(
            "the parametrized coclass-2 family starts at class 5, got {}",
            c
        )));
    }
    if alpha > 2 || beta > 2 {
        return Err(Error::CatalogDomain(format!(
            "parameters are exponents mod 3, got ({}, {})",
            alpha, beta
        )));
    }
    let cu = c as usize;
    let n = cu + 2;
    // x = 0, y = 1, t3 = 3; s_i at index 2 for i = 2, else i + 1
    let s = |i: usize| -> usize {
        if i == 2 {
            2
        } else {
            i + 1
        }
    };
    let mut powers = vec![vec![0u8; n]; n];
    powers[0][s(cu)] = alpha;
    powers[1][s(3)] = 2;
    powers[1][s(4)] = 1;
    powers[1][s(cu)] = beta;
    for i in 2..=cu - 3 {
        powers[s(i)][s(i + 2)] = 2;
        powers[s(i)][s(i + 3)] = 1;
    }
    powers[s(cu - 2)][s(cu)] = 2;
    let mut comms = vec![vec![0u8; n]; n * (n - 1) / 2];
    comms[tri(1, 0)][s(2)] = 1; // [y,x] = s2
    comms[tri(2, 1)][3] = 1; // [s2,y] = t3
    for i in 2..=cu - 1 {
        comms[tri(s(i), 0)][s(i + 1)] = 1; // [s_i,x] = s_(i+1)
    }
    let mut weights: Vec<u32> = vec![1, 1, 2, 3];
    weights.extend((3..=cu).map(|i| i as u32));
    let mut defs: Vec<Option<Definition>> = vec![
        None,
        None,
        Some(Definition::Commutator(1, 0)),
        Some(Definition::Commutator(2, 1)),
        Some(Definition::Commutator(2, 0)),
    ];
    defs.extend((4..=cu).map(|i| Some(Definition::Commutator(s(i - 1), 0))));
    let g = PcGroup::from_tables(3, powers, comms, weights, defs)?;
    if !g.is_consistent() {
        return Err(Error::HypothesisViolation(format!(
            "parametrized presentation (c={}, alpha={}, beta={}) is inconsistent",
            c, alpha, beta
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn extraspecials_match_oracle() {
        for g in [extraspecial_exponent_p(), extraspecial_exponent_p2()] {
            assert!(g.is_consistent());
            oracle::check_all_products(&g);
        }
    }

    #[test]
    fn extraspecial_exponents_differ() {
        let e3 = extraspecial_exponent_p();
        assert!(oracle::all_elements(&e3)
            .iter()
            .all(|a| oracle::element_order_exp(&e3, a) <= 1));
        let e9 = extraspecial_exponent_p2();
        assert_eq!(oracle::element_order_exp(&e9, &e9.gen_elt(0)), 2);
    }

    #[test]
    fn cyclic_27_structure() {
        let c = cyclic(3, 3).unwrap();
        assert!(c.is_consistent());
        oracle::check_all_products(&c);
        let g1 = c.gen_elt(0);
        assert_eq!(oracle::element_order_exp(&c, &g1), 3);
        assert_eq!(c.pow(&g1, 9), c.gen_elt(2));
    }

    use crate::pcgroup::{iso, series};
    use crate::pquotient::p_quotient;

    const BUDGET: u64 = 10_000_000;

    fn coclass(g: &PcGroup) -> u32 {
        g.order_exp() - series::nilpotency_class(g)
    }

    #[test]
    fn limit_class_one_quotient_is_elementary_of_rank_two() {
        for sign in [1, -1] {
            let pres = limit_presentation(sign).unwrap();
            let q = p_quotient(&pres, 3, 1).unwrap();
            assert_eq!(q.group.order_exp(), 2);
        }
        assert!(limit_presentation(0).is_err());
    }

    #[test]
    fn mainline_roots_have_order_243_class_3_coclass_2() {
        for sign in [1, -1] {
            let pres = mainline_quotient(sign, 2, 3).unwrap();
            let q = p_quotient(&pres, 3, 3).unwrap();
            assert_eq!(q.achieved_class, 3);
            assert_eq!(q.group.order_exp(), 5);
            assert_eq!(series::nilpotency_class(&q.group), 3);
            assert_eq!(coclass(&q.group), 2);
        }
    }

    #[test]
    fn mainline_vertices_grow_one_class_at_a_time() {
        let q4 = p_quotient(&mainline_quotient(1, 2, 4).unwrap(), 3, 4).unwrap();
        assert_eq!(q4.group.order_exp(), 6);
        assert_eq!(series::nilpotency_class(&q4.group), 4);
        assert_eq!(coclass(&q4.group), 2);
        let q5 = p_quotient(&mainline_quotient(-1, 3, 5).unwrap(), 3, 5).unwrap();
        assert_eq!(q5.group.order_exp(), 8);
        assert_eq!(series::nilpotency_class(&q5.group), 5);
        assert_eq!(coclass(&q5.group), 3);
    }

    #[test]
    fn mainline_domain_is_enforced() {
        assert!(mainline_quotient(1, 1, 3).is_err());
        assert!(mainline_quotient(1, 3, 4).is_err());
        assert!(mainline_quotient(1, 2, 3).is_ok());
    }

    #[test]
    fn cover_quotient_class_5_has_order_6561_coclass_3() {
        let pres = cover_quotient(1, 0, 5).unwrap();
        let q = p_quotient(&pres, 3, 5).unwrap();
        assert_eq!(q.achieved_class, 5);
        assert_eq!(q.group.order_exp(), 8);
        assert_eq!(series::nilpotency_class(&q.group), 5);
        assert_eq!(coclass(&q.group), 3);
    }

    #[test]
    fn even_class_cover_quotients_coincide_for_plus_and_minus_k() {
        let qm = p_quotient(&cover_quotient(1, -1, 4).unwrap(), 3, 4).unwrap();
        let qp = p_quotient(&cover_quotient(1, 1, 4).unwrap(), 3, 4).unwrap();
        assert_eq!(qm.group.order_exp(), qp.group.order_exp());
        assert!(iso::is_isomorphic(&qm.group, &qp.group, BUDGET).unwrap());
    }

    #[test]
    fn cover_words_land_in_the_last_lower_central_layer() {
        let c = 5;
        let pres = cover_quotient(1, 0, c).unwrap();
        let q = p_quotient(&pres, 3, c).unwrap();
        let gammas = series::lower_central(&q.group);
        let last = &gammas[c as usize - 1];
        for w in [w_word(c), v_word(c)] {
            let val = w.eval(&q.group, &q.images).unwrap();
            assert!(last.contains(&val));
        }
        let wv = w_word(c).eval(&q.group, &q.images).unwrap();
        assert!(!q.group.is_one(&wv));
    }

    #[test]
    fn parametrized_coclass2_presentations_are_consistent() {
        for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (0, 2), (1, 1), (1, 2)] {
            for c in [5, 6] {
                let g = coclass2_group(c, alpha, beta).unwrap();
                assert_eq!(g.order_exp(), c + 2);
                assert_eq!(series::nilpotency_class(&g), c);
                assert_eq!(coclass(&g), 2);
                assert_eq!(g.rank(), 2);
                // metabelian: derived series hits 1 after two steps
                assert!(series::derived(&g).len() <= 3);
            }
        }
        assert!(coclass2_group(4, 0, 0).is_err());
        assert!(coclass2_group(5, 3, 0).is_err());
    }

    #[test]
    fn parametrized_weights_are_the_exponent_p_weights() {
        let g = coclass2_group(5, 0, 0).unwrap();
        assert_eq!(g.weights(), &series::exponent_p_weights(&g)[..]);
    }
}
