//! Largest p-quotients of finitely presented groups, built class by class.
//!
//! Each lift step evaluates the relators in the p-cover of the current
//! quotient and factors out the span of their values. Generator images are
//! lifted with trivial tails, which is only sound when no generator becomes
//! redundant modulo p: a redundant generator would need its own unknown
//! tail. We therefore insist that every relator has all exponent sums
//! divisible by p, so the class-1 quotient is elementary abelian of full
//! rank. All presentations in this crate are written on minimal generating
//! sets and satisfy this.

pub mod words;

use crate::error::{Error, Result};
use crate::fplin::Echelon;
use crate::pcgroup::{series, subgroup::Igs, Definition, Elt, PcGroup};
use crate::pcover;
use words::Word;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FpPresentation {
    pub ngens: usize,
    pub relators: Vec<Word>,
}

#[derive(Debug, Clone)]
pub struct PQuotient {
    pub group: PcGroup,
    /// normal-form image of each free generator
    pub images: Vec<Elt>,
    pub achieved_class: u32,
}

/// Largest quotient of exponent-p class at most max_class, together with
/// the images of the free generators. achieved_class is the class at which
/// the quotients stabilized, or max_class if they were still growing.
pub fn p_quotient(pres: &FpPresentation, p: u8, max_class: u32) -> Result<PQuotient> {
    if max_class == 0 {
        return Err(Error::MalformedPresentation(
            "class bound must be positive".into(),
        ));
    }
    if pres.ngens == 0 {
        return Err(Error::MalformedPresentation(
            "presentation needs at least one generator".into(),
        ));
    }
    for r in &pres.relators {
        let sums = r.exponent_sums(pres.ngens, p)?;
        if sums.iter().any(|&s| s != 0) {
            return Err(Error::MalformedPresentation(
                "relator has exponent sum not divisible by p; \
                 present the group on a minimal generating set"
                    .into(),
            ));
        }
    }
    let mut group = PcGroup::elementary_abelian(p, pres.ngens);
    let mut images: Vec<Elt> = (0..pres.ngens).map(|i| group.gen_elt(i)).collect();
    let mut k = 1u32;
    while k < max_class {
        let cov = pcover::p_cover(&group)?;
        let big = cov.group();
        let n = group.ngens();
        let mu = cov.multiplicator_rank() as usize;
        let padded: Vec<Elt> = images
            .iter()
            .map(|im| {
                let mut v = im.clone();
                v.resize(big.ngens(), 0);
                v
            })
            .collect();
        let mut span = Echelon::new(p, mu);
        for r in &pres.relators {
            let v = r.eval(big, &padded)?;
            assert!(
                v[..n].iter().all(|&x| x == 0),
                "relator value must lie in the multiplicator"
            );
            span.insert(v[n..].to_vec());
        }
        if span.rank() == mu {
            // the class-(k+1) quotient equals the class-k quotient
            return Ok(PQuotient {
                group,
                images,
                achieved_class: k,
            });
        }
        let next = pcover::cover_quotient(&cov, &span)?;
        let m = next.ngens();
        images = padded
            .into_iter()
            .map(|mut v| {
                v.truncate(n);
                v.resize(m, 0);
                v
            })
            .collect();
        group = next;
        k += 1;
        debug_assert_eq!(
            Igs::subgroup_closure(&group, &images).dim(),
            group.ngens(),
            "images must generate the quotient"
        );
    }
    Ok(PQuotient {
        group,
        images,
        achieved_class: max_class,
    })
}

/// The same group on a generating set ordered by weight, with every
/// generator beyond the first layer defined by an earlier power or
/// commutator. Computed by presenting the group on its weight-1 generators
/// and taking the p-quotient at its own class.
pub fn standardize(g: &PcGroup) -> Result<PcGroup> {
    let pres = minimal_presentation(g)?;
    let cl = series::exponent_p_class(g);
    let res = p_quotient(&pres, g.p(), cl)?;
    if res.group.order_exp() != g.order_exp() || res.achieved_class != cl {
        return Err(Error::HypothesisViolation(format!(
            "standardization changed the group: order 3^{} class {} became 3^{} class {}",
            g.order_exp(),
            cl,
            res.group.order_exp(),
            res.achieved_class,
        )));
    }
    Ok(res.group)
}

/// Present the group on its weight-1 generators. Generators of higher
/// weight are rewritten through their definitions; the defining relations
/// themselves then say nothing and are dropped.
pub fn minimal_presentation(g: &PcGroup) -> Result<FpPresentation> {
    if !g.has_definitions() {
        return Err(Error::MalformedPresentation(
            "presenting on weight-1 generators needs definitions throughout".into(),
        ));
    }
    let n = g.ngens();
    let d = (0..n).filter(|&i| g.weight(i) == 1).count();
    if (0..d).any(|i| g.weight(i) != 1) {
        return Err(Error::MalformedPresentation(
            "weight-1 generators must come first".into(),
        ));
    }
    let mut words: Vec<Word> = Vec::with_capacity(n);
    for k in 0..n {
        let w = if g.weight(k) == 1 {
            Word::gen(k)
        } else {
            match g.definition(k).expect("checked above") {
                Definition::Power(i) => Word::pow(words[i].clone(), g.p() as i64),
                Definition::Commutator(j, i) => {
                    Word::comm([words[j].clone(), words[i].clone()])
                }
            }
        };
        words.push(w);
    }
    let rhs_word = |rhs: &Elt| -> Word {
        Word::prod(
            rhs.iter()
                .enumerate()
                .filter(|&(_, &e)| e != 0)
                .map(|(k, &e)| Word::pow(words[k].clone(), e as i64)),
        )
    };
    let defined: std::collections::HashSet<Definition> =
        (0..n).filter_map(|k| g.definition(k)).collect();
    let mut relators = Vec::new();
    for i in 0..n {
        if defined.contains(&Definition::Power(i)) {
            continue;
        }
        relators.push(Word::prod([
            Word::pow(words[i].clone(), g.p() as i64),
            Word::inv(rhs_word(g.power_rhs(i))),
        ]));
    }
    for j in 1..n {
        for i in 0..j {
            if defined.contains(&Definition::Commutator(j, i)) {
                continue;
            }
            relators.push(Word::prod([
                Word::comm([words[j].clone(), words[i].clone()]),
                Word::inv(rhs_word(g.comm_rhs(j, i))),
            ]));
        }
    }
    Ok(FpPresentation { ngens: d, relators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::pcgroup::iso;

    const BUDGET: u64 = 1_000_000;

    fn free2() -> FpPresentation {
        FpPresentation {
            ngens: 2,
            relators: vec![],
        }
    }

    #[test]
    fn free_group_quotients_grow_level_by_level() {
        let q1 = p_quotient(&free2(), 3, 1).unwrap();
        assert_eq!(q1.group.order_exp(), 2);
        assert_eq!(q1.achieved_class, 1);
        let q2 = p_quotient(&free2(), 3, 2).unwrap();
        assert_eq!(q2.group.order_exp(), 5);
        assert_eq!(q2.achieved_class, 2);
        assert_eq!(series::exponent_p_class(&q2.group), 2);
    }

    #[test]
    fn burnside_cube_relators_give_the_exponent_three_extraspecial() {
        let x = Word::gen(0);
        let y = Word::gen(1);
        let pres = FpPresentation {
            ngens: 2,
            relators: vec![
                Word::pow(x.clone(), 3),
                Word::pow(y.clone(), 3),
                Word::pow(Word::prod([x.clone(), y.clone()]), 3),
                Word::pow(Word::prod([x.clone(), y.clone(), y.clone()]), 3),
            ],
        };
        let q = p_quotient(&pres, 3, 5).unwrap();
        assert_eq!(q.achieved_class, 2);
        assert_eq!(q.group.order_exp(), 3);
        let target = catalog::extraspecial_exponent_p();
        assert!(iso::is_isomorphic(&q.group, &target, BUDGET).unwrap());
    }

    #[test]
    fn cyclic_relator_stabilizes_midway() {
        let pres = FpPresentation {
            ngens: 1,
            relators: vec![Word::pow(Word::gen(0), 9)],
        };
        let q = p_quotient(&pres, 3, 5).unwrap();
        assert_eq!(q.achieved_class, 2);
        let c9 = catalog::cyclic(3, 2).unwrap();
        assert!(iso::is_isomorphic(&q.group, &c9, BUDGET).unwrap());
    }

    #[test]
    fn capped_elementary_group_stabilizes_at_class_one() {
        let pres = FpPresentation {
            ngens: 2,
            relators: vec![
                Word::pow(Word::gen(0), 3),
                Word::pow(Word::gen(1), 3),
                Word::comm([Word::gen(1), Word::gen(0)]),
            ],
        };
        let q = p_quotient(&pres, 3, 4).unwrap();
        assert_eq!(q.achieved_class, 1);
        assert_eq!(q.group.order_exp(), 2);
    }

    #[test]
    fn redundant_generators_are_rejected() {
        let pres = FpPresentation {
            ngens: 2,
            relators: vec![Word::prod([Word::gen(1), Word::inv(Word::gen(0))])],
        };
        assert!(matches!(
            p_quotient(&pres, 3, 3),
            Err(Error::MalformedPresentation(_))
        ));
    }

    #[test]
    fn relator_images_vanish_in_the_quotient() {
        let x = Word::gen(0);
        let y = Word::gen(1);
        let relators = vec![
            Word::pow(x.clone(), 9),
            Word::pow(y.clone(), 3),
            Word::comm([y.clone(), x.clone(), x.clone()]),
        ];
        let pres = FpPresentation { ngens: 2, relators };
        let q = p_quotient(&pres, 3, 6).unwrap();
        for r in &pres.relators {
            assert!(q.group.is_one(&r.eval(&q.group, &q.images).unwrap()));
        }
    }

    #[test]
    fn standardization_round_trips() {
        for g in [
            catalog::extraspecial_exponent_p(),
            catalog::extraspecial_exponent_p2(),
            catalog::cyclic(3, 3).unwrap(),
        ] {
            let s = standardize(&g).unwrap();
            assert!(s.has_definitions());
            assert_eq!(s.order_exp(), g.order_exp());
            assert!(iso::is_isomorphic(&s, &g, BUDGET).unwrap());
            for w in 1..s.ngens() {
                assert!(s.weight(w - 1) <= s.weight(w));
            }
        }
    }
}
