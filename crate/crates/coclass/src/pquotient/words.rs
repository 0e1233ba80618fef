//! Abstract words in free group generators, evaluated in a pc group once
//! images for the generators are chosen.

use crate::error::{Error, Result};
use crate::pcgroup::{Elt, PcGroup};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Word {
    Gen(usize),
    Prod(Vec<Word>),
    Pow(Box<Word>, i64),
    /// left-normed: comm(&[a, b, c]) is [[a, b], c]
    Comm(Vec<Word>),
    Conj(Box<Word>, Box<Word>),
}

impl Word {
    pub fn gen(i: usize) -> Word {
        Word::Gen(i)
    }

    pub fn prod<I: IntoIterator<Item = Word>>(ws: I) -> Word {
        Word::Prod(ws.into_iter().collect())
    }

    pub fn pow(w: Word, e: i64) -> Word {
        Word::Pow(Box::new(w), e)
    }

    pub fn inv(w: Word) -> Word {
        Word::Pow(Box::new(w), -1)
    }

    pub fn comm<I: IntoIterator<Item = Word>>(ws: I) -> Word {
        Word::Comm(ws.into_iter().collect())
    }

    pub fn conj(w: Word, by: Word) -> Word {
        Word::Conj(Box::new(w), Box::new(by))
    }

    /// Exponent sum of each generator, mod p. Conjugates and commutators
    /// contribute nothing.
    pub fn exponent_sums(&self, ngens: usize, p: u8) -> Result<Vec<u8>> {
        let mut sums = vec![0i64; ngens];
        self.add_sums(&mut sums, 1)?;
        Ok(sums
            .into_iter()
            .map(|s| s.rem_euclid(p as i64) as u8)
            .collect())
    }

    fn add_sums(&self, sums: &mut [i64], mult: i64) -> Result<()> {
        match self {
            Word::Gen(i) => {
                if *i >= sums.len() {
                    return Err(Error::MalformedWord(format!(
                        "generator {} out of range",
                        i
                    )));
                }
                sums[*i] += mult;
            }
            Word::Prod(ws) => {
                for w in ws {
                    w.add_sums(sums, mult)?;
                }
            }
            Word::Pow(w, e) => w.add_sums(sums, mult.saturating_mul(*e))?,
            Word::Comm(ws) => {
                if ws.len() < 2 {
                    return Err(Error::MalformedWord(
                        "commutator needs at least two entries".into(),
                    ));
                }
                // exponent sums cancel; still validate the subterms
                for w in ws {
                    w.add_sums(sums, 0)?;
                }
            }
            Word::Conj(w, by) => {
                w.add_sums(sums, mult)?;
                by.add_sums(sums, 0)?;
            }
        }
        Ok(())
    }

    /// Evaluate with images[i] substituted for generator i.
    pub fn eval(&self, g: &PcGroup, images: &[Elt]) -> Result<Elt> {
        match self {
            Word::Gen(i) => images.get(*i).cloned().ok_or_else(|| {
                Error::MalformedWord(format!("generator {} out of range", i))
            }),
            Word::Prod(ws) => {
                let mut acc = g.one();
                for w in ws {
                    acc = g.mul(&acc, &w.eval(g, images)?);
                }
                Ok(acc)
            }
            Word::Pow(w, e) => Ok(g.pow(&w.eval(g, images)?, *e)),
            Word::Comm(ws) => {
                if ws.len() < 2 {
                    return Err(Error::MalformedWord(
                        "commutator needs at least two entries".into(),
                    ));
                }
                let mut acc = ws[0].eval(g, images)?;
                for w in &ws[1..] {
                    acc = g.comm(&acc, &w.eval(g, images)?);
                }
                Ok(acc)
            }
            Word::Conj(w, by) => {
                Ok(g.conj(&w.eval(g, images)?, &by.eval(g, images)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn evaluation_matches_direct_computation() {
        let g = catalog::extraspecial_exponent_p();
        let images = vec![g.gen_elt(0), g.gen_elt(1)];
        let w = Word::comm([Word::gen(1), Word::gen(0)]);
        assert_eq!(w.eval(&g, &images).unwrap(), g.gen_elt(2));
        let w = Word::prod([Word::gen(0), Word::pow(Word::gen(0), 2)]);
        assert!(g.is_one(&w.eval(&g, &images).unwrap()));
        let w = Word::conj(Word::gen(1), Word::gen(0));
        let expect = g.conj(&g.gen_elt(1), &g.gen_elt(0));
        assert_eq!(w.eval(&g, &images).unwrap(), expect);
    }

    #[test]
    fn left_normed_commutators_nest_from_the_left() {
        let g = catalog::extraspecial_exponent_p();
        let images = vec![g.gen_elt(0), g.gen_elt(1)];
        let w = Word::comm([Word::gen(1), Word::gen(0), Word::gen(1)]);
        let inner = g.comm(&g.gen_elt(1), &g.gen_elt(0));
        let expect = g.comm(&inner, &g.gen_elt(1));
        assert_eq!(w.eval(&g, &images).unwrap(), expect);
    }

    #[test]
    fn exponent_sums_ignore_commutators_and_conjugators() {
        let w = Word::prod([
            Word::pow(Word::gen(0), 4),
            Word::comm([Word::gen(0), Word::gen(1)]),
            Word::conj(Word::gen(1), Word::gen(0)),
        ]);
        assert_eq!(w.exponent_sums(2, 3).unwrap(), vec![1, 1]);
        assert!(Word::comm([Word::gen(0)]).exponent_sums(2, 3).is_err());
        assert!(Word::gen(5).exponent_sums(2, 3).is_err());
    }
}
