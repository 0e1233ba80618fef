//! JSON form of a pc presentation.
//!
//! Fields appear in the fixed order p, n, powers, commutators, weights,
//! definitions. Commutator relations are stored sparsely as (j, i, rhs)
//! triples with 1-based generator numbers and j > i; trivial commutators
//! are omitted. The same 1-based numbering is used inside definitions.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Definition, Elt, PcGroup};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefDoc {
    Power(usize),
    Commutator(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcDoc {
    pub p: u8,
    pub n: usize,
    pub powers: Vec<Elt>,
    pub commutators: Vec<(usize, usize, Elt)>,
    pub weights: Vec<u32>,
    pub definitions: Vec<Option<DefDoc>>,
}

pub fn to_doc(g: &PcGroup) -> PcDoc {
    let n = g.ngens();
    let mut commutators = Vec::new();
    for j in 1..n {
        for i in 0..j {
            let rhs = g.comm_rhs(j, i);
            if rhs.iter().any(|&e| e != 0) {
                commutators.push((j + 1, i + 1, rhs.clone()));
            }
        }
    }
    PcDoc {
        p: g.p(),
        n,
        powers: (0..n).map(|i| g.power_rhs(i).clone()).collect(),
        commutators,
        weights: g.weights().to_vec(),
        definitions: g
            .definitions()
            .iter()
            .map(|d| {
                d.map(|d| match d {
                    Definition::Power(i) => DefDoc::Power(i + 1),
                    Definition::Commutator(j, i) => DefDoc::Commutator(j + 1, i + 1),
                })
            })
            .collect(),
    }
}

pub fn from_doc(doc: &PcDoc) -> Result<PcGroup> {
    let n = doc.n;
    if doc.powers.len() != n {
        return Err(Error::MalformedPresentation(format!(
            "n={} but {} power relations",
            n,
            doc.powers.len()
        )));
    }
    let mut comms = vec![vec![0u8; n]; n * (n - 1) / 2];
    let mut seen = std::collections::BTreeSet::new();
    for (j, i, rhs) in &doc.commutators {
        if !(1 <= *i && *i < *j && *j <= n) {
            return Err(Error::MalformedPresentation(format!(
                "commutator indices ({}, {}) out of range for n={}",
                j, i, n
            )));
        }
        if !seen.insert((*j, *i)) {
            return Err(Error::MalformedPresentation(format!(
                "duplicate commutator entry ({}, {})",
                j, i
            )));
        }
        comms[super::tri(j - 1, i - 1)] = rhs.clone();
    }
    let definitions = doc
        .definitions
        .iter()
        .map(|d| {
            d.map(|d| match d {
                DefDoc::Power(i) => Definition::Power(i.wrapping_sub(1)),
                DefDoc::Commutator(j, i) => {
                    Definition::Commutator(j.wrapping_sub(1), i.wrapping_sub(1))
                }
            })
        })
        .collect();
    PcGroup::from_tables(doc.p, doc.powers.clone(), comms, doc.weights.clone(), definitions)
}

pub fn to_json(g: &PcGroup) -> String {
    serde_json::to_string_pretty(&to_doc(g)).expect("pc documents always serialize")
}

pub fn from_json(s: &str) -> Result<PcGroup> {
    from_doc(&serde_json::from_str(s)?)
}

/// Content hash of the presentation, used as a cache key component.
pub fn digest(g: &PcGroup) -> String {
    let compact = serde_json::to_string(&to_doc(g)).expect("pc documents always serialize");
    let mut h = Sha256::new();
    h.update(compact.as_bytes());
    h.finalize().iter().map(|b| format!("{:02x}", b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn roundtrip_preserves_tables() {
        for g in [
            catalog::extraspecial_exponent_p(),
            catalog::extraspecial_exponent_p2(),
            catalog::coclass2_group(5, 1, 2).unwrap(),
        ] {
            let s = to_json(&g);
            let back = from_json(&s).unwrap();
            assert_eq!(to_doc(&back), to_doc(&g));
            assert_eq!(to_json(&back), s);
        }
    }

    #[test]
    fn commutators_are_sparse_and_one_based() {
        let g = catalog::extraspecial_exponent_p();
        let doc = to_doc(&g);
        assert_eq!(doc.commutators.len(), 1);
        let (j, i, ref rhs) = doc.commutators[0];
        assert_eq!((j, i), (2, 1));
        assert_eq!(rhs, &vec![0, 0, 1]);
        assert_eq!(doc.definitions[2], Some(DefDoc::Commutator(2, 1)));
    }

    #[test]
    fn field_order_is_fixed() {
        let g = catalog::cyclic(3, 1).unwrap();
        let compact = serde_json::to_string(&to_doc(&g)).unwrap();
        assert!(compact.starts_with("{\"p\":3,\"n\":1,\"powers\":"));
        let tail = compact.find("\"commutators\"").unwrap();
        assert!(compact[tail..].find("\"weights\"").unwrap() < compact[tail..].find("\"definitions\"").unwrap());
    }

    #[test]
    fn bad_documents_are_rejected() {
        let g = catalog::extraspecial_exponent_p();
        let mut doc = to_doc(&g);
        doc.commutators.push((2, 2, vec![0, 0, 0]));
        assert!(from_doc(&doc).is_err());
        let mut doc = to_doc(&g);
        doc.commutators.push((2, 1, vec![0, 0, 0]));
        assert!(from_doc(&doc).is_err());
        let mut doc = to_doc(&g);
        doc.powers.pop();
        assert!(from_doc(&doc).is_err());
        let mut doc = to_doc(&g);
        doc.powers[0][2] = 3;
        assert!(from_doc(&doc).is_err());
        assert!(from_json("{\"p\": 3}").is_err());
    }

    #[test]
    fn digest_separates_presentations() {
        let a = catalog::extraspecial_exponent_p();
        let b = catalog::extraspecial_exponent_p2();
        assert_eq!(digest(&a), digest(&a.clone()));
        assert_ne!(digest(&a), digest(&b));
        assert_eq!(digest(&a).len(), 64);
    }
}
