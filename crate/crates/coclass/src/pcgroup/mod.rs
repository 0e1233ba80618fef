//! Weighted polycyclic presentations for finite p-groups.
//!
//! Every pc generator has relative order p, so a group of order p^n has
//! elements in bijection with exponent vectors in F_p^n and multiplication
//! is collection from the left. Relation right-hand sides may only involve
//! generators of strictly larger index, which is what makes collection
//! terminate.

pub mod abelian;
pub mod invariants;
pub mod iso;
pub mod json;
pub mod quotient;
pub mod series;
pub mod subgroup;

use crate::error::{Error, Result};
use crate::fplin;

/// Exponent vector in normal form; length equals the number of pc generators.
pub type Elt = Vec<u8>;

/// How a non-initial generator arose during a standardizing construction:
/// as the p-th power of an earlier generator or as a commutator of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Definition {
    Power(usize),
    Commutator(usize, usize),
}

#[derive(Debug, Clone)]
pub struct PcGroup {
    p: u8,
    n: usize,
    /// powers[i] = normal form of g_i^p; support strictly above i.
    powers: Vec<Elt>,
    /// comms[tri(j,i)] = normal form of [g_j, g_i] for j > i; support strictly above j.
    comms: Vec<Elt>,
    /// weights[i] >= 1, non-decreasing. For standardized groups this is the
    /// exponent-p central weight and P_k = <generators of weight >= k>.
    weights: Vec<u32>,
    /// definitions[i] is Some for every generator of weight >= 2 in a
    /// standardized group; None entries are allowed for ad-hoc presentations.
    definitions: Vec<Option<Definition>>,
}

#[inline]
fn tri(j: usize, i: usize) -> usize {
    debug_assert!(j > i);
    j * (j - 1) / 2 + i
}

fn is_odd_prime(p: u8) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u16;
    while d * d <= p as u16 {
        if p as u16 % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PcGroup {
    /// Build a group from complete relation tables, validating the structural
    /// constraints that make collection well defined.
    pub fn from_tables(
        p: u8,
        powers: Vec<Elt>,
        comms: Vec<Elt>,
        weights: Vec<u32>,
        definitions: Vec<Option<Definition>>,
    ) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::BadPrime(p as u64));
        }
        let n = powers.len();
        if comms.len() != n * (n - 1) / 2 && !(n == 0 && comms.is_empty()) {
            return Err(Error::MalformedPresentation(format!(
                "expected {} commutator entries, got {}",
                n * (n - 1) / 2,
                comms.len()
            )));
        }
        if weights.len() != n || definitions.len() != n {
            return Err(Error::MalformedPresentation(
                "weights/definitions length mismatch".into(),
            ));
        }
        let check_vec = |v: &Elt, above: usize, what: &str| -> Result<()> {
            if v.len() != n {
                return Err(Error::MalformedPresentation(format!(
                    "{what}: vector length {} != {}",
                    v.len(),
                    n
                )));
            }
            for (idx, &e) in v.iter().enumerate() {
                if e >= p {
                    return Err(Error::MalformedPresentation(format!(
                        "{what}: exponent {e} out of range"
                    )));
                }
                if e != 0 && idx <= above {
                    return Err(Error::MalformedPresentation(format!(
                        "{what}: support at index {idx} not above {above}"
                    )));
                }
            }
            Ok(())
        };
        for (i, v) in powers.iter().enumerate() {
            check_vec(v, i, &format!("power of g{}", i + 1))?;
        }
        for j in 1..n {
            for i in 0..j {
                check_vec(&comms[tri(j, i)], j, &format!("[g{},g{}]", j + 1, i + 1))?;
            }
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::MalformedPresentation("weights must be positive".into()));
        }
        for (k, d) in definitions.iter().enumerate() {
            if let Some(d) = d {
                let ok = match *d {
                    Definition::Power(i) => {
                        i < k && powers[i].iter().enumerate().all(|(m, &e)| {
                            if m == k { e == 1 } else { e == 0 }
                        })
                    }
                    Definition::Commutator(j, i) => {
                        i < j && j < k && comms[tri(j, i)].iter().enumerate().all(|(m, &e)| {
                            if m == k { e == 1 } else { e == 0 }
                        })
                    }
                };
                if !ok {
                    return Err(Error::MalformedPresentation(format!(
                        "definition of g{} does not match its relation",
                        k + 1
                    )));
                }
            }
        }
        Ok(PcGroup { p, n, powers, comms, weights, definitions })
    }

    /// Elementary abelian group of rank n (every power and commutator trivial).
    pub fn elementary_abelian(p: u8, n: usize) -> Self {
        PcGroup::from_tables(
            p,
            vec![vec![0; n]; n],
            vec![vec![0; n]; n * (n - 1) / 2],
            vec![1; n],
            vec![None; n],
        )
        .expect("elementary abelian tables are valid")
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn ngens(&self) -> usize {
        self.n
    }

    /// log_p of the group order.
    pub fn order_exp(&self) -> u32 {
        self.n as u32
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn definitions(&self) -> &[Option<Definition>] {
        &self.definitions
    }

    pub fn definition(&self, i: usize) -> Option<Definition> {
        self.definitions[i]
    }

    pub fn has_definitions(&self) -> bool {
        self.definitions
            .iter()
            .zip(self.weights.iter())
            .all(|(d, &w)| w == 1 || d.is_some())
    }

    /// Number of generators of weight 1. For standardized groups this is the
    /// generator rank of the group.
    pub fn rank(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1).count()
    }

    pub fn power_rhs(&self, i: usize) -> &Elt {
        &self.powers[i]
    }

    pub fn comm_rhs(&self, j: usize, i: usize) -> &Elt {
        &self.comms[tri(j, i)]
    }

    pub fn one(&self) -> Elt {
        vec![0; self.n]
    }

    pub fn gen_elt(&self, i: usize) -> Elt {
        let mut v = vec![0; self.n];
        v[i] = 1;
        v
    }

    pub fn is_one(&self, a: &Elt) -> bool {
        fplin::is_zero(a)
    }

    /// Collect the letters (gen, exp) with 1 <= exp < p into the running
    /// normal form `acc`. This is collection from the left with single-unit
    /// swaps: the leftmost uncollected letter is bubbled one generator at a
    /// time, emitting the stored commutator word at each swap.
    fn collect_letters(&self, acc: &mut Elt, letters: &[(usize, u8)]) {
        let p = self.p;
        let mut stack: Vec<(usize, u8)> = Vec::with_capacity(letters.len() * 2);
        for &(g, e) in letters.iter().rev() {
            debug_assert!(g < self.n && e >= 1 && e < p);
            stack.push((g, e));
        }
        let push_word = |stack: &mut Vec<(usize, u8)>, w: &Elt| {
            for idx in (0..self.n).rev() {
                if w[idx] != 0 {
                    stack.push((idx, w[idx]));
                }
            }
        };
        let mut steps: u64 = 0;
        while let Some((g, e)) = stack.pop() {
            steps += 1;
            assert!(steps < 200_000_000, "collection step bound exceeded");
            // highest occupied index beyond g
            let mut beyond = None;
            for idx in (g + 1..self.n).rev() {
                if acc[idx] != 0 {
                    beyond = Some(idx);
                    break;
                }
            }
            match beyond {
                None => {
                    let tot = acc[g] + e;
                    if tot >= p {
                        acc[g] = tot - p;
                        push_word(&mut stack, &self.powers[g]);
                    } else {
                        acc[g] = tot;
                    }
                }
                Some(m) => {
                    // acc = acc' * g_m; rewrite (g_m g^e) as g (g_m [g_m,g] g^(e-1))
                    acc[m] -= 1;
                    if e > 1 {
                        stack.push((g, e - 1));
                    }
                    push_word(&mut stack, &self.comms[tri(m, g)]);
                    stack.push((m, 1));
                    stack.push((g, 1));
                }
            }
        }
    }

    fn letters_of(&self, a: &Elt) -> Vec<(usize, u8)> {
        (0..self.n).filter(|&i| a[i] != 0).map(|i| (i, a[i])).collect()
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let mut acc = a.clone();
        self.collect_letters(&mut acc, &self.letters_of(b));
        acc
    }

    pub fn inv(&self, a: &Elt) -> Elt {
        // Build x with a*x = 1 by killing the leading coordinate at each step;
        // the carry words only touch higher indices, so this terminates after
        // at most n rounds.
        let mut x = self.one();
        let mut cur = a.clone();
        while let Some(l) = fplin::lead(&cur) {
            let e = self.p - cur[l];
            let mut g = self.one();
            self.collect_letters(&mut g, &[(l, e)]);
            cur = self.mul(&cur, &g);
            x = self.mul(&x, &g);
            debug_assert!(cur[l] == 0);
        }
        x
    }

    pub fn pow(&self, a: &Elt, k: i64) -> Elt {
        let (base, mut e) = if k < 0 {
            (self.inv(a), (-(k as i128)) as u128)
        } else {
            (a.clone(), k as u128)
        };
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// [a, b] = a^-1 b^-1 a b.
    pub fn comm(&self, a: &Elt, b: &Elt) -> Elt {
        let left = self.mul(&self.inv(a), &self.inv(b));
        self.mul(&left, &self.mul(a, b))
    }

    /// a^b = b^-1 a b.
    pub fn conj(&self, a: &Elt, b: &Elt) -> Elt {
        self.mul(&self.mul(&self.inv(b), a), b)
    }

    /// Evaluate a word over generators and inverses, letter by letter.
    pub fn collect_word(&self, word: &[(usize, i64)]) -> Result<Elt> {
        let mut acc = self.one();
        for &(g, e) in word {
            if g >= self.n {
                return Err(Error::MalformedWord(format!(
                    "generator index {} out of range",
                    g + 1
                )));
            }
            let ge = self.pow(&self.gen_elt(g), e);
            acc = self.mul(&acc, &ge);
        }
        Ok(acc)
    }

    /// Exponent-p class upper bound used for bounded consistency checks:
    /// for the groups built here the maximal generator weight.
    pub fn max_weight(&self) -> u32 {
        self.weights.last().copied().unwrap_or(0)
    }

    /// Evaluate the standard consistency test words and return the pairs that
    /// disagree. `bound` restricts to tests of total weight <= bound, which is
    /// the sufficient set for a weight-graded presentation of that class;
    /// `None` evaluates every test.
    pub fn consistency_failures(&self, bound: Option<u32>) -> Vec<(Elt, Elt)> {
        let mut bad = Vec::new();
        let within = |w: u32| bound.map_or(true, |b| w <= b);
        let p1 = self.p as i64 - 1;
        // g_k (g_j g_i) = (g_k g_j) g_i for k > j > i
        for k in 2..self.n {
            for j in 1..k {
                for i in 0..j {
                    if !within(self.weights[k] + self.weights[j] + self.weights[i]) {
                        continue;
                    }
                    let gk = self.gen_elt(k);
                    let gj = self.gen_elt(j);
                    let gi = self.gen_elt(i);
                    let lhs = self.mul(&self.mul(&gk, &gj), &gi);
                    let rhs = self.mul(&gk, &self.mul(&gj, &gi));
                    if lhs != rhs {
                        bad.push((lhs, rhs));
                    }
                }
            }
        }
        for j in 0..self.n {
            for i in 0..j {
                let gj = self.gen_elt(j);
                let gi = self.gen_elt(i);
                // (g_j^p) g_i = g_j^(p-1) (g_j g_i)
                if within(self.weights[j] + 1 + self.weights[i]) {
                    let lhs = self.mul(&self.powers[j], &gi);
                    let rhs = self.mul(&self.pow(&gj, p1), &self.mul(&gj, &gi));
                    if lhs != rhs {
                        bad.push((lhs, rhs));
                    }
                }
                // g_j (g_i^p) = (g_j g_i) g_i^(p-1)
                if within(self.weights[j] + self.weights[i] + 1) {
                    let lhs = self.mul(&gj, &self.powers[i]);
                    let rhs = self.mul(&self.mul(&gj, &gi), &self.pow(&gi, p1));
                    if lhs != rhs {
                        bad.push((lhs, rhs));
                    }
                }
            }
        }
        for i in 0..self.n {
            // (g_i^p) g_i = g_i (g_i^p)
            if within(2 * self.weights[i] + 1) {
                let gi = self.gen_elt(i);
                let lhs = self.mul(&self.powers[i], &gi);
                let rhs = self.mul(&gi, &self.powers[i]);
                if lhs != rhs {
                    bad.push((lhs, rhs));
                }
            }
        }
        bad
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency_failures(None).is_empty()
    }

    /// Render an element as a word like "g1^2*g3" (1-based indices).
    pub fn elt_string(&self, a: &Elt) -> String {
        if self.is_one(a) {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in a.iter().enumerate() {
            if e == 1 {
                parts.push(format!("g{}", i + 1));
            } else if e > 1 {
                parts.push(format!("g{}^{}", i + 1, e));
            }
        }
        parts.join("*")
    }

    /// Human-readable presentation listing the nontrivial relations.
    pub fn presentation_string(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!("p = {}, n = {}, weights = {:?}", self.p, self.n, self.weights));
        for i in 0..self.n {
            if !fplin::is_zero(&self.powers[i]) {
                lines.push(format!("g{}^{} = {}", i + 1, self.p, self.elt_string(&self.powers[i])));
            }
        }
        for j in 1..self.n {
            for i in 0..j {
                let c = &self.comms[tri(j, i)];
                if !fplin::is_zero(c) {
                    lines.push(format!("[g{},g{}] = {}", j + 1, i + 1, self.elt_string(c)));
                }
            }
        }
        lines.join("\n")
    }

    /// Replace the bookkeeping fields; used by constructions that know the
    /// exponent-p weights and definitions of what they just built.
    pub fn with_annotations(
        mut self,
        weights: Vec<u32>,
        definitions: Vec<Option<Definition>>,
    ) -> Result<Self> {
        PcGroup::from_tables(self.p, std::mem::take(&mut self.powers), std::mem::take(&mut self.comms), weights, definitions)
    }
}
