//! Weighted rooted in-trees and their analytics.
//!
//! Every non-root vertex carries exactly one edge toward its parent, with a
//! positive step size; vertices carry a non-negative weight and an opaque
//! payload. Infinite trees are represented by finite horizons: a vertex
//! whose children have not been computed is flagged `expandable`, and
//! operations that would need the missing structure fail instead of
//! guessing.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Application data attached to a vertex. The fingerprint orders siblings
/// and stands in for the payload in serialized output; the tag is the
/// short classification string folded into branch labels and DOT output.
pub trait Payload {
    fn fingerprint(&self) -> String;
    fn tag(&self) -> String;
}

impl Payload for String {
    fn fingerprint(&self) -> String {
        self.clone()
    }
    fn tag(&self) -> String {
        self.clone()
    }
}

impl Payload for () {
    fn fingerprint(&self) -> String {
        String::new()
    }
    fn tag(&self) -> String {
        String::new()
    }
}

#[derive(Debug, Clone)]
struct Vertex<P> {
    weight: u32,
    payload: P,
    expandable: bool,
    /// parent id and step size; None exactly at the root
    up: Option<(usize, u32)>,
    children: Vec<usize>,
}

/// Rooted in-tree with vertex weights and edge step sizes. Vertex ids are
/// dense indices in insertion order.
#[derive(Debug, Clone)]
pub struct Tree<P> {
    vertices: Vec<Vertex<P>>,
    root_label: String,
}

impl<P: Payload> Tree<P> {
    pub fn new(root_label: impl Into<String>, weight: u32, payload: P, expandable: bool) -> Self {
        Tree {
            vertices: vec![Vertex {
                weight,
                payload,
                expandable,
                up: None,
                children: Vec::new(),
            }],
            root_label: root_label.into(),
        }
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Attaches a child and returns its id. Weight-0 vertices are
    /// terminal, so the parent must have positive weight.
    pub fn add_child(
        &mut self,
        parent: usize,
        step: u32,
        weight: u32,
        payload: P,
        expandable: bool,
    ) -> Result<usize> {
        self.check(parent)?;
        assert!(step >= 1, "edge step sizes are positive");
        assert!(
            self.vertices[parent].weight >= 1,
            "weight-0 vertices have no children"
        );
        let id = self.vertices.len();
        self.vertices.push(Vertex {
            weight,
            payload,
            expandable,
            up: Some((parent, step)),
            children: Vec::new(),
        });
        self.vertices[parent].children.push(id);
        Ok(id)
    }

    /// Records that all children of v are now present.
    pub fn mark_expanded(&mut self, v: usize) -> Result<()> {
        self.check(v)?;
        self.vertices[v].expandable = false;
        Ok(())
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.vertices[v].weight
    }

    pub fn payload(&self, v: usize) -> &P {
        &self.vertices[v].payload
    }

    pub fn payload_mut(&mut self, v: usize) -> &mut P {
        &mut self.vertices[v].payload
    }

    pub fn is_expandable(&self, v: usize) -> bool {
        self.vertices[v].expandable
    }

    /// Step size of the edge toward the parent; None at the root.
    pub fn step(&self, v: usize) -> Option<u32> {
        self.vertices[v].up.map(|(_, s)| s)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = usize> {
        0..self.vertices.len()
    }

    pub fn parent(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        match self.vertices[v].up {
            Some((u, _)) => Ok(u),
            None => Err(Error::RootHasNoParent),
        }
    }

    /// Path v, πv, π²v, …, root; length 0 at the root itself.
    pub fn root_path(&self, v: usize) -> Result<Vec<usize>> {
        self.check(v)?;
        let mut path = vec![v];
        let mut cur = v;
        while let Some((u, _)) = self.vertices[cur].up {
            path.push(u);
            cur = u;
        }
        Ok(path)
    }

    /// Biggest common ancestor of u and v.
    pub fn fork(&self, u: usize, v: usize) -> Result<usize> {
        let pu = self.root_path(u)?;
        let pv = self.root_path(v)?;
        for &x in &pu {
            if pv.contains(&x) {
                return Ok(x);
            }
        }
        unreachable!("root paths share the root");
    }

    /// ℓ_u + ℓ_v, the edge counts from u and v down to their fork.
    pub fn distance(&self, u: usize, v: usize) -> Result<u32> {
        let f = self.fork(u, v)?;
        let pu = self.root_path(u)?;
        let pv = self.root_path(v)?;
        let lu = pu.iter().position(|&x| x == f).unwrap() as u32;
        let lv = pv.iter().position(|&x| x == f).unwrap() as u32;
        Ok(lu + lv)
    }

    /// Like distance, but summing step sizes instead of counting edges.
    pub fn weighted_distance(&self, u: usize, v: usize) -> Result<u32> {
        let f = self.fork(u, v)?;
        let mut total = 0;
        for start in [u, v] {
            let mut cur = start;
            while cur != f {
                let (up, s) = self.vertices[cur].up.unwrap();
                total += s;
                cur = up;
            }
        }
        Ok(total)
    }

    /// Children of v sorted by step size, then payload fingerprint. This
    /// is the ordering behind the -#s;i child labels, so two builds that
    /// insert the same children in different orders label them alike.
    pub fn sorted_children(&self, v: usize) -> Vec<usize> {
        let mut kids = self.vertices[v].children.clone();
        kids.sort_by(|&a, &b| {
            let ka = (self.step(a).unwrap(), self.vertices[a].payload.fingerprint(), a);
            let kb = (self.step(b).unwrap(), self.vertices[b].payload.fingerprint(), b);
            ka.cmp(&kb)
        });
        kids
    }

    /// Descendant label relative to the parent: parent label + "-#s;i"
    /// with i the 1-based ordinal among same-step siblings.
    pub fn child_label(&self, v: usize) -> Result<String> {
        self.check(v)?;
        let (parent, step) = match self.vertices[v].up {
            Some(x) => x,
            None => return Err(Error::RootHasNoParent),
        };
        let same_step: Vec<usize> = self
            .sorted_children(parent)
            .into_iter()
            .filter(|&c| self.step(c) == Some(step))
            .collect();
        let i = same_step.iter().position(|&c| c == v).unwrap() + 1;
        Ok(format!("{}-#{};{}", self.label(parent)?, step, i))
    }

    /// Full label: the root name followed by one -#s;i segment per edge.
    pub fn label(&self, v: usize) -> Result<String> {
        self.check(v)?;
        if self.vertices[v].up.is_none() {
            Ok(self.root_label.clone())
        } else {
            self.child_label(v)
        }
    }

    /// Ids of the minimal tree below a: every descendant whose path back
    /// to a uses only step-1 edges. BFS order, sorted children.
    pub fn minimal_tree_ids(&self, a: usize) -> Result<Vec<usize>> {
        self.check(a)?;
        let mut out = vec![a];
        let mut queue = vec![a];
        while let Some(v) = queue.pop() {
            for c in self.sorted_children(v) {
                if self.step(c) == Some(1) {
                    out.push(c);
                    queue.push(c);
                }
            }
        }
        Ok(out)
    }

    /// The minimal tree T₁(a) as a tree of its own, rooted at a.
    pub fn minimal_tree(&self, a: usize) -> Result<Tree<P>>
    where
        P: Clone,
    {
        self.check(a)?;
        let mut out = Tree::new(
            self.label(a)?,
            self.vertices[a].weight,
            self.vertices[a].payload.clone(),
            self.vertices[a].expandable,
        );
        let mut map = BTreeMap::new();
        map.insert(a, 0usize);
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            for c in self.sorted_children(v) {
                if self.step(c) == Some(1) {
                    let nid = out.add_child(
                        map[&v],
                        1,
                        self.vertices[c].weight,
                        self.vertices[c].payload.clone(),
                        self.vertices[c].expandable,
                    )?;
                    map.insert(c, nid);
                    queue.push_back(c);
                }
            }
        }
        Ok(out)
    }

    /// Branch at mainline position i: the minimal tree of mainline[i]
    /// minus the minimal tree of mainline[i+1].
    pub fn branch(&self, mainline: &[usize], i: usize) -> Result<BranchGraph> {
        if i + 1 >= mainline.len() {
            return Err(Error::IndexBeyondHorizon(i, mainline.len()));
        }
        let (v, w) = (mainline[i], mainline[i + 1]);
        self.check(v)?;
        self.check(w)?;
        if self.vertices[w].up != Some((v, 1)) {
            return Err(Error::HypothesisViolation(
                "consecutive mainline vertices must be joined by a step-1 edge".into(),
            ));
        }
        let inner = self.minimal_tree_ids(v)?;
        let cut: Vec<usize> = self.minimal_tree_ids(w)?;
        let members: Vec<usize> = inner.into_iter().filter(|x| !cut.contains(x)).collect();
        Ok(self.branch_from_members(v, &members))
    }

    /// The whole minimal tree below a as a labeled BranchGraph, for
    /// shape comparisons across trees.
    pub fn minimal_subtree_graph(&self, a: usize) -> Result<BranchGraph> {
        let members = self.minimal_tree_ids(a)?;
        Ok(self.branch_from_members(a, &members))
    }

    fn branch_from_members(&self, root: usize, members: &[usize]) -> BranchGraph {
        let mut map = BTreeMap::new();
        map.insert(root, 0usize);
        let mut labels = vec![(
            self.vertices[root].weight,
            self.vertices[root].payload.tag(),
        )];
        let mut children = vec![Vec::new()];
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for c in self.sorted_children(v) {
                if !members.contains(&c) {
                    continue;
                }
                let nid = labels.len();
                labels.push((self.vertices[c].weight, self.vertices[c].payload.tag()));
                children.push(Vec::new());
                let pv = map[&v];
                children[pv].push(nid);
                map.insert(c, nid);
                queue.push_back(c);
            }
        }
        BranchGraph { labels, children }
    }

    /// Counters (N_s, C_s): incoming edges of step size s, and those
    /// whose child is capable (weight ≥ 1). Requires the children of a
    /// to have been computed.
    pub fn multifurcation(&self, a: usize) -> Result<Multifurcation> {
        self.check(a)?;
        if self.vertices[a].expandable {
            return Err(Error::VertexNotExpanded(a));
        }
        let mut m = Multifurcation {
            n: BTreeMap::new(),
            c: BTreeMap::new(),
        };
        for &c in &self.vertices[a].children {
            let s = self.step(c).unwrap();
            *m.n.entry(s).or_insert(0) += 1;
            if self.vertices[c].weight >= 1 {
                *m.c.entry(s).or_insert(0) += 1;
            }
        }
        Ok(m)
    }

    /// Vertex count per weight class.
    pub fn weight_partition(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for v in &self.vertices {
            *m.entry(v.weight).or_insert(0) += 1;
        }
        m
    }

    /// Edge count per step size.
    pub fn step_partition(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for v in &self.vertices {
            if let Some((_, s)) = v.up {
                *m.entry(s).or_insert(0) += 1;
            }
        }
        m
    }

    /// DOT rendering of the subtree below v. Vertices are numbered in
    /// BFS order over canonically sorted children, so the bytes do not
    /// depend on insertion order.
    pub fn to_dot(&self, v: usize) -> Result<String> {
        self.check(v)?;
        let mut order = vec![v];
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for c in self.sorted_children(x) {
                order.push(c);
                queue.push_back(c);
            }
        }
        let mut local = BTreeMap::new();
        for (i, &x) in order.iter().enumerate() {
            local.insert(x, i);
        }
        let mut out = String::from("digraph intree {\n  node [shape=box];\n");
        for &x in &order {
            let tag = self.vertices[x].payload.tag();
            let text = if tag.is_empty() {
                self.label(x)?
            } else {
                format!("{} {}", self.label(x)?, tag)
            };
            out.push_str(&format!("  n{} [label=\"{}\"];\n", local[&x], dot_escape(&text)));
        }
        for &x in order.iter().skip(1) {
            let (up, s) = self.vertices[x].up.unwrap();
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                local[&x], local[&up], s
            ));
        }
        out.push_str("}\n");
        Ok(out)
    }

    /// Flat serializable form: payloads reduced to their fingerprints.
    pub fn document(&self) -> TreeDoc {
        TreeDoc {
            root: 0,
            vertices: (0..self.vertices.len())
                .map(|i| VertexDoc {
                    id: i,
                    weight: self.vertices[i].weight,
                    payload: self.vertices[i].payload.fingerprint(),
                    expandable: self.vertices[i].expandable,
                })
                .collect(),
            edges: (0..self.vertices.len())
                .filter_map(|i| self.vertices[i].up.map(|(u, s)| (i, u, s)))
                .collect(),
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct VertexDoc {
    pub id: usize,
    pub weight: u32,
    pub payload: String,
    pub expandable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TreeDoc {
    pub root: usize,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<(usize, usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multifurcation {
    n: BTreeMap<u32, usize>,
    c: BTreeMap<u32, usize>,
}

impl Multifurcation {
    pub fn n(&self, s: u32) -> usize {
        self.n.get(&s).copied().unwrap_or(0)
    }

    pub fn c(&self, s: u32) -> usize {
        self.c.get(&s).copied().unwrap_or(0)
    }

    pub fn steps(&self) -> impl Iterator<Item = u32> + '_ {
        self.n.keys().copied()
    }
}

/// A finite rooted labeled tree cut out of a Tree. Vertex 0 is the root;
/// each vertex carries a (weight, tag) label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchGraph {
    labels: Vec<(u32, String)>,
    children: Vec<Vec<usize>>,
}

impl BranchGraph {
    /// Direct constructor from a parent vector; entry 0 must be the root.
    pub fn from_parent_vec(labels: Vec<(u32, String)>, parent: &[Option<usize>]) -> Self {
        assert_eq!(labels.len(), parent.len());
        assert_eq!(parent[0], None, "vertex 0 is the root");
        let mut children = vec![Vec::new(); labels.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                assert!(i > 0);
                children[*p].push(i);
            }
        }
        BranchGraph { labels, children }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &(u32, String) {
        &self.labels[v]
    }

    /// Canonical rooted-tree encoding: per vertex, the label followed by
    /// the sorted encodings of its subtrees. Labels are length-prefixed
    /// so arbitrary tag strings cannot collide with the bracketing.
    pub fn canonical_encoding(&self) -> String {
        self.encode(0)
    }

    fn encode(&self, v: usize) -> String {
        let (w, tag) = &self.labels[v];
        let mut subs: Vec<String> = self.children[v].iter().map(|&c| self.encode(c)).collect();
        subs.sort();
        format!("({}:{}#{}{})", w, tag.len(), tag, subs.concat())
    }

    pub fn is_isomorphic(&self, other: &BranchGraph) -> bool {
        self.canonical_encoding() == other.canonical_encoding()
    }

    /// Copy with all tags blanked, comparing weights and shape only.
    pub fn weights_only(&self) -> BranchGraph {
        BranchGraph {
            labels: self.labels.iter().map(|(w, _)| (*w, String::new())).collect(),
            children: self.children.clone(),
        }
    }
}

/// A detected branch period: B_{i+λ} ≅ B_i for all i ≥ ρ within the
/// horizon, which covers `confirmed` full periods past the root ρ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Periodicity {
    pub rho: usize,
    pub lambda: usize,
    pub confirmed: usize,
}

/// Smallest (ρ, λ) in lexicographic order such that every branch from ρ
/// on repeats with period λ across the whole horizon. Candidates need at
/// least two full periods in view (ρ + 2λ ≤ n); with fewer than two
/// branches nothing can be tested at all.
pub fn detect_periodicity(branches: &[BranchGraph]) -> Result<Option<Periodicity>> {
    let n = branches.len();
    if n < 2 {
        return Err(Error::HorizonTooShort(n));
    }
    let enc: Vec<String> = branches.iter().map(|b| b.canonical_encoding()).collect();
    for rho in 0..n {
        for lambda in 1..=(n - rho) / 2 {
            if (rho..n - lambda).all(|i| enc[i] == enc[i + lambda]) {
                return Ok(Some(Periodicity {
                    rho,
                    lambda,
                    confirmed: (n - rho) / lambda,
                }));
            }
        }
    }
    Ok(None)
}
