//! Drivers that navigate descendant trees and compare the result with the
//! parametrized presentations: mainline verification, cover verification
//! and cover assembly, pruned-tree construction with branch periodicity,
//! mainline child censuses, fork-topology symbols, and root-path
//! classification.
//!
//! Navigation never trusts ordinals. Wherever a walk needs "the" child of
//! a vertex, the admissibility predicate must single it out; multiplicity
//! or absence aborts with `NoAdmissibleChild` instead of silently picking
//! one.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::artin::{self, ArtinPattern, Tkt};
use crate::catalog::{self, RootVariant};
use crate::error::{Error, Result};
use crate::intree::{self, Periodicity, Tree};
use crate::pcgroup::{invariants, iso, json, quotient, series, PcGroup};
use crate::pcover;
use crate::pquotient;

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Root of the coclass-2 tree for the variant: the class-3 quotient of
/// the corresponding limit presentation, i.e. <243,6> or <243,8>.
pub fn tree_root(variant: RootVariant) -> Result<PcGroup> {
    let pres = catalog::mainline_quotient(variant.sign(), 2, 3)?;
    Ok(pquotient::p_quotient(&pres, 3, 3)?.group)
}

/// Top-down mainline model: class-c quotient of the coclass-r limit.
fn mainline_model(variant: RootVariant, r: u32, c: u32) -> Result<PcGroup> {
    let pres = catalog::mainline_quotient(variant.sign(), r, c)?;
    Ok(pquotient::p_quotient(&pres, 3, c)?.group)
}

/// The one child of g at the given step size passing the admissibility
/// flag. Zero or several matches are a navigation failure.
pub fn unique_admissible_child(
    g: &PcGroup,
    step: u32,
    flag: u8,
    variant: RootVariant,
    budget: u64,
) -> Result<PcGroup> {
    let mut hits = Vec::new();
    for kid in pcover::descendants(g, step, budget)? {
        if artin::is_admissible(&kid, flag, variant)? {
            hits.push(kid);
        }
    }
    if hits.len() != 1 {
        return Err(Error::NoAdmissibleChild(hits.len()));
    }
    Ok(hits.pop().unwrap())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MainlineStep {
    pub r: u32,
    pub c: u32,
    pub order_exp: u32,
    pub fingerprint: String,
    pub confirmed: bool,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MainlineReport {
    pub variant: String,
    pub hb: u32,
    pub vb: u32,
    pub steps: Vec<MainlineStep>,
    pub all_confirmed: bool,
}

impl MainlineReport {
    pub fn summary(&self) -> String {
        let mut out = format!("mainlines {} hb={} vb={}\n", self.variant, self.hb, self.vb);
        for s in &self.steps {
            out.push_str(&format!(
                "  r={} c={} |G|=3^{} {} ({} ms)\n",
                s.r,
                s.c,
                s.order_exp,
                if s.confirmed { "confirmed" } else { "MISMATCH" },
                s.millis
            ));
        }
        out
    }
}

/// Bottom-up against top-down mainline identification.
///
/// Starting at the variant root, first walks hb maintrunk bifurcations
/// (one step-1 edge to the bifurcation vertex, one step-2 edge to the
/// next tree root, mainline-admissible children only), arriving on the
/// coclass-(hb+2) tree. Then confirms the root against its model
/// presentation and walks vb further mainline steps, confirming each
/// vertex against the class-c quotient of the coclass-r limit. The
/// report carries vb+1 confirmations for c = 2r-1 .. 2r-1+vb.
pub fn verify_mainlines(
    variant: RootVariant,
    hb: u32,
    vb: u32,
    budget: u64,
) -> Result<MainlineReport> {
    let mut vertex = tree_root(variant)?;
    let mut r = 2u32;
    for _ in 0..hb {
        vertex = unique_admissible_child(&vertex, 1, 0, variant, budget)?;
        vertex = unique_admissible_child(&vertex, 2, 0, variant, budget)?;
        r += 1;
    }
    let mut c = 2 * r - 1;
    let mut steps = Vec::new();
    let t = Instant::now();
    let confirmed = iso::is_isomorphic(&vertex, &mainline_model(variant, r, c)?, budget)?;
    steps.push(MainlineStep {
        r,
        c,
        order_exp: vertex.order_exp(),
        fingerprint: json::digest(&vertex),
        confirmed,
        millis: ms(t),
    });
    for _ in 0..vb {
        let t = Instant::now();
        c += 1;
        vertex = unique_admissible_child(&vertex, 1, 0, variant, budget)?;
        let confirmed = iso::is_isomorphic(&vertex, &mainline_model(variant, r, c)?, budget)?;
        steps.push(MainlineStep {
            r,
            c,
            order_exp: vertex.order_exp(),
            fingerprint: json::digest(&vertex),
            confirmed,
            millis: ms(t),
        });
    }
    let all_confirmed = steps.iter().all(|s| s.confirmed);
    Ok(MainlineReport {
        variant: variant.to_string(),
        hb,
        vb,
        steps,
        all_confirmed,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverStep {
    pub c: u32,
    pub quotient_order_exp: u32,
    pub leaf_order_exp: u32,
    pub candidates: usize,
    pub confirmed: bool,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverVerifyReport {
    pub variant: String,
    pub k: i8,
    pub vb: u32,
    pub steps: Vec<CoverStep>,
    pub all_confirmed: bool,
}

impl CoverVerifyReport {
    pub fn summary(&self) -> String {
        let mut out = format!("covers {} k={} vb={}\n", self.variant, self.k, self.vb);
        for s in &self.steps {
            out.push_str(&format!(
                "  c={} |Q|=3^{} leaf=3^{} {} ({} ms)\n",
                s.c,
                s.quotient_order_exp,
                s.leaf_order_exp,
                if s.confirmed { "confirmed" } else { "MISMATCH" },
                s.millis
            ));
        }
        out
    }
}

/// Top-down cover identification along one coclass-2 mainline.
///
/// For i = 1..vb, with c = i+3, builds the class-c quotient Q of the
/// cover presentation with parameter k, then checks that its
/// metabelianization is isomorphic to one of the admissible leaf
/// children of the mainline vertex of class c-1. Leaves carry flag 1
/// (ground state) for k = 0 and flag 2 (excited states) otherwise.
/// The identity check replaces any reliance on descendant ordering.
pub fn verify_cover(
    variant: RootVariant,
    vb: u32,
    k: i8,
    budget: u64,
) -> Result<CoverVerifyReport> {
    let flag: u8 = if k == 0 { 1 } else { 2 };
    let mut vertex = tree_root(variant)?;
    let mut steps = Vec::new();
    for i in 1..=vb {
        let t = Instant::now();
        let c = i + 3;
        let pres = catalog::cover_quotient(variant.e(), k, c)?;
        let q = pquotient::p_quotient(&pres, 3, c)?.group;
        let target = quotient::metabelianization(&q)?.0;
        let kids = pcover::descendants(&vertex, 1, budget)?;
        let mut next = None;
        let mut candidates = 0usize;
        let mut confirmed = false;
        for kid in kids {
            if artin::is_admissible(&kid, 0, variant)? {
                if next.is_some() {
                    return Err(Error::NoAdmissibleChild(2));
                }
                next = Some(kid);
                continue;
            }
            if artin::is_admissible(&kid, flag, variant)? {
                candidates += 1;
                if !confirmed && iso::is_isomorphic(&kid, &target, budget)? {
                    confirmed = true;
                }
            }
        }
        let Some(next) = next else {
            return Err(Error::NoAdmissibleChild(0));
        };
        steps.push(CoverStep {
            c,
            quotient_order_exp: q.order_exp(),
            leaf_order_exp: target.order_exp(),
            candidates,
            confirmed,
            millis: ms(t),
        });
        vertex = next;
    }
    let all_confirmed = steps.iter().all(|s| s.confirmed);
    Ok(CoverVerifyReport {
        variant: variant.to_string(),
        k,
        vb,
        steps,
        all_confirmed,
    })
}

/// One member of a cover, with the flags that decide its role.
#[derive(Debug, Clone)]
pub struct CoverMember {
    pub group: PcGroup,
    pub coclass: u32,
    pub class: u32,
    pub order_exp: u32,
    pub fingerprint: String,
    pub sigma: bool,
    pub schur_sigma: bool,
    /// relation rank d_2, read off as the p-multiplicator rank
    pub relation_rank: u32,
}

/// The cover of a metabelian type-E vertex: all groups whose
/// metabelianization is the base, one per coclass, base included.
#[derive(Debug, Clone)]
pub struct CoverSet {
    pub base_fingerprint: String,
    pub members: Vec<CoverMember>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverMemberSummary {
    pub coclass: u32,
    pub class: u32,
    pub order_exp: u32,
    pub fingerprint: String,
    pub sigma: bool,
    pub schur_sigma: bool,
    pub relation_rank: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverSetSummary {
    pub base_fingerprint: String,
    pub members: Vec<CoverMemberSummary>,
    pub shafarevich_count: usize,
}

impl CoverSet {
    /// The Shafarevich sub-cover: the Schur σ-members.
    pub fn shafarevich(&self) -> Vec<&CoverMember> {
        self.members.iter().filter(|m| m.schur_sigma).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn summary(&self) -> CoverSetSummary {
        CoverSetSummary {
            base_fingerprint: self.base_fingerprint.clone(),
            members: self
                .members
                .iter()
                .map(|m| CoverMemberSummary {
                    coclass: m.coclass,
                    class: m.class,
                    order_exp: m.order_exp,
                    fingerprint: m.fingerprint.clone(),
                    sigma: m.sigma,
                    schur_sigma: m.schur_sigma,
                    relation_rank: m.relation_rank,
                })
                .collect(),
            shafarevich_count: self.members.iter().filter(|m| m.schur_sigma).count(),
        }
    }
}

fn cover_member(g: &PcGroup, budget: u64) -> Result<CoverMember> {
    let fp = invariants::fingerprint(g);
    let cover = pcover::p_cover(g)?;
    Ok(CoverMember {
        coclass: fp.coclass,
        class: fp.class,
        order_exp: fp.order_exp,
        fingerprint: json::digest(g),
        sigma: artin::is_sigma(g, budget)?,
        schur_sigma: artin::is_schur_sigma(g, budget)?,
        relation_rank: cover.multiplicator_rank(),
        group: g.clone(),
    })
}

/// Assembles the cover of a metabelian type-E vertex of class c on the
/// coclass-2 tree by walking the maintrunk.
///
/// With l = floor((c-4)/2), the member of coclass r (3 <= r <= l+2) sits
/// at depth 1 on the coclass-r tree below the mainline vertex of class
/// c-1, picked out by the leaf flag of the base plus the requirement that
/// its metabelianization be the base. For odd c one more member of
/// coclass l+3 is the matching step-2 child of the bifurcation vertex of
/// class c-1; for even c it is the unique child of the coclass-(l+2)
/// member. Member count is l+2 either way.
pub fn compute_cover(m: &PcGroup, variant: RootVariant, budget: u64) -> Result<CoverSet> {
    let fp = invariants::fingerprint(m);
    if series::derived(m).len() > 3 {
        return Err(Error::HypothesisViolation(
            "cover base must be metabelian".into(),
        ));
    }
    if fp.rank != 2 || fp.abelianization != vec![1, 1] {
        return Err(Error::HypothesisViolation(
            "cover base must be 2-generated with abelianization (3,3)".into(),
        ));
    }
    if fp.coclass != 2 || fp.class < 4 {
        return Err(Error::HypothesisViolation(format!(
            "cover base must have coclass 2 and class >= 4, got ({}, {})",
            fp.class, fp.coclass
        )));
    }
    let pattern = artin::artin_pattern(m)?;
    let flag: u8 = match pattern.classification {
        Some(Tkt::E6 | Tkt::E8) => 1,
        Some(Tkt::E9 | Tkt::E14) => 2,
        other => {
            return Err(Error::HypothesisViolation(format!(
                "cover base must be of type E, classification is {}",
                other.map(|t| t.to_string()).unwrap_or_else(|| "none".into())
            )))
        }
    };
    let c = fp.class;
    let ell = (c - 4) / 2;

    // picks the unique flag-admissible child at the given step whose
    // metabelianization is the base
    let matching_child = |parent: &PcGroup, step: u32| -> Result<PcGroup> {
        let mut hit = None;
        let mut matches = 0usize;
        for kid in pcover::descendants(parent, step, budget)? {
            if !artin::is_admissible(&kid, flag, variant)? {
                continue;
            }
            let mb = quotient::metabelianization(&kid)?.0;
            if iso::is_isomorphic(&mb, m, budget)? {
                matches += 1;
                hit = Some(kid);
            }
        }
        match (matches, hit) {
            (1, Some(kid)) => Ok(kid),
            (n, _) => Err(Error::NoAdmissibleChild(n)),
        }
    };

    let mut members = vec![cover_member(m, budget)?];
    let mut root_r = tree_root(variant)?;
    let mut r_cur = 2u32;
    for r in 3..=ell + 2 {
        root_r = unique_admissible_child(&root_r, 1, 0, variant, budget)?;
        root_r = unique_admissible_child(&root_r, 2, 0, variant, budget)?;
        r_cur = r;
        let mut v = root_r.clone();
        for _ in (2 * r - 1)..(c - 1) {
            v = unique_admissible_child(&v, 1, 0, variant, budget)?;
        }
        members.push(cover_member(&matching_child(&v, 1)?, budget)?);
    }
    if c % 2 == 1 {
        // bifurcation vertex of class c-1 on the coclass-(l+2) tree
        let mut v = root_r.clone();
        for _ in (2 * r_cur - 1)..(c - 1) {
            v = unique_admissible_child(&v, 1, 0, variant, budget)?;
        }
        members.push(cover_member(&matching_child(&v, 2)?, budget)?);
    } else {
        let prev = members.last().unwrap().group.clone();
        let kids = pcover::descendants(&prev, 1, budget)?;
        if kids.len() != 1 {
            return Err(Error::NoAdmissibleChild(kids.len()));
        }
        members.push(cover_member(&kids[0], budget)?);
    }
    Ok(CoverSet {
        base_fingerprint: members[0].fingerprint.clone(),
        members,
    })
}

/// Everything a tree vertex carries: the group itself plus the
/// annotations the drivers read back. The σ-flag is filled in where the
/// build asks for it; shape-only trees leave it None.
#[derive(Debug, Clone)]
pub struct VertexInfo {
    pub group: PcGroup,
    pub digest: String,
    pub order_exp: u32,
    pub class: u32,
    pub coclass: u32,
    pub nuclear_rank: u32,
    pub pattern: ArtinPattern,
    pub sigma: Option<bool>,
}

impl intree::Payload for VertexInfo {
    fn fingerprint(&self) -> String {
        self.digest.clone()
    }

    fn tag(&self) -> String {
        self.pattern
            .classification
            .map(|t| t.to_string())
            .unwrap_or_default()
    }
}

fn annotate(group: PcGroup) -> Result<VertexInfo> {
    let fp = invariants::fingerprint(&group);
    let cover = pcover::p_cover(&group)?;
    let pattern = artin::artin_pattern(&group)?;
    Ok(VertexInfo {
        digest: json::digest(&group),
        order_exp: fp.order_exp,
        class: fp.class,
        coclass: fp.coclass,
        nuclear_rank: cover.nuclear_rank(),
        pattern,
        sigma: None,
        group,
    })
}

/// σ passes to the class-(c-1) quotient: the last lower-central layer is
/// characteristic and lies inside the Frattini subgroup, so an
/// automorphism inverting the abelianization descends to one doing the
/// same on the parent. A non-σ parent therefore settles every child
/// without a search.
fn sigma_below(parent_sigma: Option<bool>, g: &PcGroup, budget: u64) -> Result<bool> {
    if parent_sigma == Some(false) {
        return Ok(false);
    }
    artin::is_sigma(g, budget)
}

/// Complex-type children and incapable scaffold children fall to the
/// pruning used throughout: H.4/G.16 subtrees are cut, and so are
/// terminal children that merely repeat the mainline kernel type.
fn pruned_away(info: &VertexInfo) -> bool {
    match info.pattern.classification {
        Some(Tkt::H4 | Tkt::G16) => true,
        Some(Tkt::C18 | Tkt::C21) => info.nuclear_rank == 0,
        _ => false,
    }
}

/// Descendant tree of the variant root, expanded at every capable vertex
/// of logarithmic order at most max_lo, over all step sizes up to the
/// nuclear rank. Children of expanded vertices appear regardless of
/// their own order; capable vertices beyond max_lo stay marked
/// expandable. With prune set, H.4/G.16 children and incapable scaffold
/// children are dropped together with everything below them.
pub fn build_tree(
    variant: RootVariant,
    max_lo: u32,
    prune: bool,
    budget: u64,
) -> Result<Tree<VertexInfo>> {
    let mut root = annotate(tree_root(variant)?)?;
    root.sigma = Some(artin::is_sigma(&root.group, budget)?);
    let root_weight = root.nuclear_rank;
    let mut tree = Tree::new(variant.to_string(), root_weight, root, true);
    let mut queue = std::collections::VecDeque::from([tree.root()]);
    while let Some(v) = queue.pop_front() {
        let (group, lo, nu, parent_sigma) = {
            let info = tree.payload(v);
            (
                info.group.clone(),
                info.order_exp,
                info.nuclear_rank,
                info.sigma,
            )
        };
        if nu == 0 || lo > max_lo {
            continue;
        }
        for s in 1..=nu {
            for kid in pcover::descendants(&group, s, budget)? {
                let mut info = annotate(kid)?;
                if prune && pruned_away(&info) {
                    continue;
                }
                info.sigma = Some(sigma_below(parent_sigma, &info.group, budget)?);
                let expandable = info.nuclear_rank >= 1;
                let id = tree.add_child(v, s, info.nuclear_rank, info, expandable)?;
                if expandable {
                    queue.push_back(id);
                }
            }
        }
        tree.mark_expanded(v)?;
    }
    Ok(tree)
}

/// The pruned descendant tree the periodicity statements live on.
pub fn build_pruned_tree(
    variant: RootVariant,
    max_lo: u32,
    budget: u64,
) -> Result<Tree<VertexInfo>> {
    build_tree(variant, max_lo, true, budget)
}

/// Mainline vertex ids from the root downward: at each vertex, the
/// unique capable step-1 child with the mainline kernel type. Stops at
/// the first vertex without one (horizon).
pub fn mainline_ids(tree: &Tree<VertexInfo>) -> Result<Vec<usize>> {
    let mut out = vec![tree.root()];
    loop {
        let v = *out.last().unwrap();
        let mut next = None;
        let mut count = 0usize;
        for child in tree.sorted_children(v) {
            if tree.step(child) != Some(1) {
                continue;
            }
            let info = tree.payload(child);
            if matches!(info.pattern.classification, Some(Tkt::C18 | Tkt::C21))
                && info.nuclear_rank >= 1
            {
                count += 1;
                next = Some(child);
            }
        }
        match (count, next) {
            (0, _) => return Ok(out),
            (1, Some(child)) => out.push(child),
            (n, _) => return Err(Error::NoAdmissibleChild(n)),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub variant: String,
    pub max_lo: u32,
    pub mainline_len: usize,
    pub branch_sizes: Vec<usize>,
    pub periodicity: Option<Periodicity>,
}

/// Branches along the mainline of a built tree, fed to the periodicity
/// scan.
pub fn periodicity_report(
    tree: &Tree<VertexInfo>,
    variant: RootVariant,
    max_lo: u32,
) -> Result<PeriodicityReport> {
    let mainline = mainline_ids(tree)?;
    let mut branches = Vec::new();
    for i in 0..mainline.len().saturating_sub(1) {
        branches.push(tree.branch(&mainline, i)?);
    }
    let branch_sizes = branches.iter().map(|b| b.vertex_count()).collect();
    let periodicity = intree::detect_periodicity(&branches)?;
    Ok(PeriodicityReport {
        variant: variant.to_string(),
        max_lo,
        mainline_len: mainline.len(),
        branch_sizes,
        periodicity,
    })
}

/// Coclass tree fragment: step-1 descendants only, pruned, expanded
/// while the relative logarithmic order stays below rel_depth.
fn build_coclass_tree(
    root_group: PcGroup,
    rel_depth: u32,
    budget: u64,
) -> Result<Tree<VertexInfo>> {
    let root_lo = root_group.order_exp();
    let root = annotate(root_group)?;
    let mut tree = Tree::new(
        format!("T({})", root.digest.chars().take(8).collect::<String>()),
        root.nuclear_rank,
        root,
        true,
    );
    let mut queue = std::collections::VecDeque::from([tree.root()]);
    while let Some(v) = queue.pop_front() {
        let (group, lo, nu) = {
            let info = tree.payload(v);
            (info.group.clone(), info.order_exp, info.nuclear_rank)
        };
        if nu == 0 || lo - root_lo >= rel_depth {
            continue;
        }
        for kid in pcover::descendants(&group, 1, budget)? {
            let info = annotate(kid)?;
            if pruned_away(&info) {
                continue;
            }
            let expandable = info.nuclear_rank >= 1;
            let id = tree.add_child(v, 1, info.nuclear_rank, info, expandable)?;
            if expandable {
                queue.push_back(id);
            }
        }
        tree.mark_expanded(v)?;
    }
    Ok(tree)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondPeriodicityReport {
    pub variant: String,
    pub relative_depth: u32,
    pub first_root_fingerprint: String,
    pub second_root_fingerprint: String,
    pub first_vertex_count: usize,
    pub second_vertex_count: usize,
    pub isomorphic: bool,
    pub millis: u64,
}

/// Compares the pruned coclass-2 tree with the pruned coclass-3 tree
/// one bifurcation further down the maintrunk, both truncated at the
/// same relative logarithmic order. The comparison is rooted-tree
/// isomorphism with vertices labeled by nuclear rank; kernel-type tags
/// are not compared, since the deeper mainline leaves the named
/// alphabet.
pub fn second_periodicity(
    variant: RootVariant,
    relative_depth: u32,
    budget: u64,
) -> Result<SecondPeriodicityReport> {
    let t = Instant::now();
    let first_root = tree_root(variant)?;
    let bifurcation = unique_admissible_child(&first_root, 1, 0, variant, budget)?;
    let second_root = unique_admissible_child(&bifurcation, 2, 0, variant, budget)?;
    let first = build_coclass_tree(first_root, relative_depth, budget)?;
    let second = build_coclass_tree(second_root, relative_depth, budget)?;
    let g1 = first.minimal_subtree_graph(first.root())?.weights_only();
    let g2 = second.minimal_subtree_graph(second.root())?.weights_only();
    Ok(SecondPeriodicityReport {
        variant: variant.to_string(),
        relative_depth,
        first_root_fingerprint: first.payload(first.root()).digest.clone(),
        second_root_fingerprint: second.payload(second.root()).digest.clone(),
        first_vertex_count: first.vertex_count(),
        second_vertex_count: second.vertex_count(),
        isomorphic: g1.is_isomorphic(&g2),
        millis: ms(t),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusEntry {
    /// class of the children being counted (their parent is the mainline
    /// vertex of class c-1)
    pub c: u32,
    pub n1: usize,
    pub c1: usize,
    pub n1_unpruned: usize,
    pub c1_unpruned: usize,
    /// unpruned step-1 children by kernel type name; unclassified under ""
    pub types: BTreeMap<String, usize>,
}

/// Counts the step-1 children of the mainline vertices of class
/// c_from-1 .. c_to-1, with and without pruning, sorted by kernel type.
pub fn mainline_census(
    variant: RootVariant,
    c_from: u32,
    c_to: u32,
    budget: u64,
) -> Result<Vec<CensusEntry>> {
    if c_from < 4 || c_to < c_from {
        return Err(Error::CatalogDomain(
            "census wants 4 <= c_from <= c_to".into(),
        ));
    }
    let mut vertex = tree_root(variant)?;
    for _ in 3..(c_from - 1) {
        vertex = unique_admissible_child(&vertex, 1, 0, variant, budget)?;
    }
    let mut out = Vec::new();
    for c in c_from..=c_to {
        let kids = pcover::descendants(&vertex, 1, budget)?;
        let mut entry = CensusEntry {
            c,
            n1: 0,
            c1: 0,
            n1_unpruned: kids.len(),
            c1_unpruned: 0,
            types: BTreeMap::new(),
        };
        let mut next = None;
        for kid in kids {
            let info = annotate(kid)?;
            let capable = info.nuclear_rank >= 1;
            if capable {
                entry.c1_unpruned += 1;
            }
            *entry
                .types
                .entry(
                    info.pattern
                        .classification
                        .map(|t| t.to_string())
                        .unwrap_or_default(),
                )
                .or_insert(0) += 1;
            if !pruned_away(&info) {
                entry.n1 += 1;
                if capable {
                    entry.c1 += 1;
                }
            }
            if matches!(info.pattern.classification, Some(Tkt::C18 | Tkt::C21)) && capable {
                next = Some(info.group);
            }
        }
        out.push(entry);
        let Some(next) = next else {
            return Err(Error::NoAdmissibleChild(0));
        };
        vertex = next;
    }
    Ok(out)
}

/// One edge of a topology symbol: the kernel-type letter of the vertex
/// at the outer end, and the step size of the edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolEdge {
    pub letter: String,
    pub step: u32,
}

/// Fork topology of a vertex pair: the two root-path segments meeting
/// at the fork, with the paper's distance block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologySymbol {
    /// edges from u up to the fork, u first
    pub up: Vec<SymbolEdge>,
    pub fork: String,
    /// edges from the fork down to v, v last
    pub down: Vec<SymbolEdge>,
    pub d: u32,
    pub w: u32,
    pub dcl: u32,
    pub dcc: u32,
    pub dlo: u32,
}

impl std::fmt::Display for TopologySymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for e in &self.up {
            write!(f, "{} -{}> ", e.letter, e.step)?;
        }
        write!(f, "{}", self.fork)?;
        for e in &self.down {
            write!(f, " <{}- {}", e.step, e.letter)?;
        }
        Ok(())
    }
}

fn tkt_letter(tree: &Tree<VertexInfo>, v: usize) -> Result<String> {
    match tree.payload(v).pattern.classification {
        Some(Tkt::C18 | Tkt::C21) => Ok("c".into()),
        Some(Tkt::E6 | Tkt::E8 | Tkt::E9 | Tkt::E14) => Ok("E".into()),
        Some(Tkt::G16) => Ok("G".into()),
        Some(Tkt::H4) => Ok("H".into()),
        None => Err(Error::MissingAnnotations(tree.label(v)?)),
    }
}

/// Symmetric topology symbol of the pair (u, v) inside a built tree:
/// letters and step sizes along u -> fork -> v, plus distance d,
/// weighted distance w, and the class/coclass/order increments.
pub fn fork_topology(tree: &Tree<VertexInfo>, u: usize, v: usize) -> Result<TopologySymbol> {
    let fork = tree.fork(u, v)?;
    let up_path = tree.root_path(u)?;
    let down_path = tree.root_path(v)?;
    let cut = |path: &[usize]| path.iter().position(|&x| x == fork).unwrap();
    let mut up = Vec::new();
    for &x in &up_path[..cut(&up_path)] {
        up.push(SymbolEdge {
            letter: tkt_letter(tree, x)?,
            step: tree.step(x).unwrap(),
        });
    }
    let mut down = Vec::new();
    for &x in down_path[..cut(&down_path)].iter().rev() {
        down.push(SymbolEdge {
            letter: tkt_letter(tree, x)?,
            step: tree.step(x).unwrap(),
        });
    }
    let (iu, iv) = (tree.payload(u), tree.payload(v));
    Ok(TopologySymbol {
        d: tree.distance(u, v)?,
        w: tree.weighted_distance(u, v)?,
        dcl: iu.class.abs_diff(iv.class),
        dcc: iu.coclass.abs_diff(iv.coclass),
        dlo: iu.order_exp.abs_diff(iv.order_exp),
        fork: tkt_letter(tree, fork)?,
        up,
        down,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathVertex {
    pub order_exp: u32,
    pub class: u32,
    pub coclass: u32,
    pub capable: bool,
    /// "c", "E", "G", "H", or "unlettered"
    pub letter: String,
    /// step size of the edge toward the parent; absent on the root
    pub step: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootPathReport {
    pub vertices: Vec<PathVertex>,
    /// generic closed form that matched
    pub template: String,
    /// the matched path with the actual letters filled in
    pub rendered: String,
    pub sporadic: bool,
    pub c: u32,
    pub r: u32,
    pub x: String,
}

const TPL_COCLASS1: &str = "X {-1> a*}^(c-1)";
const TPL_TREE2_B: &str = "X {-1> b*}^(c-3) -2> a* -1> a*";
const TPL_TREE2_C: &str = "X {-1> c*}^(c-3) -2> a* -1> a*";
const TPL_TREE2_XX: &str = "X -1> X* {-1> c*}^(c-4) -2> a* -1> a*";
const TPL_TREE3: &str = "X {-1> s*}^(c-r-1) {-2> b*}^(r-2) -2> a* -1> a*";
const TPL_TREE3_XX: &str = "X -1> X* {-1> d*}^(c-r-2) {-2> b*}^(r-2) -2> a* -1> a*";
const TPL_SPORADIC_23: &str = "X -2> a* -1> a*";
const TPL_SPORADIC_24: &str = "X -1> X* -2> a* -1> a*";
const TPL_SPORADIC_R1: &str = "X {-2> b*}^(r-2) -2> a* -1> a*";
const TPL_SPORADIC_R2: &str = "X -1> X* {-2> b*}^(r-2) -2> a* -1> a*";

fn path_letter(classification: Option<Tkt>) -> String {
    match classification {
        Some(Tkt::C18 | Tkt::C21) => "c".into(),
        Some(Tkt::E6 | Tkt::E8 | Tkt::E9 | Tkt::E14) => "E".into(),
        Some(Tkt::G16) => "G".into(),
        Some(Tkt::H4) => "H".into(),
        None => "unlettered".into(),
    }
}

fn render_path(vertices: &[PathVertex]) -> String {
    let mut out = String::new();
    for (i, v) in vertices.iter().enumerate() {
        let letter = if v.letter == "unlettered" {
            "?"
        } else {
            &v.letter
        };
        out.push_str(letter);
        if v.capable && i > 0 {
            out.push('*');
        }
        if let Some(s) = v.step {
            out.push_str(&format!(" -{}> ", s));
        }
    }
    out
}

/// Classifies the root path of a metabelian 2-generated group with
/// abelianization (3,3) against the closed forms: the coclass-1 chain,
/// the coclass-tree forms with scaffold letters, their same-letter
/// variants one level below a capable complex-type vertex, and the
/// sporadic forms outside the trees. Letters only exist for the eight
/// named kernel types; every other vertex is matched structurally
/// (capability and step size) and reported unlettered.
pub fn classify_root_path(g: &PcGroup, budget: u64) -> Result<RootPathReport> {
    let fp = invariants::fingerprint(g);
    if fp.rank != 2 || fp.abelianization != vec![1, 1] {
        return Err(Error::HypothesisViolation(
            "root-path classification wants a 2-generated group with abelianization (3,3)".into(),
        ));
    }
    if series::derived(g).len() > 3 {
        return Err(Error::HypothesisViolation(
            "root-path classification wants a metabelian group".into(),
        ));
    }
    let mut chain = vec![g.clone()];
    while series::nilpotency_class(chain.last().unwrap()) > 1 {
        chain.push(quotient::parent(chain.last().unwrap())?.0);
    }
    let _ = budget;
    let mut vertices = Vec::new();
    for (i, v) in chain.iter().enumerate() {
        let f = invariants::fingerprint(v);
        let classification = artin::artin_pattern(v)?.classification;
        let capable = pcover::p_cover(v)?.nuclear_rank() >= 1;
        let step = chain
            .get(i + 1)
            .map(|next| f.order_exp - next.order_exp());
        vertices.push(PathVertex {
            order_exp: f.order_exp,
            class: f.class,
            coclass: f.coclass,
            capable,
            letter: path_letter(classification),
            step,
        });
    }
    let c = fp.class;
    let r = fp.coclass;
    let x = vertices[0].letter.clone();
    let n = vertices.len();
    debug_assert_eq!(n as u32, c);
    let steps: Vec<u32> = vertices[..n - 1].iter().map(|v| v.step.unwrap()).collect();

    let fail = || Error::NoTemplateMatch;
    let mut template = None;
    let mut sporadic = false;

    if r == 1 {
        if steps.iter().all(|&s| s == 1) && vertices[1..].iter().all(|v| v.capable) {
            template = Some(TPL_COCLASS1);
        }
    } else if r == 2 && c >= 3 {
        // tail: a step-2 edge onto the capable class-2 vertex, then a
        // step-1 edge onto the root
        let tail_ok = steps[n - 2] == 1
            && steps[n - 3] == 2
            && vertices[n - 1].capable
            && vertices[n - 2].capable
            && vertices[n - 2].class == 2;
        let interior = &vertices[1..n - 2];
        let prefix_ok = steps[..n - 3].iter().all(|&s| s == 1)
            && interior.iter().all(|v| v.capable);
        if tail_ok && prefix_ok {
            if interior.is_empty() {
                // class-3 start: the tree roots keep their own letters,
                // everything lettered G/H/E or terminal is sporadic
                template = Some(match x.as_str() {
                    "c" => TPL_TREE2_C,
                    "unlettered" if vertices[0].capable => TPL_TREE2_B,
                    _ => {
                        sporadic = true;
                        TPL_SPORADIC_23
                    }
                });
            } else if interior.iter().all(|v| v.letter == "c") {
                template = Some(TPL_TREE2_C);
            } else if (x == "G" || x == "H")
                && interior[0].letter == x
                && interior[1..].iter().all(|v| v.letter == "c")
            {
                template = Some(if c == 4 {
                    sporadic = true;
                    TPL_SPORADIC_24
                } else {
                    TPL_TREE2_XX
                });
            } else if interior.iter().all(|v| v.letter == "unlettered") {
                template = Some(TPL_TREE2_B);
            }
        }
    } else if r >= 3 && c >= r + 1 {
        // tail: r-1 consecutive step-2 edges, then a final step-1 edge;
        // every landed vertex capable
        let lead = (n - 1) - r as usize;
        let tail_ok = steps[n - 2] == 1
            && steps[lead..n - 2].iter().all(|&s| s == 2)
            && vertices[lead + 1..].iter().all(|v| v.capable)
            && vertices[n - 2].class == 2;
        let prefix_ok = steps[..lead].iter().all(|&s| s == 1)
            && vertices[1..lead + 1].iter().all(|v| v.capable);
        if tail_ok && prefix_ok {
            if lead == 0 {
                sporadic = true;
                template = Some(TPL_SPORADIC_R1);
            } else if (x == "G" || x == "H") && vertices[1].letter == x {
                template = Some(if lead == 1 {
                    sporadic = true;
                    TPL_SPORADIC_R2
                } else {
                    TPL_TREE3_XX
                });
            } else {
                template = Some(TPL_TREE3);
            }
        }
    }
    let template = template.ok_or_else(fail)?;
    Ok(RootPathReport {
        rendered: render_path(&vertices),
        vertices,
        template: template.into(),
        sporadic,
        c,
        r,
        x,
    })
}
