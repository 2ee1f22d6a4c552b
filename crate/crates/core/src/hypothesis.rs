//! The five-clause hypothesis that rules out a normal nonabelian Sylow
//! `p`-subgroup.
//!
//! Notation: `π = N(p)`, `ρ = V \ ({p} ∪ π)`. Clauses (iii) and (iv) ask that
//! no proper connected subgraph on certain vertex sets occurs. Such a
//! subgraph is any connected spanning subgraph of the induced graph on the
//! set, other than `g` itself.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility::{admissible, AdmissibilityStatus};
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::{Oracle, Verdict, VerdictKind, RULESET_VERSION};

/// Largest edge count of an induced graph whose subgraphs get enumerated.
pub const EDGE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClauseStatus {
    Verified,
    Failed,
    Undetermined,
}

impl ClauseStatus {
    /// Failed dominates Undetermined, which dominates Verified.
    pub fn and(self, other: ClauseStatus) -> ClauseStatus {
        use ClauseStatus::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Verified,
        }
    }

    fn all(it: impl IntoIterator<Item = ClauseStatus>) -> ClauseStatus {
        it.into_iter().fold(ClauseStatus::Verified, ClauseStatus::and)
    }
}

pub fn pi_rho(g: &Graph, p: usize) -> (VertexSet, VertexSet) {
    let pi = g.neighbors(p);
    let rho = g.vertices().difference(pi).without(p);
    (pi, rho)
}

/// Clauses (i) and (ii).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonadjacencyClause {
    pub status: ClauseStatus,
    /// Each checked vertex with the first nonadjacent partner found.
    pub witnesses: BTreeMap<String, String>,
    pub failed_at: Option<String>,
}

fn nonadjacency(g: &Graph, from: VertexSet, to: VertexSet) -> NonadjacencyClause {
    let mut witnesses = BTreeMap::new();
    for v in from {
        match to.difference(g.neighbors(v)).first() {
            Some(w) => {
                witnesses.insert(g.label(v).to_string(), g.label(w).to_string());
            }
            None => {
                return NonadjacencyClause {
                    status: ClauseStatus::Failed,
                    witnesses,
                    failed_at: Some(g.label(v).to_string()),
                }
            }
        }
    }
    NonadjacencyClause { status: ClauseStatus::Verified, witnesses, failed_at: None }
}

/// Every vertex of `ρ` has a nonadjacent vertex in `π`.
pub fn check_clause_i(g: &Graph, p: usize) -> NonadjacencyClause {
    let (pi, rho) = pi_rho(g, p);
    nonadjacency(g, rho, pi)
}

/// Every vertex of `π` has a nonadjacent vertex in `ρ`.
pub fn check_clause_ii(g: &Graph, p: usize) -> NonadjacencyClause {
    let (pi, rho) = pi_rho(g, p);
    nonadjacency(g, pi, rho)
}

/// One isomorphism class of candidate subgraphs.
#[derive(Clone, Debug)]
pub struct Candidate {
    /// Representative, on the vertices of `g[S]` in their original order.
    pub graph: Graph,
    pub canonical: String,
    /// Edges of `g[S]` missing from the representative.
    pub removed: Vec<(usize, usize)>,
    /// Number of edge subsets in this class.
    pub multiplicity: u64,
}

/// Connected spanning subgraphs of `g[S]`, excluding `g` itself when
/// `S = V`, one per isomorphism class, ordered by canonical key.
pub fn candidate_subgraphs(g: &Graph, s: VertexSet) -> Result<Vec<Candidate>> {
    candidates_impl(g, s, true)
}

/// As [`candidate_subgraphs`], without isomorphism dedup: one entry per
/// edge subset, in mask order.
pub fn candidate_subgraphs_raw(g: &Graph, s: VertexSet) -> Result<Vec<Candidate>> {
    candidates_impl(g, s, false)
}

fn candidates_impl(g: &Graph, s: VertexSet, dedup: bool) -> Result<Vec<Candidate>> {
    if !s.is_subset(g.vertices()) {
        return Err(Error::Precondition("vertex set is not inside the graph".into()));
    }
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let h = g.induced(s);
    let edges = h.edges();
    if edges.len() > EDGE_CAP {
        let cap = (1u64 << EDGE_CAP) - 1;
        return Err(Error::CapExceeded { needed: (1u64 << edges.len()) - 1, cap });
    }
    let whole = s == g.vertices();
    let m = edges.len();
    let found: Vec<(u64, Graph, String)> = (0u64..1 << m)
        .into_par_iter()
        .filter(|&mask| !(whole && mask == 0))
        .filter_map(|mask| {
            let drop: Vec<(usize, usize)> =
                (0..m).filter(|i| mask & (1 << i) != 0).map(|i| edges[i]).collect();
            let c = h.remove_edges(&drop);
            if !c.is_connected() {
                return None;
            }
            let key = if dedup { canonical_form(&c).key() } else { String::new() };
            Some((mask, c, key))
        })
        .collect();
    let removed_of = |mask: u64| -> Vec<(usize, usize)> {
        (0..m).filter(|i| mask & (1 << i) != 0).map(|i| edges[i]).collect()
    };
    if !dedup {
        return Ok(found
            .into_iter()
            .map(|(mask, graph, _)| {
                let canonical = canonical_form(&graph).key();
                Candidate { graph, canonical, removed: removed_of(mask), multiplicity: 1 }
            })
            .collect());
    }
    let mut classes: BTreeMap<String, Candidate> = BTreeMap::new();
    for (mask, graph, key) in found {
        classes
            .entry(key.clone())
            .and_modify(|c| c.multiplicity += 1)
            .or_insert_with(|| Candidate { graph, canonical: key, removed: removed_of(mask), multiplicity: 1 });
    }
    Ok(classes.into_values().collect())
}

/// A candidate the oracle did not certify.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Uncertified {
    pub canonical: String,
    pub removed_edges: Vec<[String; 2]>,
    pub verdict: Verdict,
}

/// Enumeration outcome for one vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCheck {
    pub vertex_set: Vec<String>,
    /// Other choices whose induced graph is isomorphic and was not enumerated again.
    pub also_covers: Vec<Vec<String>>,
    pub induced_edges: usize,
    /// Connected spanning subgraphs, counted with multiplicity.
    pub candidates: u64,
    pub classes: usize,
    pub status: ClauseStatus,
    pub uncertified: Vec<Uncertified>,
    pub rule_counts: BTreeMap<String, u64>,
}

fn check_set(g: &Graph, s: VertexSet, oracle: &Oracle, dedup: bool) -> Result<SetCheck> {
    let cands = candidates_impl(g, s, dedup)?;
    let verdicts: Vec<Verdict> = cands.par_iter().map(|c| oracle.classify(&c.graph)).collect();
    let mut rule_counts = BTreeMap::new();
    let mut uncertified = Vec::new();
    let mut status = ClauseStatus::Verified;
    for (c, v) in cands.iter().zip(verdicts) {
        match v.kind() {
            VerdictKind::NotOccurs => {
                let tag = v.certificate().map(|c| c.tag()).unwrap_or_default();
                *rule_counts.entry(tag.to_string()).or_insert(0) += c.multiplicity;
                continue;
            }
            VerdictKind::Occurs => status = status.and(ClauseStatus::Failed),
            VerdictKind::Unknown => status = status.and(ClauseStatus::Undetermined),
        }
        uncertified.push(Uncertified {
            canonical: c.canonical.clone(),
            removed_edges: c
                .removed
                .iter()
                .map(|&(u, v)| [c.graph.label(u).to_string(), c.graph.label(v).to_string()])
                .collect(),
            verdict: v,
        });
    }
    Ok(SetCheck {
        vertex_set: g.labels_of(s),
        also_covers: Vec::new(),
        induced_edges: g.edges_within(s).len(),
        candidates: cands.iter().map(|c| c.multiplicity).sum(),
        classes: cands.len(),
        status,
        uncertified,
        rule_counts,
    })
}

/// Check each vertex set, enumerating one representative per isomorphism
/// class of induced graph when `dedup` is set.
fn check_sets(g: &Graph, sets: &[VertexSet], oracle: &Oracle, dedup: bool) -> Result<Vec<SetCheck>> {
    let mut reps: Vec<VertexSet> = Vec::new();
    let mut covered: Vec<Vec<VertexSet>> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for &s in sets {
        if dedup {
            let key = canonical_form(&g.induced(s)).key();
            if let Some(&i) = index.get(&key) {
                covered[i].push(s);
                continue;
            }
            index.insert(key, reps.len());
        }
        reps.push(s);
        covered.push(Vec::new());
    }
    let mut out = Vec::with_capacity(reps.len());
    for (s, also) in reps.into_iter().zip(covered) {
        let mut check = check_set(g, s, oracle, true)?;
        check.also_covers = also.into_iter().map(|t| g.labels_of(t)).collect();
        out.push(check);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexAdmissibility {
    pub vertex: String,
    pub status: AdmissibilityStatus,
}

fn admissibility_of(g: &Graph, vs: VertexSet, oracle: &Oracle) -> Result<Vec<VertexAdmissibility>> {
    vs.iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&v| {
            let status = if g.degree(v) == 0 {
                AdmissibilityStatus::Undetermined
            } else {
                admissible(g, v, oracle)?.status
            };
            Ok(VertexAdmissibility { vertex: g.label(v).to_string(), status })
        })
        .collect()
}

fn admissibility_status(rows: &[VertexAdmissibility]) -> ClauseStatus {
    ClauseStatus::all(rows.iter().map(|r| match r.status {
        AdmissibilityStatus::Established => ClauseStatus::Verified,
        AdmissibilityStatus::Refuted => ClauseStatus::Failed,
        AdmissibilityStatus::Undetermined => ClauseStatus::Undetermined,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationClause {
    pub status: ClauseStatus,
    pub admissibility: Vec<VertexAdmissibility>,
    pub sets: Vec<SetCheck>,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Enumerate one vertex set per isomorphism class of induced graph.
    pub dedup_sets: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { dedup_sets: true }
    }
}

/// Clause (iii): `π` admissible, and no candidate on `{p} ∪ π* ∪ ρ` occurs.
pub fn check_clause_iii(g: &Graph, p: usize, oracle: &Oracle) -> Result<EnumerationClause> {
    check_clause_iii_with(g, p, oracle, Options::default())
}

pub fn check_clause_iii_with(g: &Graph, p: usize, oracle: &Oracle, opts: Options) -> Result<EnumerationClause> {
    let (pi, rho) = pi_rho(g, p);
    let admissibility = admissibility_of(g, pi, oracle)?;
    let sets: Vec<VertexSet> = pi
        .subsets()
        .filter(|s| !s.is_empty())
        .map(|s| s.union(rho).with(p))
        .collect();
    let sets = check_sets(g, &sets, oracle, opts.dedup_sets)?;
    let status = admissibility_status(&admissibility)
        .and(ClauseStatus::all(sets.iter().map(|s| s.status)));
    Ok(EnumerationClause { status, admissibility, sets })
}

/// Common neighbors of `π* ∪ ρ*`, which must be a clique with both parts
/// nonempty inside `π` and `ρ`.
pub fn tau_of(g: &Graph, p: usize, pi_star: VertexSet, rho_star: VertexSet) -> Result<VertexSet> {
    let (pi, rho) = pi_rho(g, p);
    if pi_star.is_empty() || rho_star.is_empty() {
        return Err(Error::EmptySet);
    }
    if !pi_star.is_subset(pi) || !rho_star.is_subset(rho) {
        return Err(Error::Precondition("base sets must lie in π and ρ".into()));
    }
    let base = pi_star.union(rho_star);
    if !g.is_clique(base) {
        return Err(Error::Precondition(format!(
            "{{{}}} does not induce a complete subgraph",
            g.labels_of(base).join(",")
        )));
    }
    Ok(g.common_neighbors(base))
}

/// Cliques `π* ∪ ρ*` with nonempty parts, in increasing bitmask order.
pub fn clique_bases(g: &Graph, p: usize) -> Vec<(VertexSet, VertexSet)> {
    let (pi, rho) = pi_rho(g, p);
    let mut out = Vec::new();
    for ps in pi.subsets().filter(|s| !s.is_empty() && g.is_clique(*s)) {
        let reach = rho.intersection(g.common_neighbors(ps));
        for rs in reach.subsets().filter(|s| !s.is_empty() && g.is_clique(*s)) {
            out.push((ps, rs));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauEntry {
    pub pi_star: Vec<String>,
    pub rho_star: Vec<String>,
    pub tau: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauClause {
    pub status: ClauseStatus,
    /// Bases with nonempty `τ` only.
    pub tau_map: Vec<TauEntry>,
    pub bases_checked: usize,
    pub admissibility: Vec<VertexAdmissibility>,
    pub sets: Vec<SetCheck>,
}

/// Clause (iv): for each clique base, `τ` admissible and no candidate on
/// `V \ τ*` occurs for nonempty `τ* ⊆ τ`.
pub fn check_clause_iv(g: &Graph, p: usize, oracle: &Oracle) -> Result<TauClause> {
    check_clause_iv_with(g, p, oracle, Options::default())
}

pub fn check_clause_iv_with(g: &Graph, p: usize, oracle: &Oracle, opts: Options) -> Result<TauClause> {
    let bases = clique_bases(g, p);
    let mut tau_map = Vec::new();
    let mut all_tau = VertexSet::EMPTY;
    let mut removals: Vec<VertexSet> = Vec::new();
    for &(ps, rs) in &bases {
        let tau = g.common_neighbors(ps.union(rs));
        if tau.is_empty() {
            continue;
        }
        tau_map.push(TauEntry { pi_star: g.labels_of(ps), rho_star: g.labels_of(rs), tau: g.labels_of(tau) });
        all_tau = all_tau.union(tau);
        for t in tau.subsets().filter(|t| !t.is_empty()) {
            if !removals.contains(&t) {
                removals.push(t);
            }
        }
    }
    let admissibility = admissibility_of(g, all_tau, oracle)?;
    let sets: Vec<VertexSet> = removals.iter().map(|&t| g.vertices().difference(t)).collect();
    let sets = check_sets(g, &sets, oracle, opts.dedup_sets)?;
    let status = admissibility_status(&admissibility)
        .and(ClauseStatus::all(sets.iter().map(|s| s.status)));
    Ok(TauClause { status, tau_map, bases_checked: bases.len(), admissibility, sets })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionOutcome {
    /// `b < 2^a − 1`.
    ViolatesInequality,
    /// `(a, b) = (m, 2^m − 1)` with `m > 1`.
    AllowedShape,
    /// Satisfies the inequality without the allowed shape.
    WrongShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub smaller: Vec<String>,
    pub larger: Vec<String>,
    pub a: usize,
    pub b: usize,
    /// `2^a − 1`, saturating.
    pub threshold: u64,
    pub outcome: PartitionOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionClause {
    pub status: ClauseStatus,
    pub partitions: Vec<PartitionCheck>,
}

/// Clause (v): every split of `V` into two cliques either violates Pálfy's
/// inequality or has sizes `(m, 2^m − 1)`, `m > 1`.
pub fn check_clause_v(g: &Graph, _p: usize) -> PartitionClause {
    let mut partitions = Vec::new();
    for (x, y) in g.two_clique_partitions() {
        let (s, l) = if x.len() <= y.len() { (x, y) } else { (y, x) };
        let (a, b) = (s.len(), l.len());
        let threshold = if a >= 64 { u64::MAX } else { (1u64 << a) - 1 };
        let outcome = if (b as u64) < threshold {
            PartitionOutcome::ViolatesInequality
        } else if a > 1 && b as u64 == threshold {
            PartitionOutcome::AllowedShape
        } else {
            PartitionOutcome::WrongShape
        };
        partitions.push(PartitionCheck {
            smaller: g.labels_of(s),
            larger: g.labels_of(l),
            a,
            b,
            threshold,
            outcome,
        });
    }
    let status = if partitions.iter().any(|c| c.outcome == PartitionOutcome::WrongShape) {
        ClauseStatus::Failed
    } else {
        ClauseStatus::Verified
    };
    PartitionClause { status, partitions }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub p: String,
    pub pi: Vec<String>,
    pub rho: Vec<String>,
    pub status: ClauseStatus,
    pub clause_i: NonadjacencyClause,
    pub clause_ii: NonadjacencyClause,
    pub clause_iii: EnumerationClause,
    pub clause_iv: TauClause,
    pub clause_v: PartitionClause,
    pub ruleset: String,
}

impl HypothesisReport {
    pub fn statuses(&self) -> [(&'static str, ClauseStatus); 5] {
        [
            ("i", self.clause_i.status),
            ("ii", self.clause_ii.status),
            ("iii", self.clause_iii.status),
            ("iv", self.clause_iv.status),
            ("v", self.clause_v.status),
        ]
    }

    /// Uncertified candidates across clauses (iii) and (iv).
    pub fn undetermined_candidates(&self) -> usize {
        self.clause_iii
            .sets
            .iter()
            .chain(&self.clause_iv.sets)
            .map(|s| s.uncertified.len())
            .sum()
    }

    pub fn to_markdown(&self) -> String {
        let mut md = format!(
            "# Hypothesis check at p = {}\n\nπ = {{{}}}, ρ = {{{}}}\n\nOverall: **{:?}**\n\n| clause | status |\n|---|---|\n",
            self.p,
            self.pi.join(", "),
            self.rho.join(", "),
            self.status
        );
        for (name, st) in self.statuses() {
            md.push_str(&format!("| ({name}) | {st:?} |\n"));
        }
        let sets = |md: &mut String, title: &str, sets: &[SetCheck]| {
            md.push_str(&format!("\n## {title}\n\n| vertex set | candidates | classes | status |\n|---|---|---|---|\n"));
            for s in sets {
                md.push_str(&format!(
                    "| {{{}}} | {} | {} | {:?} |\n",
                    s.vertex_set.join(","),
                    s.candidates,
                    s.classes,
                    s.status
                ));
            }
        };
        sets(&mut md, "Clause (iii) vertex sets", &self.clause_iii.sets);
        if !self.clause_iv.tau_map.is_empty() {
            md.push_str("\n## Clause (iv) nonempty τ\n\n");
            for t in &self.clause_iv.tau_map {
                md.push_str(&format!(
                    "- π* = {{{}}}, ρ* = {{{}}}: τ = {{{}}}\n",
                    t.pi_star.join(","),
                    t.rho_star.join(","),
                    t.tau.join(",")
                ));
            }
        }
        sets(&mut md, "Clause (iv) vertex sets", &self.clause_iv.sets);
        md.push_str("\n## Clause (v) two-clique splits\n\n");
        for c in &self.clause_v.partitions {
            md.push_str(&format!(
                "- {{{}}} | {{{}}}: sizes ({}, {}), 2^{}−1 = {}: {:?}\n",
                c.smaller.join(","),
                c.larger.join(","),
                c.a,
                c.b,
                c.a,
                c.threshold,
                c.outcome
            ));
        }
        md
    }
}

pub fn verify_hypothesis(g: &Graph, p: usize, oracle: &Oracle) -> Result<HypothesisReport> {
    verify_hypothesis_with(g, p, oracle, Options::default())
}

pub fn verify_hypothesis_with(g: &Graph, p: usize, oracle: &Oracle, opts: Options) -> Result<HypothesisReport> {
    if p >= g.n() {
        return Err(Error::VertexOutOfRange(p));
    }
    let (pi, rho) = pi_rho(g, p);
    let clause_i = check_clause_i(g, p);
    let clause_ii = check_clause_ii(g, p);
    let clause_iii = check_clause_iii_with(g, p, oracle, opts)?;
    let clause_iv = check_clause_iv_with(g, p, oracle, opts)?;
    let clause_v = check_clause_v(g, p);
    let status = ClauseStatus::all([
        clause_i.status,
        clause_ii.status,
        clause_iii.status,
        clause_iv.status,
        clause_v.status,
    ]);
    Ok(HypothesisReport {
        p: g.label(p).to_string(),
        pi: g.labels_of(pi),
        rho: g.labels_of(rho),
        status,
        clause_i,
        clause_ii,
        clause_iii,
        clause_iv,
        clause_v,
        ruleset: format!("{RULESET_VERSION}+{}", oracle.fingerprint()),
    })
}
