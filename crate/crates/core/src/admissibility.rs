//! Admissible and strongly admissible vertices.
//!
//! A vertex `p` is admissible when deleting it, or deleting any nonempty set
//! of its incident edges (keeping `p`), never leaves a graph that occurs.
//! Strong admissibility also deletes every nonempty set of edges among the
//! neighbors of `p` from `g − p`. Both are decided relative to an [`Oracle`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{Certificate, Oracle, Rule, Verdict, VerdictKind, RULESET_VERSION};

pub const DEFAULT_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdmissibilityStatus {
    Established,
    Refuted,
    Undetermined,
}

/// Which deletion family a subgraph came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// `g − p`.
    VertexDeletion,
    /// `g` minus a nonempty set of edges at `p`.
    IncidentEdges,
    /// `g − p` minus a nonempty set of edges among the neighbors of `p`.
    NeighborEdges,
}

/// A deletion subgraph together with its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub stage: Stage,
    pub removed_edges: Vec<[String; 2]>,
    pub canonical: String,
    pub verdict: Verdict,
}

impl Witness {
    /// Rebuild the subgraph this witness describes.
    pub fn subgraph(&self, g: &Graph, p: usize) -> Result<Graph> {
        let edges = self
            .removed_edges
            .iter()
            .map(|[u, v]| Ok((g.require_index(u)?, g.require_index(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(match self.stage {
            Stage::VertexDeletion => g.remove_vertex(p),
            Stage::IncidentEdges => g.remove_edges(&edges),
            Stage::NeighborEdges => g.remove_edges(&edges).remove_vertex(p),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityResult {
    pub vertex: String,
    pub strong: bool,
    pub status: AdmissibilityStatus,
    /// Verdict on `g − p`.
    pub vertex_deletion: Verdict,
    /// First subgraph found to occur.
    pub refuting: Option<Witness>,
    /// Subgraphs left `Unknown`, one per isomorphism class.
    pub unknown: Vec<Witness>,
    /// Subgraphs examined, including pruned ones.
    pub checked: u64,
    /// Subgraphs settled by an inherited Pálfy triple without an oracle call.
    pub pruned: u64,
    /// How many subgraphs each certificate rule settled.
    pub rule_counts: BTreeMap<String, u64>,
    pub ruleset: String,
}

impl AdmissibilityResult {
    pub fn is_established(&self) -> bool {
        self.status == AdmissibilityStatus::Established
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Maximum subgraphs per enumeration stage.
    pub cap: u64,
    /// Skip oracle calls for supersets of deletion sets with a Pálfy triple.
    pub prune: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { cap: DEFAULT_CAP, prune: true }
    }
}

pub fn admissible(g: &Graph, p: usize, oracle: &Oracle) -> Result<AdmissibilityResult> {
    admissible_with(g, p, oracle, Options::default())
}

pub fn strongly_admissible(g: &Graph, p: usize, oracle: &Oracle) -> Result<AdmissibilityResult> {
    strongly_admissible_with(g, p, oracle, Options::default())
}

pub fn admissible_with(g: &Graph, p: usize, oracle: &Oracle, opts: Options) -> Result<AdmissibilityResult> {
    check_vertex(g, p)?;
    let incident: Vec<(usize, usize)> = g.neighbors(p).iter().map(|q| (p.min(q), p.max(q))).collect();
    check_cap(incident.len(), opts.cap)?;

    let mut tally = Tally::new(g, oracle);
    let minus_p = g.remove_vertex(p);
    let vertex_deletion = oracle.classify(&minus_p);
    tally.record(Stage::VertexDeletion, &[], &minus_p, vertex_deletion.clone(), false);
    enumerate(g, &incident, Stage::IncidentEdges, oracle, opts, &mut tally);
    Ok(tally.finish(g.label(p), false, vertex_deletion))
}

pub fn strongly_admissible_with(
    g: &Graph,
    p: usize,
    oracle: &Oracle,
    opts: Options,
) -> Result<AdmissibilityResult> {
    check_vertex(g, p)?;
    let inner = g.edges_within(g.neighbors(p));
    check_cap(inner.len(), opts.cap)?;
    let weak = admissible_with(g, p, oracle, opts)?;
    if !weak.is_established() {
        return Ok(AdmissibilityResult { strong: true, ..weak });
    }
    let mut tally = Tally::resume(g, oracle, &weak);
    // edges among neighbors do not touch p, so drop p after choosing them
    let minus_p = g.remove_vertex(p);
    let shift = |v: usize| if v > p { v - 1 } else { v };
    let shifted: Vec<(usize, usize)> = inner.iter().map(|&(u, v)| (shift(u), shift(v))).collect();
    enumerate(&minus_p, &shifted, Stage::NeighborEdges, oracle, opts, &mut tally);
    Ok(tally.finish(g.label(p), true, weak.vertex_deletion))
}

/// Strong admissibility of every non-isolated vertex, in vertex order.
pub fn admissible_set(g: &Graph, oracle: &Oracle) -> Result<Vec<AdmissibilityResult>> {
    g.vertices()
        .iter()
        .filter(|&v| g.degree(v) > 0)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&v| strongly_admissible(g, v, oracle))
        .collect()
}

fn check_vertex(g: &Graph, p: usize) -> Result<()> {
    if p >= g.n() {
        return Err(Error::VertexOutOfRange(p));
    }
    if g.degree(p) == 0 {
        return Err(Error::Precondition(format!("vertex {} is isolated", g.label(p))));
    }
    Ok(())
}

fn check_cap(edges: usize, cap: u64) -> Result<()> {
    let needed = if edges >= 64 { u64::MAX } else { (1u64 << edges) - 1 };
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    Ok(())
}

/// Classify `base − S` for every nonempty `S ⊆ edges`, level by level so a
/// Pálfy triple found at `S` can settle every superset of `S`.
fn enumerate(
    base: &Graph,
    edges: &[(usize, usize)],
    stage: Stage,
    oracle: &Oracle,
    opts: Options,
    tally: &mut Tally,
) {
    let m = edges.len();
    let prune = opts.prune && oracle.rules().contains(Rule::PalfyTriple);
    let mut triple_at: Vec<Option<[usize; 3]>> = vec![None; 1 << m];
    for level in 1..=m {
        let masks: Vec<usize> = (1usize..1 << m).filter(|s| s.count_ones() as usize == level).collect();
        let results: Vec<(usize, Graph, Verdict, bool)> = masks
            .par_iter()
            .map(|&mask| {
                let drop: Vec<(usize, usize)> =
                    (0..m).filter(|i| mask & (1 << i) != 0).map(|i| edges[i]).collect();
                let h = base.remove_edges(&drop);
                let inherited = if prune {
                    (0..m)
                        .filter(|i| mask & (1 << i) != 0)
                        .find_map(|i| triple_at[mask & !(1 << i)])
                } else {
                    None
                };
                match inherited {
                    Some(triple) => (mask, h, Verdict::NotOccurs(Certificate::PalfyTriple { triple }), true),
                    None => {
                        let v = oracle.classify(&h);
                        (mask, h, v, false)
                    }
                }
            })
            .collect();
        for (mask, h, v, pruned) in results {
            if let Verdict::NotOccurs(Certificate::PalfyTriple { triple }) = &v {
                triple_at[mask] = Some(*triple);
            }
            let drop: Vec<(usize, usize)> =
                (0..m).filter(|i| mask & (1 << i) != 0).map(|i| edges[i]).collect();
            tally.record(stage, &drop, &h, v, pruned);
        }
    }
}

struct Tally<'a> {
    g: &'a Graph,
    ruleset: String,
    refuting: Option<Witness>,
    unknown: BTreeMap<String, Witness>,
    checked: u64,
    pruned: u64,
    rule_counts: BTreeMap<String, u64>,
}

impl<'a> Tally<'a> {
    fn new(g: &'a Graph, oracle: &Oracle) -> Self {
        Tally {
            g,
            ruleset: format!("{RULESET_VERSION}+{}", oracle.fingerprint()),
            refuting: None,
            unknown: BTreeMap::new(),
            checked: 0,
            pruned: 0,
            rule_counts: BTreeMap::new(),
        }
    }

    fn resume(g: &'a Graph, oracle: &Oracle, r: &AdmissibilityResult) -> Self {
        let mut t = Tally::new(g, oracle);
        t.checked = r.checked;
        t.pruned = r.pruned;
        t.rule_counts = r.rule_counts.clone();
        t
    }

    /// `removed` uses the vertex numbering of `self.g` for incident edges and
    /// of `g − p` for neighbor edges; labels are taken from `h`.
    fn record(&mut self, stage: Stage, removed: &[(usize, usize)], h: &Graph, v: Verdict, pruned: bool) {
        self.checked += 1;
        if pruned {
            self.pruned += 1;
        }
        let removed_edges = |host: &Graph| {
            removed
                .iter()
                .map(|&(u, w)| [host.label(u).to_string(), host.label(w).to_string()])
                .collect::<Vec<_>>()
        };
        let host = if stage == Stage::IncidentEdges { self.g } else { h };
        match v.kind() {
            VerdictKind::NotOccurs => {
                let tag = v.certificate().map(|c| c.tag()).unwrap_or_default();
                *self.rule_counts.entry(tag.to_string()).or_default() += 1;
            }
            VerdictKind::Occurs => {
                if self.refuting.is_none() {
                    self.refuting = Some(Witness {
                        stage,
                        removed_edges: removed_edges(host),
                        canonical: canonical_form(h).key(),
                        verdict: v,
                    });
                }
            }
            VerdictKind::Unknown => {
                let key = canonical_form(h).key();
                self.unknown.entry(key.clone()).or_insert_with(|| Witness {
                    stage,
                    removed_edges: removed_edges(host),
                    canonical: key,
                    verdict: v,
                });
            }
        }
    }

    fn finish(self, vertex: &str, strong: bool, vertex_deletion: Verdict) -> AdmissibilityResult {
        let status = if self.refuting.is_some() {
            AdmissibilityStatus::Refuted
        } else if !self.unknown.is_empty() {
            AdmissibilityStatus::Undetermined
        } else {
            AdmissibilityStatus::Established
        };
        AdmissibilityResult {
            vertex: vertex.to_string(),
            strong,
            status,
            vertex_deletion,
            refuting: self.refuting,
            unknown: self.unknown.into_values().collect(),
            checked: self.checked,
            pruned: self.pruned,
            rule_counts: self.rule_counts,
            ruleset: self.ruleset,
        }
    }
}
