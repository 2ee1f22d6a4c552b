use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::oracle::kb::FactSource;

/// Outcome of classifying a graph. Definite outcomes always carry the
/// certificate that justifies them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "certificate")]
pub enum Verdict {
    Occurs(Certificate),
    NotOccurs(Certificate),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    Occurs,
    NotOccurs,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Occurs => "Occurs",
            VerdictKind::NotOccurs => "NotOccurs",
            VerdictKind::Unknown => "Unknown",
        })
    }
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Occurs(_) => VerdictKind::Occurs,
            Verdict::NotOccurs(_) => VerdictKind::NotOccurs,
            Verdict::Unknown => VerdictKind::Unknown,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Occurs(c) | Verdict::NotOccurs(c) => Some(c),
            Verdict::Unknown => None,
        }
    }

    pub fn is_not_occurs(&self) -> bool {
        matches!(self, Verdict::NotOccurs(_))
    }

    pub fn relabel(&self, map: &[usize]) -> Verdict {
        match self {
            Verdict::Occurs(c) => Verdict::Occurs(c.relabel(map)),
            Verdict::NotOccurs(c) => Verdict::NotOccurs(c.relabel(map)),
            Verdict::Unknown => Verdict::Unknown,
        }
    }
}

/// Which of the three diameter-three size bounds failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// `|ρ3| ≥ 3`
    I,
    /// `|ρ1 ∪ ρ2| ≤ |ρ3 ∪ ρ4|`
    II,
    /// `|ρ3 ∪ ρ4| ≥ 2^|ρ1 ∪ ρ2|`
    III,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::I => "(i) |ρ3| ≥ 3",
            Bound::II => "(ii) |ρ1∪ρ2| ≤ |ρ3∪ρ4|",
            Bound::III => "(iii) |ρ3∪ρ4| ≥ 2^|ρ1∪ρ2|",
        })
    }
}

/// Split of a diameter-three graph by distance from a base vertex of
/// eccentricity three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiamThreePartition {
    pub base: usize,
    pub rho1: VertexSet,
    pub rho2: VertexSet,
    pub rho3: VertexSet,
    pub rho4: VertexSet,
}

impl DiamThreePartition {
    pub fn near(&self) -> VertexSet {
        self.rho1.union(self.rho2)
    }

    pub fn far(&self) -> VertexSet {
        self.rho3.union(self.rho4)
    }

    /// The bounds this partition violates, in order (i), (ii), (iii).
    pub fn violated_bounds(&self) -> Vec<Bound> {
        let near = self.near().len();
        let far = self.far().len() as u64;
        let mut out = Vec::new();
        if self.rho3.len() < 3 {
            out.push(Bound::I);
        }
        if near as u64 > far {
            out.push(Bound::II);
        }
        if near >= 64 || far < (1u64 << near) {
            out.push(Bound::III);
        }
        out
    }

    fn relabel(&self, map: &[usize]) -> Self {
        DiamThreePartition {
            base: map[self.base],
            rho1: map_set(self.rho1, map),
            rho2: map_set(self.rho2, map),
            rho3: map_set(self.rho3, map),
            rho4: map_set(self.rho4, map),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub partition: DiamThreePartition,
    pub bound: Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    /// Vertex of `ρ3` assumed to carry the unique normal Sylow subgroup.
    pub p1: usize,
    /// Number of derived graphs checked (one per subset of edges among the
    /// neighbors of `p1`).
    pub derived_graphs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEvidence {
    pub partition: DiamThreePartition,
    pub steps: Vec<ChainStep>,
}

/// Replayable justification for a verdict. Vertex indices refer to the graph
/// the verdict was issued for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum Certificate {
    /// Three vertices spanning no edge.
    PalfyTriple { triple: [usize; 3] },
    /// Odd cycle in the complement; consecutive vertices are nonadjacent.
    OddComplementCycle { cycle: Vec<usize> },
    /// Two complete components of sizes `a ≤ b` with `b < 2^a - 1`.
    PalfyInequality {
        smaller: VertexSet,
        larger: VertexSet,
        a: usize,
        b: usize,
    },
    /// Disconnected with other than two components, or a non-complete one.
    BadComponents { components: Vec<VertexSet> },
    /// Every base vertex of eccentricity three violates a size bound.
    DiamThreeBound { violations: Vec<BoundViolation> },
    /// Iterated normal-Sylow elimination over every base vertex.
    DiamThreeChain { evidence: Vec<ChainEvidence> },
    /// Isomorphic to `Γ_{k,t}` with `k ≥ t ≥ 2`, `(k,t) ≠ (2,2)`; `iso[v]` is
    /// the image of `v` in `Γ_{k,t}`.
    KnownFamily { k: usize, t: usize, iso: Vec<usize> },
    /// Connected spanning proper subgraph of `Γ_{k,t}`, `k ≥ t ≥ 2`.
    KnownFamilySpanning { k: usize, t: usize, embedding: Vec<usize> },
    /// Isomorphic to a graph known to occur.
    KnownOccurs { source: FactSource, iso: Vec<usize> },
    /// Isomorphic to a graph recorded as not occurring.
    KnownNotOccurs { source: FactSource, iso: Vec<usize> },
}

impl Certificate {
    pub fn tag(&self) -> &'static str {
        match self {
            Certificate::PalfyTriple { .. } => "PalfyTriple",
            Certificate::OddComplementCycle { .. } => "OddComplementCycle",
            Certificate::PalfyInequality { .. } => "PalfyInequality",
            Certificate::BadComponents { .. } => "BadComponents",
            Certificate::DiamThreeBound { .. } => "DiamThreeBound",
            Certificate::DiamThreeChain { .. } => "DiamThreeChain",
            Certificate::KnownFamily { .. } => "KnownFamily",
            Certificate::KnownFamilySpanning { .. } => "KnownFamilySpanning",
            Certificate::KnownOccurs { .. } => "KnownOccurs",
            Certificate::KnownNotOccurs { .. } => "KnownNotOccurs",
        }
    }

    /// Bounds named by a `DiamThreeBound` certificate, deduplicated.
    pub fn bounds(&self) -> Vec<Bound> {
        match self {
            Certificate::DiamThreeBound { violations } => {
                let mut b: Vec<Bound> = violations.iter().map(|v| v.bound).collect();
                b.sort();
                b.dedup();
                b
            }
            _ => Vec::new(),
        }
    }

    /// Translate vertex indices through `map` (old index → new index).
    pub fn relabel(&self, map: &[usize]) -> Certificate {
        let remap_vec = |iso: &Vec<usize>| {
            let mut out = vec![0; iso.len()];
            for (v, &img) in iso.iter().enumerate() {
                out[map[v]] = img;
            }
            out
        };
        match self {
            Certificate::PalfyTriple { triple } => {
                let mut t = triple.map(|v| map[v]);
                t.sort_unstable();
                Certificate::PalfyTriple { triple: t }
            }
            Certificate::OddComplementCycle { cycle } => Certificate::OddComplementCycle {
                cycle: cycle.iter().map(|&v| map[v]).collect(),
            },
            Certificate::PalfyInequality { smaller, larger, a, b } => {
                Certificate::PalfyInequality {
                    smaller: map_set(*smaller, map),
                    larger: map_set(*larger, map),
                    a: *a,
                    b: *b,
                }
            }
            Certificate::BadComponents { components } => Certificate::BadComponents {
                components: components.iter().map(|&c| map_set(c, map)).collect(),
            },
            Certificate::DiamThreeBound { violations } => Certificate::DiamThreeBound {
                violations: violations
                    .iter()
                    .map(|v| BoundViolation {
                        partition: v.partition.relabel(map),
                        bound: v.bound,
                    })
                    .collect(),
            },
            Certificate::DiamThreeChain { evidence } => Certificate::DiamThreeChain {
                evidence: evidence
                    .iter()
                    .map(|e| ChainEvidence {
                        partition: e.partition.relabel(map),
                        steps: e
                            .steps
                            .iter()
                            .map(|s| ChainStep { p1: map[s.p1], derived_graphs: s.derived_graphs })
                            .collect(),
                    })
                    .collect(),
            },
            Certificate::KnownFamily { k, t, iso } => Certificate::KnownFamily {
                k: *k,
                t: *t,
                iso: remap_vec(iso),
            },
            Certificate::KnownFamilySpanning { k, t, embedding } => {
                Certificate::KnownFamilySpanning { k: *k, t: *t, embedding: remap_vec(embedding) }
            }
            Certificate::KnownOccurs { source, iso } => Certificate::KnownOccurs {
                source: source.clone(),
                iso: remap_vec(iso),
            },
            Certificate::KnownNotOccurs { source, iso } => Certificate::KnownNotOccurs {
                source: source.clone(),
                iso: remap_vec(iso),
            },
        }
    }

    /// One-line human description using the graph's labels.
    pub fn describe(&self, g: &Graph) -> String {
        let l = |v: usize| g.label(v).to_string();
        let set = |s: VertexSet| format!("{{{}}}", g.labels_of(s).join(","));
        match self {
            Certificate::PalfyTriple { triple } => format!(
                "{}, {}, {} span no edge (Pálfy's condition)",
                l(triple[0]),
                l(triple[1]),
                l(triple[2])
            ),
            Certificate::OddComplementCycle { cycle } => format!(
                "complement contains the odd cycle {}",
                cycle.iter().map(|&v| l(v)).collect::<Vec<_>>().join("-")
            ),
            Certificate::PalfyInequality { a, b, .. } => format!(
                "two complete components of sizes {a} ≤ {b} with {b} < 2^{a}-1 = {} (Pálfy's inequality)",
                (1u64 << a) - 1
            ),
            Certificate::BadComponents { components } => format!(
                "disconnected into {} components, not exactly two complete ones: {}",
                components.len(),
                components.iter().map(|&c| set(c)).collect::<Vec<_>>().join(" ")
            ),
            Certificate::DiamThreeBound { violations } => format!(
                "diameter three; every base vertex violates a size bound: {}",
                violations
                    .iter()
                    .map(|v| format!("{} fails {}", l(v.partition.base), v.bound))
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
            Certificate::DiamThreeChain { evidence } => format!(
                "diameter three; normal-Sylow elimination chain closes for {} base vertices",
                evidence.len()
            ),
            Certificate::KnownFamily { k, t, .. } => format!("isomorphic to Γ_{{{k},{t}}}"),
            Certificate::KnownFamilySpanning { k, t, .. } => {
                format!("connected spanning proper subgraph of Γ_{{{k},{t}}}")
            }
            Certificate::KnownOccurs { source, .. } => format!("known to occur: {source}"),
            Certificate::KnownNotOccurs { source, .. } => {
                format!("known not to occur: {source}")
            }
        }
    }
}

pub(crate) fn map_set(s: VertexSet, map: &[usize]) -> VertexSet {
    s.iter().map(|v| map[v]).collect()
}
