//! Non-occurrence proofs for concrete members of the left family.
//!
//! A proof assumes a minimal counterexample `G` with `Δ(G) = Γ^L(k,n)` and
//! rules out a normal nonabelian Sylow subgroup at every vertex, shows the
//! Fitting subgroup is minimal normal, and closes with the four-vertex
//! witness lemma. Graph-side premises are computed; group-side lemmas enter
//! as named axioms.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::admissibility::{self, admissible_with, strongly_admissible_with, AdmissibilityStatus};
use crate::error::{Error, Result};
use crate::families::{gamma_l, FamilyKind};
use crate::graph::{label_order, Graph, VertexSet};
use crate::hypothesis::{pi_rho, verify_hypothesis, ClauseStatus, HypothesisReport};
use crate::oracle::{rules::check_palfy, Oracle, Verdict, VerdictKind, RULESET_VERSION};

/// Group-theoretic results used without proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// A strongly admissible vertex has a non-normal Sylow subgroup.
    StrongAdmissibility,
    /// Split neighborhood with an admissible far vertex gives a non-normal Sylow subgroup.
    PiLemma,
    /// The five-clause hypothesis at `p` rules out a normal nonabelian Sylow `p`-subgroup.
    HypothesisTheorem,
    /// With two components, exactly one Fitting Sylow subgroup is non-central.
    TwoComponentFitting,
    /// Factoring a normal Sylow `p`-subgroup's derived subgroup removes exactly `p`.
    QuotientVertexSet,
    /// The four-vertex witness lemma for minimal normal Fitting subgroups.
    WitnessLemma,
}

impl Axiom {
    pub fn statement(self) -> &'static str {
        match self {
            Axiom::StrongAdmissibility => {
                "if p is strongly admissible in Δ(G) and every proper quotient has a proper subgraph, a Sylow p-subgroup of G is not normal"
            }
            Axiom::PiLemma => {
                "under Pálfy's condition, if N(q) splits into π1, π2 with no cross edges and some v ∈ π2 is adjacent to an admissible s ∉ N[q] and nonadjacent to some w ∉ N[q], a Sylow q-subgroup is not normal"
            }
            Axiom::HypothesisTheorem => {
                "if Δ(G) satisfies the five-clause hypothesis at p, G has no normal nonabelian Sylow p-subgroup"
            }
            Axiom::TwoComponentFitting => {
                "if Δ(G) has two components, exactly one prime has a non-central Sylow subgroup of the Fitting subgroup"
            }
            Axiom::QuotientVertexSet => "if P is a normal Sylow p-subgroup, ρ(G/P') = ρ(G) \\ {p}",
            Axiom::WitnessLemma => {
                "under Pálfy's condition with ≥ 5 vertices and minimal normal Fitting subgroup, vertices a ≠ b with a ~ c, b ≁ c, a ≁ d for admissible c, d rule the graph out"
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepStatus {
    Pass,
    Fail,
    Undetermined,
}

impl From<ClauseStatus> for StepStatus {
    fn from(c: ClauseStatus) -> Self {
        match c {
            ClauseStatus::Verified => StepStatus::Pass,
            ClauseStatus::Failed => StepStatus::Fail,
            ClauseStatus::Undetermined => StepStatus::Undetermined,
        }
    }
}

impl From<AdmissibilityStatus> for StepStatus {
    fn from(a: AdmissibilityStatus) -> Self {
        match a {
            AdmissibilityStatus::Established => StepStatus::Pass,
            AdmissibilityStatus::Refuted => StepStatus::Fail,
            AdmissibilityStatus::Undetermined => StepStatus::Undetermined,
        }
    }
}

/// Split of `N(q)` and the vertices the pi-lemma needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiWitness {
    pub q: String,
    pub pi1: Vec<String>,
    pub pi2: Vec<String>,
    pub v: String,
    pub s: String,
    pub w: String,
}

/// `(a, b, c, d)`: `a ~ c`, `b ≁ c`, `a ≁ d`, `c` and `d` admissible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourVertexWitness {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl FourVertexWitness {
    pub fn tuple(&self) -> (&str, &str, &str, &str) {
        (&self.a, &self.b, &self.c, &self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliqueCase {
    /// `{p} ∪ π`.
    Apex,
    /// One vertex of `π` with one vertex of `ρ`.
    Pair,
    /// One vertex of `π` with two vertices of `ρ`.
    Triple,
    /// `ρ`.
    Far,
    /// Anything else; the case analysis does not cover it.
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCaseCheck {
    pub clique: Vec<String>,
    pub case: CliqueCase,
    pub status: StepStatus,
    /// Facts the case relies on, each with its status.
    pub needs: Vec<(String, StepStatus)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepWitness {
    None,
    Verdict { verdict: Verdict },
    Induction { facts: Vec<(usize, usize)> },
    Admissibility { vertex: String, strong: bool, checked: u64, rule_counts: BTreeMap<String, u64> },
    PiLemma { witness: PiWitness },
    Hypothesis { statuses: Vec<(String, ClauseStatus)>, undetermined_candidates: usize },
    Coverage { covered: Vec<String>, missing: Vec<String> },
    CliqueCases { cases: Vec<CliqueCaseCheck> },
    FourVertex { witness: FourVertexWitness },
}

impl StepWitness {
    /// One-line rendering for reports.
    pub fn summary(&self) -> String {
        match self {
            StepWitness::None => String::new(),
            StepWitness::Verdict { verdict } => match verdict.certificate() {
                Some(c) => format!("{} ({})", verdict.kind(), serde_json::to_value(c).unwrap()["rule"].as_str().unwrap_or("")),
                None => verdict.kind().to_string(),
            },
            StepWitness::Induction { facts } => {
                let f: Vec<String> = facts.iter().map(|(k, m)| format!("Γ^L({k},{m})")).collect();
                format!("not occurring: {}", f.join(", "))
            }
            StepWitness::Admissibility { checked, rule_counts, .. } => {
                let r: Vec<String> = rule_counts.iter().map(|(k, v)| format!("{k}×{v}")).collect();
                format!("{checked} subgraphs: {}", r.join(", "))
            }
            StepWitness::PiLemma { witness: w } => format!(
                "π1={{{}}}, π2={{{}}}, v={}, s={}, w={}",
                w.pi1.join(","),
                w.pi2.join(","),
                w.v,
                w.s,
                w.w
            ),
            StepWitness::Hypothesis { statuses, undetermined_candidates } => {
                let c: Vec<String> = statuses.iter().map(|(n, s)| format!("({n}) {s:?}")).collect();
                format!("{}; {undetermined_candidates} undetermined", c.join(", "))
            }
            StepWitness::Coverage { covered, missing } if missing.is_empty() => format!("{} vertices", covered.len()),
            StepWitness::Coverage { missing, .. } => format!("missing {{{}}}", missing.join(",")),
            StepWitness::CliqueCases { cases } => {
                let c: Vec<String> = cases
                    .iter()
                    .map(|c| format!("{{{}}} {}", c.clique.join(","), serde_json::to_value(c.case).unwrap().as_str().unwrap()))
                    .collect();
                c.join("; ")
            }
            StepWitness::FourVertex { witness: w } => format!("a={}, b={}, c={}, d={}", w.a, w.b, w.c, w.d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofStep {
    pub id: usize,
    pub rule: String,
    pub claim: String,
    /// Ids of earlier steps this one consumes.
    pub premises: Vec<usize>,
    pub status: StepStatus,
    pub axioms: Vec<Axiom>,
    pub witness: StepWitness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    Occurs,
    NotOccurs,
    Undetermined,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub family: String,
    pub k: usize,
    pub n: usize,
    pub conclusion: Conclusion,
    pub steps: Vec<ProofStep>,
    /// Earlier runs whose conclusions were injected as facts.
    pub prerequisites: Vec<ProofReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisReport>,
    pub ruleset: String,
}

impl ProofReport {
    pub fn axioms(&self) -> Vec<Axiom> {
        let mut a: Vec<Axiom> = self.steps.iter().flat_map(|s| s.axioms.iter().copied()).collect();
        a.sort();
        a.dedup();
        a
    }

    pub fn all_pass(&self) -> bool {
        self.steps.iter().all(|s| s.status == StepStatus::Pass)
    }

    pub fn four_vertex_witness(&self) -> Option<&FourVertexWitness> {
        self.steps.iter().find_map(|s| match &s.witness {
            StepWitness::FourVertex { witness } => Some(witness),
            _ => None,
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut md = format!(
            "# Γ^{}({},{}): {}\n\nRule set `{}`\n\n",
            self.family, self.k, self.n, self.conclusion, self.ruleset
        );
        for p in &self.prerequisites {
            md.push_str(&format!("- prerequisite Γ^{}({},{}): {}\n", p.family, p.k, p.n, p.conclusion));
        }
        if !self.prerequisites.is_empty() {
            md.push('\n');
        }
        md.push_str("| # | rule | claim | premises | witness | status |\n|---|---|---|---|---|---|\n");
        for s in &self.steps {
            let premises: Vec<String> = s.premises.iter().map(|p| p.to_string()).collect();
            md.push_str(&format!(
                "| {} | {} | {} | {} | {} | {:?} |\n",
                s.id,
                s.rule,
                s.claim.replace('|', "\\|"),
                premises.join(", "),
                s.witness.summary().replace('|', "\\|"),
                s.status
            ));
        }
        let notes: Vec<&ProofStep> = self.steps.iter().filter(|s| s.note.is_some()).collect();
        if !notes.is_empty() {
            md.push_str("\n## Notes\n\n");
            for s in notes {
                md.push_str(&format!("- step {}: {}\n", s.id, s.note.as_deref().unwrap_or_default()));
            }
        }
        let axioms = self.axioms();
        if !axioms.is_empty() {
            md.push_str("\n## Axioms\n\n");
            for a in axioms {
                md.push_str(&format!("- `{}`: {}\n", serde_json::to_value(a).unwrap().as_str().unwrap(), a.statement()));
            }
        }
        md
    }
}

fn sorted_labels(g: &Graph, s: VertexSet) -> Vec<usize> {
    let mut v: Vec<usize> = s.iter().collect();
    v.sort_by(|&x, &y| label_order(g.label(x), g.label(y)));
    v
}

/// Pi-lemma witness at `q`, searched over splits of `N(q)` along the
/// components of `g[N(q)]`, then `v`, `s`, `w` in label order. `is_admissible`
/// decides whether `s` qualifies.
pub fn find_pi_lemma_witness(
    g: &Graph,
    q: usize,
    mut is_admissible: impl FnMut(usize) -> bool,
) -> Option<PiWitness> {
    let pi = g.neighbors(q);
    let rho = g.vertices().difference(pi).without(q);
    let local = g.induced(pi);
    let members: Vec<usize> = pi.iter().collect();
    let mut comps: Vec<VertexSet> = local
        .components()
        .into_iter()
        .map(|c| c.iter().map(|i| members[i]).collect())
        .collect();
    comps.sort_by(|a, b| {
        let first = |s: &VertexSet| sorted_labels(g, *s)[0];
        label_order(g.label(first(a)), g.label(first(b)))
    });
    if comps.len() < 2 {
        return None;
    }
    let rho_order = sorted_labels(g, rho);
    for mask in 1u32..(1 << comps.len()) - 1 {
        let pi1: VertexSet = comps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .fold(VertexSet::EMPTY, |acc, (_, c)| acc.union(*c));
        let pi2 = pi.difference(pi1);
        for v in sorted_labels(g, pi2) {
            let Some(w) = rho_order.iter().copied().find(|&w| !g.has_edge(v, w)) else {
                continue;
            };
            for &s in &rho_order {
                if g.has_edge(v, s) && is_admissible(s) {
                    return Some(PiWitness {
                        q: g.label(q).to_string(),
                        pi1: g.labels_of(pi1),
                        pi2: g.labels_of(pi2),
                        v: g.label(v).to_string(),
                        s: g.label(s).to_string(),
                        w: g.label(w).to_string(),
                    });
                }
            }
        }
    }
    None
}

/// Witness `(a, b, c, d)` for the four-vertex lemma, searched with `c`, then
/// `d`, then `a`, then `b` in label order.
pub fn find_four_vertex_witness(g: &Graph, mut is_admissible: impl FnMut(usize) -> bool) -> Option<FourVertexWitness> {
    if g.n() < 5 || check_palfy(g).is_some() {
        return None;
    }
    let order = sorted_labels(g, g.vertices());
    let admissible_vs: Vec<usize> = order.iter().copied().filter(|&v| g.degree(v) > 0 && is_admissible(v)).collect();
    for &c in &admissible_vs {
        for &d in &admissible_vs {
            for &a in &order {
                if a == c || a == d || !g.has_edge(a, c) || g.has_edge(a, d) {
                    continue;
                }
                if let Some(&b) = order.iter().find(|&&b| b != a && b != c && !g.has_edge(b, c)) {
                    return Some(FourVertexWitness {
                        a: g.label(a).to_string(),
                        b: g.label(b).to_string(),
                        c: g.label(c).to_string(),
                        d: g.label(d).to_string(),
                    });
                }
            }
        }
    }
    None
}

/// Independent check of a four-vertex witness; admissibility is supplied.
pub fn validate_four_vertex_witness(g: &Graph, w: &FourVertexWitness, mut is_admissible: impl FnMut(usize) -> bool) -> bool {
    let (Some(a), Some(b), Some(c), Some(d)) = (g.index_of(&w.a), g.index_of(&w.b), g.index_of(&w.c), g.index_of(&w.d))
    else {
        return false;
    };
    a != b && g.has_edge(a, c) && b != c && !g.has_edge(b, c) && a != d && !g.has_edge(a, d) && is_admissible(c) && is_admissible(d)
}

/// Independent check of a pi-lemma witness; admissibility is supplied.
pub fn validate_pi_witness(g: &Graph, w: &PiWitness, mut is_admissible: impl FnMut(usize) -> bool) -> bool {
    let idx = |l: &String| g.index_of(l);
    let (Some(q), Some(v), Some(s), Some(wv)) = (idx(&w.q), idx(&w.v), idx(&w.s), idx(&w.w)) else {
        return false;
    };
    let set = |ls: &[String]| -> Option<VertexSet> { ls.iter().map(|l| g.index_of(l)).collect() };
    let (Some(pi1), Some(pi2)) = (set(&w.pi1), set(&w.pi2)) else {
        return false;
    };
    let pi = g.neighbors(q);
    let rho = g.vertices().difference(pi).without(q);
    !pi1.is_empty()
        && !pi2.is_empty()
        && pi1.intersection(pi2).is_empty()
        && pi1.union(pi2) == pi
        && pi1.iter().all(|x| g.neighbors(x).intersection(pi2).is_empty())
        && pi2.contains(v)
        && rho.contains(s)
        && rho.contains(wv)
        && g.has_edge(v, s)
        && !g.has_edge(v, wv)
        && is_admissible(s)
}

/// Sort each maximal clique of `g` into the case families used to show the
/// Fitting subgroup is minimal normal, relative to the apex `p`.
pub fn clique_case_split(g: &Graph, p: usize) -> Vec<(VertexSet, CliqueCase)> {
    let (pi, rho) = pi_rho(g, p);
    g.maximal_cliques()
        .into_iter()
        .map(|k| {
            let case = if k == pi.with(p) {
                CliqueCase::Apex
            } else if k == rho {
                CliqueCase::Far
            } else if !k.contains(p) && k.intersection(pi).len() == 1 {
                match k.intersection(rho).len() {
                    1 => CliqueCase::Pair,
                    2 => CliqueCase::Triple,
                    _ => CliqueCase::Other,
                }
            } else {
                CliqueCase::Other
            };
            (k, case)
        })
        .collect()
}

/// Run the proof for `Γ^L(k,n)`.
pub fn prove(family: FamilyKind, k: usize, n: usize, oracle: &Oracle) -> Result<ProofReport> {
    prove_with(family, k, n, oracle, admissibility::Options::default())
}

pub fn prove_with(
    family: FamilyKind,
    k: usize,
    n: usize,
    oracle: &Oracle,
    opts: admissibility::Options,
) -> Result<ProofReport> {
    if family != FamilyKind::GammaL {
        return Err(Error::BadParameters("proofs are implemented for the left family only".into()));
    }
    let g = gamma_l(k, n)?;
    let ruleset = format!("{RULESET_VERSION}+{}", oracle.fingerprint());
    let mut b = Builder { steps: Vec::new() };

    if (k, n) == (1, 1) {
        let v = oracle.classify(&g);
        let status = if v.kind() == VerdictKind::Occurs { StepStatus::Pass } else { StepStatus::Undetermined };
        b.push("known-occurrence", "Γ^L(1,1) occurs (isomorphic to Γ_{3,1})", vec![], status, vec![], StepWitness::Verdict { verdict: v }, None);
        let conclusion = if status == StepStatus::Pass { Conclusion::Occurs } else { Conclusion::Undetermined };
        return Ok(ProofReport {
            family: "L".into(),
            k,
            n,
            conclusion,
            steps: b.steps,
            prerequisites: vec![],
            hypothesis: None,
            ruleset,
        });
    }

    // earlier members of the induction feed in as knowledge-base facts
    let mut prerequisites = Vec::new();
    let mut kb = oracle.kb().clone();
    let mut premises = Vec::new();
    if n >= 2 {
        let mut facts = Vec::new();
        let mut ok = true;
        for m in 1..n {
            let sub = prove_with(family, k, m, oracle, opts)?;
            ok &= sub.conclusion == Conclusion::NotOccurs;
            prerequisites.push(sub);
            kb = kb.with_left_not_occurs(k, m)?;
            facts.push((k, m));
        }
        let id = b.push(
            "induction",
            &format!("Γ^L({k},m) does not occur for 1 ≤ m < {n}"),
            vec![],
            if ok { StepStatus::Pass } else { StepStatus::Undetermined },
            vec![],
            StepWitness::Induction { facts },
            None,
        );
        premises.push(id);
    }
    let local;
    let oracle = if n >= 2 {
        local = oracle.with_kb(kb);
        &local
    } else {
        oracle
    };

    let at = |l: &str| g.require_index(l);
    let c = at("c")?;
    let palfy = b.push(
        "palfy-condition",
        &format!("every three vertices span an edge, and |V| = {} ≥ 5", g.n()),
        vec![],
        if check_palfy(&g).is_none() && g.n() >= 5 { StepStatus::Pass } else { StepStatus::Fail },
        vec![],
        StepWitness::None,
        None,
    );

    let mut no_sylow: Vec<(usize, usize)> = Vec::new(); // (vertex, step)
    let mut admissible_cache: BTreeMap<usize, AdmissibilityStatus> = BTreeMap::new();

    // strongly admissible vertices
    let mut strong_list: Vec<usize> = Vec::new();
    for i in 1..=k {
        strong_list.push(at(&format!("a{i}"))?);
    }
    for i in (1..=n).chain(k + 1..=k + n) {
        strong_list.push(at(&format!("b{i}"))?);
    }
    for &v in &strong_list {
        let r = strongly_admissible_with(&g, v, oracle, opts)?;
        if r.is_established() {
            admissible_cache.insert(v, AdmissibilityStatus::Established);
        }
        let id = b.push(
            "strong-admissibility",
            &format!("{} is strongly admissible, so its Sylow subgroup is not normal", g.label(v)),
            premises.clone(),
            r.status.into(),
            vec![Axiom::StrongAdmissibility],
            StepWitness::Admissibility {
                vertex: r.vertex.clone(),
                strong: true,
                checked: r.checked,
                rule_counts: r.rule_counts.clone(),
            },
            None,
        );
        no_sylow.push((v, id));
    }

    let mut is_admissible = |v: usize| -> bool {
        if let Some(s) = admissible_cache.get(&v) {
            return *s == AdmissibilityStatus::Established;
        }
        let s = if g.degree(v) == 0 {
            AdmissibilityStatus::Undetermined
        } else {
            admissible_with(&g, v, oracle, opts).map(|r| r.status).unwrap_or(AdmissibilityStatus::Undetermined)
        };
        admissible_cache.insert(v, s);
        s == AdmissibilityStatus::Established
    };

    // remaining b's through the pi-lemma
    for i in n + 1..=k {
        let q = at(&format!("b{i}"))?;
        let w = find_pi_lemma_witness(&g, q, &mut is_admissible);
        let (status, witness) = match w {
            Some(w) => (StepStatus::Pass, StepWitness::PiLemma { witness: w }),
            None => (StepStatus::Undetermined, StepWitness::None),
        };
        let id = b.push(
            "pi-lemma",
            &format!("b{i} has no normal nonabelian Sylow subgroup"),
            vec![palfy],
            status,
            vec![Axiom::PiLemma],
            witness,
            None,
        );
        no_sylow.push((q, id));
    }

    // the apex through the hypothesis
    let hyp = verify_hypothesis(&g, c, oracle)?;
    let hyp_step = b.push(
        "hypothesis",
        "the five-clause hypothesis holds at c",
        premises.clone(),
        hyp.status.into(),
        vec![Axiom::HypothesisTheorem],
        StepWitness::Hypothesis {
            statuses: hyp.statuses().iter().map(|(n, s)| (n.to_string(), *s)).collect(),
            undetermined_candidates: hyp.undetermined_candidates(),
        },
        None,
    );
    no_sylow.push((c, hyp_step));

    let covered: VertexSet = no_sylow.iter().map(|&(v, _)| v).collect();
    let missing = g.vertices().difference(covered);
    let coverage = b.push(
        "no-normal-nonabelian-sylow",
        "no vertex has a normal nonabelian Sylow subgroup",
        no_sylow.iter().map(|&(_, id)| id).collect(),
        if missing.is_empty() { StepStatus::Pass } else { StepStatus::Fail },
        vec![],
        StepWitness::Coverage { covered: g.labels_of(covered), missing: g.labels_of(missing) },
        None,
    );

    // Fitting subgroup minimal normal, case by case over maximal cliques
    let cases = clique_cases(&g, c, &hyp, &mut is_admissible);
    let fitting_status = cases.iter().fold(StepStatus::Pass, |acc, c| worst(acc, c.status));
    let fitting = b.push(
        "fitting-minimal-normal",
        "the Fitting subgroup is minimal normal",
        vec![coverage, hyp_step],
        worst(fitting_status, hyp.clause_v.status.into()),
        vec![Axiom::TwoComponentFitting, Axiom::QuotientVertexSet],
        StepWitness::CliqueCases { cases },
        Some(
            "quotient graphs are covered by enumerating every edge subset on each vertex set, a superset of the graphs that can arise"
                .into(),
        ),
    );

    let w = find_four_vertex_witness(&g, &mut is_admissible);
    let (status, witness) = match w {
        Some(w) => (StepStatus::Pass, StepWitness::FourVertex { witness: w }),
        None => (StepStatus::Undetermined, StepWitness::None),
    };
    b.push(
        "witness-lemma",
        "a four-vertex witness exists, so the graph does not occur",
        vec![palfy, fitting],
        status,
        vec![Axiom::WitnessLemma],
        witness,
        None,
    );

    let conclusion = if b.steps.iter().all(|s| s.status == StepStatus::Pass) {
        Conclusion::NotOccurs
    } else {
        Conclusion::Undetermined
    };
    Ok(ProofReport {
        family: "L".into(),
        k,
        n,
        conclusion,
        steps: b.steps,
        prerequisites,
        hypothesis: Some(hyp),
        ruleset,
    })
}

/// Re-check every Pass step's witness against `Γ^L(k,n)`, recomputing
/// admissibility and maximal cliques from scratch.
pub fn revalidate(report: &ProofReport, oracle: &Oracle) -> std::result::Result<(), String> {
    for sub in &report.prerequisites {
        revalidate(sub, oracle)?;
    }
    if report.conclusion == Conclusion::NotOccurs && !report.all_pass() {
        return Err("NotOccurs with a non-Pass step".into());
    }
    let g = gamma_l(report.k, report.n).map_err(|e| e.to_string())?;
    let mut kb = oracle.kb().clone();
    for m in 1..report.n {
        kb = kb.with_left_not_occurs(report.k, m).map_err(|e| e.to_string())?;
    }
    let oracle = oracle.with_kb(kb);
    let mut adm = |v: usize| admissible_with(&g, v, &oracle, Default::default()).is_ok_and(|r| r.is_established());
    for step in report.steps.iter().filter(|s| s.status == StepStatus::Pass) {
        let ok = match &step.witness {
            StepWitness::PiLemma { witness } => validate_pi_witness(&g, witness, &mut adm),
            StepWitness::FourVertex { witness } => validate_four_vertex_witness(&g, witness, &mut adm),
            StepWitness::CliqueCases { cases } => {
                let mut listed: Vec<Vec<String>> = cases.iter().map(|c| sorted(&c.clique)).collect();
                listed.sort();
                let mut brute = brute_force_maximal_cliques(&g);
                brute.sort();
                listed == brute && cases.iter().all(|c| c.case != CliqueCase::Other)
            }
            StepWitness::Coverage { missing, covered } => missing.is_empty() && covered.len() == g.n(),
            _ => true,
        };
        if !ok {
            return Err(format!("step {} ({}) does not re-validate", step.id, step.rule));
        }
    }
    Ok(())
}

fn sorted(v: &[String]) -> Vec<String> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn brute_force_maximal_cliques(g: &Graph) -> Vec<Vec<String>> {
    let n = g.n();
    let is_clique = |m: u32| (0..n).all(|u| m & (1 << u) == 0 || (0..n).all(|v| v == u || m & (1 << v) == 0 || g.has_edge(u, v)));
    (1u32..1 << n)
        .filter(|&m| is_clique(m) && (0..n).all(|v| m & (1 << v) != 0 || !is_clique(m | (1 << v))))
        .map(|m| sorted(&g.labels_of(VertexSet::from_bits(m))))
        .collect()
}

fn worst(a: StepStatus, b: StepStatus) -> StepStatus {
    use StepStatus::*;
    match (a, b) {
        (Fail, _) | (_, Fail) => Fail,
        (Undetermined, _) | (_, Undetermined) => Undetermined,
        _ => Pass,
    }
}

/// Status of the clause (iii) or (iv) check that covers vertex set `s`.
fn set_status(g: &Graph, hyp: &HypothesisReport, s: VertexSet) -> StepStatus {
    let mut want = g.labels_of(s);
    want.sort();
    for check in hyp.clause_iii.sets.iter().chain(&hyp.clause_iv.sets) {
        let sets = std::iter::once(&check.vertex_set).chain(&check.also_covers);
        for vs in sets {
            let mut have = vs.clone();
            have.sort();
            if have == want {
                return check.status.into();
            }
        }
    }
    StepStatus::Undetermined
}

fn clique_cases(
    g: &Graph,
    p: usize,
    hyp: &HypothesisReport,
    is_admissible: &mut impl FnMut(usize) -> bool,
) -> Vec<CliqueCaseCheck> {
    let (pi, rho) = pi_rho(g, p);
    let all = g.vertices();
    let mut adm = |v: usize| -> (String, StepStatus) {
        let st = if is_admissible(v) { StepStatus::Pass } else { StepStatus::Undetermined };
        (format!("{} admissible", g.label(v)), st)
    };
    let mut out = Vec::new();
    for (clique, case) in clique_case_split(g, p) {
        let mut needs: Vec<(String, StepStatus)> = Vec::new();
        match case {
            CliqueCase::Apex => {
                for v in pi {
                    needs.push(adm(v));
                }
                needs.push(("clause (iii) for every π*".into(), hyp.clause_iii.status.into()));
            }
            CliqueCase::Far => {
                for v in pi {
                    needs.push(adm(v));
                }
            }
            CliqueCase::Pair | CliqueCase::Triple => {
                let a = clique.intersection(pi).first().expect("one π vertex");
                needs.push(adm(a));
                let without_a = all.without(a);
                needs.push((
                    format!("no connected candidate on V \\ {{{}}}", g.label(a)),
                    set_status(g, hyp, without_a),
                ));
                let r = clique.intersection(rho);
                for x in r.subsets().filter(|x| !x.is_empty() && *x != r) {
                    for v in x {
                        needs.push(adm(v));
                    }
                    needs.push((
                        format!("no connected candidate on V \\ {{{}}}", g.labels_of(x).join(",")),
                        set_status(g, hyp, all.difference(x)),
                    ));
                }
            }
            CliqueCase::Other => needs.push(("clique outside the case analysis".into(), StepStatus::Fail)),
        }
        let status = needs.iter().fold(StepStatus::Pass, |acc, (_, s)| worst(acc, *s));
        out.push(CliqueCaseCheck { clique: g.labels_of(clique), case, status, needs });
    }
    out
}

struct Builder {
    steps: Vec<ProofStep>,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        rule: &str,
        claim: &str,
        premises: Vec<usize>,
        status: StepStatus,
        axioms: Vec<Axiom>,
        witness: StepWitness,
        note: Option<String>,
    ) -> usize {
        let id = self.steps.len() + 1;
        self.steps.push(ProofStep {
            id,
            rule: rule.into(),
            claim: claim.into(),
            premises,
            status,
            axioms,
            witness,
            note,
        });
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(g: &Graph, s: VertexSet) -> Vec<String> {
        let mut v: Vec<String> = g.labels_of(s);
        v.sort();
        v
    }

    #[test]
    fn pi_witness_at_b2() {
        let g = gamma_l(2, 1).unwrap();
        let q = g.require_index("b2").unwrap();
        let a1 = g.require_index("a1").unwrap();
        let w = find_pi_lemma_witness(&g, q, |s| s == a1).unwrap();
        assert_eq!(w.pi1, vec!["a2"]);
        assert_eq!(w.pi2, vec!["b1", "b3"]);
        assert_eq!((w.v.as_str(), w.s.as_str(), w.w.as_str()), ("b1", "a1", "c"));
        assert!(validate_pi_witness(&g, &w, |s| s == a1));
        assert!(find_pi_lemma_witness(&g, q, |_| false).is_none());
        // c has a connected neighborhood
        let c = g.require_index("c").unwrap();
        assert!(find_pi_lemma_witness(&g, c, |_| true).is_none());
    }

    #[test]
    fn four_vertex_witness_examples() {
        for (k, n) in [(2, 1), (3, 1), (4, 1), (2, 2)] {
            let g = gamma_l(k, n).unwrap();
            let w = find_four_vertex_witness(&g, |_| true).unwrap();
            assert_eq!(w.tuple(), ("b1", "b2", "a1", "a2"), "({k},{n})");
            assert!(validate_four_vertex_witness(&g, &w, |_| true));
        }
        // Pálfy's condition fails on the path
        let p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(find_four_vertex_witness(&p5, |_| true).is_none());
    }

    #[test]
    fn clique_cases_of_left_family() {
        let g = gamma_l(2, 1).unwrap();
        let c = g.require_index("c").unwrap();
        let split = clique_case_split(&g, c);
        let mut got: Vec<(Vec<String>, CliqueCase)> = split.iter().map(|(k, case)| (labels(&g, *k), *case)).collect();
        got.sort();
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(
            got,
            vec![
                (s(&["a1", "a2", "c"]), CliqueCase::Apex),
                (s(&["a1", "b1", "b3"]), CliqueCase::Triple),
                (s(&["a2", "b2"]), CliqueCase::Pair),
                (s(&["b1", "b2", "b3"]), CliqueCase::Far),
            ]
        );
        let g = gamma_l(4, 1).unwrap();
        let split = clique_case_split(&g, g.require_index("c").unwrap());
        assert_eq!(split.len(), 6);
        assert!(split.iter().all(|(_, c)| *c != CliqueCase::Other));
    }

    #[test]
    fn base_case_occurs() {
        let r = prove(FamilyKind::GammaL, 1, 1, &Oracle::default()).unwrap();
        assert_eq!(r.conclusion, Conclusion::Occurs);
        assert!(prove(FamilyKind::GammaR, 2, 1, &Oracle::default()).is_err());
    }

    #[test]
    fn left_2_1_does_not_occur() {
        let r = prove(FamilyKind::GammaL, 2, 1, &Oracle::default()).unwrap();
        assert_eq!(r.conclusion, Conclusion::NotOccurs, "{}", r.to_markdown());
        assert!(r.all_pass());
        assert_eq!(r.four_vertex_witness().unwrap().tuple(), ("b1", "b2", "a1", "a2"));
        let pi = r
            .steps
            .iter()
            .find_map(|s| match &s.witness {
                StepWitness::PiLemma { witness } => Some(witness.clone()),
                _ => None,
            })
            .unwrap();
        assert_eq!((pi.q.as_str(), pi.v.as_str(), pi.s.as_str(), pi.w.as_str()), ("b2", "b1", "a1", "c"));
        let md = r.to_markdown();
        assert!(md.contains("NotOccurs") && md.contains("witness-lemma"));
        let json = serde_json::to_value(&r).unwrap();
        let back: ProofReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
        revalidate(&r, &Oracle::default()).unwrap();
        let mut forged = r.clone();
        for s in &mut forged.steps {
            if let StepWitness::FourVertex { witness } = &mut s.witness {
                witness.b = "a2".into();
            }
        }
        assert!(revalidate(&forged, &Oracle::default()).is_err());
    }

    #[test]
    fn left_2_2_uses_induction() {
        let r = prove(FamilyKind::GammaL, 2, 2, &Oracle::default()).unwrap();
        assert_eq!(r.conclusion, Conclusion::NotOccurs, "{}", r.to_markdown());
        assert_eq!(r.prerequisites.len(), 1);
        assert_eq!(r.prerequisites[0].conclusion, Conclusion::NotOccurs);
        assert_eq!(r.steps[0].rule, "induction");
        revalidate(&r, &Oracle::default()).unwrap();
    }

    #[test]
    fn weakened_oracle_is_undetermined() {
        use crate::oracle::{KnowledgeBase, Rule, RuleSet};
        let mut rules = RuleSet::default();
        for r in Rule::ALL {
            if r != Rule::KnownOccurs {
                rules = rules.without(r);
            }
        }
        let o = Oracle::new(KnowledgeBase::default(), rules);
        let r = prove(FamilyKind::GammaL, 2, 1, &o).unwrap();
        assert_eq!(r.conclusion, Conclusion::Undetermined);
        assert!(r.steps.iter().any(|s| s.status == StepStatus::Undetermined));
    }
}
