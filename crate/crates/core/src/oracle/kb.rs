//! Registry of occurrence facts imported from published classifications.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::{
    canonical_form, kt_edge_count, recognize_gamma_kt_spanning_with_witness,
    recognize_gamma_kt_with_witness, CanonicalForm,
};
use crate::error::{Error, Result};
use crate::families::{gamma_l, gamma_r, FamilyId, FamilyKind};
use crate::graph::Graph;
use crate::oracle::certificate::Certificate;

/// Where an occurrence fact comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "fact")]
pub enum FactSource {
    /// `Γ_{k,1}` and `Γ_{2,2}` occur.
    KtOccurs { k: usize, t: usize },
    /// `Γ^L(1,1) ≅ Γ_{3,1}` occurs.
    LeftOneOne,
    /// `Γ^L(k,n)` established not to occur by an earlier proof run.
    Induction { k: usize, n: usize },
    /// `Γ^R(k,1)`, `k ≥ 3`, stated not to occur without proof.
    RightAsserted { k: usize },
}

impl FactSource {
    pub fn asserted_without_proof(&self) -> bool {
        matches!(self, FactSource::RightAsserted { .. })
    }
}

impl fmt::Display for FactSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactSource::KtOccurs { k, t } => {
                write!(f, "Γ_{{{k},{t}}} occurs (Γ_{{k,t}} classification: t=1 or k=t=2)")
            }
            FactSource::LeftOneOne => write!(f, "Γ^L(1,1) occurs, realized as Γ_{{3,1}}"),
            FactSource::Induction { k, n } => {
                write!(f, "Γ^L({k},{n}) does not occur (induction hypothesis, proved earlier)")
            }
            FactSource::RightAsserted { k } => write!(
                f,
                "Γ^R({k},1) does not occur (asserted without proof; optional entry)"
            ),
        }
    }
}

/// One registry entry. Parametric entries recognize whole families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "entry")]
pub enum KbFact {
    /// `Γ_{k,1}` and `Γ_{2,2}` occur.
    KtOccurs,
    /// `Γ_{k,t}`, `k ≥ t ≥ 2`, `(k,t) ≠ (2,2)`, does not occur.
    KtNotOccurs,
    /// No connected spanning proper subgraph of `Γ_{k,t}`, `k ≥ t ≥ 2`, occurs.
    KtSpanning,
    LeftOneOne,
    /// `Γ^R(k,1)` for `k ≥ 3` does not occur.
    RightAsserted,
    /// `Γ^L(k,n)` does not occur.
    Induction { k: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbEntry {
    pub fact: KbFact,
    pub enabled: bool,
    pub optional: bool,
}

#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    entries: Vec<KbEntry>,
    patterns: Vec<Option<(Graph, CanonicalForm)>>,
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        let entries = vec![
            KbEntry { fact: KbFact::LeftOneOne, enabled: true, optional: false },
            KbEntry { fact: KbFact::KtOccurs, enabled: true, optional: false },
            KbEntry { fact: KbFact::KtNotOccurs, enabled: true, optional: false },
            KbEntry { fact: KbFact::KtSpanning, enabled: true, optional: false },
            KbEntry { fact: KbFact::RightAsserted, enabled: false, optional: true },
        ];
        KnowledgeBase::from_entries(entries).expect("default entries are valid")
    }
}

/// On-disk knowledge-base configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KbConfig {
    /// Turn on entries stated without proof.
    pub enable_optional: bool,
    /// Entry names to switch off (`KtOccurs`, `KtNotOccurs`, `KtSpanning`,
    /// `LeftOneOne`).
    pub disable: Vec<String>,
    /// Left-family graphs to record as not occurring.
    pub left_not_occurs: Vec<(usize, usize)>,
}

impl KnowledgeBase {
    pub fn from_entries(entries: Vec<KbEntry>) -> Result<Self> {
        let patterns = entries
            .iter()
            .map(|e| pattern_of(&e.fact))
            .collect::<Result<Vec<_>>>()?;
        Ok(KnowledgeBase { entries, patterns })
    }

    pub fn from_config(cfg: &KbConfig) -> Result<Self> {
        let mut kb = KnowledgeBase::default().with_optional(cfg.enable_optional);
        for name in &cfg.disable {
            let found = kb.entries.iter_mut().find(|e| &fact_name(&e.fact) == name);
            match found {
                Some(e) => e.enabled = false,
                None => return Err(Error::Malformed(format!("unknown knowledge-base entry {name:?}"))),
            }
        }
        for &(k, n) in &cfg.left_not_occurs {
            kb = kb.with_left_not_occurs(k, n)?;
        }
        Ok(kb)
    }

    pub fn entries(&self) -> &[KbEntry] {
        &self.entries
    }

    /// Switch the optional (stated without proof) entries on or off.
    pub fn with_optional(mut self, on: bool) -> Self {
        for e in self.entries.iter_mut().filter(|e| e.optional) {
            e.enabled = on;
        }
        self
    }

    pub fn with_entry_enabled(mut self, fact: &KbFact, on: bool) -> Self {
        for e in self.entries.iter_mut().filter(|e| &e.fact == fact) {
            e.enabled = on;
        }
        self
    }

    /// Record `Γ^L(k,n)` as not occurring.
    pub fn with_left_not_occurs(mut self, k: usize, n: usize) -> Result<Self> {
        let fact = KbFact::Induction { k, n };
        if self.entries.iter().any(|e| e.fact == fact) {
            return Ok(self);
        }
        self.patterns.push(pattern_of(&fact)?);
        self.entries.push(KbEntry { fact, enabled: true, optional: false });
        Ok(self)
    }

    fn enabled(&self) -> impl Iterator<Item = (&KbEntry, &Option<(Graph, CanonicalForm)>)> {
        self.entries
            .iter()
            .zip(&self.patterns)
            .filter(|(e, _)| e.enabled)
    }

    pub fn is_enabled(&self, source: &FactSource) -> bool {
        self.enabled().any(|(e, _)| match (&e.fact, source) {
            (KbFact::KtOccurs, FactSource::KtOccurs { .. }) => true,
            (KbFact::LeftOneOne, FactSource::LeftOneOne) => true,
            (KbFact::RightAsserted, FactSource::RightAsserted { .. }) => true,
            (KbFact::Induction { k, n }, FactSource::Induction { k: k2, n: n2 }) => {
                k == k2 && n == n2
            }
            _ => false,
        })
    }

    pub fn kt_not_occurs_enabled(&self) -> bool {
        self.enabled().any(|(e, _)| e.fact == KbFact::KtNotOccurs)
    }

    pub fn kt_spanning_enabled(&self) -> bool {
        self.enabled().any(|(e, _)| e.fact == KbFact::KtSpanning)
    }

    /// Occurs patterns, by isomorphism.
    pub fn match_occurs(&self, g: &Graph, canon: &CanonicalForm) -> Option<Certificate> {
        for (entry, pattern) in self.enabled() {
            match &entry.fact {
                KbFact::LeftOneOne => {
                    if let Some(iso) = iso_to_pattern(canon, pattern) {
                        return Some(Certificate::KnownOccurs { source: FactSource::LeftOneOne, iso });
                    }
                }
                KbFact::KtOccurs => {
                    if let Some((k, t, iso)) = recognize_gamma_kt_with_witness(g) {
                        if t == 1 || (k, t) == (2, 2) {
                            return Some(Certificate::KnownOccurs {
                                source: FactSource::KtOccurs { k, t },
                                iso,
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }

    /// Not-occurs patterns matched by isomorphism.
    pub fn match_not_occurs(&self, g: &Graph, canon: &CanonicalForm) -> Option<Certificate> {
        for (entry, pattern) in self.enabled() {
            match &entry.fact {
                KbFact::KtNotOccurs => {
                    if let Some((k, t, iso)) = recognize_gamma_kt_with_witness(g) {
                        if t >= 2 && (k, t) != (2, 2) {
                            return Some(Certificate::KnownFamily { k, t, iso });
                        }
                    }
                }
                KbFact::Induction { k, n } => {
                    if let Some(iso) = iso_to_pattern(canon, pattern) {
                        return Some(Certificate::KnownNotOccurs {
                            source: FactSource::Induction { k: *k, n: *n },
                            iso,
                        });
                    }
                }
                KbFact::RightAsserted => {
                    let n = g.n();
                    if n >= 8 && n % 2 == 0 {
                        let k = (n - 2) / 2;
                        if let Ok(h) = gamma_r(k, 1) {
                            if h.edge_count() == g.edge_count() {
                                let ch = canonical_form(&h);
                                if let Some(iso) = iso_to_pattern(canon, &Some((h, ch))) {
                                    return Some(Certificate::KnownNotOccurs {
                                        source: FactSource::RightAsserted { k },
                                        iso,
                                    });
                                }
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }

    /// Connected spanning proper subgraphs of `Γ_{k,t}`, `k ≥ t ≥ 2`.
    pub fn match_spanning(&self, g: &Graph) -> Option<Certificate> {
        if !self.kt_spanning_enabled() {
            return None;
        }
        let n = g.n();
        // quick reject: no host has more edges than g needs
        if (2..=n / 2).all(|t| kt_edge_count(n - t, t) <= g.edge_count()) {
            return None;
        }
        recognize_gamma_kt_spanning_with_witness(g, 2)
            .map(|(k, t, embedding)| Certificate::KnownFamilySpanning { k, t, embedding })
    }

    /// Stable textual description used in rule-set fingerprints.
    pub fn describe(&self) -> String {
        self.enabled()
            .map(|(e, _)| fact_name(&e.fact))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn fact_name(f: &KbFact) -> String {
    match f {
        KbFact::KtOccurs => "KtOccurs".into(),
        KbFact::KtNotOccurs => "KtNotOccurs".into(),
        KbFact::KtSpanning => "KtSpanning".into(),
        KbFact::LeftOneOne => "LeftOneOne".into(),
        KbFact::RightAsserted => "RightAsserted".into(),
        KbFact::Induction { k, n } => format!("Induction({k},{n})"),
    }
}

fn pattern_of(fact: &KbFact) -> Result<Option<(Graph, CanonicalForm)>> {
    let g = match fact {
        KbFact::LeftOneOne => gamma_l(1, 1)?,
        KbFact::Induction { k, n } => {
            FamilyId { kind: FamilyKind::GammaL, k: *k, second: *n }.build()?
        }
        _ => return Ok(None),
    };
    let c = canonical_form(&g);
    Ok(Some((g, c)))
}

fn iso_to_pattern(canon: &CanonicalForm, pattern: &Option<(Graph, CanonicalForm)>) -> Option<Vec<usize>> {
    let (_, pc) = pattern.as_ref()?;
    if pc != canon {
        return None;
    }
    let order = pc.order();
    Some(canon.labeling().iter().map(|&p| order[p]).collect())
}
