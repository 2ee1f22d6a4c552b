//! Occurrence verdicts with replayable certificates.
//!
//! [`Oracle::classify`] runs the enabled rules in order on the canonical
//! relabeling of its input, so isomorphic graphs share one memo entry, and
//! then maps the certificate back onto the caller's vertex numbering.

mod certificate;
mod kb;
pub mod replay;
pub mod rules;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use certificate::{
    Bound, BoundViolation, Certificate, ChainEvidence, ChainStep, DiamThreePartition, Verdict,
    VerdictKind,
};
pub use kb::{FactSource, KbConfig, KbEntry, KbFact, KnowledgeBase};
pub use replay::{replay, replay_verdict, ReplayError};

use crate::canon::{canonical_form, key_from_rows, rows_from_key, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{Diameter, Graph};

/// One certificate rule, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    KnownOccurs,
    PalfyTriple,
    OddComplementCycle,
    Disconnected,
    KnownNotOccurs,
    KnownSpanning,
    DiamThreeBounds,
    DiamThreeChain,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::KnownOccurs,
        Rule::PalfyTriple,
        Rule::OddComplementCycle,
        Rule::Disconnected,
        Rule::KnownNotOccurs,
        Rule::KnownSpanning,
        Rule::DiamThreeBounds,
        Rule::DiamThreeChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::KnownOccurs => "known-occurs",
            Rule::PalfyTriple => "palfy-triple",
            Rule::OddComplementCycle => "odd-complement-cycle",
            Rule::Disconnected => "disconnected",
            Rule::KnownNotOccurs => "known-not-occurs",
            Rule::KnownSpanning => "known-spanning",
            Rule::DiamThreeBounds => "diam3-bounds",
            Rule::DiamThreeChain => "diam3-chain",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Rule::ALL.iter().map(|r| r.name()).collect();
                Error::BadParameters(format!("unknown rule {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Ordered list of enabled rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    order: Vec<Rule>,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet { order: Rule::ALL.to_vec() }
    }
}

impl RuleSet {
    /// Rules in the given order; duplicates are dropped.
    pub fn from_order(order: impl IntoIterator<Item = Rule>) -> Self {
        let mut out = Vec::new();
        for r in order {
            if !out.contains(&r) {
                out.push(r);
            }
        }
        RuleSet { order: out }
    }

    pub fn without(mut self, rule: Rule) -> Self {
        self.order.retain(|&r| r != rule);
        self
    }

    pub fn rules(&self) -> &[Rule] {
        &self.order
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.order.contains(&rule)
    }
}

pub const RULESET_VERSION: &str = "cdgraph-rules/1";

pub const DEFAULT_CHAIN_EDGE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub replay_failures: u64,
    pub entries: usize,
}

/// On-disk verdict cache: rule-set fingerprint → canonical key → verdict on
/// the canonical graph.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CacheFile {
    pub rulesets: BTreeMap<String, BTreeMap<String, Verdict>>,
}

pub struct Oracle {
    kb: KnowledgeBase,
    rules: RuleSet,
    chain_edge_cap: usize,
    paranoid: bool,
    fingerprint: String,
    cache: Mutex<HashMap<Vec<u32>, Verdict>>,
    hits: AtomicU64,
    misses: AtomicU64,
    replay_failures: AtomicU64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(KnowledgeBase::default(), RuleSet::default())
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("rules", &self.rules)
            .field("kb", &self.kb.describe())
            .field("fingerprint", &self.fingerprint)
            .finish()
    }
}

impl Oracle {
    pub fn new(kb: KnowledgeBase, rules: RuleSet) -> Self {
        Oracle::build(kb, rules, DEFAULT_CHAIN_EDGE_CAP, false)
    }

    fn build(kb: KnowledgeBase, rules: RuleSet, chain_edge_cap: usize, paranoid: bool) -> Self {
        let fingerprint = fingerprint(&kb, &rules, chain_edge_cap);
        Oracle {
            kb,
            rules,
            chain_edge_cap,
            paranoid,
            fingerprint,
            cache: Mutex::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            replay_failures: AtomicU64::new(0),
        }
    }

    /// Replay every cached certificate before trusting it.
    pub fn with_paranoid(mut self, on: bool) -> Self {
        self.paranoid = on;
        self
    }

    /// Changing the cap changes the fingerprint, so the memo starts empty.
    pub fn with_chain_edge_cap(self, cap: usize) -> Self {
        Oracle::build(self.kb, self.rules, cap, self.paranoid)
    }

    /// Same rules and settings over a different knowledge base, with an empty memo.
    pub fn with_kb(&self, kb: KnowledgeBase) -> Self {
        Oracle::build(kb, self.rules.clone(), self.chain_edge_cap, self.paranoid)
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn paranoid(&self) -> bool {
        self.paranoid
    }

    pub fn chain_edge_cap(&self) -> usize {
        self.chain_edge_cap
    }

    /// Hash of the rule order, knowledge base and chain cap.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            replay_failures: self.replay_failures.load(Ordering::Relaxed),
            entries: self.cache.lock().unwrap().len(),
        }
    }

    pub fn clear_cache(&self) {
        self.cache.lock().unwrap().clear();
    }

    /// Memoized verdicts as canonical graphs with unlabeled vertices, in key order.
    pub fn entries(&self) -> Vec<(Graph, Verdict)> {
        let mut out: Vec<(String, Graph, Verdict)> = self
            .cache
            .lock()
            .unwrap()
            .iter()
            .map(|(rows, v)| {
                let labels = (0..rows.len()).map(|i| format!("v{i}")).collect();
                let g = Graph::from_rows(labels, rows).expect("memo rows are valid");
                (key_from_rows(rows), g, v.clone())
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out.into_iter().map(|(_, g, v)| (g, v)).collect()
    }

    /// Memoized classification; the certificate refers to `g`'s vertices.
    pub fn classify(&self, g: &Graph) -> Verdict {
        let canon = canonical_form(g);
        let cg = canon.graph_from(g);
        let verdict = self.classify_canonical(&canon, &cg);
        verdict.relabel(&canon.order())
    }

    fn classify_canonical(&self, canon: &CanonicalForm, cg: &Graph) -> Verdict {
        let cached = self.cache.lock().unwrap().get(canon.rows()).cloned();
        if let Some(v) = cached {
            if !self.paranoid || replay_verdict(cg, &v, &self.kb).is_ok() {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return v;
            }
            self.replay_failures.fetch_add(1, Ordering::Relaxed);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let v = self.run_rules(cg, &canonical_form(cg));
        self.cache.lock().unwrap().insert(canon.rows().to_vec(), v.clone());
        v
    }

    /// Classification without the memo.
    pub fn classify_uncached(&self, g: &Graph) -> Verdict {
        self.run_rules(g, &canonical_form(g))
    }

    fn run_rules(&self, g: &Graph, canon: &CanonicalForm) -> Verdict {
        for &rule in self.rules.rules() {
            if let Some(v) = self.apply(rule, g, canon) {
                return v;
            }
        }
        Verdict::Unknown
    }

    fn apply(&self, rule: Rule, g: &Graph, canon: &CanonicalForm) -> Option<Verdict> {
        let not = |c: Certificate| Some(Verdict::NotOccurs(c));
        match rule {
            Rule::KnownOccurs => self.kb.match_occurs(g, canon).map(Verdict::Occurs),
            Rule::PalfyTriple => {
                rules::check_palfy(g).and_then(|triple| not(Certificate::PalfyTriple { triple }))
            }
            Rule::OddComplementCycle => g
                .find_odd_complement_cycle()
                .and_then(|cycle| not(Certificate::OddComplementCycle { cycle })),
            Rule::Disconnected => match rules::check_disconnected(g) {
                Ok(Some(c)) => not(c),
                _ => None,
            },
            Rule::KnownNotOccurs => self.kb.match_not_occurs(g, canon).and_then(not),
            Rule::KnownSpanning => {
                if g.is_connected() {
                    self.kb.match_spanning(g).and_then(not)
                } else {
                    None
                }
            }
            Rule::DiamThreeBounds => {
                if g.diameter() != Diameter::Finite(3) {
                    return None;
                }
                rules::check_diam3_bounds(g).ok().flatten().and_then(not)
            }
            Rule::DiamThreeChain => {
                if g.diameter() != Diameter::Finite(3) {
                    return None;
                }
                rules::check_diam3_chain(g, self.chain_edge_cap).ok().flatten().and_then(not)
            }
        }
    }

    /// Merge this oracle's entries from a cache file. A missing file is an
    /// empty cache. Returns the number of entries read.
    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        let file = match fs::read_to_string(path) {
            Ok(s) => serde_json::from_str::<CacheFile>(&s)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        let Some(entries) = file.rulesets.get(&self.fingerprint) else {
            return Ok(0);
        };
        let mut cache = self.cache.lock().unwrap();
        for (key, v) in entries {
            cache.insert(rows_from_key(key)?, v.clone());
        }
        Ok(entries.len())
    }

    /// Write the memo into the cache file, keeping other rule sets' entries.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let mut file = match fs::read_to_string(path) {
            Ok(s) => serde_json::from_str::<CacheFile>(&s).unwrap_or_default(),
            Err(_) => CacheFile::default(),
        };
        let slot = file.rulesets.entry(self.fingerprint.clone()).or_default();
        for (rows, v) in self.cache.lock().unwrap().iter() {
            slot.insert(key_from_rows(rows), v.clone());
        }
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(&file)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn fingerprint(kb: &KnowledgeBase, rules: &RuleSet, chain_edge_cap: usize) -> String {
    let mut h = Sha256::new();
    h.update(RULESET_VERSION);
    for r in rules.rules() {
        h.update(b"\n");
        h.update(r.name());
    }
    h.update(format!("\nkb:{}\nchain-cap:{chain_edge_cap}", kb.describe()));
    h.finalize().iter().take(12).map(|b| format!("{b:02x}")).collect()
}
