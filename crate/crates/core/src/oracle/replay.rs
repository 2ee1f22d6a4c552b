//! Independent certificate checker.
//!
//! Nothing here calls into the rule implementations, the graph metric
//! helpers or the family constructors: distances come from Floyd–Warshall,
//! components from an explicit stack walk, and pattern graphs are rebuilt
//! from their edge rules. The only thing taken from [`Graph`] is the
//! adjacency predicate.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::oracle::certificate::{Bound, Certificate, DiamThreePartition, Verdict};
use crate::oracle::kb::{FactSource, KnowledgeBase};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("{0}")]
    Invalid(String),
    #[error("certificate kind {0} cannot justify verdict {1}")]
    WrongVerdict(&'static str, &'static str),
}

type Check = Result<(), ReplayError>;

fn fail<T>(msg: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError::Invalid(msg.into()))
}

fn adj(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    (0..n).map(|u| (0..n).map(|v| u != v && g.has_edge(u, v)).collect()).collect()
}

fn in_range(n: usize, vs: impl IntoIterator<Item = usize>) -> Check {
    for v in vs {
        if v >= n {
            return Err(ReplayError::OutOfRange(v));
        }
    }
    Ok(())
}

const INF: u32 = u32::MAX / 4;

fn floyd_warshall(a: &[Vec<bool>]) -> Vec<Vec<u32>> {
    let n = a.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                d[i][j] = 0;
            } else if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn stack_components(a: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if a[u][v] && !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn edge_total(a: &[Vec<bool>]) -> usize {
    a.iter().map(|r| r.iter().filter(|&&x| x).count()).sum::<usize>() / 2
}

fn set_members(s: VertexSet) -> Vec<usize> {
    (0..32).filter(|&v| s.bits() & (1u32 << v) != 0).collect()
}

/// Pattern adjacency for `Γ_{k,t}`: a's first, then b's.
fn kt_pattern(k: usize, t: usize) -> Vec<Vec<bool>> {
    let n = k + t;
    let mut a = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let both_a = i < k && j < k;
            let both_b = i >= k && j >= k;
            let matched = (i < t && j == k + i) || (j < t && i == k + j);
            a[i][j] = both_a || both_b || matched;
        }
    }
    a
}

/// Pattern adjacency for the left (`left = true`) or right family, vertex
/// order `c, a1..ak, b1..b(k+n)`.
fn two_sided_pattern(k: usize, n: usize, left: bool) -> Vec<Vec<bool>> {
    let size = 2 * k + n + 1;
    let mut a = vec![vec![false; size]; size];
    let mut link = |x: usize, y: usize| {
        a[x][y] = true;
        a[y][x] = true;
    };
    let av = |i: usize| i; // a_i, 1-based
    let bv = |i: usize| k + i; // b_i, 1-based
    for i in 1..=k {
        for j in (i + 1)..=k {
            link(av(i), av(j));
        }
        link(av(i), bv(i));
        if i <= n {
            link(av(i), bv(k + i));
        }
        if left {
            link(0, av(i));
        }
    }
    for i in 1..=(k + n) {
        for j in (i + 1)..=(k + n) {
            link(bv(i), bv(j));
        }
        if !left {
            link(0, bv(i));
        }
    }
    a
}

fn check_bijection(f: &[usize], n: usize) -> Check {
    if f.len() != n {
        return fail(format!("map has {} entries for {n} vertices", f.len()));
    }
    let mut hit = vec![false; n];
    for &x in f {
        if x >= n || hit[x] {
            return fail("map is not a bijection");
        }
        hit[x] = true;
    }
    Ok(())
}

fn check_iso(a: &[Vec<bool>], pattern: &[Vec<bool>], f: &[usize]) -> Check {
    if a.len() != pattern.len() {
        return fail("vertex counts differ from the pattern");
    }
    check_bijection(f, a.len())?;
    for u in 0..a.len() {
        for v in 0..a.len() {
            if a[u][v] != pattern[f[u]][f[v]] {
                return fail(format!("map does not preserve the pair ({u},{v})"));
            }
        }
    }
    Ok(())
}

fn pattern_for(source: &FactSource) -> Result<Vec<Vec<bool>>, ReplayError> {
    match *source {
        FactSource::KtOccurs { k, t } => {
            if !(t == 1 && k >= 1 || (k, t) == (2, 2)) {
                return fail(format!("Γ_{{{k},{t}}} is not a known occurring graph"));
            }
            Ok(kt_pattern(k, t))
        }
        FactSource::LeftOneOne => Ok(two_sided_pattern(1, 1, true)),
        FactSource::Induction { k, n } => {
            if n < 1 || n > k {
                return fail("bad left-family parameters");
            }
            Ok(two_sided_pattern(k, n, true))
        }
        FactSource::RightAsserted { k } => {
            if k < 3 {
                return fail("right-family entry needs k ≥ 3");
            }
            Ok(two_sided_pattern(k, 1, false))
        }
    }
}

/// Recompute a diameter-three partition from scratch and compare.
fn check_partition(d: &[Vec<u32>], a: &[Vec<bool>], p: &DiamThreePartition) -> Check {
    let n = a.len();
    in_range(n, [p.base])?;
    if (0..n).map(|v| d[p.base][v]).max() != Some(3) {
        return fail("base vertex does not have eccentricity three");
    }
    let mut rho = [VertexSet::EMPTY; 4];
    for v in 0..n {
        let slot = match d[p.base][v] {
            0 => 0,
            1 => {
                if (0..n).any(|w| d[p.base][w] == 2 && a[v][w]) {
                    1
                } else {
                    0
                }
            }
            2 => 2,
            3 => 3,
            _ => return fail("vertex beyond distance three"),
        };
        rho[slot].insert(v);
    }
    if rho != [p.rho1, p.rho2, p.rho3, p.rho4] {
        return fail(format!("partition for base {} does not match distances", p.base));
    }
    Ok(())
}

fn bound_violated(p: &DiamThreePartition, bound: Bound) -> bool {
    let near = set_members(p.rho1).len() + set_members(p.rho2).len();
    let far = set_members(p.rho3).len() + set_members(p.rho4).len();
    match bound {
        Bound::I => set_members(p.rho3).len() < 3,
        Bound::II => near > far,
        Bound::III => (far as u128) < (1u128 << near),
    }
}

fn eccentricity_three(d: &[Vec<u32>]) -> Vec<usize> {
    (0..d.len()).filter(|&v| d[v].iter().copied().max() == Some(3)).collect()
}

/// Eccentricity-three vertices whose partition meets all three bounds.
fn admissible_bases(d: &[Vec<u32>]) -> Vec<usize> {
    let n = d.len();
    eccentricity_three(d)
        .into_iter()
        .filter(|&p| {
            let at = |k: u32| (0..n).filter(|&v| d[p][v] == k).count();
            let (near, rho3) = (1 + at(1), at(2));
            let far = rho3 + at(3);
            rho3 >= 3 && near <= far && near < 64 && (far as u64) >= (1u64 << near)
        })
        .collect()
}

fn require_diameter_three(d: &[Vec<u32>]) -> Check {
    let diam = d.iter().flat_map(|r| r.iter().copied()).max().unwrap_or(0);
    if diam != 3 {
        return fail(format!("graph diameter is not three (got {})", if diam >= INF { "∞".to_string() } else { diam.to_string() }));
    }
    Ok(())
}

/// Re-run the chain enumeration for one `(partition, p1)` pair.
fn replay_chain_step(a: &[Vec<bool>], p: &DiamThreePartition, p1: usize) -> Result<u64, ReplayError> {
    let n = a.len();
    let nbrs: Vec<usize> = (0..n).filter(|&v| a[p1][v]).collect();
    let mut removable = Vec::new();
    for (i, &u) in nbrs.iter().enumerate() {
        for &v in &nbrs[i + 1..] {
            if a[u][v] {
                removable.push((u, v));
            }
        }
    }
    if removable.len() > 24 {
        return fail("too many removable edges to replay");
    }
    let keep: Vec<usize> = (0..n).filter(|&v| v != p1).collect();
    let allowed: Vec<bool> = keep
        .iter()
        .map(|&v| p.rho3.contains(v))
        .collect();
    let total = 1u64 << removable.len();
    for mask in 0..total {
        let mut sub: Vec<Vec<bool>> = keep
            .iter()
            .map(|&u| keep.iter().map(|&v| a[u][v]).collect())
            .collect();
        for (i, &(u, v)) in removable.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let iu = keep.iter().position(|&x| x == u).unwrap();
                let iv = keep.iter().position(|&x| x == v).unwrap();
                sub[iu][iv] = false;
                sub[iv][iu] = false;
            }
        }
        let d = floyd_warshall(&sub);
        require_diameter_three(&d)?;
        for q in admissible_bases(&d) {
            for v in 0..sub.len() {
                if d[q][v] == 2 && !allowed[v] {
                    return fail(format!("derived graph has ρ3 vertex outside ρ3 \\ {{{p1}}}"));
                }
            }
        }
    }
    Ok(total)
}

/// Check a certificate against `g`. `kb` is consulted for knowledge-base
/// facts, which must be enabled to count.
pub fn replay(g: &Graph, cert: &Certificate, kb: &KnowledgeBase) -> Check {
    let a = adj(g);
    let n = a.len();
    match cert {
        Certificate::PalfyTriple { triple } => {
            in_range(n, triple.iter().copied())?;
            let [x, y, z] = *triple;
            if x == y || y == z || x == z {
                return fail("triple vertices are not distinct");
            }
            if a[x][y] || a[y][z] || a[x][z] {
                return fail("triple spans an edge");
            }
            Ok(())
        }
        Certificate::OddComplementCycle { cycle } => {
            in_range(n, cycle.iter().copied())?;
            let len = cycle.len();
            if len < 3 || len % 2 == 0 {
                return fail(format!("cycle length {len} is not odd and at least three"));
            }
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != len {
                return fail("cycle repeats a vertex");
            }
            for i in 0..len {
                if a[cycle[i]][cycle[(i + 1) % len]] {
                    return fail("consecutive cycle vertices are adjacent");
                }
            }
            Ok(())
        }
        Certificate::PalfyInequality { smaller, larger, a: sa, b: sb } => {
            let comps = stack_components(&a);
            if comps.len() != 2 {
                return fail("graph does not have exactly two components");
            }
            let s = set_members(*smaller);
            let l = set_members(*larger);
            if !(comps.contains(&s) && comps.contains(&l) && s != l) {
                return fail("recorded components do not match the graph");
            }
            if s.len() != *sa || l.len() != *sb || sa > sb {
                return fail("recorded sizes do not match");
            }
            if *sa >= 64 || (*sb as u64) >= (1u64 << sa) - 1 {
                return fail(format!("{sb} ≥ 2^{sa}-1: inequality holds"));
            }
            Ok(())
        }
        Certificate::BadComponents { components } => {
            let comps = stack_components(&a);
            let mut recorded: Vec<Vec<usize>> = components.iter().map(|&c| set_members(c)).collect();
            recorded.sort();
            let mut actual = comps.clone();
            actual.sort();
            if recorded != actual {
                return fail("recorded components do not match the graph");
            }
            let complete = |c: &Vec<usize>| c.iter().all(|&u| c.iter().all(|&v| u == v || a[u][v]));
            if actual.len() == 2 && actual.iter().all(complete) {
                return fail("graph has exactly two complete components");
            }
            if actual.len() < 2 {
                return fail("graph is connected");
            }
            Ok(())
        }
        Certificate::DiamThreeBound { violations } => {
            let d = floyd_warshall(&a);
            require_diameter_three(&d)?;
            let bases = eccentricity_three(&d);
            let mut recorded: Vec<usize> = violations.iter().map(|v| v.partition.base).collect();
            recorded.sort_unstable();
            if recorded != bases {
                return fail("certificate does not cover exactly the eccentricity-three vertices");
            }
            for v in violations {
                check_partition(&d, &a, &v.partition)?;
                if !bound_violated(&v.partition, v.bound) {
                    return fail(format!("bound {:?} holds at base {}", v.bound, v.partition.base));
                }
            }
            Ok(())
        }
        Certificate::DiamThreeChain { evidence } => {
            let d = floyd_warshall(&a);
            require_diameter_three(&d)?;
            let bases: Vec<usize> = admissible_bases(&d);
            let mut recorded: Vec<usize> = evidence.iter().map(|e| e.partition.base).collect();
            recorded.sort_unstable();
            if bases.is_empty() || recorded != bases {
                return fail("certificate does not cover exactly the bound-satisfying bases");
            }
            for e in evidence {
                check_partition(&d, &a, &e.partition)?;
                let mut p1s: Vec<usize> = e.steps.iter().map(|s| s.p1).collect();
                p1s.sort_unstable();
                if p1s != set_members(e.partition.rho3) {
                    return fail("chain steps do not cover ρ3");
                }
                for s in &e.steps {
                    let count = replay_chain_step(&a, &e.partition, s.p1)?;
                    if count != s.derived_graphs {
                        return fail("derived-graph count mismatch");
                    }
                }
            }
            Ok(())
        }
        Certificate::KnownFamily { k, t, iso } => {
            let (k, t) = (*k, *t);
            if !(k >= t && t >= 2 && (k, t) != (2, 2)) {
                return fail(format!("Γ_{{{k},{t}}} is not covered by the classification"));
            }
            if !kb.kt_not_occurs_enabled() {
                return fail("Γ_{k,t} non-occurrence entry is disabled");
            }
            check_iso(&a, &kt_pattern(k, t), iso)
        }
        Certificate::KnownFamilySpanning { k, t, embedding } => {
            let (k, t) = (*k, *t);
            if !(k >= t && t >= 2) {
                return fail("spanning-subgraph fact needs k ≥ t ≥ 2");
            }
            if !kb.kt_spanning_enabled() {
                return fail("spanning-subgraph entry is disabled");
            }
            let host = kt_pattern(k, t);
            if host.len() != n {
                return fail("vertex count differs from host");
            }
            check_bijection(embedding, n)?;
            if stack_components(&a).len() != 1 {
                return fail("graph is not connected");
            }
            for u in 0..n {
                for v in 0..n {
                    if a[u][v] && !host[embedding[u]][embedding[v]] {
                        return fail("embedding misses a host edge");
                    }
                }
            }
            if edge_total(&a) >= edge_total(&host) {
                return fail("subgraph is not proper");
            }
            Ok(())
        }
        Certificate::KnownOccurs { source, iso } | Certificate::KnownNotOccurs { source, iso } => {
            let wants_occurs = matches!(cert, Certificate::KnownOccurs { .. });
            let source_occurs = matches!(source, FactSource::KtOccurs { .. } | FactSource::LeftOneOne);
            if wants_occurs != source_occurs {
                return fail("fact polarity does not match certificate");
            }
            if !kb.is_enabled(source) {
                return fail(format!("knowledge-base entry not enabled: {source}"));
            }
            check_iso(&a, &pattern_for(source)?, iso)
        }
    }
}

/// Check that a verdict's certificate supports it.
pub fn replay_verdict(g: &Graph, verdict: &Verdict, kb: &KnowledgeBase) -> Check {
    match verdict {
        Verdict::Unknown => Ok(()),
        Verdict::Occurs(c) => {
            if !matches!(c, Certificate::KnownOccurs { .. }) {
                return Err(ReplayError::WrongVerdict(c.tag(), "Occurs"));
            }
            replay(g, c, kb)
        }
        Verdict::NotOccurs(c) => {
            if matches!(c, Certificate::KnownOccurs { .. }) {
                return Err(ReplayError::WrongVerdict(c.tag(), "NotOccurs"));
            }
            replay(g, c, kb)
        }
    }
}
