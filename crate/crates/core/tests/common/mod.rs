#![allow(dead_code)]

use cdgraph::oracle::{Certificate, DiamThreePartition};
use cdgraph::{Graph, VertexSet};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Every labeled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = pairs(n);
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e).collect();
        Graph::from_edges(n, &edges).unwrap()
    })
}

pub fn random_graph(n: usize, density: f64, rng: &mut StdRng) -> Graph {
    let edges: Vec<(usize, usize)> = pairs(n).into_iter().filter(|_| rng.gen_bool(density)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_perm(n: usize, rng: &mut StdRng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

pub fn adj(g: &Graph) -> Vec<Vec<bool>> {
    (0..g.n()).map(|u| (0..g.n()).map(|v| g.has_edge(u, v)).collect()).collect()
}

fn next_perm(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every permutation of `0..n` in lexicographic order.
pub fn for_each_perm(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        if !f(&p) || !next_perm(&mut p) {
            return;
        }
    }
}

fn edge_bits(a: &[Vec<bool>], perm: &[usize]) -> u64 {
    let n = a.len();
    let mut bits = 0u64;
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if a[perm[u]][perm[v]] {
                bits |= 1 << i;
            }
            i += 1;
        }
    }
    bits
}

/// Smallest edge bitmask over all vertex orders.
pub fn brute_canonical(g: &Graph) -> u64 {
    let a = adj(g);
    let mut best = u64::MAX;
    for_each_perm(g.n(), |p| {
        best = best.min(edge_bits(&a, p));
        true
    });
    best
}

/// Permutation search for an isomorphism.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let (a, b) = (adj(g), adj(h));
    let target = edge_bits(&b, &(0..h.n()).collect::<Vec<_>>());
    let mut found = false;
    for_each_perm(g.n(), |p| {
        found = edge_bits(&a, p) == target;
        !found
    });
    found
}

/// All-pairs shortest paths by relaxation; `None` for unreachable.
pub fn floyd(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.n();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for v in 0..n {
            if g.has_edge(u, v) {
                d[u][v] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter().map(|r| r.into_iter().map(|x| (x < inf).then_some(x)).collect()).collect()
}

/// Exhaustive search for a simple cycle of odd length in `g`.
pub fn has_odd_cycle(g: &Graph) -> bool {
    let n = g.n();
    fn dfs(g: &Graph, start: usize, cur: usize, len: usize, seen: &mut Vec<bool>) -> bool {
        for next in 0..g.n() {
            if !g.has_edge(cur, next) {
                continue;
            }
            if next == start && len >= 3 && len % 2 == 1 {
                return true;
            }
            if next > start && !seen[next] {
                seen[next] = true;
                if dfs(g, start, next, len + 1, seen) {
                    return true;
                }
                seen[next] = false;
            }
        }
        false
    }
    (0..n).any(|s| {
        let mut seen = vec![false; n];
        seen[s] = true;
        dfs(g, s, s, 1, &mut seen)
    })
}

/// Two-colouring by repeated relaxation.
pub fn two_colourable(g: &Graph) -> bool {
    let n = g.n();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if !g.has_edge(u, v) {
                    continue;
                }
                match colour[v] {
                    None => {
                        colour[v] = Some(!colour[u].unwrap());
                        stack.push(v);
                    }
                    Some(c) if c == colour[u].unwrap() => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Move one vertex to a different distance layer.
fn shift_layer(p: &mut DiamThreePartition) -> bool {
    let layers = [&mut p.rho1, &mut p.rho2, &mut p.rho3, &mut p.rho4];
    let from = match layers.iter().position(|l| !l.is_empty()) {
        Some(i) => i,
        None => return false,
    };
    let v = layers[from].first().unwrap();
    layers[from].remove(v);
    layers[(from + 1) % 4].insert(v);
    true
}

/// Corruptions that can never yield a valid certificate for `g`.
pub fn corruptions(g: &Graph, c: &Certificate) -> Vec<Certificate> {
    let n = g.n();
    let mut out = Vec::new();
    match c.clone() {
        Certificate::PalfyTriple { triple } => {
            out.push(Certificate::PalfyTriple { triple: [triple[0], triple[1], n + 1] });
            out.push(Certificate::PalfyTriple { triple: [triple[0], triple[0], triple[2]] });
            if let Some(&(u, v)) = g.edges().first() {
                let w = (0..n).find(|&w| w != u && w != v).unwrap();
                out.push(Certificate::PalfyTriple { triple: [u, v, w] });
            }
        }
        Certificate::OddComplementCycle { cycle } => {
            let mut even = cycle.clone();
            even.pop();
            out.push(Certificate::OddComplementCycle { cycle: even });
            let mut rep = cycle.clone();
            rep[1] = rep[0];
            out.push(Certificate::OddComplementCycle { cycle: rep });
        }
        Certificate::PalfyInequality { smaller, larger, a, b } => {
            out.push(Certificate::PalfyInequality { smaller, larger, a: a + 1, b });
            if a != b {
                out.push(Certificate::PalfyInequality { smaller: larger, larger: smaller, a: b, b: a });
            }
            out.push(Certificate::PalfyInequality { smaller: smaller.with(n + 1), larger, a: a + 1, b });
        }
        Certificate::BadComponents { mut components } => {
            let first = components.remove(0);
            out.push(Certificate::BadComponents { components: components.clone() });
            components.push(first.union(VertexSet::singleton(n + 1)));
            out.push(Certificate::BadComponents { components });
        }
        Certificate::DiamThreeBound { violations } => {
            let mut shifted = violations.clone();
            if shift_layer(&mut shifted[0].partition) {
                out.push(Certificate::DiamThreeBound { violations: shifted });
            }
            out.push(Certificate::DiamThreeBound { violations: violations[1..].to_vec() });
        }
        Certificate::DiamThreeChain { evidence } => {
            let mut count = evidence.clone();
            count[0].steps[0].derived_graphs += 1;
            out.push(Certificate::DiamThreeChain { evidence: count });
            let mut dropped = evidence.clone();
            dropped[0].steps.pop();
            out.push(Certificate::DiamThreeChain { evidence: dropped });
        }
        Certificate::KnownFamily { k, t, iso } => {
            out.push(Certificate::KnownFamily { k: k + 1, t, iso: iso.clone() });
            let mut dup = iso.clone();
            dup[1] = dup[0];
            out.push(Certificate::KnownFamily { k, t, iso: dup });
        }
        Certificate::KnownFamilySpanning { k, t, embedding } => {
            let mut dup = embedding.clone();
            dup[1] = dup[0];
            out.push(Certificate::KnownFamilySpanning { k, t, embedding: dup });
            out.push(Certificate::KnownFamilySpanning { k: k + 5, t, embedding });
        }
        Certificate::KnownNotOccurs { source, iso } | Certificate::KnownOccurs { source, iso } => {
            let mut dup = iso.clone();
            dup[1] = dup[0];
            out.push(Certificate::KnownNotOccurs { source, iso: dup });
        }
    }
    out
}
