//! Small undirected simple graphs with labeled vertices.
//!
//! Adjacency is one `u32` bit row per vertex, so every vertex subset fits in
//! a single machine word. All operations are pure; a [`Graph`] is never
//! mutated once analysis starts.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 32;

/// A subset of vertex indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u32) -> Self {
        VertexSet(bits)
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 32 && self.0 & (1 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | (1 << v))
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let members: Vec<usize> = self.iter().collect();
        let count = 1u64 << members.len();
        (0..count).map(move |mask| {
            let mut s = VertexSet::EMPTY;
            for (i, &v) in members.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s.insert(v);
                }
            }
            s
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;

    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

pub struct VertexIter(u32);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Graph diameter; disconnected graphs have no finite diameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diameter {
    Finite(u32),
    Disconnected,
}

/// Undirected simple graph on at most [`MAX_VERTICES`] labeled vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<u32>,
}

impl Graph {
    /// Edgeless graph on the given labels.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(labels.len()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        Ok(Graph {
            labels,
            adj: vec![0; n],
        })
    }

    /// Edgeless graph with labels `v0, v1, ...`.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        Graph {
            labels: (0..n).map(|i| format!("v{i}")).collect(),
            adj: vec![0; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.adj[u] = VertexSet::full(n).without(u).bits();
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_labeled_edges<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        edges: &[(&str, &str)],
    ) -> Result<Self> {
        let mut g = Graph::new(labels)?;
        for &(a, b) in edges {
            let u = g.require_index(a)?;
            let v = g.require_index(b)?;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Build a graph from raw bit rows. Rows are symmetrized and stripped of
    /// loops and out-of-range bits.
    pub fn from_rows(labels: Vec<String>, rows: &[u32]) -> Result<Self> {
        let mut g = Graph::new(labels)?;
        let n = g.n();
        if rows.len() != n {
            return Err(Error::VertexCountMismatch(rows.len(), n));
        }
        let mask = VertexSet::full(n).bits();
        for u in 0..n {
            for v in VertexSet::from_bits(rows[u] & mask).without(u) {
                g.adj[u] |= 1 << v;
                g.adj[v] |= 1 << u;
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(self.labels[u].clone()));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn require_index(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Look up several labels at once; panics on an unknown label. Meant for
    /// tests and family code where labels are known to exist.
    pub fn set_of(&self, labels: &[&str]) -> VertexSet {
        labels
            .iter()
            .map(|l| {
                self.index_of(l)
                    .unwrap_or_else(|| panic!("no vertex labeled {l:?}"))
            })
            .collect()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn rows(&self) -> &[u32] {
        &self.adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Vertices adjacent to every member of `s`.
    pub fn common_neighbors(&self, s: VertexSet) -> VertexSet {
        s.iter()
            .fold(self.vertices(), |acc, v| acc.intersection(self.neighbors(v)))
            .difference(s)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for v in VertexSet(self.adj[u]) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edges with both endpoints in `s`.
    pub fn edges_within(&self, s: VertexSet) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter(|&(u, v)| s.contains(u) && s.contains(v))
            .collect()
    }

    pub fn complement(&self) -> Graph {
        let full = self.vertices();
        Graph {
            labels: self.labels.clone(),
            adj: (0..self.n())
                .map(|u| full.without(u).bits() & !self.adj[u])
                .collect(),
        }
    }

    /// Subgraph induced by `s`, vertices kept in their original relative order.
    pub fn induced(&self, s: VertexSet) -> Graph {
        let keep: Vec<usize> = s.iter().filter(|&v| v < self.n()).collect();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                VertexSet(self.adj[v])
                    .intersection(s)
                    .iter()
                    .fold(0u32, |row, u| row | (1 << pos[u]))
            })
            .collect();
        Graph {
            labels: keep.iter().map(|&v| self.labels[v].clone()).collect(),
            adj,
        }
    }

    pub fn remove_vertex(&self, v: usize) -> Graph {
        self.induced(self.vertices().without(v))
    }

    pub fn remove_vertices(&self, s: VertexSet) -> Graph {
        self.induced(self.vertices().difference(s))
    }

    pub fn remove_edges(&self, edges: &[(usize, usize)]) -> Graph {
        let mut g = self.clone();
        for &(u, v) in edges {
            g.adj[u] &= !(1 << v);
            g.adj[v] &= !(1 << u);
        }
        g
    }

    /// Same labels, edge set replaced.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph {
            labels: self.labels.clone(),
            adj: vec![0; self.n()],
        };
        for &(u, v) in edges {
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        g
    }

    /// Vertex `v` of `self` becomes vertex `perm[v]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut labels = vec![String::new(); n];
        let mut adj = vec![0u32; n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v].clone();
            adj[perm[v]] = VertexSet(self.adj[v])
                .iter()
                .fold(0, |row, u| row | (1 << perm[u]));
        }
        Graph { labels, adj }
    }

    pub fn relabeled(&self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n() {
            return Err(Error::VertexCountMismatch(labels.len(), self.n()));
        }
        let mut g = Graph::new(labels)?;
        g.adj = self.adj.clone();
        Ok(g)
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut frontier = VertexSet::singleton(source);
        let mut seen = frontier;
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let next = frontier
                .iter()
                .fold(VertexSet::EMPTY, |acc, v| acc.union(self.neighbors(v)))
                .difference(seen);
            for v in next {
                dist[v] = Some(d);
            }
            seen = seen.union(next);
            frontier = next;
        }
        dist
    }

    pub fn distances(&self) -> Vec<Vec<Option<u32>>> {
        (0..self.n()).map(|v| self.bfs(v)).collect()
    }

    /// Largest distance from `v`, or `None` if some vertex is unreachable.
    pub fn eccentricity(&self, v: usize) -> Option<u32> {
        self.bfs(v)
            .into_iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn diameter(&self) -> Diameter {
        let mut best = 0;
        for v in 0..self.n() {
            match self.eccentricity(v) {
                Some(e) => best = best.max(e),
                None => return Diameter::Disconnected,
            }
        }
        Diameter::Finite(best)
    }

    /// Vertices at exactly distance `d` from `v`.
    pub fn sphere(&self, v: usize, d: u32) -> VertexSet {
        self.bfs(v)
            .into_iter()
            .enumerate()
            .filter(|&(_, x)| x == Some(d))
            .map(|(u, _)| u)
            .collect()
    }

    pub fn component_of(&self, v: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = frontier
                .iter()
                .fold(VertexSet::EMPTY, |acc, u| acc.union(self.neighbors(u)))
                .difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// Connected components ordered by their smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut rest = self.vertices();
        let mut out = Vec::new();
        while let Some(v) = rest.first() {
            let c = self.component_of(v);
            rest = rest.difference(c);
            out.push(c);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0) == self.vertices()
    }

    pub fn is_complete_on(&self, s: VertexSet) -> Result<bool> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.is_clique(s))
    }

    /// True for the empty set as well.
    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter()
            .all(|v| s.without(v).is_subset(self.neighbors(v)))
    }

    /// An odd cycle of the complement, if the complement is not bipartite.
    /// Consecutive vertices of the returned cycle (cyclically) are
    /// nonadjacent in `self`.
    pub fn find_odd_complement_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let comp = self.complement();
        let mut depth: Vec<Option<usize>> = vec![None; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if depth[root].is_some() {
                continue;
            }
            depth[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let du = depth[u].unwrap();
                for w in comp.neighbors(u) {
                    match depth[w] {
                        None => {
                            depth[w] = Some(du + 1);
                            parent[w] = u;
                            queue.push_back(w);
                        }
                        Some(dw) if dw % 2 == du % 2 => {
                            return Some(tree_cycle(&parent, &depth, u, w));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        None
    }

    /// Inclusion-maximal cliques, each sorted set ordered lexicographically by
    /// member indices.
    pub fn maximal_cliques(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        if self.n() > 0 {
            self.bron_kerbosch(VertexSet::EMPTY, self.vertices(), VertexSet::EMPTY, &mut out);
        }
        out.sort_by_key(|s| s.iter().collect::<Vec<_>>());
        out
    }

    fn bron_kerbosch(
        &self,
        r: VertexSet,
        mut p: VertexSet,
        mut x: VertexSet,
        out: &mut Vec<VertexSet>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
            }
            return;
        }
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&u| p.intersection(self.neighbors(u)).len())
            .unwrap();
        for v in p.difference(self.neighbors(pivot)) {
            let nv = self.neighbors(v);
            self.bron_kerbosch(r.with(v), p.intersection(nv), x.intersection(nv), out);
            p.remove(v);
            x.insert(v);
        }
    }

    /// Every unordered split `V = V1 ⊔ V2` with both parts nonempty cliques.
    /// `V1` always holds vertex 0.
    ///
    /// Both parts are cliques exactly when they are the two colour classes
    /// of a proper 2-colouring of the complement, so the splits are the
    /// independent flips of each complement component.
    pub fn two_clique_partitions(&self) -> Vec<(VertexSet, VertexSet)> {
        let n = self.n();
        if n < 2 {
            return Vec::new();
        }
        let comp = self.complement();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        let mut sides: Vec<(VertexSet, VertexSet)> = Vec::new();
        for root in 0..n {
            if colour[root].is_some() {
                continue;
            }
            colour[root] = Some(false);
            let mut side = (VertexSet::singleton(root), VertexSet::EMPTY);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for w in comp.neighbors(u) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            if cu {
                                side.0.insert(w);
                            } else {
                                side.1.insert(w);
                            }
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return Vec::new(),
                        Some(_) => {}
                    }
                }
            }
            sides.push(side);
        }
        let (first, rest) = sides.split_first().unwrap();
        let mut out = Vec::new();
        for mask in 0..(1u64 << rest.len()) {
            let mut v1 = first.0;
            let mut v2 = first.1;
            for (i, &(s0, s1)) in rest.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    v1 = v1.union(s0);
                    v2 = v2.union(s1);
                } else {
                    v1 = v1.union(s1);
                    v2 = v2.union(s0);
                }
            }
            if !v2.is_empty() {
                out.push((v1, v2));
            }
        }
        out
    }

    /// Labels of a vertex set, in index order.
    pub fn labels_of(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn label_map(&self) -> HashMap<&str, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }
}

fn tree_cycle(parent: &[usize], depth: &[Option<usize>], u: usize, w: usize) -> Vec<usize> {
    let mut left = vec![u];
    let mut right = vec![w];
    let (mut a, mut b) = (u, w);
    while depth[a].unwrap() > depth[b].unwrap() {
        a = parent[a];
        left.push(a);
    }
    while depth[b].unwrap() > depth[a].unwrap() {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(u, v)| format!("{}-{}", self.labels[u], self.labels[v]))
            .collect();
        write!(f, "Graph({:?}; {})", self.labels, edges.join(" "))
    }
}

/// Natural ordering of labels: alphabetic prefix, then numeric suffix, so
/// `a2 < a10`.
pub fn label_order(a: &str, b: &str) -> std::cmp::Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let idx = s
            .char_indices()
            .rev()
            .take_while(|(_, c)| c.is_ascii_digit())
            .last()
            .map(|(i, _)| i)
            .unwrap_or(s.len());
        (&s[..idx], s[idx..].parse().ok())
    }
    let (pa, na) = split(a);
    let (pb, nb) = split(b);
    pa.cmp(pb).then(na.cmp(&nb)).then(a.cmp(b))
}
