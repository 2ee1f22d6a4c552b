//! Canonical labeling, isomorphism and spanning-subgraph embedding.
//!
//! Canonical forms come from an individualization–refinement search: the
//! vertex partition is refined to an equitable one, a vertex of the first
//! smallest non-singleton cell is individualized, and the process recurses.
//! Every discrete leaf gives a relabeling; the lexicographically smallest
//! relabeled adjacency matrix is the canonical form. Subtrees that an
//! already-known automorphism maps onto an explored sibling are skipped.
//! Twin transpositions seed the automorphism list, which keeps cliques and
//! other highly symmetric graphs cheap.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::families::gamma_kt;
use crate::graph::{Graph, VertexSet};

/// Label-free canonical adjacency plus the map taking each original vertex
/// to its canonical position. Equality and hashing ignore the map.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    rows: Vec<u32>,
    labeling: Vec<usize>,
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for CanonicalForm {}

impl std::hash::Hash for CanonicalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
    }
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// `labeling()[v]` is the canonical position of original vertex `v`.
    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }

    /// Inverse of [`labeling`](Self::labeling): original vertex at each
    /// canonical position.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.labeling.len()];
        for (v, &p) in self.labeling.iter().enumerate() {
            order[p] = v;
        }
        order
    }

    /// Hex key `NN:` + upper-triangle adjacency bits, row-major.
    pub fn key(&self) -> String {
        key_from_rows(&self.rows)
    }

    /// The canonical graph itself, vertex `i` labeled with the original label
    /// of the vertex at canonical position `i`.
    pub fn graph_from(&self, g: &Graph) -> Graph {
        g.permuted(&self.labeling)
    }
}

/// Hex key for adjacency rows: vertex count, then upper-triangle bits.
pub fn key_from_rows(rows: &[u32]) -> String {
    let n = rows.len();
    let mut key = format!("{n:02x}:");
    let mut byte = 0u8;
    let mut filled = 0;
    for i in 0..n {
        for j in i + 1..n {
            byte = (byte << 1) | ((rows[i] >> j) & 1) as u8;
            filled += 1;
            if filled == 8 {
                let _ = write!(key, "{byte:02x}");
                byte = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        byte <<= 8 - filled;
        let _ = write!(key, "{byte:02x}");
    }
    key
}

/// Inverse of [`CanonicalForm::key`]: adjacency rows of the keyed graph.
pub fn rows_from_key(key: &str) -> Result<Vec<u32>> {
    let bad = || Error::Malformed(format!("bad canonical key {key:?}"));
    let (head, body) = key.split_once(':').ok_or_else(bad)?;
    let n = usize::from_str_radix(head, 16).map_err(|_| bad())?;
    if n > 32 {
        return Err(Error::TooManyVertices(n));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    if body.len() != pairs.div_ceil(8) * 2 {
        return Err(bad());
    }
    let bytes = (0..body.len() / 2)
        .map(|i| u8::from_str_radix(&body[2 * i..2 * i + 2], 16).map_err(|_| bad()))
        .collect::<Result<Vec<u8>>>()?;
    let mut rows = vec![0u32; n];
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bytes[idx / 8] >> (7 - idx % 8) & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            idx += 1;
        }
    }
    Ok(rows)
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    if n == 0 {
        return CanonicalForm { rows: Vec::new(), labeling: Vec::new() };
    }
    let mut search = Search {
        g,
        best: None,
        automorphisms: twin_transpositions(g),
    };
    let root = refine(g, vec![g.vertices()]);
    search.descend(root, VertexSet::EMPTY);
    let (rows, labeling) = search.best.expect("at least one leaf");
    CanonicalForm { rows, labeling }
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u32>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<VertexSet>, fixed: VertexSet) {
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(target) = target else {
            self.leaf(&cells);
            return;
        };
        let cell = cells[target];
        let mut explored = VertexSet::EMPTY;
        for v in cell {
            if self.equivalent_to_explored(v, explored, fixed) {
                continue;
            }
            explored.insert(v);
            let mut split = Vec::with_capacity(cells.len() + 1);
            split.extend_from_slice(&cells[..target]);
            split.push(VertexSet::singleton(v));
            split.push(cell.without(v));
            split.extend_from_slice(&cells[target + 1..]);
            let refined = refine(self.g, split);
            self.descend(refined, fixed.with(v));
        }
    }

    /// Whether `v` lies in the orbit of an explored sibling under the known
    /// automorphisms that fix `fixed` pointwise.
    fn equivalent_to_explored(&self, v: usize, explored: VertexSet, fixed: VertexSet) -> bool {
        if explored.is_empty() {
            return false;
        }
        let gens: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|p| fixed.iter().all(|x| p[x] == x))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut orbit = VertexSet::singleton(v);
        let mut frontier = orbit;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for x in frontier {
                for p in &gens {
                    next.insert(p[x]);
                }
            }
            next = next.difference(orbit);
            orbit = orbit.union(next);
            frontier = next;
        }
        !orbit.intersection(explored).is_empty()
    }

    fn leaf(&mut self, cells: &[VertexSet]) {
        let n = self.g.n();
        let mut labeling = vec![0; n];
        for (pos, c) in cells.iter().enumerate() {
            labeling[c.first().unwrap()] = pos;
        }
        let rows = relabeled_rows(self.g, &labeling);
        match &self.best {
            None => self.best = Some((rows, labeling)),
            Some((best_rows, best_labeling)) => match rows.cmp(best_rows) {
                std::cmp::Ordering::Less => self.best = Some((rows, labeling)),
                std::cmp::Ordering::Equal => {
                    // both labelings give the same matrix: best⁻¹ ∘ this is an automorphism
                    let mut inv_best = vec![0; n];
                    for (v, &p) in best_labeling.iter().enumerate() {
                        inv_best[p] = v;
                    }
                    let auto: Vec<usize> = (0..n).map(|v| inv_best[labeling[v]]).collect();
                    if auto.iter().enumerate().any(|(i, &x)| i != x) {
                        self.automorphisms.push(auto);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

fn relabeled_rows(g: &Graph, labeling: &[usize]) -> Vec<u32> {
    let n = g.n();
    let mut rows = vec![0u32; n];
    for v in 0..n {
        rows[labeling[v]] = g
            .neighbors(v)
            .iter()
            .fold(0, |r, u| r | (1 << labeling[u]));
    }
    rows
}

/// Transpositions of vertices with identical open or closed neighborhoods.
fn twin_transpositions(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let nu = g.neighbors(u).without(v);
            let nv = g.neighbors(v).without(u);
            if nu == nv {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(u, v);
                out.push(p);
            }
        }
    }
    out
}

/// Refine an ordered partition until it is equitable. Cells split by the
/// number of neighbors in a splitter cell, fragments ordered by that count,
/// so the result depends only on the graph structure.
fn refine(g: &Graph, mut cells: Vec<VertexSet>) -> Vec<VertexSet> {
    'outer: loop {
        for s in 0..cells.len() {
            let splitter = cells[s];
            for i in 0..cells.len() {
                let cell = cells[i];
                if cell.len() < 2 {
                    continue;
                }
                let mut counts: Vec<(u32, usize)> = cell
                    .iter()
                    .map(|v| (g.neighbors(v).intersection(splitter).len() as u32, v))
                    .collect();
                let first = counts[0].0;
                if counts.iter().all(|&(c, _)| c == first) {
                    continue;
                }
                counts.sort_unstable();
                let mut fragments: Vec<VertexSet> = Vec::new();
                let mut last = None;
                for (c, v) in counts {
                    if last != Some(c) {
                        fragments.push(VertexSet::EMPTY);
                        last = Some(c);
                    }
                    fragments.last_mut().unwrap().insert(v);
                }
                cells.splice(i..=i, fragments);
                continue 'outer;
            }
        }
        return cells;
    }
}

/// Isomorphism test; on success the witness maps each vertex of `g1` to its
/// image in `g2`.
pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let c1 = canonical_form(g1);
    let c2 = canonical_form(g2);
    if c1 != c2 {
        return None;
    }
    let order2 = c2.order();
    Some(c1.labeling.iter().map(|&p| order2[p]).collect())
}

/// Whether `f` maps the edges of `g` exactly onto the edges of `h`.
pub fn is_isomorphism(g: &Graph, h: &Graph, f: &[usize]) -> bool {
    g.n() == h.n()
        && g.edge_count() == h.edge_count()
        && is_bijection(f, h.n())
        && g.edges().into_iter().all(|(u, v)| h.has_edge(f[u], f[v]))
}

fn is_bijection(f: &[usize], n: usize) -> bool {
    let mut seen = VertexSet::EMPTY;
    f.len() == n && f.iter().all(|&x| x < n && !seen.contains(x) && { seen.insert(x); true })
}

/// Bijection `V(g) → V(h)` mapping `E(g)` into a proper subset of `E(h)`.
pub fn spanning_proper_subgraph_of(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    if g.n() != h.n() {
        return Err(Error::VertexCountMismatch(g.n(), h.n()));
    }
    if g.edge_count() >= h.edge_count() {
        return Ok(None);
    }
    let mut gd: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut hd: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    gd.sort_unstable_by(|a, b| b.cmp(a));
    hd.sort_unstable_by(|a, b| b.cmp(a));
    if gd.iter().zip(&hd).any(|(a, b)| a > b) {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut map = vec![usize::MAX; g.n()];
    if embed(g, h, &order, 0, &mut map, VertexSet::EMPTY) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn embed(
    g: &Graph,
    h: &Graph,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: VertexSet,
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let mapped_nbrs: Vec<usize> = order[..depth]
        .iter()
        .copied()
        .filter(|&u| g.has_edge(u, v))
        .collect();
    for w in h.vertices().difference(used) {
        if h.degree(w) < g.degree(v) {
            continue;
        }
        if mapped_nbrs.iter().all(|&u| h.has_edge(map[u], w)) {
            map[v] = w;
            if embed(g, h, order, depth + 1, map, used.with(w)) {
                return true;
            }
        }
    }
    map[v] = usize::MAX;
    false
}

/// `(k, t)` with `g ≅ Γ_{k,t}`, if any.
pub fn recognize_gamma_kt(g: &Graph) -> Option<(usize, usize)> {
    recognize_gamma_kt_with_witness(g).map(|(k, t, _)| (k, t))
}

pub fn recognize_gamma_kt_with_witness(g: &Graph) -> Option<(usize, usize, Vec<usize>)> {
    let n = g.n();
    let m = g.edge_count();
    let canon = canonical_form(g);
    for t in 1..=n / 2 {
        let k = n - t;
        if kt_edge_count(k, t) != m {
            continue;
        }
        let h = gamma_kt(k, t).ok()?;
        let ch = canonical_form(&h);
        if ch == canon {
            let order = ch.order();
            let iso = canon.labeling.iter().map(|&p| order[p]).collect();
            return Some((k, t, iso));
        }
    }
    None
}

/// `(k, t)` such that `g` is a connected spanning proper subgraph of
/// `Γ_{k,t}`. Larger `t` is tried first.
pub fn recognize_gamma_kt_spanning(g: &Graph) -> Option<(usize, usize)> {
    recognize_gamma_kt_spanning_with_witness(g, 1).map(|(k, t, _)| (k, t))
}

pub fn recognize_gamma_kt_spanning_with_witness(
    g: &Graph,
    min_t: usize,
) -> Option<(usize, usize, Vec<usize>)> {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return None;
    }
    let m = g.edge_count();
    for t in (min_t.max(1)..=n / 2).rev() {
        let k = n - t;
        if kt_edge_count(k, t) <= m {
            continue;
        }
        let h = gamma_kt(k, t).ok()?;
        if let Ok(Some(f)) = spanning_proper_subgraph_of(g, &h) {
            return Some((k, t, f));
        }
    }
    None
}

pub fn kt_edge_count(k: usize, t: usize) -> usize {
    k * (k - 1) / 2 + t * (t - 1) / 2 + t
}
