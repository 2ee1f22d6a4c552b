//! The certificate-producing rules. Each returns `Some(certificate)` only
//! when its hypothesis is met on the given graph.

use crate::error::{Error, Result};
use crate::graph::{Diameter, Graph, VertexSet};
use crate::oracle::certificate::{
    BoundViolation, Certificate, ChainEvidence, ChainStep, DiamThreePartition,
};

/// First (lexicographic) triple of pairwise nonadjacent vertices.
pub fn check_palfy(g: &Graph) -> Option<[usize; 3]> {
    let n = g.n();
    for u in 0..n {
        let free_u = g.vertices().difference(g.neighbors(u));
        for v in free_u.iter().filter(|&v| v > u) {
            let free = free_u.difference(g.neighbors(v));
            if let Some(w) = free.iter().find(|&w| w > v) {
                return Some([u, v, w]);
            }
        }
    }
    None
}

fn require_diameter_three(g: &Graph) -> Result<()> {
    match g.diameter() {
        Diameter::Finite(3) => Ok(()),
        Diameter::Finite(d) => Err(Error::Precondition(format!(
            "graph has diameter {d}, not three"
        ))),
        Diameter::Disconnected => {
            Err(Error::Precondition("graph is disconnected, not of diameter three".into()))
        }
    }
}

/// Vertices of eccentricity three in a diameter-three graph.
pub fn eligible_bases(g: &Graph) -> VertexSet {
    (0..g.n()).filter(|&v| g.eccentricity(v) == Some(3)).collect()
}

/// Partition relative to base `p`, which must have eccentricity three.
pub fn diam3_partition(g: &Graph, p: usize) -> Result<DiamThreePartition> {
    require_diameter_three(g)?;
    if p >= g.n() {
        return Err(Error::VertexOutOfRange(p));
    }
    if g.eccentricity(p) != Some(3) {
        return Err(Error::Precondition(format!(
            "base vertex {} does not have eccentricity three",
            g.label(p)
        )));
    }
    Ok(partition_unchecked(g, p))
}

fn partition_unchecked(g: &Graph, p: usize) -> DiamThreePartition {
    let dist = g.bfs(p);
    let at = |d: u32| -> VertexSet {
        dist.iter()
            .enumerate()
            .filter(|&(_, &x)| x == Some(d))
            .map(|(v, _)| v)
            .collect()
    };
    let nbrs = at(1);
    let rho3 = at(2);
    let rho4 = at(3);
    let rho2: VertexSet = nbrs
        .iter()
        .filter(|&v| !g.neighbors(v).intersection(rho3).is_empty())
        .collect();
    let rho1 = nbrs.difference(rho2).with(p);
    DiamThreePartition { base: p, rho1, rho2, rho3, rho4 }
}

/// Fires when every base vertex of eccentricity three yields a partition
/// violating at least one size bound. Records the first violated bound per
/// base.
pub fn check_diam3_bounds(g: &Graph) -> Result<Option<Certificate>> {
    require_diameter_three(g)?;
    let mut violations = Vec::new();
    for p in eligible_bases(g) {
        let partition = partition_unchecked(g, p);
        match partition.violated_bounds().first() {
            Some(&bound) => violations.push(BoundViolation { partition, bound }),
            None => return Ok(None),
        }
    }
    Ok(Some(Certificate::DiamThreeBound { violations }))
}

/// Rules for disconnected graphs: exactly two complete components are
/// required, and their sizes `a ≤ b` must satisfy `b ≥ 2^a - 1`.
pub fn check_disconnected(g: &Graph) -> Result<Option<Certificate>> {
    let components = g.components();
    if components.len() < 2 {
        return Err(Error::Precondition("graph is connected".into()));
    }
    if components.len() != 2 || components.iter().any(|&c| !g.is_clique(c)) {
        return Ok(Some(Certificate::BadComponents { components }));
    }
    let (mut smaller, mut larger) = (components[0], components[1]);
    if smaller.len() > larger.len() {
        std::mem::swap(&mut smaller, &mut larger);
    }
    let (a, b) = (smaller.len(), larger.len());
    if a < 64 && (b as u64) < (1u64 << a) - 1 {
        return Ok(Some(Certificate::PalfyInequality { smaller, larger, a, b }));
    }
    Ok(None)
}

/// Bases whose partition satisfies all three size bounds. Only these can be
/// the arrangement a solvable group realizes.
pub fn admissible_partitions(g: &Graph) -> Vec<DiamThreePartition> {
    eligible_bases(g)
        .iter()
        .map(|p| partition_unchecked(g, p))
        .filter(|p| p.violated_bounds().is_empty())
        .collect()
}

/// Iterated normal-Sylow elimination for diameter-three graphs.
///
/// In a realized arrangement a normal Sylow subgroup exists for exactly one
/// prime `p1 ∈ ρ3`. Factoring out its derived subgroup deletes `p1` and
/// possibly edges among its former neighbors. If every such quotient graph
/// is again of diameter three and each of its bound-satisfying arrangements
/// has `ρ3` inside the original `ρ3 \ {p1}`, a second normal Sylow subgroup
/// for a prime of the original `ρ3` appears, contradicting uniqueness.
///
/// Arrangements are restricted to those meeting the size bounds on both
/// sides. Quantifying over every base vertex of the quotient can never
/// close: a vertex of `ρ4` is an eligible base whose distance-two set
/// contains a neighbor of the original base.
///
/// `edge_cap` bounds the number of edges among the neighbors of `p1`; past
/// it the rule declines to fire.
pub fn check_diam3_chain(g: &Graph, edge_cap: usize) -> Result<Option<Certificate>> {
    require_diameter_three(g)?;
    let partitions = admissible_partitions(g);
    if partitions.is_empty() {
        return Err(Error::Precondition(
            "no base vertex satisfies the diameter-three size bounds".into(),
        ));
    }
    let mut evidence = Vec::new();
    for partition in partitions {
        let mut steps = Vec::new();
        for p1 in partition.rho3 {
            match chain_step(g, &partition, p1, edge_cap) {
                Some(count) => steps.push(ChainStep { p1, derived_graphs: count }),
                None => return Ok(None),
            }
        }
        evidence.push(ChainEvidence { partition, steps });
    }
    Ok(Some(Certificate::DiamThreeChain { evidence }))
}

/// Number of derived graphs if all pass, `None` otherwise.
fn chain_step(g: &Graph, partition: &DiamThreePartition, p1: usize, edge_cap: usize) -> Option<u64> {
    let nbrs = g.neighbors(p1);
    let removable = g.edges_within(nbrs);
    if removable.len() > edge_cap {
        return None;
    }
    // indices shift by one above p1 once it is deleted
    let shift = |v: usize| if v > p1 { v - 1 } else { v };
    let allowed: VertexSet = partition.rho3.without(p1).iter().map(shift).collect();
    let base = g.remove_vertex(p1);
    let shifted: Vec<(usize, usize)> = removable.iter().map(|&(u, v)| (shift(u), shift(v))).collect();
    let total = 1u64 << shifted.len();
    for mask in 0..total {
        let drop: Vec<(usize, usize)> = shifted
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        let derived = base.remove_edges(&drop);
        if derived.diameter() != Diameter::Finite(3) {
            return None;
        }
        if admissible_partitions(&derived).iter().any(|q| !q.rho3.is_subset(allowed)) {
            return None;
        }
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gamma_l;

    #[test]
    fn palfy_examples() {
        assert_eq!(check_palfy(&Graph::empty(3)), Some([0, 1, 2]));
        for k in 1..=4 {
            for n in 1..=k {
                assert_eq!(check_palfy(&gamma_l(k, n).unwrap()), None);
            }
        }
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(check_palfy(&star), Some([1, 2, 3]));
    }

    #[test]
    fn partition_of_gamma_l_2_1_minus_a1() {
        let g = gamma_l(2, 1).unwrap();
        let h = g.remove_vertex(g.require_index("a1").unwrap());
        let p = diam3_partition(&h, h.require_index("c").unwrap()).unwrap();
        assert_eq!(p.rho1, h.set_of(&["c"]));
        assert_eq!(p.rho2, h.set_of(&["a2"]));
        assert_eq!(p.rho3, h.set_of(&["b2"]));
        assert_eq!(p.rho4, h.set_of(&["b1", "b3"]));

        let g = gamma_l(4, 1).unwrap();
        let h = g.remove_vertex(g.require_index("a1").unwrap());
        let p = diam3_partition(&h, h.require_index("c").unwrap()).unwrap();
        assert_eq!((p.near().len(), p.far().len()), (4, 5));
    }

    #[test]
    fn partition_of_path() {
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = diam3_partition(&p4, 0).unwrap();
        assert_eq!(
            (p.rho1, p.rho2, p.rho3, p.rho4),
            (
                VertexSet::singleton(0),
                VertexSet::singleton(1),
                VertexSet::singleton(2),
                VertexSet::singleton(3)
            )
        );
        assert!(diam3_partition(&p4, 1).is_err());
        assert!(diam3_partition(&Graph::complete(3), 0).is_err());
    }

    #[test]
    fn bounds_examples() {
        let g = gamma_l(2, 1).unwrap();
        let h = g.remove_vertex(g.require_index("a1").unwrap());
        let cert = check_diam3_bounds(&h).unwrap().unwrap();
        assert_eq!(cert.bounds(), vec![crate::oracle::Bound::I]);

        let g = gamma_l(4, 1).unwrap();
        let h = g.remove_vertex(g.require_index("a1").unwrap());
        let cert = check_diam3_bounds(&h).unwrap().unwrap();
        let Certificate::DiamThreeBound { violations } = &cert else { panic!() };
        let at_c = violations
            .iter()
            .find(|v| v.partition.base == h.require_index("c").unwrap())
            .unwrap();
        assert_eq!(at_c.bound, crate::oracle::Bound::III);

        assert!(check_diam3_bounds(&gamma_l(2, 1).unwrap()).is_err());
    }

    /// Base `p` with one neighbor `q`; `q` reaches three vertices of a
    /// 9-clique. From `p`: |ρ1∪ρ2| = 2, |ρ3| = 3, |ρ3∪ρ4| = 9 ≥ 4.
    pub(crate) fn bounds_satisfying_graph() -> Graph {
        let mut g = Graph::empty(11);
        g.add_edge(0, 1).unwrap();
        for r in 2..5 {
            g.add_edge(1, r).unwrap();
        }
        for u in 2..11 {
            for v in u + 1..11 {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn bounds_can_hold() {
        let g = bounds_satisfying_graph();
        assert_eq!(g.diameter(), Diameter::Finite(3));
        let p = diam3_partition(&g, 0).unwrap();
        assert!(p.violated_bounds().is_empty());
        assert_eq!(check_diam3_bounds(&g).unwrap(), None);
    }

    #[test]
    fn disconnected_examples() {
        let two_k3 = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        match check_disconnected(&two_k3).unwrap() {
            Some(Certificate::PalfyInequality { a: 3, b: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        let k2_k3 = Graph::from_edges(5, &[(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(check_disconnected(&k2_k3).unwrap(), None);
        let k1_p3 = Graph::from_edges(4, &[(1, 2), (2, 3)]).unwrap();
        assert!(matches!(
            check_disconnected(&k1_p3).unwrap(),
            Some(Certificate::BadComponents { .. })
        ));
        assert!(check_disconnected(&Graph::complete(3)).is_err());
    }

    #[test]
    fn chain_requires_bounds_to_pass_somewhere() {
        let g = gamma_l(2, 1).unwrap();
        let h = g.remove_vertex(g.require_index("a1").unwrap());
        assert!(matches!(check_diam3_chain(&h, 20), Err(Error::Precondition(_))));
    }

    #[test]
    fn chain_declines_past_edge_cap() {
        // each p1 in ρ3 has 30 edges among its neighbors
        let g = bounds_satisfying_graph();
        assert_eq!(check_diam3_chain(&g, 20).unwrap(), None);
    }
}
