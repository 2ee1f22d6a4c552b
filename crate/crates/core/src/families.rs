//! The graph families under study.
//!
//! `Γ_{k,t}` joins a `k`-clique `a1..ak` and a `t`-clique `b1..bt` by the
//! matching `a_i – b_i`. `Γ^L(k,n)` and `Γ^R(k,n)` join a `k`-clique `A` and a
//! `(k+n)`-clique `B` by `a_i – b_i` (all `i ≤ k`) and `a_i – b_{k+i}`
//! (`i ≤ n`), then attach a vertex `c` to every vertex of `A` (left) or of
//! `B` (right). Vertex order is always `c, a1..ak, b1..b(k+n)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    GammaKT,
    GammaL,
    GammaR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyId {
    pub kind: FamilyKind,
    pub k: usize,
    /// `t` for `Γ_{k,t}`, `n` for the left and right families.
    pub second: usize,
}

impl FamilyId {
    pub fn kt(k: usize, t: usize) -> Self {
        FamilyId { kind: FamilyKind::GammaKT, k, second: t }
    }

    pub fn left(k: usize, n: usize) -> Self {
        FamilyId { kind: FamilyKind::GammaL, k, second: n }
    }

    pub fn right(k: usize, n: usize) -> Self {
        FamilyId { kind: FamilyKind::GammaR, k, second: n }
    }

    pub fn validate(&self) -> Result<()> {
        let (k, s) = (self.k, self.second);
        match self.kind {
            FamilyKind::GammaKT => {
                if s < 1 || k < s {
                    return Err(Error::BadParameters(format!(
                        "Γ_{{k,t}} needs k ≥ t ≥ 1, got k={k}, t={s}"
                    )));
                }
            }
            FamilyKind::GammaL | FamilyKind::GammaR => {
                if s < 1 || k < s {
                    return Err(Error::BadParameters(format!(
                        "needs 1 ≤ n ≤ k, got k={k}, n={s}"
                    )));
                }
                if k > 15 {
                    return Err(Error::BadParameters(format!("k={k} exceeds 15")));
                }
            }
        }
        if self.vertex_count() > MAX_VERTICES {
            return Err(Error::BadParameters(format!(
                "{self} has {} vertices; at most {MAX_VERTICES} are supported",
                self.vertex_count()
            )));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        match self.kind {
            FamilyKind::GammaKT => self.k + self.second,
            _ => 2 * self.k + self.second + 1,
        }
    }

    pub fn build(&self) -> Result<Graph> {
        match self.kind {
            FamilyKind::GammaKT => gamma_kt(self.k, self.second),
            FamilyKind::GammaL => gamma_l(self.k, self.second),
            FamilyKind::GammaR => gamma_r(self.k, self.second),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::GammaKT => write!(f, "KT({},{})", self.k, self.second),
            FamilyKind::GammaL => write!(f, "L({},{})", self.k, self.second),
            FamilyKind::GammaR => write!(f, "R({},{})", self.k, self.second),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kt" | "gamma_kt" => Ok(FamilyKind::GammaKT),
            "l" | "left" | "gamma_l" => Ok(FamilyKind::GammaL),
            "r" | "right" | "gamma_r" => Ok(FamilyKind::GammaR),
            other => Err(Error::BadParameters(format!("unknown family {other:?}"))),
        }
    }
}

pub fn gamma_kt(k: usize, t: usize) -> Result<Graph> {
    FamilyId::kt(k, t).validate()?;
    let labels = (1..=k)
        .map(|i| format!("a{i}"))
        .chain((1..=t).map(|i| format!("b{i}")));
    let mut g = Graph::new(labels)?;
    let a = |i: usize| i - 1;
    let b = |i: usize| k + i - 1;
    for i in 1..=k {
        for j in i + 1..=k {
            g.add_edge(a(i), a(j))?;
        }
    }
    for i in 1..=t {
        for j in i + 1..=t {
            g.add_edge(b(i), b(j))?;
        }
        g.add_edge(a(i), b(i))?;
    }
    Ok(g)
}

pub fn gamma_l(k: usize, n: usize) -> Result<Graph> {
    FamilyId::left(k, n).validate()?;
    two_sided(k, n, Side::Left)
}

pub fn gamma_r(k: usize, n: usize) -> Result<Graph> {
    FamilyId::right(k, n).validate()?;
    two_sided(k, n, Side::Right)
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn two_sided(k: usize, n: usize, side: Side) -> Result<Graph> {
    let labels = std::iter::once("c".to_string())
        .chain((1..=k).map(|i| format!("a{i}")))
        .chain((1..=k + n).map(|i| format!("b{i}")));
    let mut g = Graph::new(labels)?;
    let c = 0;
    let a = |i: usize| i;
    let b = |i: usize| k + i;
    for i in 1..=k {
        for j in i + 1..=k {
            g.add_edge(a(i), a(j))?;
        }
    }
    for i in 1..=k + n {
        for j in i + 1..=k + n {
            g.add_edge(b(i), b(j))?;
        }
    }
    for i in 1..=k {
        g.add_edge(a(i), b(i))?;
    }
    for i in 1..=n {
        g.add_edge(a(i), b(k + i))?;
    }
    match side {
        Side::Left => (1..=k).try_for_each(|i| g.add_edge(c, a(i)))?,
        Side::Right => (1..=k + n).try_for_each(|i| g.add_edge(c, b(i)))?,
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Diameter;

    fn edge_labels(g: &Graph) -> Vec<(String, String)> {
        let mut e: Vec<_> = g
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let (x, y) = (g.label(u).to_string(), g.label(v).to_string());
                if x < y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        e.sort();
        e
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut e: Vec<_> = list
            .iter()
            .map(|&(x, y)| {
                if x < y {
                    (x.to_string(), y.to_string())
                } else {
                    (y.to_string(), x.to_string())
                }
            })
            .collect();
        e.sort();
        e
    }

    #[test]
    fn gamma_kt_small_cases() {
        let g = gamma_kt(3, 1).unwrap();
        assert_eq!(
            edge_labels(&g),
            pairs(&[("a1", "a2"), ("a1", "a3"), ("a2", "a3"), ("a1", "b1")])
        );
        let g = gamma_kt(2, 2).unwrap();
        assert_eq!(
            edge_labels(&g),
            pairs(&[("a1", "a2"), ("b1", "b2"), ("a1", "b1"), ("a2", "b2")])
        );
        assert_eq!(edge_labels(&gamma_kt(1, 1).unwrap()), pairs(&[("a1", "b1")]));
        assert!(gamma_kt(2, 3).is_err());
        assert!(gamma_kt(2, 0).is_err());
    }

    #[test]
    fn gamma_l_and_r_examples() {
        let g = gamma_l(1, 1).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(
            edge_labels(&g),
            pairs(&[("c", "a1"), ("a1", "b1"), ("a1", "b2"), ("b1", "b2")])
        );
        assert_eq!(gamma_l(3, 2).unwrap().n(), 9);
        let r = gamma_r(3, 1).unwrap();
        assert_eq!(r.n(), 8);
        assert_eq!(r.neighbors(0), r.set_of(&["b1", "b2", "b3", "b4"]));
        let g = gamma_l(2, 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 9));
    }

    #[test]
    fn parameter_validation() {
        assert!(gamma_l(2, 3).is_err());
        assert!(gamma_l(0, 0).is_err());
        assert!(gamma_r(16, 1).is_err());
        // 2k+n+1 must stay within the vertex cap
        assert!(gamma_l(15, 2).is_err());
        assert!(gamma_l(15, 1).is_ok());
    }

    #[test]
    fn degree_structure_of_left_family() {
        for k in 1..=6 {
            for n in 1..=k {
                let g = gamma_l(k, n).unwrap();
                let a_side = g.vertices().difference(g.set_of(&["c"]));
                let a_set: crate::graph::VertexSet = (1..=k).collect();
                assert_eq!(g.degree(0), k);
                for i in 1..=k {
                    let expected = if i <= n { k + 2 } else { k + 1 };
                    assert_eq!(g.degree(i), expected, "deg a{i} in L({k},{n})");
                }
                for v in a_side.difference(a_set) {
                    assert_eq!(g.neighbors(v).intersection(a_set).len(), 1);
                }
            }
        }
    }

    #[test]
    fn families_have_diameter_two() {
        for k in 1..=6 {
            for n in 1..=k {
                assert_eq!(gamma_l(k, n).unwrap().diameter(), Diameter::Finite(2));
                assert_eq!(gamma_r(k, n).unwrap().diameter(), Diameter::Finite(2));
                assert!(gamma_l(k, n).unwrap().find_odd_complement_cycle().is_none());
                assert!(gamma_r(k, n).unwrap().find_odd_complement_cycle().is_none());
            }
        }
    }
}
