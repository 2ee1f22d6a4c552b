//! Occurrence analysis for prime character degree graphs of solvable groups.
//!
//! The crate builds the graph families `Γ_{k,t}`, `Γ^L(k,n)` and `Γ^R(k,n)`,
//! classifies graphs as occurring / not occurring / unknown using sound
//! certificate rules, decides (strong) admissibility of vertices, checks the
//! five-clause no-normal-Sylow hypothesis, and assembles machine-checked
//! proof reports for concrete parameters.

pub mod admissibility;
pub mod canon;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod hypothesis;
pub mod oracle;
pub mod proof;

pub use error::{Error, Result};
pub use graph::{Diameter, Graph, VertexSet};
