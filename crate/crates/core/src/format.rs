//! Graph JSON and DOT.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `{"vertices": [...], "edges": [["u", "v"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertices: g.labels().to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|(u, v)| [g.label(u).to_string(), g.label(v).to_string()])
                .collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let edges: Vec<(&str, &str)> = j.edges.iter().map(|[u, v]| (u.as_str(), v.as_str())).collect();
        Graph::from_labeled_edges(j.vertices.clone(), &edges)
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph JSON serializes")
}

pub fn from_json(s: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
    Graph::try_from(j)
}

pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("graph \"{}\" {{\n", escape(name));
    for l in g.labels() {
        out.push_str(&format!("  \"{}\";\n", escape(l)));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  \"{}\" -- \"{}\";\n", escape(g.label(u)), escape(g.label(v))));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
