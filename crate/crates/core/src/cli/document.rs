use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgraph::WeightedDigraph;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk form of a graph. Weights are expression strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub from: String,
    pub to: String,
    pub weight: String,
}

impl GraphDocument {
    pub fn from_graph(g: &WeightedDigraph) -> Self {
        GraphDocument {
            version: FORMAT_VERSION,
            vertices: g.labels().to_vec(),
            edges: g
                .edges()
                .map(|(a, b, w)| EdgeDocument {
                    from: g.label(a).to_string(),
                    to: g.label(b).to_string(),
                    weight: w.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WeightedDigraph> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("unsupported document version {}", self.version),
            });
        }
        WeightedDigraph::build_parsed(
            self.vertices.iter().map(String::as_str),
            self.edges
                .iter()
                .map(|e| (e.from.as_str(), e.to.as_str(), e.weight.as_str())),
        )
    }
}

/// Parse a JSON graph document.
pub fn parse_graph(text: &[u8]) -> Result<WeightedDigraph> {
    let doc: GraphDocument = serde_json::from_slice(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    doc.to_graph()
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Canonical JSON text for `g`, newline terminated.
pub fn emit(g: &WeightedDigraph) -> String {
    let mut s =
        serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("document serializes");
    s.push('\n');
    s
}
