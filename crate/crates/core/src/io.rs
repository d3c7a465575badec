//! JSON formats for graphs and vertex functions.
//!
//! Graph file:
//!
//! ```text
//! {"weights_symmetric": bool, "measure_mode": "unit"|"degree"|"explicit",
//!  "vertices": [{"id": str, "mu": number?}], "edges": [{"u": str, "v": str, "w": number}]}
//! ```
//!
//! `mu` is present exactly when `measure_mode` is `explicit`. Symmetric
//! graphs list each edge once; asymmetric graphs list every direction.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, Measure, MeasureMode, VertexFunction, WeightedGraph};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub weights_symmetric: bool,
    pub measure_mode: MeasureMode,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: String,
    pub v: String,
    pub w: f64,
}

impl GraphFile {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        let explicit = g.measure_mode() == MeasureMode::Explicit;
        let vertices =
            (0..g.len()).map(|x| VertexEntry { id: g.id(x).to_string(), mu: explicit.then(|| g.mu(x)) }).collect();
        let edges = g
            .arcs()
            .filter(|&(x, y, _)| !g.weights_symmetric() || x < y)
            .map(|(x, y, w)| EdgeEntry { u: g.id(x).to_string(), v: g.id(y).to_string(), w })
            .collect();
        Self { weights_symmetric: g.weights_symmetric(), measure_mode: g.measure_mode(), vertices, edges }
    }

    pub fn into_graph(self) -> Result<WeightedGraph> {
        let mut b = GraphBuilder::new(self.weights_symmetric);
        let mut mu = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            match (self.measure_mode, v.mu) {
                (MeasureMode::Explicit, Some(m)) => mu.push(m),
                (MeasureMode::Explicit, None) => {
                    return Err(Error::Format(format!("vertex `{}` lacks mu under explicit measure", v.id)))
                }
                (_, Some(_)) => {
                    return Err(Error::Format(format!("vertex `{}` carries mu but measure_mode is not explicit", v.id)))
                }
                (_, None) => {}
            }
            b.vertex(v.id.clone())?;
        }
        for e in &self.edges {
            b.edge(&e.u, &e.v, e.w)?;
        }
        let measure = match self.measure_mode {
            MeasureMode::Unit => Measure::Unit,
            MeasureMode::Degree => Measure::Degree,
            MeasureMode::Explicit => Measure::Explicit(mu),
        };
        b.build(measure)
    }
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(g)).expect("graph file serializes")
}

pub fn graph_from_json(text: &str) -> Result<WeightedGraph> {
    serde_json::from_str::<GraphFile>(text)?.into_graph()
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    graph_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_graph(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let mut text = graph_to_json(g);
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionFile {
    values: BTreeMap<String, f64>,
}

/// `{"values": {"<vertex-id>": number, ...}}`
pub fn function_to_json(g: &WeightedGraph, f: &VertexFunction) -> Result<String> {
    f.check_domain(g)?;
    let values = (0..g.len()).map(|x| (g.id(x).to_string(), f[x])).collect();
    Ok(serde_json::to_string(&FunctionFile { values })?)
}

pub fn function_from_json(g: &WeightedGraph, text: &str) -> Result<VertexFunction> {
    let file: FunctionFile = serde_json::from_str(text)?;
    let mut values = vec![f64::NAN; g.len()];
    for (id, v) in &file.values {
        values[g.index_of(id)?] = *v;
    }
    if let Some(x) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::Format(format!("function has no value at vertex `{}`", g.id(x))));
    }
    VertexFunction::new(g, values)
}
