use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ChartNode, ExplorationBounds, MutationEdge, MutationGraph};
use crate::delpezzo::WeightTriple;
use crate::error::{parse_json, Error, Result};
use crate::lattice::{DualVector, IntMatrix, LatticeVector};
use crate::mutation::CombinatorialMutationData;
use crate::polytope::{canonical_form, FanoPolytope, LatticePolytope};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct NodeJson {
    key: String,
    vertices: Vec<LatticeVector>,
    depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<WeightTriple>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: String,
    to: String,
    u: DualVector,
    factor: LatticePolytope,
    conjugator: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    root: String,
    bounds: ExplorationBounds,
    nodes: Vec<NodeJson>,
    edges: Vec<EdgeJson>,
    truncated: bool,
    format_version: u64,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: Option<u64>,
}

pub fn graph_to_json(g: &MutationGraph) -> Result<String> {
    let doc = GraphJson {
        root: g.root.clone(),
        bounds: g.bounds.clone(),
        nodes: g
            .nodes
            .iter()
            .map(|n| NodeJson {
                key: n.key.clone(),
                vertices: n.representative.vertices().to_vec(),
                depth: n.depth,
                weights: n.weights.clone(),
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeJson {
                from: e.from.clone(),
                to: e.to.clone(),
                u: e.data.u().clone(),
                factor: e.data.factor().clone(),
                conjugator: e.conjugator.clone(),
            })
            .collect(),
        truncated: g.truncated,
        format_version: FORMAT_VERSION,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidDocument(e.to_string()))
}

/// Parses a graph document, checking the version, node keys and edge
/// endpoints.
pub fn graph_from_json(text: &str) -> Result<MutationGraph> {
    let probe: VersionProbe = parse_json(text)?;
    match probe.format_version {
        Some(FORMAT_VERSION) => {}
        Some(found) => {
            return Err(Error::VersionMismatch {
                expected: FORMAT_VERSION,
                found,
            })
        }
        None => return Err(Error::InvalidDocument("missing \"format_version\"".into())),
    }
    let doc: GraphJson = parse_json(text)?;
    doc.bounds.validate()?;
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for n in doc.nodes {
        let rep = FanoPolytope::new(LatticePolytope::hull(&n.vertices)?)?;
        let cf = canonical_form(rep.polytope())?;
        if cf.key != n.key || cf.representative != *rep.polytope() {
            return Err(Error::InvalidDocument(format!(
                "node {} is not its canonical representative",
                n.key
            )));
        }
        nodes.push(ChartNode {
            key: n.key,
            representative: rep,
            depth: n.depth,
            weights: n.weights,
        });
    }
    let known = |k: &str| nodes.iter().any(|n: &ChartNode| n.key == k);
    if !known(&doc.root) {
        return Err(Error::InvalidDocument("root is not a node".into()));
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in doc.edges {
        if !known(&e.from) || !known(&e.to) {
            return Err(Error::InvalidDocument(format!("edge {} -> {} has a missing endpoint", e.from, e.to)));
        }
        if !e.conjugator.is_unimodular() {
            return Err(Error::InvalidDocument("edge conjugator is not unimodular".into()));
        }
        edges.push(MutationEdge {
            from: e.from,
            to: e.to,
            data: CombinatorialMutationData::new(e.u, e.factor)?,
            conjugator: e.conjugator,
        });
    }
    Ok(MutationGraph {
        root: doc.root,
        bounds: doc.bounds,
        nodes,
        edges,
        truncated: doc.truncated,
    })
}

pub fn save_graph(g: &MutationGraph, destination: &Path) -> Result<()> {
    let mut text = graph_to_json(g)?;
    text.push('\n');
    std::fs::write(destination, text)?;
    Ok(())
}

pub fn load_graph(source: &Path) -> Result<MutationGraph> {
    graph_from_json(&std::fs::read_to_string(source)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::explore;

    fn graph() -> MutationGraph {
        let p2 = FanoPolytope::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap();
        let bounds = ExplorationBounds {
            max_depth: 3,
            ..Default::default()
        };
        explore(&p2, &bounds).unwrap()
    }

    #[test]
    fn round_trip() {
        let g = graph();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        save_graph(&g, &path).unwrap();
        assert_eq!(load_graph(&path).unwrap(), g);
    }

    #[test]
    fn truncated_file_reports_offset() {
        let text = graph_to_json(&graph()).unwrap();
        let cut = &text[..text.len() / 2];
        match graph_from_json(cut) {
            Err(Error::Parse { offset, .. }) => assert!(offset > 0 && offset <= cut.len()),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn version_is_checked() {
        let text = graph_to_json(&graph()).unwrap().replace("\"format_version\": 1", "\"format_version\": 2");
        assert_eq!(
            graph_from_json(&text),
            Err(Error::VersionMismatch { expected: 1, found: 2 })
        );
    }
}
