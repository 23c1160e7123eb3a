use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use serde::Serialize;

use super::{degree, ExplorationBounds, Explorer, MutationEdge};
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::mutation::{apply_combinatorial, CombinatorialMutationData, MutationData};
use crate::num::rational_string;
use crate::polytope::{canonical_form, FanoPolytope};

/// A sequence of mutations written in the running coordinates of `P1`,
/// followed by a unimodular map onto `P2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationPath {
    pub steps: Vec<CombinatorialMutationData>,
    /// `conjugator · (last polytope of the transport) = P2`.
    pub conjugator: IntMatrix,
    /// Canonical keys of the classes visited, starting with `P1`'s.
    pub keys: Vec<String>,
}

impl MutationPath {
    /// Replays every step from `p1` and checks the endpoint against `p2`.
    pub fn verify(&self, p1: &FanoPolytope, p2: &FanoPolytope) -> Result<()> {
        let data: Vec<MutationData> = self.steps.iter().cloned().map(MutationData::Combinatorial).collect();
        let chain = transport_polarization(p1, &data)?;
        for (i, (p, key)) in chain.iter().zip(&self.keys).enumerate() {
            if &canonical_form(p.polytope())?.key != key {
                return Err(Error::InvalidDocument(format!("step {i} leaves the recorded class")));
            }
        }
        let end = chain.last().expect("chain contains the start");
        if &end.transform(&self.conjugator) != p2 {
            return Err(Error::InvalidDocument("path does not end at the target".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NotFoundReason {
    /// The polar duals have different normalized volumes, so no sequence of
    /// mutations can connect the two classes.
    DegreeMismatch {
        #[serde(with = "rational_string")]
        from: BigRational,
        #[serde(with = "rational_string")]
        to: BigRational,
    },
    /// Bounds stopped the search before the class of `P1` was exhausted.
    BoundsExhausted { explored: usize },
    /// The search closed up without meeting `P2`'s class.
    Disjoint { explored: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PathOutcome {
    Found(MutationPath),
    NotFound(NotFoundReason),
}

/// Shortest mutation path from the class of `p1` to the class of `p2`
/// within `bounds`.
pub fn find_path(p1: &FanoPolytope, p2: &FanoPolytope, bounds: &ExplorationBounds) -> Result<PathOutcome> {
    if p1.ambient_dim() != p2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.ambient_dim(),
            found: p2.ambient_dim(),
        });
    }
    if !(2..=3).contains(&p1.ambient_dim()) {
        return Err(Error::UnsupportedDimension(p1.ambient_dim()));
    }
    let (d1, d2) = (degree(p1)?, degree(p2)?);
    if d1 != d2 {
        return Ok(PathOutcome::NotFound(NotFoundReason::DegreeMismatch { from: d1, to: d2 }));
    }
    let target = canonical_form(p2.polytope())?;
    let (mut ex, w1) = Explorer::new(p1, bounds)?;
    let mut depth = 0;
    while !ex.contains(&target.key) {
        if depth >= bounds.max_depth {
            // record edges leaving the last layer so truncation is reported
            ex.expand_layer(depth, false)?;
            break;
        }
        if !ex.expand_layer(depth, true)? {
            break;
        }
        depth += 1;
    }
    let graph = ex.finish();
    if graph.node(&target.key).is_none() {
        let explored = graph.nodes.len();
        return Ok(PathOutcome::NotFound(if graph.truncated {
            NotFoundReason::BoundsExhausted { explored }
        } else {
            NotFoundReason::Disjoint { explored }
        }));
    }

    // breadth-first search over edges in both directions
    let mut adjacency: HashMap<&str, Vec<MutationEdge>> = HashMap::new();
    for e in &graph.edges {
        adjacency.entry(e.from.as_str()).or_default().push(e.clone());
        adjacency.entry(e.to.as_str()).or_default().push(e.reversed());
    }
    let mut parent: HashMap<String, MutationEdge> = HashMap::new();
    let mut queue = VecDeque::from([graph.root.clone()]);
    let mut seen = std::collections::HashSet::from([graph.root.clone()]);
    while let Some(k) = queue.pop_front() {
        if k == target.key {
            break;
        }
        for e in adjacency.get(k.as_str()).into_iter().flatten() {
            if seen.insert(e.to.clone()) {
                parent.insert(e.to.clone(), e.clone());
                queue.push_back(e.to.clone());
            }
        }
    }
    let mut edges = Vec::new();
    let mut at = target.key.clone();
    while at != graph.root {
        let e = parent.get(&at).expect("target reachable from the root");
        at = e.from.clone();
        edges.push(e.clone());
    }
    edges.reverse();

    // C maps representative coordinates of the current node to the running
    // coordinates of P1.
    let mut c = w1.unimodular_inverse()?;
    let mut steps = Vec::with_capacity(edges.len());
    let mut keys = vec![graph.root.clone()];
    for e in &edges {
        let c_inv = c.unimodular_inverse()?;
        let u = e.data.u().transport(&c_inv);
        let factor = e.data.factor().transform(&c);
        steps.push(CombinatorialMutationData::new(u, factor)?);
        c = c.mul(&e.conjugator.unimodular_inverse()?);
        keys.push(e.to.clone());
    }
    let w2_inv = target.witness.unimodular_inverse()?;
    let conjugator = w2_inv.mul(&c.unimodular_inverse()?);
    let path = MutationPath {
        steps,
        conjugator,
        keys,
    };
    debug_assert!(path.verify(p1, p2).is_ok());
    Ok(PathOutcome::Found(path))
}

/// `P0, μ₁(P0), μ₂(μ₁(P0)), …`; algebraic steps act through `(u, Newt h)`.
pub fn transport_polarization(p0: &FanoPolytope, path: &[MutationData]) -> Result<Vec<FanoPolytope>> {
    let mut out = vec![p0.clone()];
    for (index, step) in path.iter().enumerate() {
        let next = apply_combinatorial(&step.to_combinatorial(), out.last().unwrap()).map_err(|e| Error::PathStep {
            index,
            source: Box::new(e),
        })?;
        out.push(next);
    }
    Ok(out)
}
