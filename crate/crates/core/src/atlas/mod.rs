//! Exploration of mutation-equivalence classes of Fano polytopes up to
//! `GL(n, ℤ)`.

mod io;
mod path;
mod seed;

pub use io::{graph_from_json, graph_to_json, load_graph, save_graph, FORMAT_VERSION};
pub use path::{find_path, transport_polarization, MutationPath, NotFoundReason, PathOutcome};
pub use seed::{seed_of, Seed};

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delpezzo::{identify_wps, WeightTriple};
use crate::error::{Error, Result};
use crate::lattice::{perp_basis, DualVector, IntMatrix, LatticeVector};
use crate::mutation::{apply_combinatorial, CombinatorialMutationData};
use crate::num::bigint_number;
use crate::polytope::{canonical_form, FanoPolytope, LatticePolytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplorationBounds {
    pub max_depth: u32,
    pub max_nodes: usize,
    /// Largest absolute vertex coordinate of a node's representative.
    #[serde(with = "bigint_number")]
    pub max_coordinate: BigInt,
    pub max_factor_dilation: u32,
}

impl Default for ExplorationBounds {
    fn default() -> Self {
        ExplorationBounds {
            max_depth: 8,
            max_nodes: 10_000,
            max_coordinate: BigInt::from(1_000_000),
            max_factor_dilation: 16,
        }
    }
}

impl ExplorationBounds {
    /// A depth of zero is allowed (root only); the other bounds must be positive.
    pub fn validate(&self) -> Result<()> {
        if self.max_nodes == 0 || self.max_factor_dilation == 0 || self.max_coordinate <= BigInt::zero() {
            return Err(Error::InvalidDocument(
                "max_nodes, max_coordinate and max_factor_dilation must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartNode {
    pub key: String,
    pub representative: FanoPolytope,
    pub depth: u32,
    pub weights: Option<WeightTriple>,
}

impl ChartNode {
    fn new(key: String, representative: FanoPolytope, depth: u32) -> Result<Self> {
        let weights = if representative.ambient_dim() == 2 && representative.vertices().len() == 3 {
            identify_wps(&representative)?
        } else {
            None
        };
        Ok(ChartNode {
            key,
            representative,
            depth,
            weights,
        })
    }
}

/// An edge `from → to`: the datum acts on the `from` representative and
/// `conjugator · μ(from) = to` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationEdge {
    pub from: String,
    pub to: String,
    pub data: CombinatorialMutationData,
    pub conjugator: IntMatrix,
}

impl MutationEdge {
    /// The same edge read from `to` back to `from`.
    pub fn reversed(&self) -> MutationEdge {
        let w_inv = self.conjugator.unimodular_inverse().expect("conjugators are unimodular");
        let u = self.data.u().neg().transport(&w_inv);
        let factor = self.data.factor().transform(&self.conjugator);
        MutationEdge {
            from: self.to.clone(),
            to: self.from.clone(),
            data: CombinatorialMutationData::new(u, factor).expect("transported datum stays valid"),
            conjugator: w_inv,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationGraph {
    pub root: String,
    pub bounds: ExplorationBounds,
    pub nodes: Vec<ChartNode>,
    pub edges: Vec<MutationEdge>,
    pub truncated: bool,
}

impl MutationGraph {
    pub fn node(&self, key: &str) -> Option<&ChartNode> {
        self.nodes.iter().find(|n| n.key == key)
    }

    pub fn index(&self) -> HashMap<&str, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.key.as_str(), i)).collect()
    }

    /// Re-applies every edge and checks that it lands on its target.
    pub fn verify_edges(&self) -> Result<()> {
        let index = self.index();
        for (i, e) in self.edges.iter().enumerate() {
            let lookup = |k: &str| {
                index
                    .get(k)
                    .map(|&j| &self.nodes[j])
                    .ok_or_else(|| Error::InvalidDocument(format!("edge {i} names unknown node {k}")))
            };
            let from = lookup(&e.from)?;
            let to = lookup(&e.to)?;
            let image = apply_combinatorial(&e.data, &from.representative)?;
            if image.transform(&e.conjugator) != to.representative {
                return Err(Error::InvalidDocument(format!("edge {i} does not replay")));
            }
            if canonical_form(image.polytope())?.key != e.to {
                return Err(Error::InvalidDocument(format!("edge {i} lands on another class")));
            }
        }
        Ok(())
    }
}

/// Translates `H` so that its lexicographically smallest vertex is the origin.
fn normalize_factor(h: &LatticePolytope) -> LatticePolytope {
    h.translate(&h.vertices()[0].neg())
}

fn segment(d: &LatticeVector) -> LatticePolytope {
    LatticePolytope::hull(&[LatticeVector::zero(d.dim()), d.clone()]).expect("nonempty")
}

/// Candidate factor shapes for a facet normal `u`; each is tried at
/// dilations `1, 2, …` until the mutation stops being defined.
fn generators(p: &FanoPolytope, u: &DualVector, level: &BigInt) -> Result<Vec<LatticePolytope>> {
    match p.ambient_dim() {
        2 => Ok(vec![segment(&perp_basis(u)?.vectors[0])]),
        3 => {
            let bottom: Vec<LatticeVector> = p
                .vertices()
                .iter()
                .filter(|v| crate::lattice::pairing(u, v).is_ok_and(|h| &h == level))
                .cloned()
                .collect();
            let face = LatticePolytope::hull(&bottom)?;
            let mut shapes = Vec::new();
            let fv = face.vertices();
            // primitive edge directions of the bottom facet, up to sign
            let mut dirs = std::collections::BTreeSet::new();
            for a in fv {
                for b in fv {
                    if a < b && face.facets().filter(|c| c.is_tight(a.coords()) && c.is_tight(b.coords())).count() > 0 {
                        dirs.insert(b.sub(a).primitive_part());
                    }
                }
            }
            shapes.extend(dirs.iter().map(segment));
            // the facet's own shape, divided by its lattice content
            let base = &fv[0];
            let diffs: Vec<LatticeVector> = fv.iter().map(|v| v.sub(base)).collect();
            let g = crate::num::gcd_all(diffs.iter().flat_map(|d| d.coords()));
            if !g.is_zero() {
                let shape: Vec<LatticeVector> = diffs
                    .iter()
                    .map(|d| LatticeVector::new(d.coords().iter().map(|x| x / &g).collect()))
                    .collect();
                let shape = normalize_factor(&LatticePolytope::hull(&shape)?);
                if shape.affine_dim() == 2 {
                    shapes.push(shape);
                }
            }
            Ok(shapes)
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Moves together with their results.
fn moves_with_results(
    p: &FanoPolytope,
    bounds: &ExplorationBounds,
) -> Result<Vec<(CombinatorialMutationData, FanoPolytope)>> {
    let n = p.ambient_dim();
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if n == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for facet in p.facets() {
        let u = facet.normal.clone();
        for shape in generators(p, &u, &facet.level)? {
            for d in 1..=bounds.max_factor_dilation {
                let factor = normalize_factor(&shape.dilate(&BigInt::from(d)));
                let data = CombinatorialMutationData::new(u.clone(), factor)?;
                match apply_combinatorial(&data, p) {
                    Ok(q) => {
                        if seen.insert(data_key(&data)) {
                            out.push((data, q));
                        }
                    }
                    // dilating further only shrinks the room at every height
                    Err(Error::Undefined { .. }) => break,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

/// Mutation data `(u, H)` with `u` an inner facet normal, `H` a lattice
/// segment (polygons) or a dilated generator (dimension 3) in `u⊥` with its
/// smallest vertex at the origin, for which the mutation is defined.
pub fn enumerate_moves(p: &FanoPolytope, bounds: &ExplorationBounds) -> Result<Vec<CombinatorialMutationData>> {
    Ok(moves_with_results(p, bounds)?.into_iter().map(|(d, _)| d).collect())
}

pub(crate) struct Explorer<'a> {
    bounds: &'a ExplorationBounds,
    graph: MutationGraph,
    index: HashMap<String, usize>,
    covered: HashSet<(String, DataKey)>,
}

impl<'a> Explorer<'a> {
    pub(crate) fn new(root: &FanoPolytope, bounds: &'a ExplorationBounds) -> Result<(Self, IntMatrix)> {
        bounds.validate()?;
        let cf = canonical_form(root.polytope())?;
        let rep = FanoPolytope::new(cf.representative)?;
        let node = ChartNode::new(cf.key.clone(), rep, 0)?;
        let graph = MutationGraph {
            root: cf.key.clone(),
            bounds: bounds.clone(),
            nodes: vec![node],
            edges: Vec::new(),
            truncated: false,
        };
        let index = HashMap::from([(cf.key, 0)]);
        Ok((
            Explorer {
                bounds,
                graph,
                index,
                covered: HashSet::new(),
            },
            cf.witness,
        ))
    }

    pub(crate) fn contains(&self, key: &str) -> bool {
        self.index.contains_key(key)
    }

    /// Expands every node of depth `depth`. New nodes are only admitted when
    /// `admit` is set; otherwise their appearance marks the graph truncated.
    /// Returns whether any node was added.
    pub(crate) fn expand_layer(&mut self, depth: u32, admit: bool) -> Result<bool> {
        let layer: Vec<usize> = (0..self.graph.nodes.len())
            .filter(|&i| self.graph.nodes[i].depth == depth)
            .collect();
        let computed: Vec<Result<Vec<(CombinatorialMutationData, String, FanoPolytope, IntMatrix)>>> = layer
            .par_iter()
            .map(|&i| {
                let rep = &self.graph.nodes[i].representative;
                moves_with_results(rep, self.bounds)?
                    .into_iter()
                    .map(|(data, image)| {
                        let cf = canonical_form(image.polytope())?;
                        Ok((data, cf.key, FanoPolytope::new(cf.representative)?, cf.witness))
                    })
                    .collect()
            })
            .collect();
        let mut grew = false;
        for (&i, moves) in layer.iter().zip(computed) {
            let from = self.graph.nodes[i].key.clone();
            for (data, key, rep, witness) in moves? {
                if !self.index.contains_key(&key) {
                    let admissible = admit
                        && self.graph.nodes.len() < self.bounds.max_nodes
                        && rep.max_abs_coordinate() <= self.bounds.max_coordinate;
                    if !admissible {
                        self.graph.truncated = true;
                        continue;
                    }
                    self.index.insert(key.clone(), self.graph.nodes.len());
                    self.graph.nodes.push(ChartNode::new(key.clone(), rep, depth + 1)?);
                    grew = true;
                }
                if self.covered.contains(&(from.clone(), data_key(&data))) {
                    continue;
                }
                let edge = MutationEdge {
                    from: from.clone(),
                    to: key,
                    data,
                    conjugator: witness,
                };
                let back = edge.reversed();
                self.covered.insert((edge.from.clone(), data_key(&edge.data)));
                self.covered.insert((back.from.clone(), data_key(&back.data)));
                self.graph.edges.push(edge);
            }
        }
        Ok(grew)
    }

    pub(crate) fn finish(self) -> MutationGraph {
        self.graph
    }
}

type DataKey = (DualVector, Vec<LatticeVector>);

/// Identifies a datum up to translating its factor.
fn data_key(d: &CombinatorialMutationData) -> DataKey {
    (d.u().clone(), normalize_factor(d.factor()).vertices().to_vec())
}

/// Breadth-first closure of `enumerate_moves` from `root`, deduplicated by
/// canonical form. The last layer is expanded too, so edges between known
/// nodes are recorded; `truncated` is set whenever a bound turned away a
/// new node.
pub fn explore(root: &FanoPolytope, bounds: &ExplorationBounds) -> Result<MutationGraph> {
    let (mut ex, _) = Explorer::new(root, bounds)?;
    for depth in 0..=bounds.max_depth {
        let admit = depth < bounds.max_depth;
        if !ex.expand_layer(depth, admit)? {
            break;
        }
    }
    Ok(ex.finish())
}

/// The common polar-dual normalized volume of a polytope's class.
pub(crate) fn degree(p: &FanoPolytope) -> Result<num_rational::BigRational> {
    crate::polytope::polar_dual(p).normalized_volume()
}
