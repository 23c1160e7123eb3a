//! Exact lattice and rational polytopes.
//!
//! Polygons are fully supported; 3-dimensional polytopes are supported at
//! desk scale. Lattice points are enumerated by scanning all coordinates but
//! the last over the vertex bounding box and solving the last coordinate
//! exactly from the H-description.

mod dual;
mod hull;
mod normal_form;

pub use dual::{normalized_volume, polar_dual, RationalPolytope};
pub use hull::Constraint;
pub use normal_form::{canonical_form, CanonicalForm};

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{is_primitive, pairing, DualVector, IntMatrix, LatticeVector, UnimodularCompletion};
use crate::num::max_abs;

/// A convex lattice polytope, stored by its vertices (exactly the extreme
/// points) and an H-description.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    ambient: usize,
    affine_dim: usize,
    vertices: Vec<LatticeVector>,
    constraints: Vec<Constraint>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    pub fn hull(points: &[LatticeVector]) -> Result<Self> {
        let h = hull::hull(points)?;
        Ok(LatticePolytope {
            ambient: points[0].dim(),
            affine_dim: h.affine_dim,
            vertices: h.vertices,
            constraints: h.constraints,
        })
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        let pts: Vec<LatticeVector> = points
            .iter()
            .map(|p| LatticeVector::from(p.to_vec()))
            .collect();
        Self::hull(&pts)
    }

    pub fn point(p: LatticeVector) -> Self {
        Self::hull(&[p]).expect("a single point has a hull")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull; lower-dimensional hulls are flagged by
    /// this being smaller than [`Self::ambient_dim`].
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Facet inequalities with primitive inner normals. Only meaningful for
    /// full-dimensional polytopes.
    pub fn facets(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| !c.equality)
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        x.dim() == self.ambient && self.constraints.iter().all(|c| c.holds(x.coords()))
    }

    pub fn contains_strictly(&self, x: &LatticeVector) -> bool {
        self.is_full_dimensional() && self.facets().all(|c| c.value(x.coords()) > c.level)
    }

    pub fn vertex_set(&self) -> BTreeSet<LatticeVector> {
        self.vertices.iter().cloned().collect()
    }

    pub fn transform(&self, m: &IntMatrix) -> Self {
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|v| v.transform(m)).collect();
        Self::hull(&pts).expect("image of a nonempty polytope")
    }

    pub fn translate(&self, t: &LatticeVector) -> Self {
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|v| v.add(t)).collect();
        Self::hull(&pts).expect("translate of a nonempty polytope")
    }

    /// `k·P` for `k ≥ 0`.
    pub fn dilate(&self, k: &BigInt) -> Self {
        assert!(!k.is_negative(), "negative dilation");
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|v| v.scale(k)).collect();
        Self::hull(&pts).expect("dilate of a nonempty polytope")
    }

    pub fn max_abs_coordinate(&self) -> BigInt {
        max_abs(self.vertices.iter().flat_map(|v| v.coords()))
    }

    /// All lattice points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        let n = self.ambient;
        let ranges: Vec<(BigInt, BigInt)> = (0..n)
            .map(|i| {
                let xs = self.vertices.iter().map(|v| &v[i]);
                (xs.clone().min().unwrap().clone(), xs.max().unwrap().clone())
            })
            .collect();
        let mut out = Vec::new();
        scan(&self.constraints, &ranges, &mut Vec::new(), &mut out);
        out.into_iter().map(LatticeVector::new).collect()
    }

    pub fn lattice_point_count(&self) -> usize {
        self.lattice_points().len()
    }

    /// Lattice points on the relative boundary (on some facet).
    pub fn boundary_lattice_points(&self) -> Vec<LatticeVector> {
        self.lattice_points()
            .into_iter()
            .filter(|p| self.facets().any(|c| c.is_tight(p.coords())))
            .collect()
    }

    pub fn interior_lattice_points(&self) -> Vec<LatticeVector> {
        self.lattice_points()
            .into_iter()
            .filter(|p| self.facets().all(|c| !c.is_tight(p.coords())))
            .collect()
    }

    fn heights(&self, u: &DualVector) -> Result<Vec<BigInt>> {
        self.vertices.iter().map(|v| pairing(u, v)).collect()
    }

    /// Minimum and maximum of `⟨u, ·⟩` over the polytope.
    pub fn height_range(&self, u: &DualVector) -> Result<(BigInt, BigInt)> {
        let hs = self.heights(u)?;
        Ok((
            hs.iter().min().unwrap().clone(),
            hs.iter().max().unwrap().clone(),
        ))
    }
}

/// Recursively scans all coordinates but the last and solves the last one
/// exactly from the constraints.
fn scan(
    constraints: &[Constraint],
    ranges: &[(BigInt, BigInt)],
    prefix: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    let n = ranges.len();
    if prefix.len() + 1 == n {
        if let Some((lo, hi)) = solve_last(constraints, prefix, &ranges[n - 1]) {
            let mut t = lo;
            while t <= hi {
                let mut p = prefix.clone();
                p.push(t.clone());
                out.push(p);
                t += 1;
            }
        }
        return;
    }
    let (lo, hi) = &ranges[prefix.len()];
    let mut x = lo.clone();
    while &x <= hi {
        prefix.push(x.clone());
        scan(constraints, ranges, prefix, out);
        prefix.pop();
        x += 1;
    }
}

/// Integer interval for the last coordinate given the others, or `None`.
fn solve_last(
    constraints: &[Constraint],
    prefix: &[BigInt],
    bounds: &(BigInt, BigInt),
) -> Option<(BigInt, BigInt)> {
    let k = prefix.len();
    let (mut lo, mut hi) = bounds.clone();
    for c in constraints {
        let coeffs = c.normal.coords();
        let a = &coeffs[k];
        let rest: BigInt = coeffs[..k].iter().zip(prefix).map(|(x, y)| x * y).sum();
        let rhs = &c.level - rest;
        if a.is_zero() {
            let ok = if c.equality {
                rhs.is_zero()
            } else {
                !rhs.is_positive()
            };
            if !ok {
                return None;
            }
            continue;
        }
        if c.equality {
            if !rhs.is_multiple_of(a) {
                return None;
            }
            let t = &rhs / a;
            lo = lo.max(t.clone());
            hi = hi.min(t);
        } else if a.is_positive() {
            lo = lo.max(ceil_div(&rhs, a));
        } else {
            hi = hi.min(rhs.div_floor(a));
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<LatticeVector>,
}

impl Serialize for LatticePolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson {
            dim: self.ambient,
            vertices: self.vertices.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(d)?;
        if raw.vertices.iter().any(|v| v.dim() != raw.dim) {
            return Err(serde::de::Error::custom(
                "vertex dimension disagrees with \"dim\"",
            ));
        }
        LatticePolytope::hull(&raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// A Fano polytope: full dimensional, origin strictly interior, every
/// vertex primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoPolytope(LatticePolytope);

impl FanoPolytope {
    pub fn new(p: LatticePolytope) -> Result<Self> {
        fano_violation(&p).map_or(Ok(FanoPolytope(p)), |why| Err(Error::NotFano(why)))
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        Self::new(LatticePolytope::from_i64(points)?)
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.0
    }

    pub fn into_polytope(self) -> LatticePolytope {
        self.0
    }

    pub fn transform(&self, m: &IntMatrix) -> Self {
        FanoPolytope(self.0.transform(m))
    }
}

impl Deref for FanoPolytope {
    type Target = LatticePolytope;
    fn deref(&self) -> &LatticePolytope {
        &self.0
    }
}

impl fmt::Display for FanoPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for FanoPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FanoPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = LatticePolytope::deserialize(d)?;
        FanoPolytope::new(p).map_err(serde::de::Error::custom)
    }
}

fn fano_violation(p: &LatticePolytope) -> Option<String> {
    if !p.is_full_dimensional() {
        return Some(format!(
            "affine dimension {} in ambient {}",
            p.affine_dim, p.ambient
        ));
    }
    if !p.contains_strictly(&LatticeVector::zero(p.ambient)) {
        return Some("origin is not in the strict interior".into());
    }
    p.vertices
        .iter()
        .find(|v| !is_primitive(v.coords()).unwrap_or(false))
        .map(|v| format!("vertex {v} is not primitive"))
}

pub fn hull(points: &[LatticeVector]) -> Result<LatticePolytope> {
    LatticePolytope::hull(points)
}

pub fn is_fano(p: &LatticePolytope) -> bool {
    fano_violation(p).is_none()
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

fn require_primitive(u: &DualVector) -> Result<()> {
    if !is_primitive(u.coords())? {
        return Err(Error::NotPrimitive(u.to_string()));
    }
    Ok(())
}

/// Lattice points of `p` at height `⟨u, ·⟩ = k`.
pub fn height_slice_points(p: &LatticePolytope, u: &DualVector, k: &BigInt) -> Result<Vec<LatticeVector>> {
    check_dims(p.ambient, u.dim())?;
    require_primitive(u)?;
    let completion = UnimodularCompletion::new(u)?;
    let adapted: Vec<Vec<BigInt>> = p.vertices.iter().map(|v| completion.to_adapted(v)).collect();
    let constraints: Vec<Constraint> = p
        .constraints
        .iter()
        .map(|c| Constraint {
            normal: c.normal.transport(&completion.inverse),
            level: c.level.clone(),
            equality: c.equality,
        })
        .collect();
    let n = p.ambient;
    let mut ranges: Vec<(BigInt, BigInt)> = (0..n)
        .map(|i| {
            let xs = adapted.iter().map(|y| &y[i]);
            (xs.clone().min().unwrap().clone(), xs.max().unwrap().clone())
        })
        .collect();
    if k < &ranges[0].0 || k > &ranges[0].1 {
        return Ok(Vec::new());
    }
    ranges[0] = (k.clone(), k.clone());
    let mut found = Vec::new();
    if n == 1 {
        if p.contains(&completion.from_adapted(&[k.clone()])) {
            found.push(vec![k.clone()]);
        }
    } else {
        scan(&constraints, &ranges, &mut vec![k.clone()], &mut found);
    }
    let mut pts: Vec<LatticeVector> = found.iter().map(|y| completion.from_adapted(y)).collect();
    pts.sort();
    Ok(pts)
}

/// Hull of the lattice points of `p` at height `k`; `None` when there are
/// none, even if the rational slice is nonempty.
pub fn height_slice(p: &LatticePolytope, u: &DualVector, k: &BigInt) -> Result<Option<LatticePolytope>> {
    let pts = height_slice_points(p, u, k)?;
    if pts.is_empty() {
        return Ok(None);
    }
    LatticePolytope::hull(&pts).map(Some)
}

pub fn vertices_at_height(p: &LatticePolytope, u: &DualVector, k: &BigInt) -> Result<Vec<LatticeVector>> {
    check_dims(p.ambient, u.dim())?;
    require_primitive(u)?;
    let mut out = Vec::new();
    for v in &p.vertices {
        if &pairing(u, v)? == k {
            out.push(v.clone());
        }
    }
    Ok(out)
}

pub fn minkowski_sum(a: &LatticePolytope, b: &LatticePolytope) -> Result<LatticePolytope> {
    check_dims(a.ambient, b.ambient)?;
    let pts: Vec<LatticeVector> = a
        .vertices
        .iter()
        .flat_map(|x| b.vertices.iter().map(move |y| x.add(y)))
        .collect();
    LatticePolytope::hull(&pts)
}

/// Hull of all lattice points `x` with `x + B ⊆ A`; `None` if there are none.
pub fn integral_minkowski_difference(
    a: &LatticePolytope,
    b: &LatticePolytope,
) -> Result<Option<LatticePolytope>> {
    check_dims(a.ambient, b.ambient)?;
    let anchor = &b.vertices[0];
    let fits: Vec<LatticeVector> = a
        .lattice_points()
        .into_iter()
        .map(|p| p.sub(anchor))
        .filter(|x| b.vertices.iter().all(|bv| a.contains(&x.add(bv))))
        .collect();
    if fits.is_empty() {
        return Ok(None);
    }
    LatticePolytope::hull(&fits).map(Some)
}

/// Lattice length of the segment `[a, b]`.
pub fn lattice_length(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    b.sub(a).content()
}
