//! Exact convex hulls of integer point sets in ambient dimension 1 to 3.
//!
//! The output is a vertex list in deterministic order (counter-clockwise
//! from the lexicographically smallest vertex for polygons, lexicographic
//! otherwise) together with an H-description: integer equations cutting out
//! the affine hull and primitive inequalities within it.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{dot, DualVector, IntMatrix, LatticeVector};

/// `⟨normal, x⟩ ≥ level`, or `= level` when `equality` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub normal: DualVector,
    pub level: BigInt,
    pub equality: bool,
}

impl Constraint {
    pub fn value(&self, x: &[BigInt]) -> BigInt {
        dot(self.normal.coords(), x)
    }

    pub fn holds(&self, x: &[BigInt]) -> bool {
        let v = self.value(x);
        if self.equality {
            v == self.level
        } else {
            v >= self.level
        }
    }

    pub fn is_tight(&self, x: &[BigInt]) -> bool {
        self.value(x) == self.level
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Hull {
    pub affine_dim: usize,
    pub vertices: Vec<LatticeVector>,
    pub constraints: Vec<Constraint>,
}

pub(crate) fn affine_rank(points: &[Vec<BigInt>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let diffs: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    IntMatrix::from_rows(&diffs).hermite().rank
}

pub(crate) fn hull(points: &[LatticeVector]) -> Result<Hull> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let n = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.dim(),
        });
    }
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let pts: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| p.coords().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let d = affine_rank(&pts);
    let equations = affine_equations(&pts, n);
    let (vertices, inequalities) = match d {
        0 => (vec![pts[0].clone()], Vec::new()),
        1 => segment(&pts),
        2 if n == 2 => {
            let cycle = monotone_chain(&pts, 0, 1);
            let ineqs = polygon_edges_2d(&cycle);
            (cycle, ineqs)
        }
        2 => flat_polygon(&pts, &equations[0].normal),
        _ => hull3(&pts),
    };
    let mut constraints = equations;
    constraints.extend(inequalities);
    Ok(Hull {
        affine_dim: d,
        vertices: vertices.into_iter().map(LatticeVector::new).collect(),
        constraints,
    })
}

/// Equations of the affine hull, one per vector of a saturated basis of
/// the annihilator of the direction space.
fn affine_equations(pts: &[Vec<BigInt>], n: usize) -> Vec<Constraint> {
    let normals: Vec<Vec<BigInt>> = if pts.len() < 2 {
        IntMatrix::identity(n).rows()
    } else {
        let diffs: Vec<Vec<BigInt>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
            .collect();
        // annihilator: y with diffs · y = 0, i.e. the left kernel of diffsᵀ
        let kernel = IntMatrix::from_rows(&diffs).transpose().left_kernel();
        if kernel.is_empty() {
            kernel
        } else {
            IntMatrix::from_rows(&kernel).hermite().hnf.rows()
        }
    };
    normals
        .into_iter()
        .map(|m| {
            let level = dot(&m, &pts[0]);
            Constraint {
                normal: DualVector::new(m),
                level,
                equality: true,
            }
        })
        .collect()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    DualVector::new(v).primitive_part().into_coords()
}

fn inequality(normal: Vec<BigInt>, through: &[BigInt]) -> Constraint {
    let normal = primitive(normal);
    let level = dot(&normal, through);
    Constraint {
        normal: DualVector::new(normal),
        level,
        equality: false,
    }
}

fn segment(pts: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Constraint>) {
    let dir = primitive(
        pts[1]
            .iter()
            .zip(&pts[0])
            .map(|(a, b)| a - b)
            .collect(),
    );
    let lo = pts.iter().min_by_key(|p| dot(&dir, p)).unwrap().clone();
    let hi = pts.iter().max_by_key(|p| dot(&dir, p)).unwrap().clone();
    let neg: Vec<BigInt> = dir.iter().map(|x| -x).collect();
    let ineqs = vec![inequality(dir, &lo), inequality(neg, &hi)];
    let mut ends = vec![lo, hi];
    ends.sort();
    (ends, ineqs)
}

fn cross2(o: &[BigInt], a: &[BigInt], b: &[BigInt], i: usize, j: usize) -> BigInt {
    (&a[i] - &o[i]) * (&b[j] - &o[j]) - (&a[j] - &o[j]) * (&b[i] - &o[i])
}

/// Andrew's monotone chain on coordinates `(i, j)`; strictly convex output,
/// counter-clockwise from the smallest point in `(i, j)` order.
fn monotone_chain(pts: &[Vec<BigInt>], i: usize, j: usize) -> Vec<Vec<BigInt>> {
    let mut sorted: Vec<&Vec<BigInt>> = pts.iter().collect();
    sorted.sort_by(|a, b| (&a[i], &a[j]).cmp(&(&b[i], &b[j])));
    sorted.dedup_by(|a, b| a[i] == b[i] && a[j] == b[j]);
    let mut lower: Vec<&Vec<BigInt>> = Vec::new();
    for p in &sorted {
        while lower.len() >= 2
            && !cross2(lower[lower.len() - 2], lower[lower.len() - 1], p, i, j).is_positive()
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Vec<BigInt>> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2
            && !cross2(upper[upper.len() - 2], upper[upper.len() - 1], p, i, j).is_positive()
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.into_iter().chain(upper).cloned().collect()
}

fn polygon_edges_2d(cycle: &[Vec<BigInt>]) -> Vec<Constraint> {
    (0..cycle.len())
        .map(|e| {
            let a = &cycle[e];
            let b = &cycle[(e + 1) % cycle.len()];
            // interior lies to the left of a counter-clockwise edge
            let normal = vec![-(&b[1] - &a[1]), &b[0] - &a[0]];
            inequality(normal, a)
        })
        .collect()
}

fn cross3(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Orders the points of a planar polygon in 3-space counter-clockwise in
/// the projection that drops the first coordinate where `normal` is nonzero.
pub(crate) fn planar_cycle(pts: &[Vec<BigInt>], normal: &[BigInt]) -> Vec<Vec<BigInt>> {
    let drop = normal.iter().position(|x| !x.is_zero()).unwrap();
    let (i, j) = match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let projected = monotone_chain(pts, i, j);
    // the projection is injective on the plane, so map back by lookup
    projected
        .into_iter()
        .map(|q| {
            pts.iter()
                .find(|p| p[i] == q[i] && p[j] == q[j])
                .unwrap()
                .clone()
        })
        .collect()
}

fn flat_polygon(pts: &[Vec<BigInt>], plane: &DualVector) -> (Vec<Vec<BigInt>>, Vec<Constraint>) {
    let cycle = planar_cycle(pts, plane.coords());
    let m = cycle.len();
    let ineqs = (0..m)
        .map(|e| {
            let a = &cycle[e];
            let b = &cycle[(e + 1) % m];
            let c = &cycle[(e + 2) % m];
            let mut q = cross3(plane.coords(), &sub(b, a));
            if dot(&q, &sub(c, a)).is_negative() {
                q = q.into_iter().map(|x| -x).collect();
            }
            inequality(q, a)
        })
        .collect();
    (cycle, ineqs)
}

/// Incremental hull of a full-dimensional point set in 3-space.
fn hull3(pts: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Constraint>) {
    let p0 = 0;
    let p1 = (1..pts.len()).find(|&i| pts[i] != pts[p0]).unwrap();
    let d01 = sub(&pts[p1], &pts[p0]);
    let p2 = (0..pts.len())
        .find(|&i| cross3(&d01, &sub(&pts[i], &pts[p0])).iter().any(|x| !x.is_zero()))
        .unwrap();
    let n012 = cross3(&d01, &sub(&pts[p2], &pts[p0]));
    let p3 = (0..pts.len())
        .find(|&i| !dot(&n012, &sub(&pts[i], &pts[p0])).is_zero())
        .unwrap();

    let outward = |f: [usize; 3]| cross3(&sub(&pts[f[1]], &pts[f[0]]), &sub(&pts[f[2]], &pts[f[0]]));
    let simplex = [p0, p1, p2, p3];
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for skip in 0..4 {
        let mut f: Vec<usize> = simplex.iter().copied().filter(|&v| v != simplex[skip]).collect();
        let other = simplex[skip];
        let n = outward([f[0], f[1], f[2]]);
        if dot(&n, &sub(&pts[other], &pts[f[0]])).is_positive() {
            f.swap(1, 2);
        }
        faces.push([f[0], f[1], f[2]]);
    }

    for (idx, p) in pts.iter().enumerate() {
        if simplex.contains(&idx) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|&f| dot(&outward(f), &sub(p, &pts[f[0]])).is_positive())
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut visible_edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for e in 0..3 {
                visible_edges.insert((f[e], f[(e + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> = Vec::new();
        for (f, &vis) in faces.iter().zip(&visible) {
            if !vis {
                next.push(*f);
                continue;
            }
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                if !visible_edges.contains(&(b, a)) {
                    next.push([a, b, idx]);
                }
            }
        }
        faces = next;
    }

    let facets: BTreeSet<Constraint> = faces
        .iter()
        .map(|&f| {
            let inner: Vec<BigInt> = outward(f).into_iter().map(|x| -x).collect();
            inequality(inner, &pts[f[0]])
        })
        .collect();
    let mut vertices: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for facet in &facets {
        let on: Vec<Vec<BigInt>> = pts.iter().filter(|p| facet.is_tight(p)).cloned().collect();
        vertices.extend(planar_cycle(&on, facet.normal.coords()));
    }
    (vertices.into_iter().collect(), facets.into_iter().collect())
}
