//! Fano polygons: edge data, class T, Markov triples and triangles of
//! weighted projective planes.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::num::{bigint_number, bigint_seq, gcd_all};
use crate::polytope::{normalized_volume, FanoPolytope, LatticePolytope};

/// `l = k·r + rbar` for one edge: lattice length `l`, lattice distance `r`
/// of the edge's line from the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeData {
    #[serde(with = "bigint_number")]
    pub l: BigInt,
    #[serde(with = "bigint_number")]
    pub r: BigInt,
    #[serde(with = "bigint_number")]
    pub k: BigInt,
    #[serde(with = "bigint_number")]
    pub rbar: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDecomposition {
    pub edges: Vec<EdgeData>,
    #[serde(rename = "class_T")]
    pub class_t: bool,
    #[serde(with = "bigint_number")]
    pub blowup_degree: BigInt,
}

impl EdgeDecomposition {
    /// The sorted pairs `(r, rbar)` with `rbar ≠ 0`.
    pub fn residues(&self) -> Vec<(BigInt, BigInt)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .filter(|e| !e.rbar.is_zero())
            .map(|e| (e.r.clone(), e.rbar.clone()))
            .collect();
        out.sort();
        out
    }
}

fn require_polygon(p: &LatticePolytope) -> Result<()> {
    if p.ambient_dim() != 2 {
        return Err(Error::NotAPolygon(p.ambient_dim()));
    }
    Ok(())
}

fn det2(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Edge data in counter-clockwise order, starting from the edge leaving the
/// lexicographically smallest vertex.
pub fn edge_data(p: &FanoPolytope) -> Result<EdgeDecomposition> {
    require_polygon(p)?;
    let v = p.vertices();
    let n = v.len();
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        let diff = b.sub(a);
        let l = diff.content();
        // the lattice distance is |det(a, primitive direction)|
        let r = det2(a, &diff.primitive_part()).abs();
        let (k, rbar) = l.div_rem(&r);
        edges.push(EdgeData { l, r, k, rbar });
    }
    let class_t = edges.iter().all(|e| e.rbar.is_zero());
    let blowup_degree = edges.iter().map(|e| &e.k).sum();
    Ok(EdgeDecomposition {
        edges,
        class_t,
        blowup_degree,
    })
}

pub fn is_class_t(p: &FanoPolytope) -> Result<bool> {
    Ok(edge_data(p)?.class_t)
}

pub fn blowup_cycle_degree(p: &FanoPolytope) -> Result<BigInt> {
    Ok(edge_data(p)?.blowup_degree)
}

/// A positive solution of `a² + b² + c² = 3abc`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkovTriple(#[serde(with = "bigint_seq")] Vec<BigInt>);

impl MarkovTriple {
    fn sorted(mut v: Vec<BigInt>) -> Self {
        v.sort();
        MarkovTriple(v)
    }

    pub fn base() -> Self {
        MarkovTriple(vec![BigInt::one(); 3])
    }

    pub fn from_u64(a: u64, b: u64, c: u64) -> Self {
        Self::sorted(vec![a.into(), b.into(), c.into()])
    }

    pub fn values(&self) -> [&BigInt; 3] {
        [&self.0[0], &self.0[1], &self.0[2]]
    }

    pub fn satisfies_equation(&self) -> bool {
        let [a, b, c] = self.values();
        a * a + b * b + c * c == BigInt::from(3) * a * b * c
    }

    /// The three Vieta moves `x ↦ 3yz − x`.
    pub fn neighbours(&self) -> [MarkovTriple; 3] {
        let v = &self.0;
        std::array::from_fn(|i| {
            let (y, z) = (&v[(i + 1) % 3], &v[(i + 2) % 3]);
            let mut w = v.clone();
            w[i] = BigInt::from(3) * y * z - &v[i];
            Self::sorted(w)
        })
    }

    /// `(a², b², c²)`, the weights of the corresponding plane.
    pub fn squared_weights(&self) -> WeightTriple {
        WeightTriple::sorted(self.0.iter().map(|x| x * x).collect())
    }
}

impl std::fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// All Markov triples with largest entry at most `bound`, sorted.
pub fn markov_triples(bound: &BigInt) -> Vec<MarkovTriple> {
    let mut seen = BTreeSet::new();
    if bound < &BigInt::one() {
        return Vec::new();
    }
    let mut queue = VecDeque::from([MarkovTriple::base()]);
    seen.insert(MarkovTriple::base());
    while let Some(t) = queue.pop_front() {
        for n in t.neighbours() {
            if &n.0[2] <= bound && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen.into_iter().collect()
}

/// Markov triples grouped by their Vieta distance from `(1,1,1)`, up to
/// `depth`.
pub fn markov_tree(depth: usize) -> Vec<Vec<MarkovTriple>> {
    let mut seen = BTreeSet::from([MarkovTriple::base()]);
    let mut levels = vec![vec![MarkovTriple::base()]];
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for t in levels.last().unwrap() {
            for n in t.neighbours() {
                if !seen.contains(&n) {
                    next.insert(n);
                }
            }
        }
        seen.extend(next.iter().cloned());
        levels.push(next.into_iter().collect());
    }
    levels
}

/// Positive weights of a weighted projective plane.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightTriple(#[serde(with = "bigint_seq")] Vec<BigInt>);

impl WeightTriple {
    pub fn new(w: [BigInt; 3]) -> Self {
        WeightTriple(w.to_vec())
    }

    pub fn from_u64(a: u64, b: u64, c: u64) -> Self {
        WeightTriple(vec![a.into(), b.into(), c.into()])
    }

    fn sorted(mut v: Vec<BigInt>) -> Self {
        v.sort();
        WeightTriple(v)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_well_formed(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
            && (0..3).all(|i| self.0[i].gcd(&self.0[(i + 1) % 3]).is_one())
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for WeightTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// The triangle `v₀ = (w₁, b₀)`, `v₁ = (−w₀, b₁)`, `v₂ = (0, 1)` with
/// `w₀v₀ + w₁v₁ + w₂v₂ = 0` and `0 ≤ b₀ < w₁` the least solution of
/// `w₀b₀ ≡ −w₂ (mod w₁)`.
pub fn wps_triangle(w: &WeightTriple) -> Result<FanoPolytope> {
    if !w.is_well_formed() {
        return Err(Error::NotWellFormed(w.0.iter().map(ToString::to_string).collect()));
    }
    let [w0, w1, w2] = [&w.0[0], &w.0[1], &w.0[2]];
    // w0 is invertible modulo w1
    let inv = w0.extended_gcd(w1).x;
    let b0 = (-w2 * inv).mod_floor(w1);
    let b1 = (-w2 - w0 * &b0) / w1;
    let pts = [
        LatticeVector::new(vec![w1.clone(), b0]),
        LatticeVector::new(vec![-w0.clone(), b1]),
        LatticeVector::from([0, 1]),
    ];
    FanoPolytope::new(LatticePolytope::hull(&pts)?)
}

/// The sorted weights of a triangle `ℙ(w₀, w₁, w₂)`, or `None` if the
/// triangle is not the fan polytope of a weighted projective plane (weights
/// not pairwise coprime, or vertices spanning a proper sublattice).
pub fn identify_wps(p: &FanoPolytope) -> Result<Option<WeightTriple>> {
    require_polygon(p)?;
    let v = p.vertices();
    if v.len() != 3 {
        return Err(Error::NotATriangle(v.len()));
    }
    let raw = vec![det2(&v[1], &v[2]), det2(&v[2], &v[0]), det2(&v[0], &v[1])];
    let g = gcd_all(&raw);
    let w = WeightTriple::sorted(raw.iter().map(|x| (x / &g).abs()).collect());
    if !w.is_well_formed() {
        return Ok(None);
    }
    // a fake weighted projective plane has the same relation but larger volume
    let vol = normalized_volume(p)?;
    if vol != w.sum().into() {
        return Ok(None);
    }
    Ok(Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{canonical_form, polar_dual};
    use num_rational::BigRational;

    fn fano(v: &[&[i64]]) -> FanoPolytope {
        FanoPolytope::from_i64(v).unwrap()
    }
    fn e(l: i64, r: i64, k: i64, rbar: i64) -> EdgeData {
        EdgeData {
            l: l.into(),
            r: r.into(),
            k: k.into(),
            rbar: rbar.into(),
        }
    }

    #[test]
    fn edge_data_examples() {
        let d = edge_data(&fano(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(d.edges, vec![e(1, 1, 1, 0); 3]);
        assert!(d.class_t);
        assert_eq!(d.blowup_degree, BigInt::from(3));

        let d = edge_data(&fano(&[&[0, 1], &[-1, -1], &[1, -3]])).unwrap();
        assert!(d.edges.contains(&e(2, 2, 1, 0)));
        assert!(d.class_t);

        let d = edge_data(&fano(&[&[1, 0], &[0, 1], &[-1, -3]])).unwrap();
        assert!(d.edges.contains(&e(1, 3, 0, 1)));
        assert!(!d.class_t);
        assert_eq!(d.blowup_degree, BigInt::from(2));
        assert_eq!(d.residues(), vec![(BigInt::from(3), BigInt::from(1))]);

        let hex = fano(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[1, 1], &[-1, -1]]);
        assert!(is_class_t(&hex).unwrap());
        assert_eq!(blowup_cycle_degree(&hex).unwrap(), BigInt::from(6));
    }

    #[test]
    fn edge_report_json() {
        let d = edge_data(&fano(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.starts_with(r#"{"edges":[{"l":1,"r":1,"k":1,"rbar":0}"#));
        assert!(s.ends_with(r#""class_T":true,"blowup_degree":3}"#));
    }

    fn brute_force_markov(bound: u64) -> Vec<MarkovTriple> {
        let mut out = Vec::new();
        for a in 1..=bound {
            for b in a..=bound {
                for c in b..=bound {
                    if a * a + b * b + c * c == 3 * a * b * c {
                        out.push(MarkovTriple::from_u64(a, b, c));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn markov_matches_brute_force() {
        for bound in [1u64, 2, 5, 30, 200] {
            assert_eq!(markov_triples(&BigInt::from(bound)), brute_force_markov(bound), "bound {bound}");
        }
        assert_eq!(markov_triples(&BigInt::from(30)).len(), 5);
        for t in markov_triples(&BigInt::from(100_000)) {
            assert!(t.satisfies_equation());
            assert!(t.neighbours().iter().all(MarkovTriple::satisfies_equation));
        }
    }

    #[test]
    fn markov_tree_levels() {
        let levels = markov_tree(3);
        assert_eq!(levels[0], vec![MarkovTriple::from_u64(1, 1, 1)]);
        assert_eq!(levels[1], vec![MarkovTriple::from_u64(1, 1, 2)]);
        assert_eq!(levels[2], vec![MarkovTriple::from_u64(1, 2, 5)]);
        assert_eq!(
            levels[3],
            vec![MarkovTriple::from_u64(1, 5, 13), MarkovTriple::from_u64(2, 5, 29)]
        );
        let sizes: Vec<usize> = markov_tree(6).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 1, 1, 2, 4, 8, 16]);
    }

    #[test]
    fn wps_examples() {
        let p = wps_triangle(&WeightTriple::from_u64(1, 1, 1)).unwrap();
        let p2 = fano(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(canonical_form(&p).unwrap().key, canonical_form(&p2).unwrap().key);

        let p = wps_triangle(&WeightTriple::from_u64(1, 1, 4)).unwrap();
        assert_eq!(identify_wps(&p).unwrap(), Some(WeightTriple::from_u64(1, 1, 4)));
        let q = fano(&[&[0, 1], &[-1, -1], &[1, -3]]);
        assert_eq!(canonical_form(&p).unwrap().key, canonical_form(&q).unwrap().key);

        let p = wps_triangle(&WeightTriple::from_u64(1, 2, 3)).unwrap();
        assert_eq!(
            polar_dual(&p).normalized_volume().unwrap(),
            BigRational::from(BigInt::from(6))
        );
        assert!(wps_triangle(&WeightTriple::from_u64(2, 2, 3)).is_err());
    }

    #[test]
    fn identify_examples() {
        assert_eq!(
            identify_wps(&fano(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap(),
            Some(WeightTriple::from_u64(1, 1, 1))
        );
        assert_eq!(
            identify_wps(&fano(&[&[0, 1], &[-1, -1], &[1, -3]])).unwrap(),
            Some(WeightTriple::from_u64(1, 1, 4))
        );
        // ℙ²/μ₃ has relation (1,1,1) but is not ℙ²
        assert_eq!(identify_wps(&fano(&[&[2, -1], &[-1, 2], &[-1, -1]])).unwrap(), None);
        let square = fano(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        assert_eq!(identify_wps(&square), Err(Error::NotATriangle(4)));
    }

    #[test]
    fn wps_round_trip() {
        for a in 1..=12u64 {
            for b in a..=12 {
                for c in b..=12 {
                    let w = WeightTriple::from_u64(a, b, c);
                    if !w.is_well_formed() {
                        continue;
                    }
                    let p = wps_triangle(&w).unwrap();
                    assert_eq!(identify_wps(&p).unwrap(), Some(w));
                }
            }
        }
    }
}
