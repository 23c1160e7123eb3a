use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::hull::planar_cycle;
use super::{FanoPolytope, LatticePolytope};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::num::{lcm_all, parse_rational, rational_to_string};

/// A polytope with exact rational vertex coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<Vec<BigRational>>,
}

impl RationalPolytope {
    /// Convex hull of rational points, computed on the integer points
    /// obtained by clearing denominators.
    pub fn hull(points: &[Vec<BigRational>]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let dim = first.len();
        let scale = lcm_all(points.iter().flatten().map(|q| q.denom()));
        let scaled: Vec<LatticeVector> = points
            .iter()
            .map(|p| {
                if p.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: p.len(),
                    });
                }
                Ok(LatticeVector::new(
                    p.iter().map(|q| (q * &scale).to_integer()).collect(),
                ))
            })
            .collect::<Result<_>>()?;
        let lattice = LatticePolytope::hull(&scaled)?;
        Ok(Self::from_scaled(&lattice, &scale))
    }

    fn from_scaled(p: &LatticePolytope, scale: &BigInt) -> Self {
        RationalPolytope {
            dim: p.ambient_dim(),
            vertices: p
                .vertices()
                .iter()
                .map(|v| {
                    v.coords()
                        .iter()
                        .map(|x| BigRational::new(x.clone(), scale.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    fn scaled(&self) -> (LatticePolytope, BigInt) {
        let scale = lcm_all(self.vertices.iter().flatten().map(|q| q.denom()));
        let pts: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|p| LatticeVector::new(p.iter().map(|q| (q * &scale).to_integer()).collect()))
            .collect();
        (
            LatticePolytope::hull(&pts).expect("nonempty rational polytope"),
            scale,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> BTreeSet<Vec<BigRational>> {
        self.vertices.iter().cloned().collect()
    }

    /// The lattice polytope with the same vertices, if all are integral.
    pub fn to_lattice(&self) -> Option<LatticePolytope> {
        let pts: Option<Vec<LatticeVector>> = self
            .vertices
            .iter()
            .map(|p| {
                p.iter()
                    .map(|q| q.is_integer().then(|| q.to_integer()))
                    .collect::<Option<Vec<_>>>()
                    .map(LatticeVector::new)
            })
            .collect();
        pts.map(|p| LatticePolytope::hull(&p).expect("nonempty"))
    }

    /// `{ y : ⟨x, y⟩ ≥ -1 for all x in self }`; requires the origin in the
    /// strict interior.
    pub fn polar(&self) -> Result<RationalPolytope> {
        let (lattice, scale) = self.scaled();
        polar_of_scaled(&lattice, &scale)
    }

    pub fn normalized_volume(&self) -> Result<BigRational> {
        let (lattice, scale) = self.scaled();
        let vol = lattice_normalized_volume(&lattice)?;
        let denom = num_traits::pow(scale, self.dim);
        Ok(vol / BigRational::from(denom))
    }
}

fn polar_of_scaled(p: &LatticePolytope, scale: &BigInt) -> Result<RationalPolytope> {
    if !p.contains_strictly(&LatticeVector::zero(p.ambient_dim())) {
        return Err(Error::NotFano(
            "origin is not in the strict interior".into(),
        ));
    }
    // facet ⟨n, x⟩ ≥ level (level < 0) of scale·Q gives the dual vertex
    // n · scale / (−level)
    let pts: Vec<Vec<BigRational>> = p
        .facets()
        .map(|f| {
            let denom = -&f.level;
            f.normal
                .coords()
                .iter()
                .map(|a| BigRational::new(a * scale, denom.clone()))
                .collect()
        })
        .collect();
    RationalPolytope::hull(&pts)
}

/// The polar polytope `{ m : ⟨m, v⟩ ≥ −1 for all v ∈ P }`.
pub fn polar_dual(p: &FanoPolytope) -> RationalPolytope {
    polar_of_scaled(p.polytope(), &BigInt::from(1)).expect("Fano polytopes contain 0 strictly")
}

/// `n!` times the Euclidean volume.
pub fn normalized_volume<P: NormalizedVolume + ?Sized>(p: &P) -> Result<BigRational> {
    p.normalized_volume()
}

pub trait NormalizedVolume {
    fn normalized_volume(&self) -> Result<BigRational>;
}

impl NormalizedVolume for LatticePolytope {
    fn normalized_volume(&self) -> Result<BigRational> {
        lattice_normalized_volume(self)
    }
}

impl NormalizedVolume for FanoPolytope {
    fn normalized_volume(&self) -> Result<BigRational> {
        lattice_normalized_volume(self.polytope())
    }
}

impl NormalizedVolume for RationalPolytope {
    fn normalized_volume(&self) -> Result<BigRational> {
        RationalPolytope::normalized_volume(self)
    }
}

fn lattice_normalized_volume(p: &LatticePolytope) -> Result<BigRational> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim(),
            ambient: p.ambient_dim(),
        });
    }
    let v = p.vertices();
    let vol = match p.ambient_dim() {
        1 => (&v[1][0] - &v[0][0]).abs(),
        2 => {
            // shoelace on the counter-clockwise cycle
            let m = v.len();
            (0..m)
                .map(|i| {
                    let (a, b) = (&v[i], &v[(i + 1) % m]);
                    &a[0] * &b[1] - &a[1] * &b[0]
                })
                .sum::<BigInt>()
                .abs()
        }
        3 => {
            // cone from a fixed apex over every facet not containing it
            let origin = LatticeVector::zero(3);
            let apex = if p.contains_strictly(&origin) {
                origin
            } else {
                v[0].clone()
            };
            let mut total = BigInt::zero();
            for f in p.facets() {
                if f.is_tight(apex.coords()) {
                    continue;
                }
                let on: Vec<Vec<BigInt>> = v
                    .iter()
                    .filter(|x| f.is_tight(x.coords()))
                    .map(|x| x.sub(&apex).into_coords())
                    .collect();
                let cycle = planar_cycle(&on, f.normal.coords());
                for i in 1..cycle.len() - 1 {
                    total += det3(&cycle[0], &cycle[i], &cycle[i + 1]).abs();
                }
            }
            total
        }
        d => return Err(Error::UnsupportedDimension(d)),
    };
    Ok(BigRational::from(vol))
}

fn det3(a: &[BigInt], b: &[BigInt], c: &[BigInt]) -> BigInt {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

impl fmt::Display for RationalPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let parts: Vec<String> = v.iter().map(rational_to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

impl Serialize for RationalPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalJson {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(rational_to_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RationalJson::deserialize(d)?;
        let pts: Vec<Vec<BigRational>> = raw
            .vertices
            .iter()
            .map(|v| v.iter().map(|s| parse_rational(s)).collect::<Result<_>>())
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)?;
        if pts.iter().any(|p| p.len() != raw.dim) {
            return Err(serde::de::Error::custom(
                "vertex dimension disagrees with \"dim\"",
            ));
        }
        RationalPolytope::hull(&pts).map_err(serde::de::Error::custom)
    }
}
