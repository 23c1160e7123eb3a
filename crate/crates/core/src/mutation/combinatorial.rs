use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{height_of, CombinatorialMutationData};
use crate::error::{Error, Result};
use crate::lattice::{DualVector, LatticeVector, UnimodularCompletion};
use crate::num::{ceil_rational, floor_rational};
use crate::polytope::{
    height_slice, integral_minkowski_difference, minkowski_sum, polar_dual, vertices_at_height, FanoPolytope,
    LatticePolytope, RationalPolytope,
};

/// The data used at one height: the lattice slice of `P`, and for negative
/// heights the co-factor `G_k` with `G_k + |k|·H` equal to that slice's
/// lattice hull. A negative height without a fitting co-factor and without
/// vertices has `cofactor = None` and contributes nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceRecord {
    #[serde(with = "crate::num::bigint_number")]
    pub height: BigInt,
    pub slice: LatticePolytope,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cofactor: Option<LatticePolytope>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinatorialCertificate {
    pub u: DualVector,
    pub factor: LatticePolytope,
    pub slices: Vec<SliceRecord>,
}

impl CombinatorialCertificate {
    /// Checks every recorded co-factor and rebuilds the result as the hull
    /// of `G_k` for `k < 0` and `slice_k + k·H` for `k ≥ 0`.
    pub fn replay(&self) -> Result<LatticePolytope> {
        let mut pts: Vec<LatticeVector> = Vec::new();
        for rec in &self.slices {
            if rec.height.is_negative() {
                let Some(g) = &rec.cofactor else { continue };
                let expanded = minkowski_sum(g, &self.factor.dilate(&-&rec.height))?;
                if expanded != rec.slice {
                    return Err(Error::InvalidDocument(format!(
                        "co-factor at height {} does not rebuild its slice",
                        rec.height
                    )));
                }
                pts.extend(g.vertices().iter().cloned());
            } else {
                let moved = minkowski_sum(&rec.slice, &self.factor.dilate(&rec.height))?;
                pts.extend(moved.vertices().iter().cloned());
            }
        }
        LatticePolytope::hull(&pts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinatorialOutcome {
    pub result: FanoPolytope,
    pub certificate: CombinatorialCertificate,
}

fn check_dims(mu: &CombinatorialMutationData, p: &LatticePolytope) -> Result<()> {
    if mu.ambient_dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: mu.ambient_dim(),
        });
    }
    Ok(())
}

/// Mutation of an arbitrary lattice polytope, Fano or not.
///
/// Full-dimensional polygons use the vertex route below, which never
/// enumerates slices, so it stays fast however large the coordinates get.
/// Everything else goes slice by slice.
pub fn mutate_lattice_polytope(
    mu: &CombinatorialMutationData,
    p: &LatticePolytope,
) -> Result<(LatticePolytope, CombinatorialCertificate)> {
    check_dims(mu, p)?;
    if p.ambient_dim() == 2 && p.is_full_dimensional() {
        mutate_polygon(mu, p)
    } else {
        mutate_by_slices(mu, p)
    }
}

fn into_fano(p: LatticePolytope) -> Result<FanoPolytope> {
    FanoPolytope::new(p).map_err(|e| match e {
        Error::NotFano(why) => Error::FanoViolated(why),
        other => other,
    })
}

pub fn mutate_combinatorial(mu: &CombinatorialMutationData, p: &FanoPolytope) -> Result<CombinatorialOutcome> {
    let (result, certificate) = mutate_lattice_polytope(mu, p.polytope())?;
    Ok(CombinatorialOutcome {
        result: into_fano(result)?,
        certificate,
    })
}

pub fn apply_combinatorial(mu: &CombinatorialMutationData, p: &FanoPolytope) -> Result<FanoPolytope> {
    mutate_combinatorial(mu, p).map(|o| o.result)
}

/// The literal slice-by-slice construction, in any supported dimension.
pub fn apply_combinatorial_by_slices(mu: &CombinatorialMutationData, p: &FanoPolytope) -> Result<FanoPolytope> {
    check_dims(mu, p.polytope())?;
    into_fano(mutate_by_slices(mu, p.polytope())?.0)
}

/// `polar_dual(apply_combinatorial(μ, P))`, the image of the dual polytope
/// under the piecewise-linear map induced by the mutation.
pub fn dual_image(p: &FanoPolytope, mu: &CombinatorialMutationData) -> Result<RationalPolytope> {
    Ok(polar_dual(&apply_combinatorial(mu, p)?))
}

fn mutate_by_slices(
    mu: &CombinatorialMutationData,
    p: &LatticePolytope,
) -> Result<(LatticePolytope, CombinatorialCertificate)> {
    let u = mu.u();
    let (lo, hi) = p.height_range(u)?;
    let mut pts: Vec<LatticeVector> = Vec::new();
    let mut slices = Vec::new();
    let mut k = lo;
    while k <= hi {
        if let Some(slice) = height_slice(p, u, &k)? {
            let cofactor = if k.is_negative() {
                let scaled = mu.factor().dilate(&-&k);
                let g = integral_minkowski_difference(&slice, &scaled)?;
                let verts = vertices_at_height(p, u, &k)?;
                if !verts.is_empty() {
                    let covered = g
                        .as_ref()
                        .map(|g| minkowski_sum(g, &scaled))
                        .transpose()?
                        .is_some_and(|cover| verts.iter().all(|v| cover.contains(v)));
                    if !covered {
                        return Err(Error::Undefined { height: k });
                    }
                }
                if let Some(g) = &g {
                    pts.extend(g.vertices().iter().cloned());
                }
                g
            } else {
                let moved = minkowski_sum(&slice, &mu.factor().dilate(&k))?;
                pts.extend(moved.vertices().iter().cloned());
                None
            };
            slices.push(SliceRecord {
                height: k.clone(),
                slice,
                cofactor,
            });
        } else if k.is_negative() && !vertices_at_height(p, u, &k)?.is_empty() {
            return Err(Error::Undefined { height: k });
        }
        k += 1;
    }
    let result = LatticePolytope::hull(&pts)?;
    Ok((
        result,
        CombinatorialCertificate {
            u: u.clone(),
            factor: mu.factor().clone(),
            slices,
        },
    ))
}

/// Polygon mutation from the vertex heights alone.
///
/// In coordinates `(k, t)` with `k = ⟨u, ·⟩` the factor is `[s₀, s₁]` on the
/// `t` axis. Writing `L(k) ≤ t ≤ R(k)` for the polygon, the result is
/// `{ L(k) + k·s₀ ≤ t ≤ R(k) + k·s₁ }`. Its vertices sit over vertex heights
/// of `P`, and there the lattice slice `[⌈L⌉, ⌊R⌋]` already contains the
/// vertex, so taking `[⌈L⌉ + k·s₀, ⌊R⌋ + k·s₁]` at each vertex height gives
/// the hull of the full construction.
fn mutate_polygon(
    mu: &CombinatorialMutationData,
    p: &LatticePolytope,
) -> Result<(LatticePolytope, CombinatorialCertificate)> {
    let u = mu.u();
    let completion = UnimodularCompletion::new(u)?;
    let along = |v: &LatticeVector| -> BigInt { completion.to_adapted(v).swap_remove(1) };
    let ts: Vec<BigInt> = mu.factor().vertices().iter().map(along).collect();
    let s0 = ts.iter().min().unwrap().clone();
    let s1 = ts.iter().max().unwrap().clone();
    let width = &s1 - &s0;

    // each facet as α·k + β·t ≥ level
    let facets: Vec<(BigInt, BigInt, BigInt)> = p
        .facets()
        .map(|c| {
            let n = c.normal.transport(&completion.inverse);
            (n[0].clone(), n[1].clone(), c.level.clone())
        })
        .collect();
    let mut heights: Vec<BigInt> = p.vertices().iter().map(|v| height_of(u, v)).collect();
    heights.sort();
    heights.dedup();

    let point = |k: &BigInt, t: BigInt| completion.from_adapted(&[k.clone(), t]);
    let segment = |k: &BigInt, a: BigInt, b: BigInt| -> LatticePolytope {
        LatticePolytope::hull(&[point(k, a), point(k, b)]).expect("nonempty segment")
    };

    let mut pts = Vec::with_capacity(2 * heights.len());
    let mut slices = Vec::with_capacity(heights.len());
    for k in heights {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for (alpha, beta, level) in &facets {
            if beta.is_zero() {
                continue;
            }
            let bound = BigRational::new(level - alpha * &k, beta.clone());
            if beta.is_positive() {
                if lo.as_ref().is_none_or(|l| &bound > l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| &bound < h) {
                hi = Some(bound);
            }
        }
        let a = ceil_rational(&lo.expect("bounded polygon"));
        let b = floor_rational(&hi.expect("bounded polygon"));
        debug_assert!(a <= b, "a vertex height has a lattice point");
        if k.is_negative() && &b - &a < -&k * &width {
            return Err(Error::Undefined { height: k });
        }
        let left = &a + &k * &s0;
        let right = &b + &k * &s1;
        pts.push(point(&k, left.clone()));
        pts.push(point(&k, right.clone()));
        let cofactor = k.is_negative().then(|| segment(&k, left, right));
        slices.push(SliceRecord {
            slice: segment(&k, a, b),
            height: k,
            cofactor,
        });
    }
    let result = LatticePolytope::hull(&pts)?;
    Ok((
        result,
        CombinatorialCertificate {
            u: u.clone(),
            factor: mu.factor().clone(),
            slices,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::normalized_volume;

    fn fano(v: &[&[i64]]) -> FanoPolytope {
        FanoPolytope::from_i64(v).unwrap()
    }
    fn data(u: [i64; 2], h: &[&[i64]]) -> CombinatorialMutationData {
        CombinatorialMutationData::new(DualVector::from(u), LatticePolytope::from_i64(h).unwrap()).unwrap()
    }
    fn p2() -> FanoPolytope {
        fano(&[&[1, 0], &[0, 1], &[-1, -1]])
    }

    #[test]
    fn projective_plane_example() {
        let mu = data([-1, -1], &[&[0, 0], &[1, -1]]);
        let expected = fano(&[&[0, 1], &[-1, -1], &[1, -3]]);
        assert_eq!(apply_combinatorial(&mu, &p2()).unwrap(), expected);
        assert_eq!(apply_combinatorial_by_slices(&mu, &p2()).unwrap(), expected);
        let back = apply_combinatorial(&mu.invert(), &expected).unwrap();
        assert_eq!(back, p2());
    }

    #[test]
    fn trivial_factor() {
        let mu = CombinatorialMutationData::trivial(DualVector::from([-1, -1])).unwrap();
        assert_eq!(apply_combinatorial(&mu, &p2()).unwrap(), p2());
    }

    #[test]
    fn undefined_example() {
        let mu = data([0, 1], &[&[0, 0], &[1, 0]]);
        let expect = Err(Error::Undefined {
            height: BigInt::from(-1),
        });
        assert_eq!(apply_combinatorial(&mu, &p2()), expect);
        assert_eq!(apply_combinatorial_by_slices(&mu, &p2()), expect);
    }

    #[test]
    fn certificate_replays() {
        let mu = data([-1, -1], &[&[0, 0], &[1, -1]]);
        let out = mutate_combinatorial(&mu, &p2()).unwrap();
        assert_eq!(&out.certificate.replay().unwrap(), out.result.polytope());
        let (slow, cert) = mutate_by_slices(&mu, p2().polytope()).unwrap();
        assert_eq!(cert.replay().unwrap(), slow);
    }

    #[test]
    fn dual_image_example() {
        let mu = data([-1, -1], &[&[0, 0], &[1, -1]]);
        let d = dual_image(&p2(), &mu).unwrap();
        assert_eq!(normalized_volume(&d).unwrap(), BigRational::from(BigInt::from(9)));
    }

    #[test]
    fn three_dimensional_mutation() {
        let p = fano(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]);
        let mu = CombinatorialMutationData::new(
            DualVector::from([-1, -1, 0]),
            LatticePolytope::from_i64(&[&[0, 0, 0], &[1, -1, 0]]).unwrap(),
        )
        .unwrap();
        let o = mutate_combinatorial(&mu, &p).unwrap();
        assert_eq!(&o.certificate.replay().unwrap(), o.result.polytope());
        assert_eq!(
            polar_dual(&o.result).normalized_volume().unwrap(),
            polar_dual(&p).normalized_volume().unwrap()
        );
        assert_eq!(apply_combinatorial(&mu.invert(), &o.result).unwrap(), p);
        // the bottom vertex alone cannot absorb a segment
        let bad = CombinatorialMutationData::new(
            DualVector::from([0, 0, -1]),
            LatticePolytope::from_i64(&[&[0, 0, 0], &[1, 0, 0]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(apply_combinatorial(&bad, &p), Err(Error::Undefined { .. })));
    }
}
