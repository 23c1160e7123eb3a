//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use fanomutate::lattice::{DualVector, IntMatrix, LatticeVector, UnimodularCompletion};
use fanomutate::laurent::LaurentPolynomial;
use fanomutate::mutation::{AlgebraicMutationData, CombinatorialMutationData};
use fanomutate::polytope::{FanoPolytope, LatticePolytope};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn to_i64(v: &LatticeVector) -> Vec<i64> {
    v.coords().iter().map(|c| c.to_i64().expect("small coordinate")).collect()
}

pub fn lv(v: &[i64]) -> LatticeVector {
    LatticeVector::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

pub fn dv(v: &[i64]) -> DualVector {
    DualVector::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Vertices of the convex hull of planar points, counter-clockwise
/// (monotone chain).
pub fn hull2(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area of a counter-clockwise polygon.
pub fn twice_area(cycle: &[Vec<i64>]) -> i64 {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&cycle[i], &cycle[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum()
}

pub fn boundary_count(cycle: &[Vec<i64>]) -> i64 {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&cycle[i], &cycle[(i + 1) % n]);
            gcd(b[0] - a[0], b[1] - a[1])
        })
        .sum()
}

/// Lattice points of a counter-clockwise polygon by scanning its bounding box.
pub fn points_in(cycle: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (xs, ys): (Vec<i64>, Vec<i64>) = cycle.iter().map(|p| (p[0], p[1])).unzip();
    let mut out = Vec::new();
    for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
        for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
            let p = vec![x, y];
            let n = cycle.len();
            if (0..n).all(|i| cross(&cycle[i], &cycle[(i + 1) % n], &p) >= 0) {
                out.push(p);
            }
        }
    }
    out
}

pub fn polygon(p: &LatticePolytope) -> Vec<Vec<i64>> {
    hull2(&p.vertices().iter().map(to_i64).collect::<Vec<_>>())
}

pub fn from_cycle(cycle: &[Vec<i64>]) -> LatticePolytope {
    let pts: Vec<LatticeVector> = cycle.iter().map(|v| lv(v)).collect();
    LatticePolytope::hull(&pts).unwrap()
}

fn is_fano_cycle(cycle: &[Vec<i64>]) -> bool {
    let n = cycle.len();
    n >= 3
        && (0..n).all(|i| cross(&cycle[i], &cycle[(i + 1) % n], &[0, 0]) > 0)
        && cycle.iter().all(|v| gcd(v[0], v[1]) == 1)
}

/// A random Fano polygon with vertices in `[-r, r]²`.
pub fn random_fano_polygon(rng: &mut ChaCha8Rng, r: i64) -> FanoPolytope {
    loop {
        let k = rng.gen_range(3..=7);
        let pts: Vec<Vec<i64>> = (0..k).map(|_| vec![rng.gen_range(-r..=r), rng.gen_range(-r..=r)]).collect();
        let cycle = hull2(&pts);
        if is_fano_cycle(&cycle) {
            return FanoPolytope::new(from_cycle(&cycle)).unwrap();
        }
    }
}

/// Polar dual of a Fano polygon as a counter-clockwise rational cycle:
/// one vertex per edge, solving `⟨m, a⟩ = ⟨m, b⟩ = −1`.
pub fn dual_cycle(cycle: &[Vec<i64>]) -> Vec<(BigRational, BigRational)> {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&cycle[i], &cycle[(i + 1) % n]);
            let det = a[0] * b[1] - a[1] * b[0];
            let q = |num: i64| BigRational::new(num.into(), det.into());
            (q(b[1] - a[1]), q(a[0] - b[0]))
        })
        .collect()
}

/// Normalized volume of the polar dual via the shoelace formula.
pub fn dual_volume(cycle: &[Vec<i64>]) -> BigRational {
    let d = dual_cycle(cycle);
    let n = d.len();
    let mut s = BigRational::from(BigInt::from(0));
    for i in 0..n {
        let (a, b) = (&d[i], &d[(i + 1) % n]);
        s += &a.0 * &b.1 - &a.1 * &b.0;
    }
    if s < BigRational::from(BigInt::from(0)) {
        -s
    } else {
        s
    }
}

/// A random unimodular 2×2 matrix as a word in the standard generators.
pub fn random_unimodular(rng: &mut ChaCha8Rng, len: usize) -> IntMatrix {
    let gens = [
        IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]),
        IntMatrix::from_i64_rows(&[&[1, -1], &[0, 1]]),
        IntMatrix::from_i64_rows(&[&[1, 0], &[1, 1]]),
        IntMatrix::from_i64_rows(&[&[1, 0], &[-1, 1]]),
        IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]),
        IntMatrix::from_i64_rows(&[&[-1, 0], &[0, 1]]),
    ];
    let mut m = IntMatrix::identity(2);
    for _ in 0..len {
        m = m.mul(&gens[rng.gen_range(0..gens.len())]);
    }
    m
}

pub fn primitive_perp(u: &[i64]) -> Vec<i64> {
    let g = gcd(u[0], u[1]);
    vec![-u[1] / g, u[0] / g]
}

/// Literal combinatorial mutation of a polygon from lattice points:
/// slices at height `k ≥ 0` are pushed out by `kH`, and at `k < 0` the
/// lattice points `g` with `g + |k|H ⊆ P` are kept. `None` when some vertex
/// at negative height is not covered.
pub fn oracle_mutation(p: &[Vec<i64>], u: &[i64], factor: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let pts = points_in(p);
    let height = |x: &[i64]| u[0] * x[0] + u[1] * x[1];
    let inside = |x: &[i64]| {
        let n = p.len();
        (0..n).all(|i| cross(&p[i], &p[(i + 1) % n], x) >= 0)
    };
    let mut out = Vec::new();
    let heights: BTreeSet<i64> = pts.iter().map(|x| height(x)).collect();
    for &k in &heights {
        let slice: Vec<&Vec<i64>> = pts.iter().filter(|x| height(x) == k).collect();
        if k >= 0 {
            for s in &slice {
                for h in factor {
                    out.push(vec![s[0] + k * h[0], s[1] + k * h[1]]);
                }
            }
        } else {
            let m = -k;
            let anchor = &factor[0];
            let fits: Vec<Vec<i64>> = slice
                .iter()
                .map(|s| vec![s[0] - m * anchor[0], s[1] - m * anchor[1]])
                .filter(|g| factor.iter().all(|h| inside(&[g[0] + m * h[0], g[1] + m * h[1]])))
                .collect();
            // every vertex at this height must lie in fits + mH
            if p.iter().filter(|v| height(v) == k).any(|v| !minkowski_contains(&fits, factor, m, v)) {
                return None;
            }
            out.extend(fits);
        }
    }
    Some(hull2(&out))
}

/// Whether `v ∈ conv(fits) + m·conv(factor)`, tested against the hull of
/// all pairwise sums.
fn minkowski_contains(fits: &[Vec<i64>], factor: &[Vec<i64>], m: i64, v: &[i64]) -> bool {
    let sums: Vec<Vec<i64>> = fits
        .iter()
        .flat_map(|g| factor.iter().map(move |h| vec![g[0] + m * h[0], g[1] + m * h[1]]))
        .collect();
    if sums.is_empty() {
        return false;
    }
    let cyc = hull2(&sums);
    if cyc.len() < 3 {
        // collinear: v must lie between the extreme points
        let (a, b) = (&cyc[0], cyc.last().unwrap());
        return cross(a, b, v) == 0
            && (v[0] - a[0]) * (v[0] - b[0]) <= 0
            && (v[1] - a[1]) * (v[1] - b[1]) <= 0;
    }
    let n = cyc.len();
    (0..n).all(|i| cross(&cyc[i], &cyc[(i + 1) % n], v) >= 0)
}

/// A random polynomial mutable under `(u, h)` by construction, with positive
/// coefficients so that no cancellation occurs: at each negative height the
/// component is `h^|k|` times a random polynomial.
pub fn random_mutable(rng: &mut ChaCha8Rng) -> (LaurentPolynomial, AlgebraicMutationData) {
    loop {
        let u = loop {
            let u = [rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)];
            if gcd(u[0], u[1]) == 1 {
                break u;
            }
        };
        let c = UnimodularCompletion::new(&dv(&u)).unwrap();
        let at = |k: i64, t: i64| c.from_adapted(&[BigInt::from(k), BigInt::from(t)]);
        let mono = |k: i64, t: i64, coeff: i64| LaurentPolynomial::monomial(at(k, t), BigRational::from(BigInt::from(coeff)));
        let d = rng.gen_range(1..=2);
        let mut h = LaurentPolynomial::zero(2);
        for t in 0..=d {
            let coeff = if t == 0 || t == d { rng.gen_range(1..=3) } else { rng.gen_range(0..=3) };
            if coeff > 0 {
                h = h.add(&mono(0, t, coeff)).unwrap();
            }
        }
        let lo = rng.gen_range(-2i64..=-1);
        let hi = rng.gen_range(0i64..=2);
        let mut f = LaurentPolynomial::zero(2);
        for k in lo..=hi {
            let mut g = LaurentPolynomial::zero(2);
            for _ in 0..rng.gen_range(1..=2) {
                g = g.add(&mono(k, rng.gen_range(-2..=2), rng.gen_range(1..=3))).unwrap();
            }
            let comp = if k < 0 { g.mul(&h.pow((-k) as u64)).unwrap() } else { g };
            f = f.add(&comp).unwrap();
        }
        if let Ok(mu) = AlgebraicMutationData::new(dv(&u), h) {
            return (f, mu);
        }
    }
}

/// A random combinatorial datum for a polygon: an inner facet normal (or,
/// occasionally, any primitive vector) with a dilated primitive segment in
/// `u⊥`, translated randomly.
pub fn random_datum(rng: &mut ChaCha8Rng, p: &FanoPolytope) -> CombinatorialMutationData {
    let cycle = polygon(p.polytope());
    let u: Vec<i64> = if rng.gen_bool(0.85) {
        let i = rng.gen_range(0..cycle.len());
        let (a, b) = (&cycle[i], &cycle[(i + 1) % cycle.len()]);
        let n = vec![a[1] - b[1], b[0] - a[0]];
        let g = gcd(n[0], n[1]);
        vec![n[0] / g, n[1] / g]
    } else {
        loop {
            let u = vec![rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)];
            if gcd(u[0], u[1]) == 1 {
                break u;
            }
        }
    };
    let w = primitive_perp(&u);
    let j = rng.gen_range(1..=3);
    let s = rng.gen_range(-2..=2);
    let factor = LatticePolytope::hull(&[lv(&[s * w[0], s * w[1]]), lv(&[(s + j) * w[0], (s + j) * w[1]])]).unwrap();
    CombinatorialMutationData::new(dv(&u), factor).unwrap()
}

/// Brute-force Markov triples `a ≤ b ≤ c ≤ bound`.
pub fn brute_markov(bound: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for a in 1..=bound {
        for b in a..=bound {
            for c in b..=bound {
                if a * a + b * b + c * c == 3 * a * b * c {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Vieta tree of sorted Markov triples up to `depth` generations, where each
/// generation replaces the smallest-but-new coordinate.
pub fn vieta_levels(depth: usize) -> Vec<BTreeSet<[BigInt; 3]>> {
    let sorted = |mut t: [BigInt; 3]| {
        t.sort();
        t
    };
    let one = BigInt::one();
    let mut levels = vec![BTreeSet::from([[one.clone(), one.clone(), one.clone()]])];
    let mut seen: BTreeSet<[BigInt; 3]> = levels[0].clone();
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for t in levels.last().unwrap() {
            for i in 0..3 {
                let (x, y) = (&t[(i + 1) % 3], &t[(i + 2) % 3]);
                let mut n = t.clone();
                n[i] = BigInt::from(3) * x * y - &t[i];
                let n = sorted(n);
                if seen.insert(n.clone()) {
                    next.insert(n);
                }
            }
        }
        levels.push(next);
    }
    levels
}
