use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

/// A complete invariant of a full-dimensional lattice polytope up to
/// `GL(n, ℤ)`, together with a map realising it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    /// Equal for two polytopes iff they are related by a unimodular map.
    pub key: String,
    /// Unimodular `U` with `U · P = representative`.
    pub witness: IntMatrix,
    pub representative: LatticePolytope,
}

impl CanonicalForm {
    pub fn bytes(&self) -> &[u8] {
        self.key.as_bytes()
    }
}

/// Computes the canonical form.
///
/// Every ordered tuple of `n` linearly independent vertices `b₁..bₙ` gives an
/// ordering of all vertices (the basis first, then the rest sorted by their
/// coordinates in that basis). The row Hermite form of the vertex matrix in
/// that column order depends only on the `GL(n, ℤ)` orbit, and the minimum
/// over all tuples is the key.
pub fn canonical_form(p: &LatticePolytope) -> Result<CanonicalForm> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim(),
            ambient: p.ambient_dim(),
        });
    }
    let n = p.ambient_dim();
    let verts: Vec<&[BigInt]> = p.vertices().iter().map(|v| v.coords()).collect();
    let mut best: Option<(Vec<Vec<BigInt>>, IntMatrix)> = None;
    let mut tuple = Vec::with_capacity(n);
    for_each_basis(&verts, n, &mut tuple, &mut |basis| {
        let b = IntMatrix::from_columns(&basis.iter().map(|&i| verts[i].to_vec()).collect::<Vec<_>>());
        let Some(inv) = b.rational_inverse() else {
            return;
        };
        let mut rest: Vec<(Vec<BigRational>, usize)> = (0..verts.len())
            .filter(|i| !basis.contains(i))
            .map(|i| {
                let coords = inv
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(verts[i])
                            .map(|(a, x)| a * BigRational::from(x.clone()))
                            .sum()
                    })
                    .collect();
                (coords, i)
            })
            .collect();
        rest.sort();
        let order = basis.iter().copied().chain(rest.into_iter().map(|(_, i)| i));
        let columns: Vec<Vec<BigInt>> = order.map(|i| verts[i].to_vec()).collect();
        let hf = IntMatrix::from_columns(&columns).hermite();
        let rows = hf.hnf.rows();
        if best.as_ref().map_or(true, |(r, _)| rows < *r) {
            best = Some((rows, hf.transform));
        }
    });
    let (rows, witness) = best.expect("a full-dimensional polytope has a vertex basis");
    let mut key = n.to_string();
    for row in &rows {
        key.push(';');
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        key.push_str(&cells.join(","));
    }
    let representative = p.transform(&witness);
    Ok(CanonicalForm {
        key,
        witness,
        representative,
    })
}

fn for_each_basis(
    verts: &[&[BigInt]],
    n: usize,
    tuple: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if tuple.len() == n {
        f(tuple);
        return;
    }
    for i in 0..verts.len() {
        if tuple.contains(&i) {
            continue;
        }
        tuple.push(i);
        let rows: Vec<Vec<BigInt>> = tuple.iter().map(|&j| verts[j].to_vec()).collect();
        if IntMatrix::from_rows(&rows).hermite().rank == tuple.len() {
            for_each_basis(verts, n, tuple, f);
        }
        tuple.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;

    fn poly(v: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_i64(v).unwrap()
    }

    #[test]
    fn invariant_under_shear() {
        let p = poly(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let shear = IntMatrix::from_i64_rows(&[&[1, 3], &[0, 1]]);
        let swap = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let a = canonical_form(&p).unwrap();
        assert_eq!(a.key, canonical_form(&p.transform(&shear)).unwrap().key);
        assert_eq!(a.key, canonical_form(&p.transform(&swap)).unwrap().key);
    }

    #[test]
    fn distinguishes_inequivalent() {
        let p2 = poly(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let other = poly(&[&[1, 0], &[0, 1], &[-1, -2]]);
        assert_ne!(
            canonical_form(&p2).unwrap().key,
            canonical_form(&other).unwrap().key
        );
        // the second is the image of the first under (x, y) ↦ (x + y, y)
        let sq = poly(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        let par = poly(&[&[1, 0], &[1, 1], &[-1, 0], &[-1, -1]]);
        assert_eq!(canonical_form(&sq).unwrap().key, canonical_form(&par).unwrap().key);
        let wide = poly(&[&[1, 0], &[0, 1], &[-1, 0], &[-1, -1]]);
        assert_ne!(canonical_form(&sq).unwrap().key, canonical_form(&wide).unwrap().key);
    }

    #[test]
    fn witness_maps_to_representative() {
        let p = poly(&[&[2, 1], &[-1, 3], &[-1, -2], &[1, -1]]);
        let cf = canonical_form(&p).unwrap();
        assert!(cf.witness.is_unimodular());
        assert_eq!(p.transform(&cf.witness), cf.representative);
    }

    #[test]
    fn three_dimensional() {
        let p = poly(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]);
        let m = IntMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, 5], &[0, 0, 1]]);
        assert_eq!(
            canonical_form(&p).unwrap().key,
            canonical_form(&p.transform(&m)).unwrap().key
        );
        let flat = LatticePolytope::hull(&[
            LatticeVector::from([0, 0, 0]),
            LatticeVector::from([1, 0, 0]),
            LatticeVector::from([0, 1, 0]),
        ])
        .unwrap();
        assert!(canonical_form(&flat).is_err());
    }
}
