//! Integer vectors in the lattice `N` and its dual `M`, the pairing between
//! them, and bases of the sublattices `u⊥ ∩ N`.

mod matrix;

pub use matrix::{HermiteForm, IntMatrix};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{bigint_seq, gcd_all};

macro_rules! int_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(#[serde(with = "bigint_seq")] Vec<BigInt>);

        impl $name {
            pub fn new(coords: Vec<BigInt>) -> Self {
                $name(coords)
            }

            pub fn zero(dim: usize) -> Self {
                $name(vec![BigInt::zero(); dim])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[BigInt] {
                &self.0
            }

            pub fn into_coords(self) -> Vec<BigInt> {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn add(&self, other: &Self) -> Self {
                debug_assert_eq!(self.dim(), other.dim());
                $name(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                debug_assert_eq!(self.dim(), other.dim());
                $name(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }

            pub fn scale(&self, k: &BigInt) -> Self {
                $name(self.0.iter().map(|a| a * k).collect())
            }

            pub fn neg(&self) -> Self {
                $name(self.0.iter().map(|a| -a).collect())
            }

            /// gcd of the coordinates (0 for the zero vector).
            pub fn content(&self) -> BigInt {
                gcd_all(&self.0)
            }

            /// Divides out the content. The zero vector is returned unchanged.
            pub fn primitive_part(&self) -> Self {
                let g = self.content();
                if g.is_zero() {
                    return self.clone();
                }
                $name(self.0.iter().map(|a| a / &g).collect())
            }
        }

        impl From<Vec<i64>> for $name {
            fn from(v: Vec<i64>) -> Self {
                $name(v.into_iter().map(BigInt::from).collect())
            }
        }

        impl<const D: usize> From<[i64; D]> for $name {
            fn from(v: [i64; D]) -> Self {
                $name(v.iter().map(|&x| BigInt::from(x)).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = BigInt;
            fn index(&self, i: usize) -> &BigInt {
                &self.0[i]
            }
        }
    };
}

int_vector!(
    /// An element of `N ≅ ℤⁿ`.
    LatticeVector
);

int_vector!(
    /// An element of the dual lattice `M = Hom(N, ℤ)`.
    DualVector
);

impl LatticeVector {
    /// Reinterprets the coordinates in the dual lattice via the standard dot product.
    pub fn to_dual(&self) -> DualVector {
        DualVector(self.0.clone())
    }

    pub fn transform(&self, m: &IntMatrix) -> LatticeVector {
        LatticeVector(m.apply(&self.0))
    }
}

impl DualVector {
    pub fn to_lattice(&self) -> LatticeVector {
        LatticeVector(self.0.clone())
    }

    /// Transports a dual vector along `x ↦ m·x`, so that
    /// `⟨u.transport(m), m·x⟩ = ⟨u, x⟩` for unimodular `m`.
    pub fn transport(&self, m_inverse: &IntMatrix) -> DualVector {
        DualVector(m_inverse.apply_left(&self.0))
    }
}

/// The exact pairing `⟨u, v⟩`.
pub fn pairing(u: &DualVector, v: &LatticeVector) -> Result<BigInt> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(dot(u.coords(), v.coords()))
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// True iff the gcd of the coordinates is 1.
pub fn is_primitive(coords: &[BigInt]) -> Result<bool> {
    let g = gcd_all(coords);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(g.is_one())
}

/// Basis of `u⊥ ∩ N`, stored in Hermite normal form so that equal `u`
/// always give identical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerpBasis {
    pub anchor: DualVector,
    pub vectors: Vec<LatticeVector>,
}

pub fn perp_basis(u: &DualVector) -> Result<PerpBasis> {
    let completion = UnimodularCompletion::new(u)?;
    let kernel: Vec<Vec<BigInt>> = completion
        .inverse
        .transpose()
        .rows()
        .into_iter()
        .skip(1)
        .collect();
    let vectors = if kernel.is_empty() {
        Vec::new()
    } else {
        let hf = IntMatrix::from_rows(&kernel).hermite();
        hf.hnf.rows().into_iter().map(LatticeVector).collect()
    };
    Ok(PerpBasis {
        anchor: u.clone(),
        vectors,
    })
}

/// A unimodular change of coordinates `y = forward · x` on `N` whose first
/// coordinate is the height `⟨u, x⟩`.
#[derive(Clone, Debug)]
pub struct UnimodularCompletion {
    pub forward: IntMatrix,
    pub inverse: IntMatrix,
}

impl UnimodularCompletion {
    pub fn new(u: &DualVector) -> Result<Self> {
        if !is_primitive(u.coords())? {
            return Err(Error::NotPrimitive(u.to_string()));
        }
        let n = u.dim();
        // T · uᵀ = e₁, so the rows of T are a lattice basis whose first
        // element z has ⟨u, z⟩ = 1 and whose remaining elements span u⊥.
        let column = IntMatrix::from_columns(&[u.coords().to_vec()]);
        let t = column.hermite().transform;
        debug_assert_eq!(n, t.nrows());
        let inverse = t.transpose();
        let forward = inverse.unimodular_inverse()?;
        debug_assert_eq!(forward.row(0), u.coords());
        Ok(UnimodularCompletion { forward, inverse })
    }

    pub fn to_adapted(&self, v: &LatticeVector) -> Vec<BigInt> {
        self.forward.apply(v.coords())
    }

    pub fn from_adapted(&self, y: &[BigInt]) -> LatticeVector {
        LatticeVector(self.inverse.apply(y))
    }
}

/// Index of the lattice spanned by `basis` inside its saturation
/// (1 iff the basis spans a saturated sublattice, 0 if dependent).
pub fn sublattice_index(basis: &[LatticeVector]) -> BigInt {
    if basis.is_empty() {
        return BigInt::one();
    }
    let rows: Vec<Vec<BigInt>> = basis.iter().map(|v| v.coords().to_vec()).collect();
    let hf = IntMatrix::from_rows(&rows).hermite();
    // The span and its saturation have Hermite forms with the same pivot
    // columns, so the index is the ratio of the pivot products.
    let complement = IntMatrix::from_rows(&rows).transpose().left_kernel();
    let saturated: Vec<Vec<BigInt>> = if complement.is_empty() {
        (0..basis[0].dim())
            .map(|i| {
                (0..basis[0].dim())
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect()
    } else {
        IntMatrix::from_rows(&complement).transpose().left_kernel()
    };
    let sat = IntMatrix::from_rows(&saturated).hermite();
    let pivots = |h: &HermiteForm| -> BigInt {
        let mut prod = BigInt::one();
        let mut c = 0;
        for r in 0..h.rank {
            while h.hnf[(r, c)].is_zero() {
                c += 1;
            }
            prod *= h.hnf[(r, c)].abs();
        }
        prod
    };
    if hf.rank != sat.rank {
        return BigInt::zero();
    }
    pivots(&hf) / pivots(&sat)
}
