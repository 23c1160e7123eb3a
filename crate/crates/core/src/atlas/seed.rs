use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::ExplorationBounds;
use crate::error::{Error, Result};
use crate::lattice::{dot, perp_basis, LatticeVector};
use crate::laurent::{factor_univariate, LaurentPolynomial, UnivariatePolynomial};
use crate::mutation::{is_mutable, AlgebraicMutationData};

/// A finite set of algebraic mutation data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Seed {
    pub elements: Vec<AlgebraicMutationData>,
}

impl Seed {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// All `(u, h)` with `u` an inner edge normal of `Newt f` at negative height
/// and `h = φ(x^w)^q` for an irreducible factor `φ` of the bottom component
/// (written in the primitive direction `w` of `u⊥`) with `q` at most its
/// multiplicity and at most `max_factor_dilation`, keeping those for which
/// `f` is mutable.
pub fn seed_of(f: &LaurentPolynomial, bounds: &ExplorationBounds) -> Result<Seed> {
    if f.dim() != 2 {
        return Err(Error::UnsupportedDimension(f.dim()));
    }
    let newton = f.newton_polytope()?;
    let mut elements: Vec<AlgebraicMutationData> = Vec::new();
    for c in newton.constraints() {
        if c.equality || !c.level.is_negative() {
            continue;
        }
        let u = c.normal.clone();
        let w = perp_basis(&u)?.vectors[0].clone();
        let bottom: Vec<(&LatticeVector, _)> = f
            .terms()
            .iter()
            .filter(|(e, _)| dot(u.coords(), e.coords()) == c.level)
            .collect();
        // bottom = x^base · p(x^w)
        let ww = dot(w.coords(), w.coords());
        let steps: Vec<BigInt> = bottom
            .iter()
            .map(|(e, _)| dot(e.coords(), w.coords()))
            .collect();
        let lo = steps.iter().min().expect("a facet carries terms").clone();
        let len: usize = ((steps.iter().max().unwrap() - &lo) / &ww)
            .try_into()
            .map_err(|_| Error::InvalidMutationData("bottom component too long".into()))?;
        let mut coeffs = vec![Default::default(); len + 1];
        for (s, (_, coeff)) in steps.iter().zip(&bottom) {
            let j: usize = ((s - &lo) / &ww).try_into().expect("fits");
            coeffs[j] = (*coeff).clone();
        }
        let fact = factor_univariate(&UnivariatePolynomial::new(coeffs))?;
        let t = UnivariatePolynomial::from_i64(&[0, 1]);
        for (phi, mult) in &fact.factors {
            if *phi == t {
                continue;
            }
            let phi_h = LaurentPolynomial::from_terms(
                2,
                phi.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, a)| (w.scale(&BigInt::from(j)), a.clone())),
            )?;
            for q in 1..=(*mult).min(bounds.max_factor_dilation) {
                let h = phi_h.pow(u64::from(q));
                let mu = AlgebraicMutationData::new(u.clone(), h)?;
                if is_mutable(f, &mu)? && !elements.contains(&mu) {
                    elements.push(mu);
                }
            }
        }
    }
    Ok(Seed { elements })
}
