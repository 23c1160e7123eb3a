use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::AlgebraicMutationData;
use crate::error::{Error, Result};
use crate::laurent::{divides, LaurentPolynomial};

/// One height of an algebraic mutation: `image = component · hᵏ`, computed
/// by division when `k < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicStep {
    #[serde(with = "crate::num::bigint_number")]
    pub height: BigInt,
    pub component: LaurentPolynomial,
    pub image: LaurentPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicCertificate {
    pub steps: Vec<AlgebraicStep>,
}

impl AlgebraicCertificate {
    /// Re-checks every step against `h` and returns the sum of the images.
    pub fn replay(&self, mu: &AlgebraicMutationData) -> Result<LaurentPolynomial> {
        let mut out = LaurentPolynomial::zero(mu.h().dim());
        for s in &self.steps {
            let k = exponent(&s.height)?;
            let hk = mu.h().pow(k);
            let ok = if s.height.is_negative() {
                s.image.mul(&hk)? == s.component
            } else {
                s.component.mul(&hk)? == s.image
            };
            if !ok {
                return Err(Error::InvalidDocument(format!(
                    "certificate step at height {} does not replay",
                    s.height
                )));
            }
            out = out.add(&s.image)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicOutcome {
    pub result: LaurentPolynomial,
    pub certificate: AlgebraicCertificate,
}

fn exponent(k: &BigInt) -> Result<u64> {
    k.abs()
        .to_u64()
        .ok_or_else(|| Error::InvalidMutationData(format!("height {k} is too large")))
}

/// `μ♯(f) = Σ_k f_k · hᵏ` over the height decomposition of `f`.
pub fn mutate_algebraic(mu: &AlgebraicMutationData, f: &LaurentPolynomial) -> Result<AlgebraicOutcome> {
    let decomposition = f.height_decomposition(mu.u())?;
    let mut result = LaurentPolynomial::zero(f.dim());
    let mut steps = Vec::with_capacity(decomposition.components.len());
    for (k, fk) in decomposition.components {
        let hk = mu.h().pow(exponent(&k)?);
        let image = if k.is_negative() {
            divides(&hk, &fk)?.ok_or_else(|| Error::NotMutable { height: k.clone() })?
        } else {
            fk.mul(&hk)?
        };
        result = result.add(&image)?;
        steps.push(AlgebraicStep {
            height: k,
            component: fk,
            image,
        });
    }
    Ok(AlgebraicOutcome {
        result,
        certificate: AlgebraicCertificate { steps },
    })
}

pub fn apply_algebraic(mu: &AlgebraicMutationData, f: &LaurentPolynomial) -> Result<LaurentPolynomial> {
    mutate_algebraic(mu, f).map(|o| o.result)
}

pub fn is_mutable(f: &LaurentPolynomial, mu: &AlgebraicMutationData) -> Result<bool> {
    match mutate_algebraic(mu, f) {
        Ok(_) => Ok(true),
        Err(Error::NotMutable { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
