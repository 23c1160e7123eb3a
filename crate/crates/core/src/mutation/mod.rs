//! Algebraic mutations of Laurent polynomials and combinatorial mutations of
//! lattice polytopes.

mod algebraic;
mod combinatorial;

pub use algebraic::{apply_algebraic, is_mutable, mutate_algebraic, AlgebraicCertificate, AlgebraicOutcome, AlgebraicStep};
pub use combinatorial::{
    apply_combinatorial, apply_combinatorial_by_slices, dual_image, mutate_combinatorial, mutate_lattice_polytope,
    CombinatorialCertificate, CombinatorialOutcome, SliceRecord,
};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{dot, is_primitive, DualVector, LatticeVector};
use crate::laurent::{factor_univariate, LaurentPolynomial, UnivariatePolynomial};
use crate::polytope::LatticePolytope;

/// How far the "irreducible or a power of an irreducible" condition on `h`
/// was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IrreducibilityStatus {
    VerifiedIrreducible,
    VerifiedPower,
    Unverified,
}

/// The field over which the status above was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckedOver {
    /// `h` is a power of a single linear factor in one variable, so the
    /// condition holds over ℂ.
    Complex,
    /// Only ℚ-irreducibility was established.
    Rationals,
    NotChecked,
}

/// A primitive `u ∈ M` together with `h ∈ ℚ[u⊥ ∩ N]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicMutationData {
    u: DualVector,
    h: LaurentPolynomial,
    status: IrreducibilityStatus,
    checked_over: CheckedOver,
}

fn validate_weight(u: &DualVector) -> Result<()> {
    match is_primitive(u.coords()) {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::InvalidMutationData(format!("u = {u} is not primitive"))),
        Err(_) => Err(Error::InvalidMutationData("u is the zero vector".into())),
    }
}

fn off_hyperplane<'a, I: IntoIterator<Item = &'a LatticeVector>>(u: &DualVector, pts: I) -> Option<&'a LatticeVector> {
    pts.into_iter().find(|e| !dot(u.coords(), e.coords()).is_zero())
}

impl AlgebraicMutationData {
    pub fn new(u: DualVector, h: LaurentPolynomial) -> Result<Self> {
        if u.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: h.dim(),
            });
        }
        validate_weight(&u)?;
        if h.is_zero() {
            return Err(Error::InvalidMutationData("h is zero".into()));
        }
        if let Some(e) = off_hyperplane(&u, h.terms().keys()) {
            return Err(Error::InvalidMutationData(format!(
                "exponent {e} of h does not pair to zero with u = {u}"
            )));
        }
        if h.is_one() {
            // the identity mutation; h = 1 is the empty power
            return Ok(AlgebraicMutationData {
                u,
                h,
                status: IrreducibilityStatus::VerifiedPower,
                checked_over: CheckedOver::Complex,
            });
        }
        if h.is_monomial() {
            return Err(Error::InvalidMutationData(format!("h = {h} is a monomial other than 1")));
        }
        let (status, checked_over) = match univariate_view(&h) {
            Some(p) => classify_univariate(&h, &p)?,
            None => {
                log::warn!("irreducibility of h = {h} is not checked for multivariate h");
                (IrreducibilityStatus::Unverified, CheckedOver::NotChecked)
            }
        };
        Ok(AlgebraicMutationData {
            u,
            h,
            status,
            checked_over,
        })
    }

    /// `(u, 1)`.
    pub fn trivial(u: DualVector) -> Result<Self> {
        let dim = u.dim();
        Self::new(u, LaurentPolynomial::one(dim))
    }

    pub fn u(&self) -> &DualVector {
        &self.u
    }

    pub fn h(&self) -> &LaurentPolynomial {
        &self.h
    }

    pub fn status(&self) -> IrreducibilityStatus {
        self.status
    }

    pub fn checked_over(&self) -> CheckedOver {
        self.checked_over
    }

    /// `(−u, h)`.
    pub fn invert(&self) -> Self {
        AlgebraicMutationData {
            u: self.u.neg(),
            ..self.clone()
        }
    }

    /// The combinatorial shadow `(u, Newt h)`.
    pub fn to_combinatorial(&self) -> CombinatorialMutationData {
        CombinatorialMutationData {
            u: self.u.clone(),
            factor: self.h.newton_polytope().expect("h is nonzero"),
        }
    }
}

/// When the support of `h` lies on a line, `h = xᵃ · p(x^d)` for a primitive
/// direction `d`; returns `p`.
fn univariate_view(h: &LaurentPolynomial) -> Option<UnivariatePolynomial> {
    let support = h.support();
    let base = &support[0];
    let d = support[1..]
        .iter()
        .map(|e| e.sub(base))
        .find(|x| !x.is_zero())?
        .primitive_part();
    let dd = dot(d.coords(), d.coords());
    let mut steps = Vec::with_capacity(support.len());
    for e in &support {
        let diff = e.sub(base);
        let j = dot(diff.coords(), d.coords()) / &dd;
        if d.scale(&j) != diff {
            return None;
        }
        steps.push(j);
    }
    let lo = steps.iter().min()?.clone();
    let len: usize = (steps.iter().max()? - &lo).try_into().ok()?;
    let mut coeffs = vec![Default::default(); len + 1];
    for (j, e) in steps.iter().zip(&support) {
        let idx: usize = (j - &lo).try_into().ok()?;
        coeffs[idx] = h.coeff(e);
    }
    Some(UnivariatePolynomial::new(coeffs))
}

fn classify_univariate(
    h: &LaurentPolynomial,
    p: &UnivariatePolynomial,
) -> Result<(IrreducibilityStatus, CheckedOver)> {
    let fact = factor_univariate(p)?;
    let t = UnivariatePolynomial::from_i64(&[0, 1]);
    let proper: Vec<_> = fact.factors.iter().filter(|(g, _)| *g != t).collect();
    match proper.as_slice() {
        [(g, m)] => {
            let status = if *m == 1 {
                IrreducibilityStatus::VerifiedIrreducible
            } else {
                IrreducibilityStatus::VerifiedPower
            };
            let over = if g.degree() == Some(1) {
                CheckedOver::Complex
            } else {
                log::warn!("h = {h} is a power of a ℚ-irreducible factor {g} of degree > 1, which splits over ℂ");
                CheckedOver::Rationals
            };
            Ok((status, over))
        }
        _ => {
            let parts: Vec<String> = proper.iter().map(|(g, m)| format!("({g})^{m}")).collect();
            Err(Error::InvalidMutationData(format!(
                "h = {h} factors as {} and is not a power of an irreducible",
                parts.join(" * ")
            )))
        }
    }
}

/// A primitive `u ∈ M` together with a lattice polytope `H ⊂ u⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialMutationData {
    u: DualVector,
    factor: LatticePolytope,
}

impl CombinatorialMutationData {
    pub fn new(u: DualVector, factor: LatticePolytope) -> Result<Self> {
        if u.dim() != factor.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: factor.ambient_dim(),
            });
        }
        validate_weight(&u)?;
        if let Some(v) = off_hyperplane(&u, factor.vertices()) {
            return Err(Error::InvalidMutationData(format!(
                "factor vertex {v} does not pair to zero with u = {u}"
            )));
        }
        Ok(CombinatorialMutationData { u, factor })
    }

    /// `(u, {0})`.
    pub fn trivial(u: DualVector) -> Result<Self> {
        let dim = u.dim();
        Self::new(u, LatticePolytope::point(LatticeVector::zero(dim)))
    }

    pub fn u(&self) -> &DualVector {
        &self.u
    }

    pub fn factor(&self) -> &LatticePolytope {
        &self.factor
    }

    pub fn invert(&self) -> Self {
        CombinatorialMutationData {
            u: self.u.neg(),
            factor: self.factor.clone(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.u.dim()
    }
}

/// Either kind of mutation datum, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MutationData {
    Algebraic(AlgebraicMutationData),
    Combinatorial(CombinatorialMutationData),
}

impl MutationData {
    pub fn u(&self) -> &DualVector {
        match self {
            MutationData::Algebraic(a) => a.u(),
            MutationData::Combinatorial(c) => c.u(),
        }
    }

    pub fn invert(&self) -> Self {
        match self {
            MutationData::Algebraic(a) => MutationData::Algebraic(a.invert()),
            MutationData::Combinatorial(c) => MutationData::Combinatorial(c.invert()),
        }
    }

    /// The combinatorial datum, taking the Newton polytope of `h` if needed.
    pub fn to_combinatorial(&self) -> CombinatorialMutationData {
        match self {
            MutationData::Algebraic(a) => a.to_combinatorial(),
            MutationData::Combinatorial(c) => c.clone(),
        }
    }
}

#[derive(Serialize)]
struct AlgebraicJsonOut<'a> {
    u: &'a DualVector,
    h: &'a LaurentPolynomial,
    status: IrreducibilityStatus,
    checked_over: CheckedOver,
}

#[derive(Serialize)]
struct CombinatorialJsonOut<'a> {
    u: &'a DualVector,
    factor: &'a LatticePolytope,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutationJsonIn {
    u: DualVector,
    #[serde(default)]
    h: Option<LaurentPolynomial>,
    #[serde(default)]
    factor: Option<LatticePolytope>,
    // informational fields written by the serializer
    #[serde(default)]
    #[allow(dead_code)]
    status: Option<IrreducibilityStatus>,
    #[serde(default)]
    #[allow(dead_code)]
    checked_over: Option<CheckedOver>,
}

impl Serialize for AlgebraicMutationData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraicJsonOut {
            u: &self.u,
            h: &self.h,
            status: self.status,
            checked_over: self.checked_over,
        }
        .serialize(s)
    }
}

impl Serialize for CombinatorialMutationData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CombinatorialJsonOut {
            u: &self.u,
            factor: &self.factor,
        }
        .serialize(s)
    }
}

impl Serialize for MutationData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MutationData::Algebraic(a) => a.serialize(s),
            MutationData::Combinatorial(c) => c.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for MutationData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MutationJsonIn::deserialize(d)?;
        match (raw.h, raw.factor) {
            (Some(h), None) => AlgebraicMutationData::new(raw.u, h)
                .map(MutationData::Algebraic)
                .map_err(D::Error::custom),
            (None, Some(f)) => CombinatorialMutationData::new(raw.u, f)
                .map(MutationData::Combinatorial)
                .map_err(D::Error::custom),
            _ => Err(D::Error::custom(
                "mutation data needs exactly one of \"h\" and \"factor\"",
            )),
        }
    }
}

impl<'de> Deserialize<'de> for AlgebraicMutationData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match MutationData::deserialize(d)? {
            MutationData::Algebraic(a) => Ok(a),
            MutationData::Combinatorial(_) => Err(D::Error::custom("expected \"h\", found \"factor\"")),
        }
    }
}

impl<'de> Deserialize<'de> for CombinatorialMutationData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match MutationData::deserialize(d)? {
            MutationData::Combinatorial(c) => Ok(c),
            MutationData::Algebraic(_) => Err(D::Error::custom("expected \"factor\", found \"h\"")),
        }
    }
}

/// Whether `apply_combinatorial((u, Newt h), Newt f)` is defined and equals
/// `Newt(apply_algebraic(μ, f))`.
pub fn newton_compatibility(f: &LaurentPolynomial, mu: &AlgebraicMutationData) -> Result<bool> {
    let g = apply_algebraic(mu, f)?;
    let comb = mu.to_combinatorial();
    match mutate_lattice_polytope(&comb, &f.newton_polytope()?) {
        Ok((p, _)) => Ok(p == g.newton_polytope()?),
        Err(e) if e.is_domain_failure() => Ok(false),
        Err(e) => Err(e),
    }
}

pub(crate) fn height_of(u: &DualVector, v: &LatticeVector) -> BigInt {
    dot(u.coords(), v.coords())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(2, s).unwrap()
    }
    fn dv(v: [i64; 2]) -> DualVector {
        DualVector::from(v)
    }

    #[test]
    fn validation() {
        let ok = AlgebraicMutationData::new(dv([-1, -1]), lp("1 + x*y^-1")).unwrap();
        assert_eq!(ok.status(), IrreducibilityStatus::VerifiedIrreducible);
        assert_eq!(ok.checked_over(), CheckedOver::Complex);
        let sq = AlgebraicMutationData::new(dv([-1, -1]), lp("1 + 2*x*y^-1 + x^2*y^-2")).unwrap();
        assert_eq!(sq.status(), IrreducibilityStatus::VerifiedPower);
        let q = AlgebraicMutationData::new(dv([-1, -1]), lp("1 + x^2*y^-2")).unwrap();
        assert_eq!(q.checked_over(), CheckedOver::Rationals);
        assert!(matches!(
            AlgebraicMutationData::new(dv([-1, -1]), lp("1 - x^2*y^-2")),
            Err(Error::InvalidMutationData(_))
        ));
        assert!(matches!(
            AlgebraicMutationData::new(dv([-2, -2]), lp("1 + x*y^-1")),
            Err(Error::InvalidMutationData(_))
        ));
        assert!(matches!(
            AlgebraicMutationData::new(dv([-1, -1]), lp("1 + x")),
            Err(Error::InvalidMutationData(_))
        ));
        assert!(matches!(
            AlgebraicMutationData::new(dv([-1, -1]), lp("x*y^-1")),
            Err(Error::InvalidMutationData(_))
        ));
        let t = AlgebraicMutationData::trivial(dv([3, 5])).unwrap();
        assert_eq!(t.status(), IrreducibilityStatus::VerifiedPower);
    }

    #[test]
    fn multivariate_h_is_unverified() {
        let h = LaurentPolynomial::parse(3, "1 + x + y").unwrap();
        let mu = AlgebraicMutationData::new(DualVector::from([0, 0, 1]), h).unwrap();
        assert_eq!(mu.status(), IrreducibilityStatus::Unverified);
        // a factor supported on a line is still checked
        let h = LaurentPolynomial::parse(3, "1 + x*y").unwrap();
        let mu = AlgebraicMutationData::new(DualVector::from([0, 0, 1]), h).unwrap();
        assert_eq!(mu.status(), IrreducibilityStatus::VerifiedIrreducible);
    }

    #[test]
    fn combinatorial_validation_and_inverse() {
        let h = LatticePolytope::from_i64(&[&[0, 0], &[1, -1]]).unwrap();
        let mu = CombinatorialMutationData::new(dv([-1, -1]), h.clone()).unwrap();
        assert_eq!(mu.invert().u(), &dv([1, 1]));
        assert_eq!(mu.invert().factor(), &h);
        assert!(CombinatorialMutationData::new(dv([0, 1]), h).is_err());
    }

    #[test]
    fn json_forms() {
        let m: MutationData = serde_json::from_str(
            r#"{"u":[-1,-1],"factor":{"dim":2,"vertices":[[0,0],[1,-1]]}}"#,
        )
        .unwrap();
        assert!(matches!(m, MutationData::Combinatorial(_)));
        let a: MutationData = serde_json::from_str(
            r#"{"u":[-1,-1],"h":{"dim":2,"terms":[{"exp":[0,0],"coeff":"1"},{"exp":[1,-1],"coeff":"1"}]}}"#,
        )
        .unwrap();
        let back: MutationData = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(a, back);
        assert!(serde_json::from_str::<MutationData>(r#"{"u":[-1,-1]}"#).is_err());
    }
}
