//! Laurent polynomials over ℚ in `n` variables.

mod factor;

pub use factor::{factor_univariate, Factorization, UnivariatePolynomial};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{dot, DualVector, IntMatrix, LatticeVector};
use crate::num::{parse_rational, rational_to_string};
use crate::polytope::LatticePolytope;

/// A finite sum `Σ c_n xⁿ` with `n ∈ ℤ^dim` and nonzero `c_n ∈ ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dim: usize,
    terms: BTreeMap<LatticeVector, BigRational>,
}

impl LaurentPolynomial {
    pub fn zero(dim: usize) -> Self {
        LaurentPolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        Self::monomial(LatticeVector::zero(dim), c)
    }

    pub fn monomial(exp: LatticeVector, c: BigRational) -> Self {
        let mut p = Self::zero(exp.dim());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from terms, summing repeated exponents.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticeVector, BigRational)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_i64(dim: usize, terms: &[(&[i64], i64)]) -> Result<Self> {
        Self::from_terms(
            dim,
            terms.iter().map(|(e, c)| {
                (
                    LatticeVector::from(e.to_vec()),
                    BigRational::from(BigInt::from(*c)),
                )
            }),
        )
    }

    fn add_term(&mut self, e: LatticeVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.is_zero() && c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, e: &LatticeVector) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<LatticeVector> {
        self.terms.keys().cloned().collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// `xᵉ · self`.
    pub fn shift(&self, e: &LatticeVector) -> Self {
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(x, c)| (x.add(e), c.clone())).collect(),
        }
    }

    /// `selfᵏ` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        acc
    }

    /// Applies the monomial change of variables `xⁿ ↦ x^{m·n}`.
    pub fn transform(&self, m: &IntMatrix) -> Self {
        let mut out = Self::zero(m.nrows());
        for (e, c) in &self.terms {
            out.add_term(e.transform(m), c.clone());
        }
        out
    }

    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        LatticePolytope::hull(&self.support())
    }

    pub fn height_decomposition(&self, u: &DualVector) -> Result<HeightDecomposition> {
        height_decomposition(self, u)
    }

    /// Componentwise minimum of the exponents (zero vector for 0).
    fn min_exponent(&self) -> LatticeVector {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return LatticeVector::zero(self.dim);
        };
        let mut m = first.coords().to_vec();
        for e in it {
            for (a, b) in m.iter_mut().zip(e.coords()) {
                if b < a {
                    *a = b.clone();
                }
            }
        }
        LatticeVector::new(m)
    }

    /// Variable names used for display: `x, y, z` up to three variables,
    /// `x1, x2, ...` beyond.
    fn var_names(dim: usize) -> Vec<String> {
        if dim <= 3 {
            ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=dim).map(|i| format!("x{i}")).collect()
        }
    }

    /// Parses sums of terms such as `x + 2*y^-2 - 1/2*x^-1*y^-1`.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        let names = Self::var_names(dim);
        let bad = |msg: &str| Error::InvalidDocument(format!("{msg} in polynomial {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        // split into signed terms, ignoring signs that belong to exponents
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && prev != Some('^') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        pieces.push(cur);
        let mut p = Self::zero(dim);
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (-BigRational::one(), rest),
                None => (BigRational::one(), piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let mut coeff = sign;
            let mut exp = vec![BigInt::zero(); dim];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= parse_rational(factor)?;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((n, k)) => (n, k.parse::<BigInt>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, BigInt::one()),
                };
                let idx = names
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| bad(&format!("unknown variable {name:?}")))?;
                exp[idx] += power;
            }
            p.add_term(LatticeVector::new(exp), coeff);
        }
        Ok(p)
    }
}

/// Exact Laurent division: `Some(q)` with `g = q·h`, or `None`.
pub fn divides(h: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<Option<LaurentPolynomial>> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    h.check_dim(g)?;
    if g.is_zero() {
        return Ok(Some(LaurentPolynomial::zero(g.dim)));
    }
    if h.is_monomial() {
        let (e, c) = h.terms.iter().next().unwrap();
        return Ok(Some(g.shift(&e.neg()).scale(&c.recip())));
    }
    // Shift both into the polynomial ring with no monomial factor, then
    // divide with respect to graded lexicographic order.
    let hs = h.min_exponent();
    let gs = g.min_exponent();
    let key = |e: &LatticeVector| -> (BigInt, LatticeVector) {
        (e.coords().iter().sum(), e.clone())
    };
    let divisor: Vec<(LatticeVector, BigRational)> = h
        .terms
        .iter()
        .map(|(e, c)| (e.sub(&hs), c.clone()))
        .collect();
    let (lead_e, lead_c) = divisor
        .iter()
        .max_by(|a, b| key(&a.0).cmp(&key(&b.0)))
        .cloned()
        .unwrap();
    let mut rem: BTreeMap<(BigInt, LatticeVector), BigRational> = g
        .terms
        .iter()
        .map(|(e, c)| {
            let e = e.sub(&gs);
            (key(&e), c.clone())
        })
        .collect();
    let mut quot = LaurentPolynomial::zero(g.dim);
    while let Some(((_, e), c)) = rem.pop_last() {
        let qe = e.sub(&lead_e);
        if qe.coords().iter().any(Signed::is_negative) {
            return Ok(None);
        }
        let qc = &c / &lead_c;
        for (de, dc) in &divisor {
            if *de == lead_e {
                continue;
            }
            let k = key(&qe.add(de));
            let entry = rem.entry(k).or_insert_with(BigRational::zero);
            *entry -= &qc * dc;
            if entry.is_zero() {
                let k = key(&qe.add(de));
                rem.remove(&k);
            }
        }
        quot.add_term(qe, qc);
    }
    // g·x^{-gs} = q·h·x^{-hs}, so g = q·x^{gs-hs}·h
    Ok(Some(quot.shift(&gs.sub(&hs))))
}

/// `f = Σ_k f_k` where every exponent of `f_k` pairs to `k` with the anchor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightDecomposition {
    pub anchor: DualVector,
    #[serde(serialize_with = "serialize_components")]
    pub components: BTreeMap<BigInt, LaurentPolynomial>,
}

fn serialize_components<S: Serializer>(
    c: &BTreeMap<BigInt, LaurentPolynomial>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(c.len()))?;
    for (k, v) in c {
        m.serialize_entry(&k.to_string(), v)?;
    }
    m.end()
}

impl HeightDecomposition {
    pub fn reconstruct(&self) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(self.anchor.dim());
        for f in self.components.values() {
            for (e, c) in &f.terms {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn component(&self, k: &BigInt) -> Option<&LaurentPolynomial> {
        self.components.get(k)
    }
}

pub fn height_decomposition(f: &LaurentPolynomial, u: &DualVector) -> Result<HeightDecomposition> {
    if u.dim() != f.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            found: u.dim(),
        });
    }
    let mut components: BTreeMap<BigInt, LaurentPolynomial> = BTreeMap::new();
    for (e, c) in &f.terms {
        let k = dot(u.coords(), e.coords());
        components
            .entry(k)
            .or_insert_with(|| LaurentPolynomial::zero(f.dim))
            .add_term(e.clone(), c.clone());
    }
    Ok(HeightDecomposition {
        anchor: u.clone(),
        components,
    })
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = Self::var_names(self.dim);
        // highest exponents first reads more naturally
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .coords()
                .iter()
                .zip(&names)
                .filter(|(k, _)| !k.is_zero())
                .map(|(k, v)| if k.is_one() { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", rational_to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", rational_to_string(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: LatticeVector,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    coeff: rational_to_string(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolynomialJson::deserialize(d)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| Ok((t.exp, parse_rational(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        LaurentPolynomial::from_terms(raw.dim, terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(2, s).unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(lp("x+y").mul(&lp("x-y")).unwrap(), lp("x^2-y^2"));
        assert_eq!(lp("x+y").add(&LaurentPolynomial::zero(2)).unwrap(), lp("x+y"));
        assert_eq!(lp("1+x*y^-1").mul(&lp("y")).unwrap(), lp("y+x"));
        assert!(lp("x").add(&LaurentPolynomial::zero(3)).is_err());
    }

    #[test]
    fn parse_and_display() {
        let f = lp("x + y + x^-1*y^-1");
        assert_eq!(f.len(), 3);
        assert_eq!(f.coeff(&LatticeVector::from([-1, -1])), BigRational::one());
        assert_eq!(LaurentPolynomial::parse(2, &f.to_string()).unwrap(), f);
        let g = lp("-1/2*x^2 + 3 - y^-4");
        assert_eq!(LaurentPolynomial::parse(2, &g.to_string()).unwrap(), g);
        assert!(LaurentPolynomial::parse(2, "x + w").is_err());
    }

    #[test]
    fn newton_polytope_examples() {
        let n = lp("x+y+x^-1*y^-1").newton_polytope().unwrap();
        assert_eq!(n, LatticePolytope::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap());
        let n = lp("5").newton_polytope().unwrap();
        assert_eq!(n.vertices(), &[LatticeVector::zero(2)]);
        let n = lp("y + x^-1*y^-1 + 2*y^-2 + x*y^-3").newton_polytope().unwrap();
        assert_eq!(n, LatticePolytope::from_i64(&[&[0, 1], &[-1, -1], &[1, -3]]).unwrap());
        assert_eq!(LaurentPolynomial::zero(2).newton_polytope(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn height_decomposition_examples() {
        let d = lp("x+y+x^-1*y^-1").height_decomposition(&DualVector::from([-1, -1])).unwrap();
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.component(&BigInt::from(-1)), Some(&lp("x+y")));
        assert_eq!(d.component(&BigInt::from(2)), Some(&lp("x^-1*y^-1")));
        assert_eq!(d.reconstruct(), lp("x+y+x^-1*y^-1"));
        let d = lp("x").height_decomposition(&DualVector::from([0, 1])).unwrap();
        assert_eq!(d.component(&BigInt::zero()), Some(&lp("x")));
        let d = LaurentPolynomial::zero(2).height_decomposition(&DualVector::from([0, 1])).unwrap();
        assert!(d.components.is_empty());
    }

    #[test]
    fn divides_examples() {
        assert_eq!(divides(&lp("1+x*y^-1"), &lp("x+y")).unwrap(), Some(lp("y")));
        assert_eq!(divides(&lp("1+x*y^-1"), &lp("x+2*y")).unwrap(), None);
        assert_eq!(divides(&lp("1"), &lp("x-3*y^2")).unwrap(), Some(lp("x-3*y^2")));
        assert_eq!(
            divides(&LaurentPolynomial::zero(2), &lp("x")),
            Err(Error::ZeroPolynomial)
        );
        let h = lp("1+x*y^-1");
        let g = h.pow(3).mul(&lp("x^-2 + 7*y^5")).unwrap();
        assert_eq!(divides(&h.pow(3), &g).unwrap(), Some(lp("x^-2 + 7*y^5")));
        assert_eq!(divides(&h.pow(4), &g).unwrap(), None);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let h = lp("1 + 2*x*y^-1 - y");
        let mut acc = LaurentPolynomial::one(2);
        for k in 0..6u64 {
            assert_eq!(h.pow(k), acc);
            acc = acc.mul(&h).unwrap();
        }
    }

    #[test]
    fn json_round_trip() {
        let f = lp("x + 1/3*y + x^-1*y^-1");
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"coeff\":\"1/3\""));
        let back: LaurentPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let parsed: LaurentPolynomial = serde_json::from_str(
            r#"{"dim": 2, "terms": [{"exp":[1,0],"coeff":"1"},{"exp":[0,1],"coeff":"1"},{"exp":[-1,-1],"coeff":"1"}]}"#,
        )
        .unwrap();
        assert_eq!(parsed, lp("x+y+x^-1*y^-1"));
    }
}
