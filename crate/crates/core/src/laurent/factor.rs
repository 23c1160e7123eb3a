use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{gcd_all, lcm_all, rational_to_string};

/// A polynomial in one variable `t` over ℚ, coefficients stored from the
/// constant term upwards with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivariatePolynomial {
    coeffs: Vec<BigRational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    fn from_ints(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::from_i64(&[1]), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    /// Euclidean division over ℚ.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[top - dd + i] -= &c * dc;
                }
                quot[top - dd] = c;
            }
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Splits off the rational content: `self = content · primitive` where
    /// `primitive` has coprime integer coefficients and positive leading
    /// coefficient.
    fn primitive(&self) -> (BigRational, Vec<BigInt>) {
        let den = lcm_all(self.coeffs.iter().map(|c| c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from(den.clone())).to_integer())
            .collect();
        let mut g = gcd_all(&ints);
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (BigRational::new(g, den), prim)
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if var.is_empty() {
                write!(f, "{}", rational_to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", rational_to_string(&mag))?;
            }
        }
        Ok(())
    }
}

/// `unit · ∏ factorᵐ` with every factor a primitive integer polynomial with
/// positive leading coefficient, irreducible over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<(UnivariatePolynomial, u32)>,
}

impl Factorization {
    pub fn product(&self) -> UnivariatePolynomial {
        self.factors
            .iter()
            .fold(UnivariatePolynomial::new(vec![self.unit.clone()]), |acc, (p, m)| {
                acc.mul(&p.pow(*m))
            })
    }
}

/// Complete factorization into ℚ-irreducibles, sorted by degree and then
/// coefficients.
pub fn factor_univariate(p: &UnivariatePolynomial) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (unit, mut rest) = p.primitive();
    let mut found: Vec<Vec<BigInt>> = Vec::new();

    let zeros = rest.iter().take_while(|c| c.is_zero()).count();
    rest.drain(..zeros);
    found.extend(std::iter::repeat_n(vec![BigInt::zero(), BigInt::one()], zeros));

    // linear factors from rational roots q·t − r
    loop {
        if rest.len() <= 1 {
            break;
        }
        let Some(lin) = rational_root_factor(&rest) else {
            break;
        };
        rest = int_exact_div(&rest, &lin).expect("root gives a factor");
        found.push(lin);
    }

    // whatever remains has no linear factors; degrees 2 and 3 are irreducible
    let mut pending = vec![rest];
    while let Some(q) = pending.pop() {
        let deg = q.len() - 1;
        if deg == 0 {
            continue;
        }
        match (deg >= 4).then(|| kronecker_factor(&q)).flatten() {
            Some(g) => {
                let h = int_exact_div(&q, &g).expect("Kronecker factor divides");
                pending.push(g);
                pending.push(h);
            }
            None => found.push(q),
        }
    }

    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut factors: Vec<(UnivariatePolynomial, u32)> = Vec::new();
    for f in found {
        let f = UnivariatePolynomial::from_ints(f);
        match factors.last_mut() {
            Some((g, m)) if *g == f => *m += 1,
            _ => factors.push((f, 1)),
        }
    }
    Ok(Factorization { unit, factors })
}

fn int_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let q = UnivariatePolynomial::from_ints(a.to_vec())
        .exact_div(&UnivariatePolynomial::from_ints(b.to_vec()))?;
    q.coeffs
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn rational_root_factor(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let poly = UnivariatePolynomial::from_ints(p.to_vec());
    let a0 = &p[0];
    let an = p.last().unwrap();
    for q in positive_divisors(an) {
        for r in positive_divisors(a0) {
            for r in [r.clone(), -r] {
                if r.gcd(&q).is_one() && poly.eval(&BigRational::new(r.clone(), q.clone())).is_zero() {
                    return Some(vec![-r, q.clone()]);
                }
            }
        }
    }
    None
}

/// Finds a factor of degree between 2 and deg/2 by interpolating through
/// divisors of the values at small integers, or `None` if irreducible.
fn kronecker_factor(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let poly = UnivariatePolynomial::from_ints(p.to_vec());
    let deg = p.len() - 1;
    for d in 2..=deg / 2 {
        let xs: Vec<BigInt> = (0..=d as i64)
            .map(|i| BigInt::from(if i % 2 == 0 { -i / 2 } else { (i + 1) / 2 }))
            .collect();
        let values: Vec<BigInt> = xs
            .iter()
            .map(|x| poly.eval(&BigRational::from(x.clone())).to_integer())
            .collect();
        // no rational roots remain, so every value is nonzero
        let choices: Vec<Vec<BigInt>> = values
            .iter()
            .map(|v| {
                positive_divisors(v)
                    .into_iter()
                    .flat_map(|q| [q.clone(), -q])
                    .collect()
            })
            .collect();
        let mut pick = vec![0usize; d + 1];
        loop {
            let ys: Vec<BigInt> = pick.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            if let Some(g) = interpolate_integer(&xs, &ys, d) {
                if int_exact_div(p, &g).is_some() {
                    return Some(g);
                }
            }
            let mut k = 0;
            loop {
                if k == pick.len() {
                    break;
                }
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
    None
}

/// Lagrange interpolation; keeps the result only if it has integer
/// coefficients, exact degree `d` and positive leading coefficient.
fn interpolate_integer(xs: &[BigInt], ys: &[BigInt], d: usize) -> Option<Vec<BigInt>> {
    let mut acc = UnivariatePolynomial::new(Vec::new());
    for (i, xi) in xs.iter().enumerate() {
        let mut basis = UnivariatePolynomial::from_i64(&[1]);
        let mut denom = BigInt::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UnivariatePolynomial::from_ints(vec![-xj.clone(), BigInt::one()]));
                denom *= xi - xj;
            }
        }
        let c = BigRational::new(ys[i].clone(), denom);
        let next: Vec<BigRational> = (0..=d)
            .map(|k| {
                acc.coeffs.get(k).cloned().unwrap_or_default()
                    + basis.coeffs.get(k).cloned().unwrap_or_default() * &c
            })
            .collect();
        acc = UnivariatePolynomial::new(next);
    }
    if acc.degree() != Some(d) || !acc.leading()?.is_positive() {
        return None;
    }
    acc.coeffs
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}
