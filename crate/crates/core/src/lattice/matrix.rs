use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::num::bigint_seq;

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Row-style Hermite normal form `h = transform * input`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn from_columns(cols: &[Vec<BigInt>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix and vector do not compose");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v * self` for a row vector `v`.
    pub fn apply_left(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len(), "vector and matrix do not compose");
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * &self[(i, j)]).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Exact inverse over the rationals, `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<BigRational>>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    self.row(i).iter().cloned().map(BigRational::from).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let pivot = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &pivot;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..2 * n {
                        let t = &f * &a[c][j];
                        a[r][j] -= t;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let inv = self
            .rational_inverse()
            .ok_or_else(|| Error::InvalidDocument("singular matrix".into()))?;
        let rows: Option<Vec<Vec<BigInt>>> = inv
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|q| q.is_integer().then(|| q.to_integer()))
                    .collect()
            })
            .collect();
        rows.map(|r| IntMatrix::from_rows(&r))
            .ok_or_else(|| Error::InvalidDocument("matrix is not unimodular".into()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = factor * &self[(source, j)];
            self[(target, j)] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Row-style Hermite normal form. Pivots are positive, entries above a
    /// pivot lie in `[0, pivot)`, and zero rows sit at the bottom. The pivot
    /// rule (smallest absolute value, first index on ties) is fixed, so the
    /// transform is reproducible.
    pub fn hermite(&self) -> HermiteForm {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            loop {
                let pivot = (r..self.rows)
                    .filter(|&i| !h[(i, c)].is_zero())
                    .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()).then(a.cmp(&b)));
                let Some(p) = pivot else { break };
                h.swap_rows(r, p);
                u.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..self.rows {
                    if h[(i, c)].is_zero() {
                        continue;
                    }
                    let q = h[(i, c)].div_floor(&h[(r, c)]);
                    h.sub_row(i, r, &q);
                    u.sub_row(i, r, &q);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[(r, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            for i in 0..r {
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.sub_row(i, r, &q);
                u.sub_row(i, r, &q);
            }
            r += 1;
        }
        HermiteForm {
            hnf: h,
            transform: u,
            rank: r,
        }
    }

    /// Basis of the saturated lattice `{ y : y * self = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vec<BigInt>> {
        let hf = self.hermite();
        (hf.rank..self.rows)
            .map(|i| hf.transform.row(i).to_vec())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct JsonRow(#[serde(with = "bigint_seq")] Vec<BigInt>);

/// Serialized as an array of rows.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq((0..self.rows).map(|i| JsonRow(self.row(i).to_vec())))
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<JsonRow> = Vec::deserialize(d)?;
        let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.0).collect();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(IntMatrix::from_rows(&rows))
    }
}
