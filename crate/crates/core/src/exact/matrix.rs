use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::linalg::{kernel_basis, row_echelon};
use super::{common_denominator, format_rational, parse_rational, rational_bits, RatPolynomial, Rational};
use crate::error::{Error, Result};

/// Column vector over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QVector {
    entries: Vec<Rational>,
}

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector { entries }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        QVector::new(values.iter().map(|&x| super::rat(x)).collect())
    }

    /// Standard basis vector `e_{index+1}` of length `n`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut entries = vec![Rational::zero(); n];
        entries[index] = Rational::one();
        QVector { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "vector length mismatch");
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector::new(self.entries.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim(), "vector length mismatch");
        QVector::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim(), "vector length mismatch");
        QVector::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Dense square matrix over ℚ, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(QMatrix { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        QMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(QMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer matrices; panics if `rows` is not square.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        QMatrix::from_fn(n, |i, j| {
            assert_eq!(rows[i].len(), n, "matrix is not square");
            super::rat(rows[i][j])
        })
    }

    /// Parses a row-major table of fraction strings such as `["1", "-3/7"]`.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        QMatrix::from_rows(parsed)
    }

    pub fn from_columns(columns: &[QVector]) -> Result<Self> {
        let n = columns.len();
        if let Some(bad) = columns.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        Ok(QMatrix::from_fn(n, |i, j| columns[j].get(i).clone()))
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn zero(n: usize) -> Self {
        QMatrix::from_fn(n, |_, _| Rational::zero())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at zero-based row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> QVector {
        QVector::new((0..self.n).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    pub fn max_entry_bits(&self) -> u64 {
        self.entries.iter().map(rational_bits).max().unwrap_or(0)
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        assert_eq!(self.n, v.dim(), "dimension mismatch in matrix-vector product");
        QVector::new(
            (0..self.n)
                .map(|i| self.row(i).iter().zip(v.entries()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `Pᵀ · self · P`, the matrix of the same bilinear form in the basis given by the columns of `p`.
    pub fn congruence(&self, p: &QMatrix) -> QMatrix {
        &(&p.transpose() * self) * p
    }

    /// Determinant by exact elimination.
    pub fn det(&self) -> Rational {
        let mut rows = self.rows();
        let mut det = Rational::one();
        for col in 0..self.n {
            let Some(p) = (col..self.n).find(|&i| !rows[i][col].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            let pivot = rows[col][col].clone();
            det *= &pivot;
            for i in col + 1..self.n {
                if rows[i][col].is_zero() {
                    continue;
                }
                let factor = &rows[i][col] / &pivot;
                for j in col..self.n {
                    let delta = &factor * &rows[col][j];
                    rows[i][j] -= delta;
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows();
        row_echelon(&mut rows, self.n).len()
    }

    /// Basis of `{x : Mx = 0}`; empty iff the matrix is invertible.
    pub fn kernel(&self) -> Vec<QVector> {
        kernel_basis(&self.rows(), self.n)
            .into_iter()
            .map(QVector::new)
            .collect()
    }

    /// Exact inverse by Gauss-Jordan elimination on `[M | I]`.
    pub fn inverse(&self) -> Result<QMatrix> {
        let n = self.n;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = row_echelon(&mut rows, n);
        if pivots.len() < n {
            return Err(Error::SingularMatrix);
        }
        Ok(QMatrix::from_fn(n, |i, j| rows[i][n + j].clone()))
    }

    /// Integer power; negative exponents use the inverse, `0` gives `I`.
    pub fn pow(&self, exponent: i64) -> Result<QMatrix> {
        let base = if exponent < 0 { self.inverse()? } else { self.clone() };
        Ok(base.pow_unsigned(exponent.unsigned_abs()))
    }

    /// Power by a non-negative exponent, by repeated squaring.
    pub fn pow_unsigned(&self, mut e: u64) -> QMatrix {
        let mut result = QMatrix::identity(self.n);
        let mut square = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &square;
            }
            e >>= 1;
            if e > 0 {
                square = &square * &square;
            }
        }
        result
    }

    /// `det(xI − M)` by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> RatPolynomial {
        let n = self.n;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = QMatrix::zero(n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            m = next;
            let t = (self * &m).trace();
            coeffs[n - k] = -t / super::rat(k as i64);
        }
        RatPolynomial::new(coeffs)
    }

    /// True iff `(M − I)ⁿ = 0`.
    pub fn is_unipotent(&self) -> bool {
        let nil = self - &QMatrix::identity(self.n);
        nil.pow_unsigned(self.n as u64).is_zero()
    }

    /// Logarithm of a unipotent matrix, `Σ (−1)^{k+1} Nᵏ/k` with `N = M − I`.
    /// Returns `None` when the matrix is not unipotent.
    pub fn unipotent_log(&self) -> Option<QMatrix> {
        let nil = self - &QMatrix::identity(self.n);
        let mut power = nil.clone();
        let mut log = QMatrix::zero(self.n);
        for k in 1..=self.n {
            if power.is_zero() {
                return Some(log);
            }
            let coeff = super::ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            log = &log + &power.scale(&coeff);
            power = &power * &nil;
        }
        power.is_zero().then_some(log)
    }

    /// Exponential of a nilpotent matrix; `None` if the matrix is not nilpotent.
    pub fn nilpotent_exp(&self) -> Option<QMatrix> {
        let mut term = QMatrix::identity(self.n);
        let mut sum = QMatrix::identity(self.n);
        for k in 1..=self.n {
            term = (&term * self).scale(&super::ratio(1, k as i64));
            if term.is_zero() {
                return Some(sum);
            }
            sum = &sum + &term;
        }
        (&term * self).is_zero().then_some(sum)
    }

    /// The matrix as a table of canonical fraction strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }

    /// Splits `M = N / d` with `N` integral and `d` the least common denominator.
    fn integer_parts(&self) -> (Vec<BigInt>, BigInt) {
        let d = common_denominator(&self.entries);
        let numers = self
            .entries
            .iter()
            .map(|x| x.numer() * (&d / x.denom()))
            .collect();
        (numers, d)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_string_rows();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "[{}]", line.join(" "))?;
            if i + 1 < cells.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        // Multiply integer numerators and divide once per entry.
        let (a, da) = self.integer_parts();
        let (b, db) = rhs.integer_parts();
        let denom = da * db;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    let x = &a[i * n + k];
                    let y = &b[k * n + j];
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                entries.push(Rational::new(acc, denom.clone()));
            }
        }
        QMatrix { n, entries }
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;

    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix sum");
        QMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;

    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix difference");
        QMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;

    fn neg(self) -> QMatrix {
        QMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

/// True iff `lhs = λ·rhs` for some non-zero rational λ.
pub(crate) fn projectively_equal(lhs: &QMatrix, rhs: &QMatrix) -> bool {
    projective_factor(lhs, rhs).is_some()
}

/// The λ with `lhs = λ·rhs`, if one exists and is non-zero.
pub(crate) fn projective_factor(lhs: &QMatrix, rhs: &QMatrix) -> Option<Rational> {
    if lhs.dim() != rhs.dim() {
        return None;
    }
    let idx = rhs.entries().iter().position(|x| !x.is_zero())?;
    let lambda = &lhs.entries()[idx] / &rhs.entries()[idx];
    if lambda.is_zero() {
        return None;
    }
    lhs.entries()
        .iter()
        .zip(rhs.entries())
        .all(|(a, b)| *a == &lambda * b)
        .then_some(lambda)
}

impl QMatrix {
    /// `Some(λ)` with `self = λ·other`, λ ≠ 0.
    pub fn projective_factor(&self, other: &QMatrix) -> Option<Rational> {
        projective_factor(self, other)
    }

    pub fn projectively_equal(&self, other: &QMatrix) -> bool {
        projectively_equal(self, other)
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, IntPolynomial};

    fn sp4_a() -> QMatrix {
        QMatrix::from_i64(&[&[0, 0, 0, -1], &[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 1]])
    }

    fn sp4_b() -> QMatrix {
        QMatrix::from_i64(&[&[0, 0, 0, -1], &[1, 0, 0, -2], &[0, 1, 0, -2], &[0, 0, 1, -2]])
    }

    fn sp4_c() -> QMatrix {
        QMatrix::from_i64(&[&[1, 0, 0, -3], &[0, 1, 0, -2], &[0, 0, 1, -3], &[0, 0, 0, 1]])
    }

    #[test]
    fn identity_inverse() {
        assert_eq!(QMatrix::identity(4).inverse().unwrap(), QMatrix::identity(4));
    }

    #[test]
    fn inverse_reproduces_printed_c() {
        let a_inv = sp4_a().inverse().unwrap();
        assert_eq!(&a_inv * &sp4_b(), sp4_c());
    }

    #[test]
    fn unimodular_inverse_multiplies_back() {
        // det = 1 by construction (product of elementary matrices)
        let m = QMatrix::from_i64(&[&[2, 3, 1], &[1, 2, 1], &[4, 7, 4]]);
        assert_eq!(m.det(), rat(1));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
        assert!(inv.is_integral());
    }

    #[test]
    fn singular_inverse_fails() {
        let m = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
        assert_eq!(m.det(), rat(0));
    }

    #[test]
    fn kernels() {
        assert!(QMatrix::identity(3).kernel().is_empty());
        assert_eq!(QMatrix::zero(2).kernel().len(), 2);
        let c_minus_i = &sp4_c() - &QMatrix::identity(4);
        let k = c_minus_i.kernel();
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(c_minus_i.mul_vec(v).is_zero());
        }
        assert_eq!(c_minus_i.rank(), 1);
    }

    #[test]
    fn characteristic_polynomials() {
        let id = QMatrix::identity(2).char_poly().to_int().unwrap();
        assert_eq!(id, IntPolynomial::from_i64(&[1, -2, 1]));
        let f = IntPolynomial::from_i64(&[1, -1, 0, -1, 1]);
        assert_eq!(sp4_a().char_poly().to_int().unwrap(), f);
        let b3 = QMatrix::from_i64(&[
            &[0, 0, 0, 0, 1],
            &[1, 0, 0, 0, -3],
            &[0, 1, 0, 0, 5],
            &[0, 0, 1, 0, -5],
            &[0, 0, 0, 1, 3],
        ]);
        let g = IntPolynomial::from_i64(&[-1, 3, -5, 5, -3, 1]);
        assert_eq!(b3.char_poly().to_int().unwrap(), g);
    }

    #[test]
    fn powers() {
        let c = sp4_c();
        assert!(c.pow(0).unwrap().is_identity());
        let c3 = c.pow(3).unwrap();
        assert_eq!(c3.get(0, 3), &rat(-9));
        assert!((&c.pow(-3).unwrap() * &c3).is_identity());
        assert!(QMatrix::from_i64(&[&[1, 1], &[1, 1]]).pow(-1).is_err());
    }

    #[test]
    fn log_and_exp_are_inverse_on_unipotents() {
        let u = QMatrix::parse_rows(&[
            vec!["1", "0", "1824", "0", "1663488"],
            vec!["0", "1", "0", "0", "0"],
            vec!["0", "0", "1", "0", "1824"],
            vec!["0", "0", "0", "1", "0"],
            vec!["0", "0", "0", "0", "1"],
        ])
        .unwrap();
        let log = u.unipotent_log().unwrap();
        assert_eq!(log.get(0, 4), &rat(0));
        assert_eq!(log.get(0, 2), &rat(1824));
        assert_eq!(log.nilpotent_exp().unwrap(), u);
        assert!(sp4_a().unipotent_log().is_none());
    }

    #[test]
    fn projective_comparison() {
        let m = QMatrix::from_i64(&[&[0, 3], &[-3, 0]]);
        let half = m.scale(&ratio(1, 2));
        assert_eq!(half.projective_factor(&m), Some(ratio(1, 2)));
        assert!(!QMatrix::zero(2).projectively_equal(&m));
    }
}
