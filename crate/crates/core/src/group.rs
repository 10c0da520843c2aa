//! Companion-matrix presentations and their invariant bilinear forms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cyclo::{classify_pair, poly_from_parameters, GroupCase, PairClassification, ParameterPair};
use crate::error::{Error, Result};
use crate::exact::{common_denominator, kernel_basis, IntPolynomial, QMatrix, QVector, Rational};

/// Generators `A`, `B` of the hypergeometric group and `C = A⁻¹B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub f: IntPolynomial,
    pub g: IntPolynomial,
    pub a: QMatrix,
    pub b: QMatrix,
    pub c: QMatrix,
    pub classification: PairClassification,
}

impl GroupPresentation {
    pub fn degree(&self) -> usize {
        self.a.dim()
    }

    pub fn form_kind(&self) -> FormKind {
        match self.classification.case {
            GroupCase::Symplectic => FormKind::Alternating,
            _ => FormKind::Symmetric,
        }
    }
}

/// Companion matrices of `f` and `g`; fails unless the pair is coprime,
/// primitive and symplectic or orthogonal.
pub fn build_presentation(f: &IntPolynomial, g: &IntPolynomial) -> Result<GroupPresentation> {
    if !f.is_monic() || !g.is_monic() || f.degree() == 0 {
        return Err(Error::InvalidPair("polynomials must be monic of positive degree".into()));
    }
    let classification = classify_pair(f, g)?;
    if !classification.coprime {
        return Err(Error::InvalidPair("f and g share a common factor".into()));
    }
    if !classification.primitive {
        return Err(Error::InvalidPair("f and g are both polynomials in x^k for some k >= 2".into()));
    }
    if classification.case == GroupCase::Unsupported {
        return Err(Error::InvalidPair(format!(
            "f(0) = {}, g(0) = {}: neither symplectic nor orthogonal",
            f.constant_term(),
            g.constant_term()
        )));
    }
    let a = f.companion();
    let b = g.companion();
    let c = &a.inverse()? * &b;
    Ok(GroupPresentation {
        f: f.clone(),
        g: g.clone(),
        a,
        b,
        c,
        classification,
    })
}

pub fn presentation_from_pair(pair: &ParameterPair) -> Result<GroupPresentation> {
    if pair.alpha.len() != pair.beta.len() {
        return Err(Error::DegreeMismatch(pair.alpha.len(), pair.beta.len()));
    }
    let f = poly_from_parameters(&pair.alpha)?;
    let g = poly_from_parameters(&pair.beta)?;
    build_presentation(&f, &g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Alternating,
    Symmetric,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Alternating => "alternating",
            FormKind::Symmetric => "symmetric",
        })
    }
}

/// A non-degenerate bilinear form, compared up to non-zero scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    pub matrix: QMatrix,
    pub kind: FormKind,
}

pub const NORMALIZATION_NOTE: &str =
    "scaled to coprime integer entries with the first non-zero entry (row-major) positive";

impl InvariantForm {
    /// Checks symmetry type and non-degeneracy.
    pub fn new(matrix: QMatrix, kind: FormKind) -> Result<Self> {
        let t = matrix.transpose();
        let ok = match kind {
            FormKind::Symmetric => t == matrix,
            FormKind::Alternating => t == -&matrix,
        };
        if !ok {
            return Err(Error::InvalidPair(format!("matrix is not {kind}")));
        }
        if matrix.det().is_zero() {
            return Err(Error::DegenerateForm);
        }
        Ok(InvariantForm { matrix, kind })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Xᵀ M X = M`.
    pub fn is_preserved_by(&self, x: &QMatrix) -> bool {
        x.dim() == self.dim() && self.matrix.congruence(x) == self.matrix
    }

    pub fn normalized(&self) -> InvariantForm {
        InvariantForm {
            matrix: normalize_matrix(&self.matrix),
            kind: self.kind,
        }
    }

    pub fn projectively_equal(&self, other: &QMatrix) -> bool {
        self.matrix.projectively_equal(other)
    }
}

/// Integer multiple of `m` with coprime entries and positive leading entry.
pub fn normalize_matrix(m: &QMatrix) -> QMatrix {
    let d = common_denominator(m.entries());
    let ints: Vec<BigInt> = m
        .entries()
        .iter()
        .map(|x| x.numer() * (&d / x.denom()))
        .collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
    if g.is_zero() {
        return m.clone();
    }
    let sign_negative = ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
    let scale = if sign_negative { -g } else { g };
    QMatrix::from_fn(m.dim(), |i, j| {
        Rational::from_integer(&ints[i * m.dim() + j] / &scale)
    })
}

/// Basis of the matrices of the given kind: `E_ij + E_ji` (or `E_ij − E_ji`).
fn form_basis(n: usize, kind: FormKind) -> Vec<QMatrix> {
    let mut basis = Vec::new();
    for i in 0..n {
        let start = match kind {
            FormKind::Symmetric => i,
            FormKind::Alternating => i + 1,
        };
        for j in start..n {
            basis.push(QMatrix::from_fn(n, |r, c| {
                if (r, c) == (i, j) {
                    Rational::one()
                } else if (r, c) == (j, i) {
                    match kind {
                        FormKind::Symmetric => Rational::one(),
                        FormKind::Alternating => -Rational::one(),
                    }
                } else {
                    Rational::zero()
                }
            }));
        }
    }
    basis
}

/// Basis of `{X of the given kind : gᵀXg = X for every g in generators}`.
pub fn invariant_form_space(generators: &[&QMatrix], kind: FormKind) -> Vec<QMatrix> {
    let Some(first) = generators.first() else {
        return Vec::new();
    };
    let n = first.dim();
    let basis = form_basis(n, kind);
    let images: Vec<Vec<QMatrix>> = basis
        .iter()
        .map(|e| generators.iter().map(|g| &e.congruence(g) - e).collect())
        .collect();
    let mut rows = Vec::new();
    for gi in 0..generators.len() {
        for entry in 0..n * n {
            rows.push(
                images
                    .iter()
                    .map(|per_gen| per_gen[gi].entries()[entry].clone())
                    .collect::<Vec<_>>(),
            );
        }
    }
    kernel_basis(&rows, basis.len())
        .into_iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(&basis)
                .filter(|(c, _)| !c.is_zero())
                .fold(QMatrix::zero(n), |acc, (c, e)| &acc + &e.scale(c))
        })
        .collect()
}

/// The unique (up to scalar) invariant form of the presentation, normalized.
pub fn solve_invariant_form(p: &GroupPresentation) -> Result<InvariantForm> {
    let kind = p.form_kind();
    let space = invariant_form_space(&[&p.a, &p.b], kind);
    match space.len() {
        0 => Err(Error::NoInvariantForm),
        1 => InvariantForm::new(normalize_matrix(&space[0]), kind),
        d => Err(Error::NonUniqueForm(d)),
    }
}

/// The basis `v, Bv, …, Bⁿ⁻¹v` with `v = (C − I)eₙ`, and the form's Gram matrix in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicBasis {
    pub vector: QVector,
    pub basis: QMatrix,
    pub gram: QMatrix,
}

pub fn cyclic_basis_form(p: &GroupPresentation, form: &InvariantForm) -> Result<CyclicBasis> {
    let n = p.degree();
    if form.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: form.dim(),
        });
    }
    let c_minus_i = &p.c - &QMatrix::identity(n);
    let vector = c_minus_i.mul_vec(&QVector::basis(n, n - 1));
    let mut columns = vec![vector.clone()];
    for _ in 1..n {
        let next = p.b.mul_vec(columns.last().unwrap());
        columns.push(next);
    }
    let basis = QMatrix::from_columns(&columns)?;
    if basis.rank() < n {
        return Err(Error::DependentBasis);
    }
    let gram = form.matrix.congruence(&basis);
    Ok(CyclicBasis { vector, basis, gram })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn pair1() -> GroupPresentation {
        build_presentation(
            &IntPolynomial::from_i64(&[1, -1, 0, -1, 1]),
            &IntPolynomial::from_i64(&[1, 2, 2, 2, 1]),
        )
        .unwrap()
    }

    fn pair2() -> GroupPresentation {
        build_presentation(
            &IntPolynomial::from_i64(&[1, 1, -1, -1, 1, 1]),
            &IntPolynomial::from_i64(&[-1, 3, -5, 5, -3, 1]),
        )
        .unwrap()
    }

    #[test]
    fn symplectic_form_first_row() {
        let form = solve_invariant_form(&pair1()).unwrap();
        assert_eq!(form.kind, FormKind::Alternating);
        let row = form.matrix.row(0);
        let lambda = &row[1];
        let expected = [rat(0), rat(1), ratio(-2, 3), ratio(1, 3)];
        for (x, e) in row.iter().zip(&expected) {
            assert_eq!(x, &(e * lambda));
        }
    }

    #[test]
    fn form_is_invariant_and_unique() {
        for p in [pair1(), pair2()] {
            let space = invariant_form_space(&[&p.a, &p.b], p.form_kind());
            assert_eq!(space.len(), 1);
            let form = solve_invariant_form(&p).unwrap();
            assert!(form.is_preserved_by(&p.a));
            assert!(form.is_preserved_by(&p.b));
            assert!(form.is_preserved_by(&p.c));
        }
    }

    #[test]
    fn degree_one_toy() {
        let p = build_presentation(&IntPolynomial::from_i64(&[-1, 1]), &IntPolynomial::from_i64(&[1, 1])).unwrap();
        assert_eq!(p.a, QMatrix::from_i64(&[&[1]]));
        assert_eq!(p.b, QMatrix::from_i64(&[&[-1]]));
        assert_eq!(p.c, QMatrix::from_i64(&[&[-1]]));
        let form = solve_invariant_form(&p).unwrap();
        assert_eq!(form.matrix, QMatrix::from_i64(&[&[1]]));
    }

    #[test]
    fn invalid_pairs_rejected() {
        let f = IntPolynomial::from_i64(&[-1, 1]).mul(&IntPolynomial::from_i64(&[1, 1]));
        let g = IntPolynomial::from_i64(&[1, 1]).mul(&IntPolynomial::from_i64(&[1, 1]));
        assert!(matches!(build_presentation(&f, &g), Err(Error::InvalidPair(_))));
        let f = IntPolynomial::from_i64(&[-1, 0, 1]);
        let g = IntPolynomial::from_i64(&[1, 0, 1]);
        assert!(matches!(build_presentation(&f, &g), Err(Error::InvalidPair(_))));
    }

    #[test]
    fn normalization_is_canonical() {
        let m = QMatrix::from_i64(&[&[0, -2], &[2, 0]]);
        let n = normalize_matrix(&m.scale(&ratio(-7, 3)));
        assert_eq!(n, QMatrix::from_i64(&[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn cyclic_basis_of_symplectic_pair_is_alternating() {
        let p = pair1();
        let form = solve_invariant_form(&p).unwrap();
        let cb = cyclic_basis_form(&p, &form).unwrap();
        assert_eq!(cb.gram.transpose(), -&cb.gram);
        let direct = &(&cb.basis.transpose() * &form.matrix) * &cb.basis;
        assert_eq!(cb.gram, direct);
    }
}
