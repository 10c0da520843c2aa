//! The two worked examples: parameter pairs, published matrices and bundled certificates.

use crate::cyclo::ParameterPair;
use crate::exact::{IntPolynomial, QMatrix, QVector};
use crate::slp::parse_basis_change;

pub const SYMPLECTIC_CERTIFICATE: &str = include_str!("../fixtures/symplectic.cert.json");
pub const ORTHOGONAL_CERTIFICATE: &str = include_str!("../fixtures/orthogonal.cert.json");
pub const SYMPLECTIC_BASIS_CHANGE: &str = include_str!("../fixtures/symplectic.basis.txt");
pub const ORTHOGONAL_BASIS_CHANGE: &str = include_str!("../fixtures/orthogonal.basis.txt");

/// Published data for one example; forms are only meaningful up to scalars.
#[derive(Clone, Debug)]
pub struct ReferenceCase {
    pub pair: ParameterPair,
    pub f: IntPolynomial,
    pub g: IntPolynomial,
    pub a: QMatrix,
    pub b: QMatrix,
    pub c: QMatrix,
    pub form: QMatrix,
    pub basis_change: QMatrix,
    pub standard_form: QMatrix,
    pub certificate: &'static str,
    /// Definitions of the bundled certificate whose matrices are published.
    pub witnesses: Vec<(&'static str, QMatrix)>,
}

fn m(rows: &[&[&str]]) -> QMatrix {
    let owned: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    QMatrix::parse_rows(&owned).expect("catalog matrix")
}

fn pair(alpha: &str, beta: &str) -> ParameterPair {
    ParameterPair::parse(alpha, beta).expect("catalog pair")
}

/// `(0,0,1/3,2/3), (1/2,1/2,1/4,3/4)`, a symplectic pair of degree 4.
pub fn symplectic_case() -> ReferenceCase {
    ReferenceCase {
        pair: pair("0,0,1/3,2/3", "1/2,1/2,1/4,3/4"),
        f: IntPolynomial::from_i64(&[1, -1, 0, -1, 1]),
        g: IntPolynomial::from_i64(&[1, 2, 2, 2, 1]),
        a: QMatrix::from_i64(&[&[0, 0, 0, -1], &[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 1]]),
        b: QMatrix::from_i64(&[&[0, 0, 0, -1], &[1, 0, 0, -2], &[0, 1, 0, -2], &[0, 0, 1, -2]]),
        c: QMatrix::from_i64(&[&[1, 0, 0, -3], &[0, 1, 0, -2], &[0, 0, 1, -3], &[0, 0, 0, 1]]),
        form: m(&[
            &["0", "1", "-2/3", "1/3"],
            &["-1", "0", "1", "-2/3"],
            &["2/3", "-1", "0", "1"],
            &["-1/3", "2/3", "-1", "0"],
        ]),
        basis_change: parse_basis_change(SYMPLECTIC_BASIS_CHANGE).expect("bundled basis change"),
        standard_form: m(&[
            &["0", "0", "0", "1/21"],
            &["0", "0", "8/3", "0"],
            &["0", "-8/3", "0", "0"],
            &["-1/21", "0", "0", "0"],
        ]),
        certificate: SYMPLECTIC_CERTIFICATE,
        witnesses: vec![
            ("E1", QMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, -1, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])),
            ("E2", QMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]])),
            (
                "E3",
                QMatrix::from_i64(&[&[1, 168, -1176, -56], &[0, 64, -441, -21], &[0, 9, -62, -3], &[0, 0, 0, 1]]),
            ),
            // bottom-right corner published as 0
            ("E7", QMatrix::from_i64(&[&[1, 0, 0, 1008], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])),
            ("E9", QMatrix::from_i64(&[&[1, 0, -3024, 0], &[0, 1, 0, -54], &[0, 0, 1, 0], &[0, 0, 0, 1]])),
        ],
    }
}

/// The scalar shift by ½ of the symplectic pair, with `α` and `β` exchanged.
pub fn symplectic_shift_partner() -> ParameterPair {
    pair("0,0,1/4,3/4", "1/2,1/2,1/6,5/6")
}

/// `(1/2,1/12,5/12,7/12,11/12), (0,1/6,1/6,5/6,5/6)`, an orthogonal pair of degree 5.
pub fn orthogonal_case() -> ReferenceCase {
    ReferenceCase {
        pair: pair("1/2,1/12,5/12,7/12,11/12", "0,1/6,1/6,5/6,5/6"),
        f: IntPolynomial::from_i64(&[1, 1, -1, -1, 1, 1]),
        g: IntPolynomial::from_i64(&[-1, 3, -5, 5, -3, 1]),
        a: QMatrix::from_i64(&[
            &[0, 0, 0, 0, -1],
            &[1, 0, 0, 0, -1],
            &[0, 1, 0, 0, 1],
            &[0, 0, 1, 0, 1],
            &[0, 0, 0, 1, -1],
        ]),
        b: QMatrix::from_i64(&[
            &[0, 0, 0, 0, 1],
            &[1, 0, 0, 0, -3],
            &[0, 1, 0, 0, 5],
            &[0, 0, 1, 0, -5],
            &[0, 0, 0, 1, 3],
        ]),
        c: QMatrix::from_i64(&[
            &[1, 0, 0, 0, -4],
            &[0, 1, 0, 0, 6],
            &[0, 0, 1, 0, -4],
            &[0, 0, 0, 1, 2],
            &[0, 0, 0, 0, -1],
        ]),
        form: m(&[
            &["-19/9", "-17/9", "-10/9", "1/9", "8/9"],
            &["-17/9", "-19/9", "-17/9", "-10/9", "1/9"],
            &["-10/9", "-17/9", "-19/9", "-17/9", "-10/9"],
            &["1/9", "-10/9", "-17/9", "-19/9", "-17/9"],
            &["8/9", "1/9", "-10/9", "-17/9", "-19/9"],
        ]),
        basis_change: parse_basis_change(ORTHOGONAL_BASIS_CHANGE).expect("bundled basis change"),
        standard_form: QMatrix::from_i64(&[
            &[0, 0, 0, 0, 1],
            &[0, 0, 0, -1, 0],
            &[0, 0, -1, 0, 0],
            &[0, -1, 0, 0, 0],
            &[1, 0, 0, 0, 0],
        ]),
        certificate: ORTHOGONAL_CERTIFICATE,
        witnesses: vec![
            (
                "E3",
                QMatrix::from_i64(&[
                    &[1, 0, 2, 10, 2],
                    &[0, 1, 0, 0, 10],
                    &[0, 0, 1, 0, 2],
                    &[0, 0, 0, 1, 0],
                    &[0, 0, 0, 0, 1],
                ]),
            ),
            (
                "E7",
                QMatrix::from_i64(&[
                    &[1, 72, -36, 0, 648],
                    &[0, 1, 0, 0, 0],
                    &[0, 0, 1, 0, -36],
                    &[0, 0, 0, 1, 72],
                    &[0, 0, 0, 0, 1],
                ]),
            ),
            (
                "E8",
                QMatrix::from_i64(&[
                    &[1, 72, 0, 180, 12960],
                    &[0, 1, 0, 0, 180],
                    &[0, 0, 1, 0, 0],
                    &[0, 0, 0, 1, 72],
                    &[0, 0, 0, 0, 1],
                ]),
            ),
            (
                "E13",
                QMatrix::from_i64(&[
                    &[1, 0, 0, 96, 0],
                    &[0, 1, 0, 0, 96],
                    &[0, 0, 1, 0, 0],
                    &[0, 0, 0, 1, 0],
                    &[0, 0, 0, 0, 1],
                ]),
            ),
            (
                "E16",
                QMatrix::from_i64(&[
                    &[1, 0, 1824, 0, 1663488],
                    &[0, 1, 0, 0, 0],
                    &[0, 0, 1, 0, 1824],
                    &[0, 0, 0, 1, 0],
                    &[0, 0, 0, 0, 1],
                ]),
            ),
        ],
    }
}

/// The pair whose shift by ½ is the orthogonal pair.
pub fn orthogonal_shift_partner() -> ParameterPair {
    pair("0,1/12,5/12,7/12,11/12", "1/2,1/3,1/3,2/3,2/3")
}

/// `v = (C − I)e₅` for the orthogonal pair.
pub fn orthogonal_cyclic_vector() -> QVector {
    QVector::from_i64(&[-4, 6, -4, 2, -2])
}

/// Gram matrix of the orthogonal form in the basis `v, Bv, …, B⁴v`.
pub fn orthogonal_cyclic_gram() -> QMatrix {
    QMatrix::from_i64(&[
        &[-1, -2, -3, -1, 3],
        &[-2, -1, -2, -3, -1],
        &[-3, -2, -1, -2, -3],
        &[-1, -3, -2, -1, -2],
        &[3, -1, -3, -2, -1],
    ])
}

/// `P⁻¹AP` and `P⁻¹BP` for the orthogonal pair.
pub fn orthogonal_conjugated_generators() -> (QMatrix, QMatrix) {
    let a = m(&[
        &["-2", "-1/2", "-1", "-5", "-3/2"],
        &["2", "0", "4", "14", "4"],
        &["-2", "-1", "1", "-2", "-1"],
        &["3", "1", "1", "7", "5/2"],
        &["-4", "-1", "-4", "-20", "-7"],
    ]);
    let b = m(&[
        &["-2", "-1/2", "-2", "-10", "-7/2"],
        &["2", "0", "4", "14", "4"],
        &["-2", "-1", "1", "-2", "-1"],
        &["3", "1", "1", "7", "5/2"],
        &["-4", "-1", "-2", "-10", "-3"],
    ]);
    (a, b)
}
