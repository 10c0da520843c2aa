//! Changes of basis to antidiagonal ("standard") shape and the root data they expose.

mod roots;

pub use roots::{
    root_group_membership, root_parameter, root_system, GroupKind, Membership, MembershipFailure,
    RootGroupPattern, RootLabel, RootSystemData,
};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rank_of_rows, rat, QMatrix, QVector, Rational};
use crate::group::{FormKind, InvariantForm};

/// An invertible `P` together with a form `M` and its transform `PᵀMP`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    pub p: QMatrix,
    pub source: InvariantForm,
    pub target: InvariantForm,
}

impl BasisChange {
    pub fn new(p: QMatrix, source: &InvariantForm) -> Result<Self> {
        let target = apply_basis_change(&p, source)?;
        Ok(BasisChange {
            p,
            source: source.clone(),
            target,
        })
    }

    /// `P⁻¹ X P`.
    pub fn conjugate(&self, x: &QMatrix) -> QMatrix {
        let p_inv = self.p.inverse().expect("basis change is invertible");
        &(&p_inv * x) * &self.p
    }
}

/// `PᵀMP`, keeping the kind of the form.
pub fn apply_basis_change(p: &QMatrix, form: &InvariantForm) -> Result<InvariantForm> {
    if p.dim() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: p.dim(),
        });
    }
    if p.det().is_zero() {
        return Err(Error::SingularP);
    }
    Ok(InvariantForm {
        matrix: form.matrix.congruence(p),
        kind: form.kind,
    })
}

/// True iff every entry off the antidiagonal `i + j = n + 1` vanishes.
pub fn is_standard_shape(m: &QMatrix) -> bool {
    let n = m.dim();
    (0..n).all(|i| (0..n).all(|j| i + j + 1 == n || m.get(i, j).is_zero()))
}

fn bilinear(m: &QMatrix, x: &QVector, y: &QVector) -> Rational {
    x.dot(&m.mul_vec(y))
}

/// Finds `P` with `PᵀMP` antidiagonal. Alternating forms always succeed;
/// symmetric forms need integer isotropic vectors of height at most
/// `height_bound` (in the coordinates of the current subspace) and give
/// `Ok(None)` when the search runs out.
pub fn standardize_form(form: &InvariantForm, height_bound: u32) -> Result<Option<BasisChange>> {
    let n = form.dim();
    if form.matrix.det().is_zero() {
        return Err(Error::DegenerateForm);
    }
    if is_standard_shape(&form.matrix) {
        return BasisChange::new(QMatrix::identity(n), form).map(Some);
    }
    let columns = match form.kind {
        FormKind::Alternating => symplectic_basis(&form.matrix),
        FormKind::Symmetric => match hyperbolic_basis(&form.matrix, height_bound) {
            Some(c) => c,
            None => return Ok(None),
        },
    };
    let p = QMatrix::from_columns(&columns)?;
    let change = BasisChange::new(p, form)?;
    debug_assert!(is_standard_shape(&change.target.matrix));
    Ok(Some(change))
}

/// Symplectic Gram-Schmidt; columns ordered `e₁ … e_r, f_r … f₁`.
fn symplectic_basis(m: &QMatrix) -> Vec<QVector> {
    let n = m.dim();
    let mut pool: Vec<QVector> = (0..n).map(|i| QVector::basis(n, i)).collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    while !pool.is_empty() {
        let e = pool.remove(0);
        let k = pool
            .iter()
            .position(|w| !bilinear(m, &e, w).is_zero())
            .expect("non-degenerate alternating form pairs every vector");
        let w = pool.remove(k);
        let f = w.scale(&(Rational::one() / bilinear(m, &e, &w)));
        pool = pool
            .iter()
            .map(|x| {
                x.sub(&e.scale(&bilinear(m, x, &f)))
                    .add(&f.scale(&bilinear(m, x, &e)))
            })
            .collect();
        es.push(e);
        fs.push(f);
    }
    fs.reverse();
    es.into_iter().chain(fs).collect()
}

/// Splits off hyperbolic planes spanned by small integer isotropic vectors.
/// Columns ordered `e₁ … e_r, [anisotropic part], f_r … f₁`.
fn hyperbolic_basis(m: &QMatrix, height_bound: u32) -> Option<Vec<QVector>> {
    let n = m.dim();
    let wanted = n / 2;
    let mut space: Vec<QVector> = (0..n).map(|i| QVector::basis(n, i)).collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    while es.len() < wanted {
        let e = find_isotropic(m, &space, height_bound)?;
        let partner = space
            .iter()
            .find(|w| !bilinear(m, &e, w).is_zero())
            .expect("non-degenerate form")
            .clone();
        let pairing = bilinear(m, &e, &partner);
        let shift = bilinear(m, &partner, &partner) / (rat(2) * &pairing);
        let f = partner.sub(&e.scale(&shift));
        let projected: Vec<QVector> = space
            .iter()
            .map(|x| {
                x.sub(&e.scale(&(bilinear(m, x, &f) / &pairing)))
                    .sub(&f.scale(&(bilinear(m, x, &e) / &pairing)))
            })
            .collect();
        space = independent_subset(projected);
        es.push(e);
        fs.push(f);
    }
    fs.reverse();
    Some(es.into_iter().chain(space).chain(fs).collect())
}

/// Greedy maximal independent subset, in the given order.
fn independent_subset(vectors: Vec<QVector>) -> Vec<QVector> {
    let mut kept: Vec<QVector> = Vec::new();
    for v in vectors {
        let mut rows: Vec<Vec<Rational>> = kept.iter().map(|k| k.entries().to_vec()).collect();
        rows.push(v.entries().to_vec());
        if rank_of_rows(&rows, v.dim()) > kept.len() {
            kept.push(v);
        }
    }
    kept
}

/// Advances `coords` through `[-h, h]^k` in lexicographic order.
fn next_tuple(coords: &mut [i64], h: i64) -> bool {
    for i in (0..coords.len()).rev() {
        if coords[i] < h {
            coords[i] += 1;
            coords[i + 1..].iter_mut().for_each(|c| *c = -h);
            return true;
        }
    }
    false
}

/// First isotropic integer combination of `space`, by increasing height and
/// then lexicographically, with first non-zero coordinate positive.
fn find_isotropic(m: &QMatrix, space: &[QVector], height_bound: u32) -> Option<QVector> {
    let k = space.len();
    let gram: Vec<Vec<Rational>> = space
        .iter()
        .map(|x| space.iter().map(|y| bilinear(m, x, y)).collect())
        .collect();
    let h_max = height_bound as i64;
    for h in 1..=h_max {
        let mut coords = vec![-h; k];
        loop {
            let height = coords.iter().map(|c| c.abs()).max().unwrap_or(0);
            let leading_positive = coords.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
            if height == h && leading_positive {
                let mut q = Rational::zero();
                for i in 0..k {
                    for j in 0..k {
                        if coords[i] != 0 && coords[j] != 0 {
                            q += &gram[i][j] * Rational::from_integer((coords[i] * coords[j]).into());
                        }
                    }
                }
                if q.is_zero() {
                    let v = coords
                        .iter()
                        .zip(space)
                        .fold(QVector::new(vec![Rational::zero(); m.dim()]), |acc, (&c, s)| {
                            acc.add(&s.scale(&rat(c)))
                        });
                    return Some(v);
                }
            }
            if !next_tuple(&mut coords, h) {
                break;
            }
        }
    }
    None
}
