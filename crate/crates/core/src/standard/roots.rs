//! Torus weights, roots and root groups of a form in standard shape.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, kernel_basis, QMatrix, Rational};
use crate::group::{FormKind, InvariantForm};

use super::is_standard_shape;

/// A character `χ₁^{e₁} χ₂^{e₂} …` of the diagonal torus, stored as its exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootLabel(pub Vec<i32>);

impl RootLabel {
    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// The same character on a torus of the given rank, if no exponent is lost.
    pub fn with_rank(&self, rank: usize) -> Option<RootLabel> {
        if self.0.iter().skip(rank).any(|&e| e != 0) {
            return None;
        }
        let mut e = self.0.clone();
        e.resize(rank, 0);
        Some(RootLabel(e))
    }

    fn sub(&self, other: &RootLabel) -> RootLabel {
        RootLabel(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| match e {
                1 => format!("chi{}", i + 1),
                _ => format!("chi{}^{}", i + 1, e),
            })
            .collect();
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

impl FromStr for RootLabel {
    type Err = Error;

    /// Accepts products such as `chi1^2`, `chi1*chi2^-1`; the rank is the
    /// largest index mentioned (at least 2).
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = || Error::parse(format!("`{s}` is not a root label (expected e.g. chi1*chi2^-1)"));
        if text.is_empty() {
            return Err(bad());
        }
        let mut factors = Vec::new();
        for factor in text.split('*') {
            let factor = factor.trim();
            let rest = factor.strip_prefix("chi").ok_or_else(bad)?;
            let (index, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e.parse::<i32>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let index: usize = index.parse().map_err(|_| bad())?;
            if index == 0 {
                return Err(bad());
            }
            factors.push((index, exp));
        }
        let rank = factors.iter().map(|&(i, _)| i).max().unwrap_or(0).max(2);
        let mut exps = vec![0; rank];
        for (i, e) in factors {
            exps[i - 1] += e;
        }
        Ok(RootLabel(exps))
    }
}

/// Isometry group of a form in standard shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `Sp_{2r}` (root system of type C).
    Symplectic { rank: usize },
    /// `O_{2r+1}` (root system of type B).
    OddOrthogonal { rank: usize },
}

impl GroupKind {
    pub fn of_form(form: &InvariantForm) -> Result<GroupKind> {
        let n = form.dim();
        match form.kind {
            FormKind::Alternating if n.is_multiple_of(2) && n >= 2 => Ok(GroupKind::Symplectic { rank: n / 2 }),
            FormKind::Symmetric if n % 2 == 1 && n >= 3 => Ok(GroupKind::OddOrthogonal { rank: n / 2 }),
            _ => Err(Error::UnsupportedGroup(format!(
                "no root data for a {} form of dimension {n}",
                form.kind
            ))),
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            GroupKind::Symplectic { rank } | GroupKind::OddOrthogonal { rank } => rank,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            GroupKind::Symplectic { rank } => 2 * rank,
            GroupKind::OddOrthogonal { rank } => 2 * rank + 1,
        }
    }

    /// `χᵢχᵢ₊₁⁻¹` for `i < r`, then `χ_r²` (type C) or `χ_r` (type B).
    pub fn simple_roots(&self) -> Vec<RootLabel> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r.saturating_sub(1) {
            let mut e = vec![0; r];
            e[i] = 1;
            e[i + 1] = -1;
            out.push(RootLabel(e));
        }
        let mut last = vec![0; r];
        last[r - 1] = match self {
            GroupKind::Symplectic { .. } => 2,
            GroupKind::OddOrthogonal { .. } => 1,
        };
        out.push(RootLabel(last));
        out
    }

    /// Weight of the torus on each standard basis vector:
    /// `χ₁, …, χ_r, [1], χ_r⁻¹, …, χ₁⁻¹`.
    pub fn basis_weights(&self) -> Vec<RootLabel> {
        let r = self.rank();
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut e = vec![0; r];
                if i < r {
                    e[i] = 1;
                } else if i >= n - r {
                    e[n - 1 - i] = -1;
                }
                RootLabel(e)
            })
            .collect()
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Symplectic { rank } => write!(f, "Sp{}", 2 * rank),
            GroupKind::OddOrthogonal { rank } => write!(f, "O{}", 2 * rank + 1),
        }
    }
}

/// A root together with its root group inside the isometry group of a fixed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootGroupPattern {
    pub root: RootLabel,
    /// Spanning vector of the root space in the Lie algebra, first support entry 1.
    pub generator: QMatrix,
    /// Positions (zero-based) that may be non-zero in `E − I`.
    pub support: Vec<(usize, usize)>,
    /// Height with respect to the fixed simple roots (negative for negative roots).
    pub height: i32,
}

impl RootGroupPattern {
    /// `exp(c · generator)`.
    pub fn element(&self, c: &Rational) -> QMatrix {
        self.generator
            .scale(c)
            .nilpotent_exp()
            .expect("root vectors are nilpotent")
    }

    /// Human-readable entry relations of `exp(c · X) − I`, one-based indices.
    pub fn coupling_description(&self) -> Vec<String> {
        let x2 = &self.generator * &self.generator;
        let mut out = Vec::new();
        for &(i, j) in &self.support {
            let lin = self.generator.get(i, j);
            let quad = x2.get(i, j) / Rational::from_integer(2.into());
            let mut terms = Vec::new();
            if !lin.is_zero() {
                terms.push(coefficient_term(lin, "c"));
            }
            if !quad.is_zero() {
                terms.push(coefficient_term(&quad, "c^2"));
            }
            out.push(format!("({},{}) = {}", i + 1, j + 1, terms.join(" + ")));
        }
        out
    }
}

fn coefficient_term(k: &Rational, var: &str) -> String {
    if k.is_one() {
        var.to_string()
    } else if *k == -Rational::one() {
        format!("-{var}")
    } else {
        format!("{}*{var}", format_rational(k))
    }
}

/// Roots of the isometry group of an antidiagonal form, with the fixed simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystemData {
    pub group: GroupKind,
    pub roots: Vec<RootGroupPattern>,
    pub simple_roots: Vec<RootLabel>,
    pub highest_root: RootLabel,
    pub second_highest_root: RootLabel,
}

impl RootSystemData {
    pub fn pattern(&self, root: &RootLabel) -> Option<&RootGroupPattern> {
        self.roots.iter().find(|p| &p.root == root)
    }

    /// The two roots an arithmeticity certificate has to cover.
    pub fn required_roots(&self) -> [&RootLabel; 2] {
        [&self.highest_root, &self.second_highest_root]
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &RootGroupPattern> {
        self.roots.iter().filter(|p| p.height > 0)
    }
}

/// Derives roots as the torus weights with a non-zero root space in
/// `{X : XᵀM + MX = 0}`.
pub fn root_system(form: &InvariantForm) -> Result<RootSystemData> {
    if !is_standard_shape(&form.matrix) {
        return Err(Error::NotStandardShape);
    }
    let group = GroupKind::of_form(form)?;
    let n = group.dim();
    let weights = group.basis_weights();
    let simple_roots = group.simple_roots();

    let mut labels: Vec<RootLabel> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let d = weights[i].sub(&weights[j]);
            if !d.is_trivial() && !labels.contains(&d) {
                labels.push(d);
            }
        }
    }

    let mut roots = Vec::new();
    for label in labels {
        let positions: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| weights[i].sub(&weights[j]) == label)
            .collect();
        let Some(generator) = root_space_generator(&form.matrix, &positions) else {
            continue;
        };
        let height = root_height(&label, &simple_roots)?;
        let support = support_of_exponential(&generator);
        roots.push(RootGroupPattern {
            root: label,
            generator,
            support,
            height,
        });
    }
    roots.sort_by(|a, b| b.height.cmp(&a.height).then_with(|| b.root.cmp(&a.root)));

    let top = roots.first().map(|p| p.height).unwrap_or(0);
    let at_height = |h: i32| -> Result<RootLabel> {
        let found: Vec<&RootGroupPattern> = roots.iter().filter(|p| p.height == h).collect();
        match found.as_slice() {
            [one] => Ok(one.root.clone()),
            _ => Err(Error::UnsupportedGroup(format!(
                "expected a unique root of height {h}, found {}",
                found.len()
            ))),
        }
    };
    let highest_root = at_height(top)?;
    let second_highest_root = at_height(top - 1)?;
    Ok(RootSystemData {
        group,
        roots,
        simple_roots,
        highest_root,
        second_highest_root,
    })
}

/// One-dimensional solution of `XᵀM + MX = 0` over matrices supported on `positions`.
fn root_space_generator(m: &QMatrix, positions: &[(usize, usize)]) -> Option<QMatrix> {
    let n = m.dim();
    let units: Vec<QMatrix> = positions
        .iter()
        .map(|&(i, j)| QMatrix::from_fn(n, |r, c| if (r, c) == (i, j) { Rational::one() } else { Rational::zero() }))
        .collect();
    let images: Vec<QMatrix> = units.iter().map(|u| &(&u.transpose() * m) + &(m * u)).collect();
    let rows: Vec<Vec<Rational>> = (0..n * n)
        .map(|k| images.iter().map(|img| img.entries()[k].clone()).collect())
        .collect();
    let kernel = kernel_basis(&rows, units.len());
    match kernel.as_slice() {
        [v] => {
            let lead = v.iter().find(|x| !x.is_zero())?.clone();
            Some(
                v.iter()
                    .zip(&units)
                    .fold(QMatrix::zero(n), |acc, (c, u)| &acc + &u.scale(&(c / &lead))),
            )
        }
        _ => None,
    }
}

fn support_of_exponential(x: &QMatrix) -> Vec<(usize, usize)> {
    let e = x.nilpotent_exp().expect("root vectors are nilpotent");
    let n = x.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && !e.get(i, j).is_zero())
        .collect()
}

/// Sum of the coefficients of `root` in the basis of simple roots.
fn root_height(root: &RootLabel, simple: &[RootLabel]) -> Result<i32> {
    let r = simple.len();
    let rows: Vec<Vec<Rational>> = (0..r)
        .map(|k| {
            let mut row: Vec<Rational> = simple.iter().map(|s| Rational::from_integer(s.0[k].into())).collect();
            row.push(Rational::from_integer((-root.0[k]).into()));
            row
        })
        .collect();
    let kernel = kernel_basis(&rows, r + 1);
    let v = kernel
        .iter()
        .find(|v| !v[r].is_zero())
        .ok_or_else(|| Error::UnsupportedGroup(format!("{root} is not in the root lattice")))?;
    let scale = &v[r];
    let total: Rational = v[..r].iter().map(|c| c / scale).sum();
    if !total.is_integer() {
        return Err(Error::UnsupportedGroup(format!("{root} has non-integral height")));
    }
    Ok(total.to_integer().try_into().expect("small height"))
}

/// Outcome of testing a matrix against a root group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    NotMember(MembershipFailure),
    TrivialMember,
    NonTrivialMember,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MembershipFailure {
    /// `E − I` has a non-zero entry outside the pattern's support.
    Support,
    /// Entries on the support violate the relations of the root group.
    Coupling,
    /// `EᵀME ≠ M`.
    FormNotPreserved,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::NotMember(MembershipFailure::Support) => {
                f.write_str("NotMember (entries outside the root-group support)")
            }
            Membership::NotMember(MembershipFailure::Coupling) => {
                f.write_str("NotMember (support entries violate the root-group relations)")
            }
            Membership::NotMember(MembershipFailure::FormNotPreserved) => {
                f.write_str("NotMember (does not preserve the form)")
            }
            Membership::TrivialMember => f.write_str("TrivialMember"),
            Membership::NonTrivialMember => f.write_str("NonTrivialMember"),
        }
    }
}

/// Tests whether `e` lies in the root group of `pattern` for the (standard) `form`.
pub fn root_group_membership(
    e: &QMatrix,
    form: &InvariantForm,
    pattern: &RootGroupPattern,
) -> Result<Membership> {
    let n = form.dim();
    if e.dim() != n || pattern.generator.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: e.dim(),
        });
    }
    let outside = (0..n).any(|i| {
        (0..n).any(|j| {
            let expected = if i == j { Rational::one() } else { Rational::zero() };
            !pattern.support.contains(&(i, j)) && *e.get(i, j) != expected
        })
    });
    if outside {
        return Ok(Membership::NotMember(MembershipFailure::Support));
    }
    let on_line = e
        .unipotent_log()
        .is_some_and(|log| log.is_zero() || log.projectively_equal(&pattern.generator));
    if !on_line {
        return Ok(Membership::NotMember(MembershipFailure::Coupling));
    }
    if !form.is_preserved_by(e) {
        return Ok(Membership::NotMember(MembershipFailure::FormNotPreserved));
    }
    if e.is_identity() {
        Ok(Membership::TrivialMember)
    } else {
        Ok(Membership::NonTrivialMember)
    }
}

/// The parameter `c` with `e = exp(c · generator)`, for a member of the root group.
pub fn root_parameter(e: &QMatrix, pattern: &RootGroupPattern) -> Option<Rational> {
    let log = e.unipotent_log()?;
    if log.is_zero() {
        return Some(Rational::zero());
    }
    log.projective_factor(&pattern.generator)
}
