//! Parameter tuples, cyclotomic polynomials and the classification of a pair.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, frac_part, parse_rational, IntPolynomial, Rational};

/// An ordered tuple of rationals, each reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParameterTuple {
    entries: Vec<Rational>,
}

impl ParameterTuple {
    pub fn new(entries: Vec<Rational>) -> Self {
        ParameterTuple {
            entries: entries.iter().map(frac_part).collect(),
        }
    }

    /// Parses a comma-separated list of fractions such as `0,0,1/3,2/3`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::parse("empty parameter list"));
        }
        let mut entries = Vec::new();
        let mut offset = 0;
        for piece in text.split(',') {
            let q = parse_rational(piece).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse_at(offset + 1, message),
                other => other,
            })?;
            entries.push(q);
            offset += piece.len() + 1;
        }
        Ok(ParameterTuple::new(entries))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Each entry replaced by `(entry + c) mod 1`, order kept.
    pub fn shift(&self, c: &Rational) -> ParameterTuple {
        ParameterTuple::new(self.entries.iter().map(|q| q + c).collect())
    }

    /// Entries in ascending order, for multiset comparison.
    pub fn sorted(&self) -> Vec<Rational> {
        let mut v = self.entries.clone();
        v.sort();
        v
    }

    pub fn same_multiset(&self, other: &ParameterTuple) -> bool {
        self.sorted() == other.sorted()
    }
}

impl fmt::Display for ParameterTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The pair `(α, β)` defining a hypergeometric group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParameterPair {
    pub alpha: ParameterTuple,
    pub beta: ParameterTuple,
}

/// How two pairs relate as unordered multisets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMatch {
    Same,
    Swapped,
    Different,
}

impl ParameterPair {
    pub fn new(alpha: ParameterTuple, beta: ParameterTuple) -> Self {
        ParameterPair { alpha, beta }
    }

    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        Ok(ParameterPair::new(ParameterTuple::parse(alpha)?, ParameterTuple::parse(beta)?))
    }

    /// Compares multisets, allowing `α` and `β` to trade places.
    pub fn compare_unordered(&self, other: &ParameterPair) -> PairMatch {
        if self.alpha.same_multiset(&other.alpha) && self.beta.same_multiset(&other.beta) {
            PairMatch::Same
        } else if self.alpha.same_multiset(&other.beta) && self.beta.same_multiset(&other.alpha) {
            PairMatch::Swapped
        } else {
            PairMatch::Different
        }
    }

    /// No `α_j − β_k` is an integer.
    pub fn parameters_separated(&self) -> bool {
        self.alpha
            .entries()
            .iter()
            .all(|a| self.beta.entries().iter().all(|b| !(a - b).is_integer()))
    }
}

impl fmt::Display for ParameterPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) ({})", self.alpha, self.beta)
    }
}

/// Shifts every entry of both tuples by `c` modulo 1.
pub fn scalar_shift(pair: &ParameterPair, c: &Rational) -> ParameterPair {
    ParameterPair::new(pair.alpha.shift(c), pair.beta.shift(c))
}

/// The `n`-th cyclotomic polynomial, by exact division of `xⁿ − 1`.
pub fn cyclotomic_poly(n: usize) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut p = IntPolynomial::x_pow_minus_one(n);
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = p
            .div_exact(&cyclotomic_poly(d))
            .expect("cyclotomic factors divide x^n - 1");
    }
    p
}

/// `∏ (x − e^{2πiq})` over the tuple, as an integer polynomial.
pub fn poly_from_parameters(t: &ParameterTuple) -> Result<IntPolynomial> {
    // denominator -> numerator -> multiplicity
    let mut orbits: BTreeMap<BigInt, BTreeMap<BigInt, usize>> = BTreeMap::new();
    for q in t.entries() {
        *orbits
            .entry(q.denom().clone())
            .or_default()
            .entry(q.numer().clone())
            .or_default() += 1;
    }
    let mut product = IntPolynomial::one();
    for (d, counts) in &orbits {
        let d_small = d
            .to_usize()
            .ok_or_else(|| Error::NotGaloisStable(t.to_string()))?;
        let orbit_size = (1..=d_small).filter(|k| k.gcd(&d_small) == 1).count();
        let mult = *counts.values().next().expect("orbit has members");
        if counts.len() != orbit_size || counts.values().any(|&m| m != mult) {
            return Err(Error::NotGaloisStable(t.to_string()));
        }
        let phi = cyclotomic_poly(d_small);
        for _ in 0..mult {
            product = product.mul(&phi);
        }
    }
    Ok(product)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupCase {
    Symplectic,
    Orthogonal,
    Unsupported,
}

impl fmt::Display for GroupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupCase::Symplectic => "Symplectic",
            GroupCase::Orthogonal => "Orthogonal",
            GroupCase::Unsupported => "Unsupported",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClassification {
    pub coprime: bool,
    pub primitive: bool,
    pub case: GroupCase,
    pub degree: usize,
}

impl PairClassification {
    /// Coprime, primitive and with a supported constant-term ratio.
    pub fn is_valid(&self) -> bool {
        self.coprime && self.primitive && self.case != GroupCase::Unsupported
    }
}

pub fn classify_pair(f: &IntPolynomial, g: &IntPolynomial) -> Result<PairClassification> {
    let n = f.degree();
    if g.degree() != n {
        return Err(Error::DegreeMismatch(n, g.degree()));
    }
    let coprime = f.gcd_over_q(g).degree() == 0;
    let primitive = !(2..=n)
        .filter(|k| n.is_multiple_of(*k))
        .any(|k| f.supported_on_multiples_of(k) && g.supported_on_multiples_of(k));
    let (f0, g0) = (f.constant_term(), g.constant_term());
    let case = if f0.is_one() && g0.is_one() {
        GroupCase::Symplectic
    } else if !g0.is_zero() && f0 == -g0 {
        GroupCase::Orthogonal
    } else {
        GroupCase::Unsupported
    };
    Ok(PairClassification {
        coprime,
        primitive,
        case,
        degree: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn tuple(s: &str) -> ParameterTuple {
        ParameterTuple::parse(s).unwrap()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), IntPolynomial::from_i64(&[-1, 1]));
        // x⁴ − 1 = (x − 1)(x + 1)(x² + 1)
        let phi4 = IntPolynomial::x_pow_minus_one(4)
            .div_exact(&IntPolynomial::from_i64(&[-1, 1]))
            .and_then(|p| p.div_exact(&IntPolynomial::from_i64(&[1, 1])))
            .unwrap();
        assert_eq!(cyclotomic_poly(4), phi4);
        assert_eq!(cyclotomic_poly(12), IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
        let f = IntPolynomial::from_i64(&[1, 1]).mul(&cyclotomic_poly(12));
        assert_eq!(f, IntPolynomial::from_i64(&[1, 1, -1, -1, 1, 1]));
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=30 {
            let prod = (1..=n)
                .filter(|d| n % d == 0)
                .fold(IntPolynomial::one(), |acc, d| acc.mul(&cyclotomic_poly(d)));
            assert_eq!(prod, IntPolynomial::x_pow_minus_one(n), "n = {n}");
        }
    }

    #[test]
    fn printed_polynomials() {
        assert_eq!(
            poly_from_parameters(&tuple("0,0,1/3,2/3")).unwrap(),
            IntPolynomial::from_i64(&[1, -1, 0, -1, 1])
        );
        assert_eq!(
            poly_from_parameters(&tuple("1/2,1/2,1/4,3/4")).unwrap(),
            IntPolynomial::from_i64(&[1, 2, 2, 2, 1])
        );
        assert_eq!(
            poly_from_parameters(&tuple("0,1/6,1/6,5/6,5/6")).unwrap(),
            IntPolynomial::from_i64(&[-1, 3, -5, 5, -3, 1])
        );
    }

    #[test]
    fn incomplete_orbit_rejected() {
        assert!(matches!(
            poly_from_parameters(&tuple("1/3")),
            Err(Error::NotGaloisStable(_))
        ));
        assert!(matches!(
            poly_from_parameters(&tuple("1/5,2/5,3/5,4/5,1/5")),
            Err(Error::NotGaloisStable(_))
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(ParameterTuple::parse("0,x").is_err());
        assert!(ParameterTuple::parse("0.5").is_err());
        assert!(ParameterTuple::parse("").is_err());
        assert_eq!(tuple("5/4").entries()[0], ratio(1, 4));
    }

    #[test]
    fn classifications() {
        let f = IntPolynomial::from_i64(&[1, -1, 0, -1, 1]);
        let g = IntPolynomial::from_i64(&[1, 2, 2, 2, 1]);
        let c = classify_pair(&f, &g).unwrap();
        assert!(c.coprime && c.primitive);
        assert_eq!(c.case, GroupCase::Symplectic);

        let f = IntPolynomial::from_i64(&[1, 1, -1, -1, 1, 1]);
        let g = IntPolynomial::from_i64(&[-1, 3, -5, 5, -3, 1]);
        let c = classify_pair(&f, &g).unwrap();
        assert!(c.coprime && c.primitive);
        assert_eq!(c.case, GroupCase::Orthogonal);

        let c = classify_pair(
            &IntPolynomial::from_i64(&[-1, 0, 1]),
            &IntPolynomial::from_i64(&[1, 0, 1]),
        )
        .unwrap();
        assert!(!c.primitive);

        assert_eq!(
            classify_pair(&IntPolynomial::from_i64(&[-1, 1]), &g),
            Err(Error::DegreeMismatch(1, 5))
        );
    }

    #[test]
    fn shifts() {
        let pair = ParameterPair::parse("0,0,1/3,2/3", "1/2,1/2,1/4,3/4").unwrap();
        let shifted = scalar_shift(&pair, &ratio(1, 2));
        assert_eq!(shifted.alpha, tuple("1/2,1/2,5/6,1/6"));
        assert_eq!(shifted.beta, tuple("0,0,3/4,1/4"));
        let example7 = ParameterPair::parse("0,0,1/4,3/4", "1/2,1/2,1/6,5/6").unwrap();
        assert_eq!(shifted.compare_unordered(&example7), PairMatch::Swapped);
        assert_eq!(scalar_shift(&pair, &ratio(0, 1)), pair);
    }
}
