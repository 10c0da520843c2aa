use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{format_rational, QMatrix, Rational};

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        IntPolynomial::from_i64(&[1])
    }

    /// `xⁿ − 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] += BigInt::one();
        IntPolynomial::new(coeffs)
    }

    /// Coefficients from the constant term upwards.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial is reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    /// Quotient and remainder on division by a monic polynomial.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (IntPolynomial::new(Vec::new()), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d].clone();
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        (IntPolynomial::new(quot), IntPolynomial::new(rem))
    }

    /// `self / divisor` when the division by the monic `divisor` is exact.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let (q, r) = self.div_rem_monic(divisor);
        r.is_zero().then_some(q)
    }

    /// `f(−x)`.
    pub fn compose_neg(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// True when every non-zero coefficient sits at an exponent divisible by `k`.
    pub fn supported_on_multiples_of(&self, k: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || i % k == 0)
    }

    /// Companion matrix: ones on the subdiagonal, last column `−a₀ … −a_{n−1}`.
    pub fn companion(&self) -> QMatrix {
        assert!(self.is_monic(), "companion matrix needs a monic polynomial");
        let n = self.degree();
        QMatrix::from_fn(n, |i, j| {
            if j + 1 == n {
                Rational::from_integer(-self.coeff(i))
            } else if i == j + 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn to_rational(&self) -> RatPolynomial {
        RatPolynomial::new(self.coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    /// Monic gcd over ℚ.
    pub fn gcd_over_q(&self, other: &IntPolynomial) -> RatPolynomial {
        self.to_rational().gcd(&other.to_rational())
    }
}

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPolynomial {
    coeffs: Vec<Rational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The same polynomial with integer coefficients, if it has them.
    pub fn to_int(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    pub fn make_monic(&self) -> RatPolynomial {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => RatPolynomial::new(self.coeffs.iter().map(|c| c / lead).collect()),
        }
    }

    pub fn rem(&self, divisor: &RatPolynomial) -> RatPolynomial {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.degree();
        let lead = divisor.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1 - d;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        RatPolynomial::new(rem)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &RatPolynomial) -> RatPolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

fn write_terms<T>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
    is_zero: impl Fn(&T) -> bool,
    sign_and_abs: impl Fn(&T) -> (bool, String, bool),
) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if is_zero(c) {
            continue;
        }
        let (negative, abs, abs_is_one) = sign_and_abs(c);
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let show_coeff = i == 0 || !abs_is_one;
        if show_coeff {
            if i > 0 && abs.contains('/') {
                write!(f, "({abs})")?;
            } else {
                write!(f, "{abs}")?;
            }
        }
        match i {
            0 => {}
            1 => write!(f, "x")?,
            _ => write!(f, "x^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c.is_zero(), |c| {
            let abs = c.abs();
            (c.is_negative(), abs.to_string(), abs.is_one())
        })
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c.is_zero(), |c| {
            let abs = c.abs();
            (c.is_negative(), format_rational(&abs), abs.is_one())
        })
    }
}
