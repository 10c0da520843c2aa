//! Exact scalars, dense matrices and polynomials over ℚ.
//!
//! Everything here is exact: there is no tolerance parameter anywhere and
//! every [`Rational`] is kept in lowest terms by `num-rational`.

mod linalg;
mod matrix;
mod poly;

pub use linalg::{kernel_basis, rank_of_rows, row_echelon};
pub use matrix::{QMatrix, QVector};
pub use poly::{IntPolynomial, RatPolynomial};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always reduced with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, `p/q` or `-p/q` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse("empty rational"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(format!("`{s}` is not a rational number")));
        }
        t.parse::<BigInt>()
            .map_err(|_| Error::parse(format!("`{s}` is not a rational number")))
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Larger of the bit lengths of numerator and denominator.
pub fn rational_bits(q: &Rational) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

/// `q mod 1`, i.e. the representative in `[0, 1)`.
pub fn frac_part(q: &Rational) -> Rational {
    let f = q - q.floor();
    debug_assert!(!f.is_negative() && f < Rational::one());
    f
}

/// Least common multiple of the denominators in `values` (1 for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
