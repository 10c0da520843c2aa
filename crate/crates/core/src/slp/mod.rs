//! Straight-line programs over named matrices.

mod certificate;

pub use certificate::{
    evaluate_certificate, parse_basis_change, verify_certificate, Certificate, Claim, ClaimResult, Verdict, VerdictStatus,
    ASSUMPTIONS, DEFAULT_HEIGHT_BOUND,
};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::QMatrix;

/// A product `x₁^{k₁} x₂^{k₂} …` of named elements, kept freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    factors: Vec<(String, i64)>,
}

impl Word {
    /// Builds a word and freely reduces it.
    pub fn new(factors: impl IntoIterator<Item = (String, i64)>) -> Word {
        let mut out: Vec<(String, i64)> = Vec::new();
        for (name, exp) in factors {
            if exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some((last, e)) if *last == name => {
                    *e += exp;
                    if *e == 0 {
                        out.pop();
                    }
                }
                _ => out.push((name, exp)),
            }
        }
        Word { factors: out }
    }

    pub fn symbol(name: &str) -> Word {
        Word::new([(name.to_string(), 1)])
    }

    pub fn factors(&self) -> &[(String, i64)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of factors after free reduction.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// Sum of the absolute exponents.
    pub fn syllable_length(&self) -> u64 {
        self.factors.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.factors.iter().rev().map(|(n, e)| (n.clone(), -e)))
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        Word::new((0..k.unsigned_abs()).flat_map(|_| base.factors.clone()))
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|(n, _)| n.as_str())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for Word {
    type Err = Error;

    /// Space-separated factors `NAME` or `NAME^EXP`, e.g. `b^-1 a b a^-1`.
    fn from_str(s: &str) -> Result<Word> {
        let mut factors = Vec::new();
        let mut pos = 0;
        for token in s.split(' ') {
            let column = pos + 1;
            pos += token.len() + 1;
            if token.is_empty() {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let exp = e
                        .parse::<i64>()
                        .map_err(|_| Error::parse_at(column, format!("bad exponent in `{token}`")))?;
                    (n, exp)
                }
                None => (token, 1),
            };
            if !is_identifier(name) {
                return Err(Error::parse_at(column, format!("`{name}` is not a symbol name")));
            }
            factors.push((name.to_string(), exp));
        }
        if factors.is_empty() {
            return Err(Error::parse("empty word"));
        }
        Ok(Word::new(factors))
    }
}

/// Named definitions, each a word in base symbols and earlier definitions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Slp {
    base_symbols: Vec<String>,
    definitions: IndexMap<String, Word>,
}

impl Slp {
    pub fn new(base_symbols: impl IntoIterator<Item = String>) -> Self {
        Slp {
            base_symbols: base_symbols.into_iter().collect(),
            definitions: IndexMap::new(),
        }
    }

    pub fn base_symbols(&self) -> &[String] {
        &self.base_symbols
    }

    pub fn definitions(&self) -> &IndexMap<String, Word> {
        &self.definitions
    }

    pub fn get(&self, name: &str) -> Option<&Word> {
        self.definitions.get(name)
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.base_symbols.iter().any(|b| b == name) || self.definitions.contains_key(name)
    }

    /// Appends a definition; its word may only use already known names.
    pub fn define(&mut self, name: &str, word: Word) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::parse(format!("`{name}` is not a valid definition name")));
        }
        if self.is_defined(name) {
            return Err(Error::parse(format!("`{name}` is defined twice")));
        }
        if let Some(unknown) = word.symbols().find(|s| !self.is_defined(s)) {
            return Err(Error::UnboundSymbol(unknown.to_string()));
        }
        self.definitions.insert(name.to_string(), word);
        Ok(())
    }

    /// Names whose value depends on `symbol`, including `symbol` itself.
    pub fn dependents_of(&self, symbol: &str) -> Vec<String> {
        let mut out = vec![symbol.to_string()];
        for (name, word) in &self.definitions {
            if word.symbols().any(|s| out.iter().any(|o| o == s)) {
                out.push(name.clone());
            }
        }
        out
    }
}

/// Evaluates every definition in order; the result contains bindings and definitions.
pub fn evaluate_slp(slp: &Slp, bindings: &IndexMap<String, QMatrix>) -> Result<IndexMap<String, QMatrix>> {
    let mut values: IndexMap<String, QMatrix> = IndexMap::new();
    let mut dim = None;
    for name in slp.base_symbols() {
        let m = bindings
            .get(name)
            .ok_or_else(|| Error::UnboundSymbol(name.clone()))?;
        match dim {
            None => dim = Some(m.dim()),
            Some(d) if d != m.dim() => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.dim(),
                })
            }
            _ => {}
        }
        if m.det().is_zero() {
            return Err(Error::SingularBase(name.clone()));
        }
        values.insert(name.clone(), m.clone());
    }
    let n = dim.unwrap_or(0);
    let mut inverses: HashMap<String, QMatrix> = HashMap::new();
    for (name, word) in slp.definitions() {
        let mut acc = QMatrix::identity(n);
        for (sym, exp) in word.factors() {
            let base = values
                .get(sym)
                .ok_or_else(|| Error::UnboundSymbol(sym.clone()))?;
            let factor = if *exp > 0 {
                base.pow_unsigned(exp.unsigned_abs())
            } else {
                let inv = match inverses.get(sym) {
                    Some(inv) => inv.clone(),
                    None => {
                        let inv = base.inverse()?;
                        inverses.insert(sym.clone(), inv.clone());
                        inv
                    }
                };
                inv.pow_unsigned(exp.unsigned_abs())
            };
            acc = &acc * &factor;
        }
        values.insert(name.clone(), acc);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn grammar() {
        let word = w("b^-1 a b a^-1");
        assert_eq!(word.len(), 4);
        assert_eq!(word.to_string(), "b^-1 a b a^-1");
        assert_eq!(w("B^3 A^2 B^2 A B^2").to_string(), "B^3 A^2 B^2 A B^2");
        assert!("a^x".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!("3a".parse::<Word>().is_err());
        assert!(matches!("a 3a".parse::<Word>(), Err(Error::Parse { column: Some(3), .. })));
    }

    #[test]
    fn free_reduction() {
        assert_eq!(w("a b b^-1 a"), w("a^2"));
        assert_eq!(w("a b a^-1").concat(&w("a b^-1 a^-1")).len(), 0);
        assert_eq!(Word::commutator(&w("x"), &w("y")).to_string(), "x y x^-1 y^-1");
        assert_eq!(w("x y").pow(-2).to_string(), "y^-1 x^-1 y^-1 x^-1");
    }

    #[test]
    fn definitions_must_be_acyclic() {
        let mut slp = Slp::new(["A".to_string()]);
        assert_eq!(slp.define("X", w("Y")), Err(Error::UnboundSymbol("Y".into())));
        slp.define("X", w("A^2")).unwrap();
        assert!(slp.define("X", w("A")).is_err());
        assert!(slp.define("A", w("X")).is_err());
    }

    #[test]
    fn evaluation() {
        let a = QMatrix::from_i64(&[&[0, 0, 0, -1], &[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 1]]);
        let b = QMatrix::from_i64(&[&[0, 0, 0, -1], &[1, 0, 0, -2], &[0, 1, 0, -2], &[0, 0, 1, -2]]);
        let mut bindings = IndexMap::new();
        bindings.insert("A".to_string(), a.clone());
        bindings.insert("B".to_string(), b.clone());
        let mut slp = Slp::new(["A".to_string(), "B".to_string()]);
        let empty = evaluate_slp(&slp, &bindings).unwrap();
        assert_eq!(empty, bindings);
        slp.define("C", w("A^-1 B")).unwrap();
        let values = evaluate_slp(&slp, &bindings).unwrap();
        let expected = QMatrix::from_i64(&[&[1, 0, 0, -3], &[0, 1, 0, -2], &[0, 0, 1, -3], &[0, 0, 0, 1]]);
        assert_eq!(values["C"], expected);

        let mut singular = bindings.clone();
        singular.insert("B".into(), QMatrix::zero(4));
        assert_eq!(evaluate_slp(&slp, &singular), Err(Error::SingularBase("B".into())));
        bindings.shift_remove("B");
        assert_eq!(evaluate_slp(&slp, &bindings), Err(Error::UnboundSymbol("B".into())));
    }
}
