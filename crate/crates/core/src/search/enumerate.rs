//! Breadth-first enumeration of reduced words in the two generators, done with
//! machine integers in the original (integral) basis.

use std::collections::HashSet;
use std::hash::{DefaultHasher, Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exact::{kernel_basis, QMatrix, Rational};
use crate::slp::Word;

/// Entry sizes beyond this are pruned regardless of the configured cap, so
/// that one further product still fits in `i128`.
pub const HARD_BIT_CAP: u32 = 60;

/// Square integer matrix with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    n: usize,
    e: Vec<i128>,
}

impl IntMat {
    pub fn identity(n: usize) -> IntMat {
        IntMat {
            n,
            e: (0..n * n).map(|k| (k % (n + 1) == 0) as i128).collect(),
        }
    }

    pub fn from_qmatrix(m: &QMatrix) -> Option<IntMat> {
        let e = m
            .entries()
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer().to_i128()).flatten())
            .collect::<Option<Vec<_>>>()?;
        Some(IntMat { n: m.dim(), e })
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_fn(self.n, |i, j| Rational::from_integer(BigInt::from(self.e[i * self.n + j])))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.e[i * self.n + j]
    }

    pub fn mul(&self, o: &IntMat) -> Option<IntMat> {
        let n = self.n;
        let mut e = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = a.checked_mul(o.e[k * n + j])?;
                    e[i * n + j] = e[i * n + j].checked_add(t)?;
                }
            }
        }
        Some(IntMat { n, e })
    }

    pub fn bits(&self) -> u32 {
        self.e.iter().map(|x| 128 - x.unsigned_abs().leading_zeros()).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMat::identity(self.n)
    }

    /// `(X − I)ⁿ = 0`, with a trace test first.
    pub fn is_unipotent(&self) -> bool {
        let n = self.n;
        let trace: i128 = (0..n).map(|i| self.e[i * n + i]).sum();
        if trace != n as i128 {
            return false;
        }
        let mut nil = self.clone();
        for i in 0..n {
            nil.e[i * n + i] -= 1;
        }
        let mut power = nil.clone();
        for _ in 1..n {
            match power.mul(&nil) {
                Some(p) => power = p,
                None => return false,
            }
        }
        power.e.iter().all(|&x| x == 0)
    }

    pub fn fingerprint(&self) -> u128 {
        let half = |salt: u8| {
            let mut h = DefaultHasher::new();
            salt.hash(&mut h);
            self.e.hash(&mut h);
            h.finish() as u128
        };
        (half(0) << 64) | half(1)
    }
}

/// A freely reduced word in `a, a⁻¹, b, b⁻¹`, two bits per letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordCode {
    len: u8,
    bits: u64,
}

pub const MAX_CODE_LEN: usize = 32;

const LETTERS: [(&str, i64); 4] = [("a", 1), ("a", -1), ("b", 1), ("b", -1)];

impl WordCode {
    pub const EMPTY: WordCode = WordCode { len: 0, bits: 0 };

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn letter(&self, i: usize) -> usize {
        ((self.bits >> (2 * i)) & 3) as usize
    }

    fn last(&self) -> Option<usize> {
        (self.len > 0).then(|| self.letter(self.len as usize - 1))
    }

    fn push(&self, letter: usize) -> WordCode {
        WordCode {
            len: self.len + 1,
            bits: self.bits | ((letter as u64) << (2 * self.len as u64)),
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).map(|i| self.letter(i))
    }

    pub fn to_word(&self) -> Word {
        Word::new(self.letters().map(|l| (LETTERS[l].0.to_string(), LETTERS[l].1)))
    }

    /// Whether the word is `u^k` for some shorter `u`.
    fn is_proper_power(&self) -> bool {
        let n = self.len();
        (1..n).filter(|p| n.is_multiple_of(*p)).any(|p| (p..n).all(|i| self.letter(i) == self.letter(i - p)))
    }

    fn rotations_and_inverses(&self) -> Vec<Vec<usize>> {
        let letters: Vec<usize> = self.letters().collect();
        let inverse: Vec<usize> = letters.iter().rev().map(|l| l ^ 1).collect();
        let n = letters.len();
        let mut out = Vec::new();
        for w in [letters, inverse] {
            for r in 0..n {
                out.push((0..n).map(|i| w[(i + r) % n]).collect());
            }
        }
        out
    }

    fn is_cyclically_reduced(&self) -> bool {
        match (self.letters().next(), self.last()) {
            (Some(f), Some(l)) => self.len == 1 || f != l ^ 1,
            _ => true,
        }
    }
}

/// Tests whether the conjugated element `P⁻¹XP` stabilises `span(e₁..e_j)`,
/// phrased in the original basis as `W·X·V = 0`.
#[derive(Clone, Debug)]
pub struct FlagTest {
    span: Vec<Vec<i128>>,
    annihilator: Vec<Vec<i128>>,
}

fn integral_vector(v: &[Rational]) -> Option<Vec<i128>> {
    let den = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x.numer() * (&den / x.denom())).to_i128())
        .collect()
}

impl FlagTest {
    pub fn new(p: &QMatrix, j: usize) -> Option<FlagTest> {
        let span = (0..j)
            .map(|k| integral_vector(p.column(k).entries()))
            .collect::<Option<Vec<_>>>()?;
        let columns: Vec<Vec<Rational>> = (0..j).map(|k| p.column(k).entries().to_vec()).collect();
        let annihilator = kernel_basis(&columns, p.dim())
            .iter()
            .map(|v| integral_vector(v))
            .collect::<Option<Vec<_>>>()?;
        Some(FlagTest { span, annihilator })
    }

    pub fn contains(&self, x: &IntMat) -> bool {
        let n = x.n;
        for v in &self.span {
            let mut xv = vec![0i128; n];
            for (i, slot) in xv.iter_mut().enumerate() {
                let mut s = 0i128;
                for (k, vk) in v.iter().enumerate() {
                    match x.get(i, k).checked_mul(*vk).and_then(|t| s.checked_add(t)) {
                        Some(t) => s = t,
                        None => return false,
                    }
                }
                *slot = s;
            }
            for w in &self.annihilator {
                let mut s = 0i128;
                for (a, b) in w.iter().zip(&xv) {
                    match a.checked_mul(*b).and_then(|t| s.checked_add(t)) {
                        Some(t) => s = t,
                        None => return false,
                    }
                }
                if s != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Where an enumerated element comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Word(WordCode),
    /// `w · s · w⁻¹` for the seed with the given index.
    Conjugate { by: WordCode, seed: usize },
}

#[derive(Clone, Debug)]
pub struct Found {
    pub origin: Origin,
    pub matrix: IntMat,
    /// Bit `k` set when the element stabilises the `k`-th flag space.
    pub flags: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub nodes_expanded: u64,
    pub pruned: u64,
    pub duplicates: u64,
    pub conjugates_tested: u64,
}

#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub unipotents: Vec<Found>,
    pub flag_members: Vec<Found>,
    pub stats: EnumerationStats,
}

pub struct Limits {
    pub max_len: usize,
    pub bit_cap: u32,
    pub max_unipotents: usize,
    pub max_flag_members: usize,
}

struct Node {
    code: WordCode,
    x: IntMat,
    inv: IntMat,
}

/// Visits reduced words in shortlex order (`a < a⁻¹ < b < b⁻¹`) and calls
/// `visit` on each new element; elements already seen or too large are skipped.
fn breadth_first(
    gens: &[IntMat; 4],
    limits: &Limits,
    stats: &mut EnumerationStats,
    mut visit: impl FnMut(&Node),
) {
    let n = gens[0].n;
    let mut seen: HashSet<u128> = HashSet::new();
    let root = Node {
        code: WordCode::EMPTY,
        x: IntMat::identity(n),
        inv: IntMat::identity(n),
    };
    seen.insert(root.x.fingerprint());
    visit(&root);
    let mut layer = vec![root];
    let max_len = limits.max_len.min(MAX_CODE_LEN);
    for depth in 1..=max_len {
        let keep = depth < max_len;
        let mut next = Vec::new();
        for node in &layer {
            for (letter, g) in gens.iter().enumerate() {
                if node.code.last() == Some(letter ^ 1) {
                    continue;
                }
                let x = node.x.mul(g);
                let inv = gens[letter ^ 1].mul(&node.inv);
                let (Some(x), Some(inv)) = (x, inv) else {
                    stats.pruned += 1;
                    continue;
                };
                if x.bits() > limits.bit_cap {
                    stats.pruned += 1;
                    continue;
                }
                if !seen.insert(x.fingerprint()) {
                    stats.duplicates += 1;
                    continue;
                }
                stats.nodes_expanded += 1;
                let child = Node {
                    code: node.code.push(letter),
                    x,
                    inv,
                };
                visit(&child);
                if keep {
                    next.push(child);
                }
            }
        }
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
}

/// Short unipotent words used as conjugation seeds: cyclically reduced, not
/// proper powers, one per conjugacy-and-inverse class.
pub fn find_seeds(gens: &[IntMat; 4], max_len: usize, bit_cap: u32, count: usize) -> Vec<(WordCode, IntMat)> {
    let limits = Limits {
        max_len,
        bit_cap,
        max_unipotents: 0,
        max_flag_members: 0,
    };
    let mut stats = EnumerationStats::default();
    let mut seeds: Vec<(WordCode, IntMat)> = Vec::new();
    let mut classes: HashSet<Vec<usize>> = HashSet::new();
    breadth_first(gens, &limits, &mut stats, |node| {
        if seeds.len() >= count || node.code.is_empty() {
            return;
        }
        if !node.code.is_cyclically_reduced() || node.code.is_proper_power() || !node.x.is_unipotent() {
            return;
        }
        let variants = node.code.rotations_and_inverses();
        if variants.iter().any(|v| classes.contains(v)) {
            return;
        }
        classes.extend(variants);
        seeds.push((node.code, node.x.clone()));
    });
    seeds
}

/// Full enumeration: unipotent words, words in a flag stabiliser, and
/// conjugates of the seeds landing in a flag stabiliser.
pub fn enumerate(gens: &[IntMat; 4], flags: &[FlagTest], seeds: &[IntMat], limits: &Limits) -> Enumeration {
    let mut out = Enumeration::default();
    let mut seen_conj: HashSet<u128> = HashSet::new();
    let mut stats = EnumerationStats::default();
    let flag_mask = |x: &IntMat| -> u32 {
        flags
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains(x))
            .fold(0, |m, (k, _)| m | (1 << k))
    };
    breadth_first(gens, limits, &mut stats, |node| {
        if !node.code.is_empty() {
            let mask = flag_mask(&node.x);
            let unipotent = node.x.is_unipotent();
            if unipotent && out.unipotents.len() < limits.max_unipotents {
                out.unipotents.push(Found {
                    origin: Origin::Word(node.code),
                    matrix: node.x.clone(),
                    flags: mask,
                });
            }
            if mask != 0 && out.flag_members.len() < limits.max_flag_members {
                out.flag_members.push(Found {
                    origin: Origin::Word(node.code),
                    matrix: node.x.clone(),
                    flags: mask,
                });
            }
        }
        for (k, s) in seeds.iter().enumerate() {
            if out.flag_members.len() >= limits.max_flag_members {
                break;
            }
            out.stats.conjugates_tested += 1;
            let Some(y) = node.x.mul(s).and_then(|t| t.mul(&node.inv)) else {
                continue;
            };
            let mask = flag_mask(&y);
            if mask == 0 || !seen_conj.insert(y.fingerprint()) {
                continue;
            }
            out.flag_members.push(Found {
                origin: Origin::Conjugate { by: node.code, seed: k },
                matrix: y,
                flags: mask,
            });
        }
    });
    out.stats.nodes_expanded = stats.nodes_expanded;
    out.stats.pruned = stats.pruned;
    out.stats.duplicates = stats.duplicates;
    out
}

/// The four generator matrices `A, A⁻¹, B, B⁻¹` as integer matrices.
pub fn integer_generators(a: &QMatrix, b: &QMatrix) -> Option<[IntMat; 4]> {
    let ai = a.inverse().ok()?;
    let bi = b.inverse().ok()?;
    Some([
        IntMat::from_qmatrix(a)?,
        IntMat::from_qmatrix(&ai)?,
        IntMat::from_qmatrix(b)?,
        IntMat::from_qmatrix(&bi)?,
    ])
}

impl WordCode {
    /// Parses a word over `a, b` given as a [`Word`], if it is freely reduced
    /// and short enough.
    pub fn from_word(w: &Word) -> Option<WordCode> {
        let mut code = WordCode::EMPTY;
        for (sym, e) in w.factors() {
            let base = match sym.as_str() {
                "a" => 0,
                "b" => 2,
                _ => return None,
            };
            let letter = if *e > 0 { base } else { base + 1 };
            for _ in 0..e.unsigned_abs() {
                if code.len() >= MAX_CODE_LEN {
                    return None;
                }
                code = code.push(letter);
            }
        }
        Some(code)
    }
}
