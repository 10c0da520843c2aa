//! Turning unipotent group elements into root-group elements.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::lattice::integer_relations;
use crate::exact::{QMatrix, Rational};
use crate::group::InvariantForm;
use crate::slp::Word;
use crate::standard::{root_group_membership, Membership, RootLabel, RootSystemData};

/// Elements kept per elimination layer.
const LAYER_POOL: usize = 24;
/// Elements of a layer whose pairwise commutators are formed.
const LAYER_COMMUTATORS: usize = 12;
/// Elements of a stabiliser pool whose pairwise commutators are formed.
const POOL_COMMUTATORS: usize = 48;
const MAX_LEVI_ORDER: u32 = 12;
const MAX_RATIO: i64 = 1 << 20;

/// A group element together with the SLP symbol that evaluates to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub name: String,
    pub matrix: QMatrix,
}

impl Candidate {
    pub fn new(name: impl Into<String>, matrix: QMatrix) -> Candidate {
        Candidate {
            name: name.into(),
            matrix,
        }
    }

    fn cost(&self) -> u64 {
        self.matrix.max_entry_bits()
    }
}

/// Definitions created while combining elements, in creation order.
#[derive(Clone, Debug, Default)]
pub struct Derivations {
    defs: IndexMap<String, Word>,
    next: usize,
}

impl Derivations {
    pub fn new() -> Derivations {
        Derivations::default()
    }

    /// Binds a fixed name.
    pub fn insert(&mut self, name: &str, word: Word) {
        self.defs.insert(name.to_string(), word);
    }

    /// Binds a fresh name `u1`, `u2`, … to `word`.
    pub fn define(&mut self, word: Word) -> String {
        loop {
            self.next += 1;
            let name = format!("u{}", self.next);
            if !self.defs.contains_key(&name) {
                self.defs.insert(name.clone(), word);
                return name;
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&Word> {
        self.defs.get(name)
    }

    pub fn definitions(&self) -> &IndexMap<String, Word> {
        &self.defs
    }

    /// The definitions needed to evaluate `names`, in creation order.
    pub fn closure<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> IndexMap<String, Word> {
        let mut needed: HashSet<&str> = HashSet::new();
        let mut stack: Vec<&str> = names.into_iter().collect();
        while let Some(n) = stack.pop() {
            if let Some((key, word)) = self.defs.get_key_value(n) {
                if needed.insert(key.as_str()) {
                    stack.extend(word.symbols());
                }
            }
        }
        self.defs
            .iter()
            .filter(|(k, _)| needed.contains(k.as_str()))
            .map(|(k, w)| (k.clone(), w.clone()))
            .collect()
    }

    /// `∏ xᵢ^{eᵢ}` as a new candidate; a lone factor with exponent 1 is reused.
    pub fn product(&mut self, parts: &[(&Candidate, i64)]) -> Candidate {
        let parts: Vec<_> = parts.iter().filter(|(_, e)| *e != 0).collect();
        if let [(c, 1)] = parts.as_slice() {
            return (*c).clone();
        }
        let n = parts.first().map_or(0, |(c, _)| c.matrix.dim());
        let matrix = parts.iter().fold(QMatrix::identity(n), |acc, (c, e)| {
            &acc * &c.matrix.pow(*e).expect("group elements are invertible")
        });
        let word = Word::new(parts.iter().map(|(c, e)| (c.name.clone(), *e)));
        Candidate::new(self.define(word), matrix)
    }

    pub fn commutator(&mut self, x: &Candidate, y: &Candidate) -> Candidate {
        let xi = x.matrix.inverse().expect("group elements are invertible");
        let yi = y.matrix.inverse().expect("group elements are invertible");
        let matrix = &(&(&x.matrix * &y.matrix) * &xi) * &yi;
        let word = Word::commutator(&Word::symbol(&x.name), &Word::symbol(&y.name));
        Candidate::new(self.define(word), matrix)
    }
}

/// Upper unitriangular, i.e. inside the unipotent radical of the Borel subgroup
/// fixing the standard flag.
pub fn is_upper_unitriangular(x: &QMatrix) -> bool {
    let n = x.dim();
    (0..n).all(|i| x.get(i, i).is_one() && (0..i).all(|j| x.get(i, j).is_zero()))
}

/// Whether `x` maps `span(e₁..e_j)` into itself.
pub fn stabilises_initial_span(x: &QMatrix, j: usize) -> bool {
    (j..x.dim()).all(|i| (0..j).all(|k| x.get(i, k).is_zero()))
}

fn levi_blocks(x: &QMatrix, blocks: &[usize]) -> Vec<QMatrix> {
    let mut start = 0;
    blocks
        .iter()
        .map(|&size| {
            let b = QMatrix::from_fn(size, |i, j| x.get(start + i, start + j).clone());
            start += size;
            b
        })
        .collect()
}

fn blocks_identity(levi: &[QMatrix]) -> bool {
    levi.iter().all(QMatrix::is_identity)
}

fn blocks_mul(x: &[QMatrix], y: &[QMatrix]) -> Vec<QMatrix> {
    x.iter().zip(y).map(|(a, b)| a * b).collect()
}

fn finite_order(levi: &[QMatrix]) -> Option<u32> {
    let mut power = levi.to_vec();
    for k in 1..=MAX_LEVI_ORDER {
        if blocks_identity(&power) {
            return Some(k);
        }
        power = blocks_mul(&power, levi);
    }
    None
}

/// Log of a unipotent block-diagonal part, flattened and scaled so that its
/// first non-zero entry is 1, together with that scale.
fn levi_direction(levi: &[QMatrix]) -> Option<(Vec<Rational>, Rational)> {
    let mut flat = Vec::new();
    for b in levi {
        flat.extend(b.unipotent_log()?.entries().iter().cloned());
    }
    let lead = flat.iter().find(|x| !x.is_zero())?.clone();
    Some((flat.iter().map(|x| x / &lead).collect(), lead))
}

/// Elements of the unipotent radical of the stabiliser with the given Levi
/// block sizes, built from members of that stabiliser.
pub fn radical_elements(pool: &[Candidate], blocks: &[usize], der: &mut Derivations) -> Vec<Candidate> {
    let mut out = Vec::new();
    let levis: Vec<Vec<QMatrix>> = pool.iter().map(|c| levi_blocks(&c.matrix, blocks)).collect();
    let mut first_with: HashMap<&[QMatrix], usize> = HashMap::new();
    let mut directions: HashMap<Vec<Rational>, (usize, Rational)> = HashMap::new();
    for (i, (x, levi)) in pool.iter().zip(&levis).enumerate() {
        if blocks_identity(levi) {
            out.push(x.clone());
            continue;
        }
        if let Some(&k) = first_with.get(levi.as_slice()) {
            out.push(der.product(&[(&pool[k], -1), (x, 1)]));
            continue;
        }
        first_with.insert(levi, i);
        if let Some(order) = finite_order(levi) {
            out.push(der.product(&[(x, order as i64)]));
            continue;
        }
        if let Some((dir, scale)) = levi_direction(levi) {
            match directions.get(&dir) {
                Some((k, base)) => {
                    let t = &scale / base;
                    let (p, q) = (t.numer().to_i64(), t.denom().to_i64());
                    if let (Some(p), Some(q)) = (p, q) {
                        if p.abs() <= MAX_RATIO && q <= MAX_RATIO {
                            out.push(der.product(&[(&pool[*k], p), (x, -q)]));
                        }
                    }
                }
                None => {
                    directions.insert(dir, (i, scale));
                }
            }
        }
    }
    let limit = pool.len().min(POOL_COMMUTATORS);
    for i in 0..limit {
        for j in i + 1..limit {
            let (li, lj) = (&levis[i], &levis[j]);
            if blocks_mul(li, lj) == blocks_mul(lj, li) {
                let c = der.commutator(&pool[i], &pool[j]);
                if !c.matrix.is_identity() {
                    out.push(c);
                }
            }
        }
    }
    dedup(out)
}

/// Drops identities and repeated matrices, keeping the first occurrence.
pub fn dedup(items: Vec<Candidate>) -> Vec<Candidate> {
    let mut seen = HashSet::new();
    items
        .into_iter()
        .filter(|c| !c.matrix.is_identity() && seen.insert(c.matrix.clone()))
        .collect()
}

fn by_cost(mut items: Vec<Candidate>, limit: usize) -> Vec<Candidate> {
    items.sort_by_key(Candidate::cost);
    items.truncate(limit);
    items
}

/// Coordinate of a unipotent element along each positive root, read off its log.
struct RootCoordinates {
    roots: Vec<(RootLabel, i32, (usize, usize), Rational)>,
}

impl RootCoordinates {
    fn new(roots: &RootSystemData) -> RootCoordinates {
        let roots = roots
            .positive_roots()
            .map(|p| {
                let n = p.generator.dim();
                let (pos, value) = (0..n * n)
                    .map(|k| (k / n, k % n))
                    .map(|(i, j)| ((i, j), p.generator.get(i, j).clone()))
                    .find(|(_, v)| !v.is_zero())
                    .expect("root vectors are non-zero");
                (p.root.clone(), p.height, pos, value)
            })
            .collect();
        RootCoordinates { roots }
    }

    fn max_height(&self) -> i32 {
        self.roots.iter().map(|r| r.1).max().unwrap_or(0)
    }

    fn row(&self, x: &QMatrix, keep: impl Fn(&RootLabel, i32) -> bool) -> Vec<Rational> {
        let log = x.unipotent_log().expect("upper unitriangular");
        self.roots
            .iter()
            .filter(|(r, h, _, _)| keep(r, *h))
            .map(|(_, _, (i, j), v)| log.get(*i, *j) / v)
            .collect()
    }
}

fn relation_product(pool: &[Candidate], rel: &[BigInt], der: &mut Derivations) -> Option<Candidate> {
    let parts = pool
        .iter()
        .zip(rel)
        .map(|(c, k)| k.to_i64().map(|k| (c, k)))
        .collect::<Option<Vec<_>>>()?;
    Some(der.product(&parts))
}

/// Combines unipotent, form-preserving candidates by products, integer powers
/// and commutators into non-trivial elements of the root group of `target`.
///
/// Elements are pushed down the height filtration of the upper unitriangular
/// group; once the remaining layers commute, one integer linear system on the
/// log coordinates isolates the target root.
pub fn reduce_to_pattern(
    candidates: &[Candidate],
    roots: &RootSystemData,
    form: &InvariantForm,
    target: &RootLabel,
    der: &mut Derivations,
) -> Vec<Candidate> {
    let Some(pattern) = roots.pattern(target) else {
        return Vec::new();
    };
    let hits = |items: &[Candidate]| -> Vec<Candidate> {
        items
            .iter()
            .filter(|c| matches!(root_group_membership(&c.matrix, form, pattern), Ok(Membership::NonTrivialMember)))
            .cloned()
            .collect()
    };
    let direct = hits(candidates);
    if !direct.is_empty() {
        return dedup(direct);
    }

    let mut pool: Vec<Candidate> = candidates
        .iter()
        .filter(|c| is_upper_unitriangular(&c.matrix) && form.is_preserved_by(&c.matrix))
        .cloned()
        .collect();
    let others: Vec<&Candidate> = candidates.iter().filter(|c| !is_upper_unitriangular(&c.matrix)).collect();
    for i in 0..others.len() {
        for j in i + 1..others.len() {
            let c = der.commutator(others[i], others[j]);
            if is_upper_unitriangular(&c.matrix) && form.is_preserved_by(&c.matrix) {
                pool.push(c);
            }
        }
    }
    let mut pool = by_cost(dedup(pool), LAYER_POOL);

    let coords = RootCoordinates::new(roots);
    let top = coords.max_height();
    for h in 1..=top {
        log::debug!(
            "{target} layer {h}: {} elements, largest entry {} bits",
            pool.len(),
            pool.iter().map(Candidate::cost).max().unwrap_or(0)
        );
        let found = hits(&pool);
        if !found.is_empty() {
            return found;
        }
        if 2 * h > top {
            if pattern.height < h {
                break;
            }
            return isolate(&pool, &coords, h, target, form, pattern, der);
        }
        let rows: Vec<Vec<Rational>> = pool.iter().map(|c| coords.row(&c.matrix, |_, ht| ht == h)).collect();
        let mut next: Vec<Candidate> = integer_relations(&rows)
            .iter()
            .filter_map(|rel| relation_product(&pool, rel, der))
            .collect();
        let limit = pool.len().min(LAYER_COMMUTATORS);
        for i in 0..limit {
            for j in i + 1..limit {
                next.push(der.commutator(&pool[i], &pool[j]));
            }
        }
        pool = by_cost(dedup(next), LAYER_POOL);
    }
    Vec::new()
}

/// In the abelian layer from height `h` up, solves for a combination whose
/// coordinates vanish on every root except `target`.
fn isolate(
    pool: &[Candidate],
    coords: &RootCoordinates,
    h: i32,
    target: &RootLabel,
    form: &InvariantForm,
    pattern: &crate::standard::RootGroupPattern,
    der: &mut Derivations,
) -> Vec<Candidate> {
    let others: Vec<Vec<Rational>> = pool
        .iter()
        .map(|c| coords.row(&c.matrix, |r, ht| ht >= h && r != target))
        .collect();
    let along: Vec<Rational> = pool
        .iter()
        .map(|c| coords.row(&c.matrix, |r, _| r == target)[0].clone())
        .collect();
    for rel in integer_relations(&others) {
        let t: Rational = rel
            .iter()
            .zip(&along)
            .map(|(k, v)| Rational::from_integer(k.clone()) * v)
            .sum();
        if t.is_zero() {
            continue;
        }
        let g = rel.iter().fold(BigInt::zero(), |acc, k| acc.gcd(k));
        let rel: Vec<BigInt> = rel.iter().map(|k| k / &g).collect();
        let Some(c) = relation_product(pool, &rel, der) else {
            continue;
        };
        if matches!(root_group_membership(&c.matrix, form, pattern), Ok(Membership::NonTrivialMember)) {
            return vec![c];
        }
    }
    Vec::new()
}
