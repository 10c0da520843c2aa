//! Bounded search for non-trivial root-group elements in the conjugated group.
//!
//! Words in `a = P⁻¹AP`, `b = P⁻¹BP` are enumerated breadth first. Members of
//! the standard parabolic subgroups (stabilisers of `span(e₁..e_j)`) and
//! conjugates of short unipotent words that land in them are collected; their
//! Levi parts are cancelled against each other to produce elements of the
//! upper unitriangular group, which are then combined into root-group
//! elements by integer elimination on log coordinates.

mod enumerate;
mod lattice;
mod reduce;

use std::time::{Duration, Instant};

use indexmap::IndexMap;
use log::{debug, info};

pub use enumerate::{IntMat, WordCode, HARD_BIT_CAP};
pub use lattice::integer_relations;
pub use reduce::{
    dedup, is_upper_unitriangular, radical_elements, reduce_to_pattern, stabilises_initial_span, Candidate,
    Derivations,
};

use crate::cyclo::ParameterPair;
use crate::error::{Error, Result};
use crate::exact::QMatrix;
use crate::group::{solve_invariant_form, GroupPresentation};
use crate::slp::{evaluate_slp, Certificate, Slp, Word};
use crate::standard::{
    apply_basis_change, is_standard_shape, root_group_membership, root_system, Membership, RootLabel,
};
use enumerate::{enumerate, find_seeds, integer_generators, FlagTest, Limits, Origin};

const SEED_WORD_LENGTH: usize = 4;
const SEED_COUNT: usize = 4;
const MAX_UNIPOTENTS: usize = 256;
const MAX_FLAG_MEMBERS: usize = 100_000;
/// Stabiliser members fed into the Levi cancellation, per stabiliser.
const POOL_SIZE: usize = 100_000;
/// Unipotent candidates whose pairwise commutators form one round.
const ROUND_SIZE: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_word_length: usize,
    /// Words whose matrices (in the original integral basis) have entries
    /// larger than this many bits are pruned.
    pub max_entry_bits: u32,
    pub commutator_rounds: usize,
    /// Roots to find elements for; empty means the highest and second-highest root.
    pub target_patterns: Vec<RootLabel>,
    /// Words in `a`, `b` to conjugate around; `None` picks short unipotent words.
    pub seed_elements: Option<Vec<Word>>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_word_length: 12,
            max_entry_bits: 256,
            commutator_rounds: 2,
            target_patterns: Vec::new(),
            seed_elements: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStatistics {
    pub nodes_expanded: u64,
    pub pruned: u64,
    pub duplicates: u64,
    pub conjugates_tested: u64,
    pub effective_bit_cap: u32,
    pub unipotent_candidates: usize,
    pub stabiliser_members: usize,
    pub radical_elements: usize,
    pub commutators: usize,
    pub elapsed: Duration,
}

/// A verified root-group element: `name` is defined in `definitions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootWitness {
    pub root: RootLabel,
    pub name: String,
    pub matrix: QMatrix,
}

#[derive(Clone, Debug, Default)]
pub struct SearchResult {
    pub found: Vec<RootWitness>,
    /// Definitions over `A`, `B`, `P`, starting with `a` and `b`.
    pub definitions: IndexMap<String, Word>,
    /// Unipotent words met during enumeration, shortest first.
    pub unipotent_words: Vec<Word>,
    pub missing: Vec<RootLabel>,
    pub statistics: SearchStatistics,
}

impl SearchResult {
    pub fn is_complete(&self) -> bool {
        !self.found.is_empty() && self.missing.is_empty()
    }

    /// The found elements as a certificate for `pair` with basis change `p`.
    pub fn certificate(&self, pair: &ParameterPair, p: &QMatrix) -> Result<Certificate> {
        let mut cert = Certificate::new(pair.clone(), Some(p.clone()), IndexMap::new());
        for (name, word) in &self.definitions {
            cert.define(name, word.clone())?;
        }
        for w in &self.found {
            cert.claim(&w.name, w.root.clone());
        }
        let s = &self.statistics;
        cert.comments.push(format!(
            "found by search: {} words expanded, {} pruned, bit cap {}",
            s.nodes_expanded, s.pruned, s.effective_bit_cap
        ));
        Ok(cert)
    }
}

fn word_matrix(code: &WordCode, gens: &[IntMat; 4]) -> Option<IntMat> {
    let n = gens[0].dim();
    code.letters().try_fold(IntMat::identity(n), |acc, l| acc.mul(&gens[l]))
}

/// Levi block sizes of the stabiliser of `span(e₁..e_j)` in dimension `n`.
fn parabolic_blocks(n: usize, j: usize) -> Vec<usize> {
    [j, n - 2 * j, j].into_iter().filter(|&s| s > 0).collect()
}

struct Collector<'a> {
    der: Derivations,
    p: &'a QMatrix,
    p_inv: QMatrix,
    word_names: IndexMap<WordCode, String>,
}

impl Collector<'_> {
    fn word(&mut self, code: WordCode) -> String {
        if let Some(n) = self.word_names.get(&code) {
            return n.clone();
        }
        let name = self.der.define(code.to_word());
        self.word_names.insert(code, name.clone());
        name
    }

    fn conjugated(&self, x: &IntMat) -> QMatrix {
        &(&self.p_inv * &x.to_qmatrix()) * self.p
    }
}

/// Runs the enumeration, Levi cancellation, commutator rounds and elimination;
/// every returned witness has been re-evaluated from its definitions and
/// checked for membership in its root group.
pub fn search_root_unipotents(pres: &GroupPresentation, p: &QMatrix, cfg: &SearchConfig) -> Result<SearchResult> {
    let start = Instant::now();
    let form = solve_invariant_form(pres)?;
    let target_form = apply_basis_change(p, &form)?;
    if !is_standard_shape(&target_form.matrix) {
        return Err(Error::NotStandardShape);
    }
    let roots = root_system(&target_form)?;
    let rank = roots.group.rank();
    let targets: Vec<RootLabel> = if cfg.target_patterns.is_empty() {
        roots.required_roots().into_iter().cloned().collect()
    } else {
        cfg.target_patterns
            .iter()
            .map(|r| r.with_rank(rank).unwrap_or_else(|| r.clone()))
            .collect()
    };
    let mut result = SearchResult {
        missing: targets.clone(),
        ..SearchResult::default()
    };
    let bit_cap = cfg.max_entry_bits.min(HARD_BIT_CAP);
    result.statistics.effective_bit_cap = bit_cap;
    if cfg.max_word_length == 0 {
        result.statistics.elapsed = start.elapsed();
        return Ok(result);
    }
    let gens = integer_generators(&pres.a, &pres.b)
        .ok_or_else(|| Error::InvalidPair("generators are not unimodular integer matrices".into()))?;
    let n = pres.degree();
    let flags = (1..=rank)
        .map(|j| FlagTest::new(p, j))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidPair("basis change entries too large".into()))?;

    let seeds: Vec<(WordCode, IntMat)> = match &cfg.seed_elements {
        Some(words) => words
            .iter()
            .filter_map(|w| {
                let code = WordCode::from_word(w)?;
                Some((code, word_matrix(&code, &gens)?))
            })
            .collect(),
        None => find_seeds(&gens, SEED_WORD_LENGTH.min(cfg.max_word_length), bit_cap, SEED_COUNT),
    };
    info!(
        "seeds: {}",
        seeds.iter().map(|(c, _)| c.to_word().to_string()).collect::<Vec<_>>().join(", ")
    );
    let limits = Limits {
        max_len: cfg.max_word_length,
        bit_cap,
        max_unipotents: MAX_UNIPOTENTS,
        max_flag_members: MAX_FLAG_MEMBERS,
    };
    let seed_matrices: Vec<IntMat> = seeds.iter().map(|(_, m)| m.clone()).collect();
    let found = enumerate(&gens, &flags, &seed_matrices, &limits);
    let stats = &mut result.statistics;
    stats.nodes_expanded = found.stats.nodes_expanded;
    stats.pruned = found.stats.pruned;
    stats.duplicates = found.stats.duplicates;
    stats.conjugates_tested = found.stats.conjugates_tested;
    stats.unipotent_candidates = found.unipotents.len();
    stats.stabiliser_members = found.flag_members.len();
    info!(
        "enumerated {} words ({} pruned, {} repeated), {} unipotent, {} in a stabiliser",
        stats.nodes_expanded,
        stats.pruned,
        stats.duplicates,
        found.unipotents.len(),
        found.flag_members.len()
    );
    result.unipotent_words = found
        .unipotents
        .iter()
        .filter_map(|f| match f.origin {
            Origin::Word(code) => Some(code.to_word()),
            Origin::Conjugate { .. } => None,
        })
        .collect();

    let mut col = Collector {
        der: Derivations::new(),
        p,
        p_inv: p.inverse().map_err(|_| Error::SingularP)?,
        word_names: IndexMap::new(),
    };
    col.der.insert("a", "P^-1 A P".parse()?);
    col.der.insert("b", "P^-1 B P".parse()?);
    let candidate = |f: &enumerate::Found, col: &mut Collector| -> Candidate {
        let name = match f.origin {
            Origin::Word(code) => col.word(code),
            Origin::Conjugate { by, seed } => {
                let s = col.word(seeds[seed].0);
                if by.is_empty() {
                    s
                } else {
                    let w = col.word(by);
                    col.der.define(Word::new([(w.clone(), 1), (s, 1), (w, -1)]))
                }
            }
        };
        Candidate::new(name, col.conjugated(&f.matrix))
    };

    // Stabiliser pools: one per maximal parabolic, then the Borel subgroup.
    let all_flags = (1u32 << rank) - 1;
    let mut pools: Vec<(Vec<usize>, u32, Vec<Candidate>)> = (1..=rank)
        .map(|j| (parabolic_blocks(n, j), 1u32 << (j - 1), Vec::new()))
        .collect();
    pools.push((vec![1; n], all_flags, Vec::new()));
    for f in &found.flag_members {
        let c = candidate(f, &mut col);
        for (_, mask, pool) in pools.iter_mut() {
            if f.flags & *mask == *mask && pool.len() < POOL_SIZE {
                pool.push(c.clone());
            }
        }
    }
    let mut unipotents: Vec<Candidate> = found.unipotents.iter().map(|f| candidate(f, &mut col)).collect();

    let mut radical = harvest(&pools, &mut col.der);
    info!("{} elements of unipotent radicals after enumeration", radical.len());

    unipotents.extend(found.flag_members.iter().filter(|f| f.matrix.is_unipotent()).map(|f| candidate(f, &mut col)));
    unipotents.extend(radical.iter().cloned());
    let mut round_input = dedup(unipotents);
    for round in 1..=cfg.commutator_rounds {
        round_input.sort_by_key(|c| c.matrix.max_entry_bits());
        round_input.truncate(ROUND_SIZE);
        let mut produced = Vec::new();
        for i in 0..round_input.len() {
            for j in i + 1..round_input.len() {
                let c = col.der.commutator(&round_input[i], &round_input[j]);
                if !c.matrix.is_identity() {
                    produced.push(c);
                }
            }
        }
        let produced = dedup(produced);
        result.statistics.commutators += produced.len();
        let mut added = false;
        for c in &produced {
            for (blocks, mask, pool) in pools.iter_mut() {
                let inside = (0..rank)
                    .filter(|k| *mask & (1 << k) != 0)
                    .all(|k| stabilises_initial_span(&c.matrix, k + 1));
                if inside && blocks.len() > 1 {
                    pool.push(c.clone());
                    added = true;
                }
            }
        }
        if added {
            radical.extend(harvest(&pools, &mut col.der));
            radical = dedup(radical);
        }
        debug!("round {round}: {} commutators, {} radical elements", produced.len(), radical.len());
        round_input = produced;
    }
    result.statistics.radical_elements = radical.len();

    let mut witnesses = Vec::new();
    for target in &targets {
        let out = reduce_to_pattern(&radical, &roots, &target_form, target, &mut col.der);
        if let Some(w) = out.into_iter().next() {
            info!("found {target} element {}", w.name);
            witnesses.push(RootWitness {
                root: target.clone(),
                name: w.name,
                matrix: w.matrix,
            });
        }
    }

    let names: Vec<&str> = witnesses.iter().map(|w| w.name.as_str()).collect();
    let closure = col.der.closure(names);
    let (definitions, renames) = renumber(&closure);
    let mut slp = Slp::new(["A", "B", "P"].map(String::from));
    for (name, word) in &definitions {
        slp.define(name, word.clone())?;
    }
    let mut bindings = IndexMap::new();
    bindings.insert("A".to_string(), pres.a.clone());
    bindings.insert("B".to_string(), pres.b.clone());
    bindings.insert("P".to_string(), p.clone());
    let values = evaluate_slp(&slp, &bindings)?;
    for mut w in witnesses {
        w.name = renames[&w.name].clone();
        let pattern = roots.pattern(&w.root).expect("target is a root");
        let value = &values[&w.name];
        if value == &w.matrix
            && root_group_membership(value, &target_form, pattern)? == Membership::NonTrivialMember
        {
            result.missing.retain(|r| r != &w.root);
            result.found.push(w);
        }
    }
    result.definitions = if result.found.is_empty() { IndexMap::new() } else { definitions };
    result.statistics.elapsed = start.elapsed();
    Ok(result)
}

fn harvest(pools: &[(Vec<usize>, u32, Vec<Candidate>)], der: &mut Derivations) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (blocks, _, pool) in pools {
        out.extend(radical_elements(pool, blocks, der));
    }
    dedup(out)
}

/// Renames `u1, u2, …` to `E1, E2, …` in definition order, rewriting words.
fn renumber(defs: &IndexMap<String, Word>) -> (IndexMap<String, Word>, IndexMap<String, String>) {
    let mut renames: IndexMap<String, String> = IndexMap::new();
    let mut out = IndexMap::new();
    let mut k = 0;
    for (name, word) in defs {
        let new_name = if name == "a" || name == "b" {
            name.clone()
        } else {
            k += 1;
            format!("E{k}")
        };
        let word = Word::new(
            word.factors()
                .iter()
                .map(|(s, e)| (renames.get(s).cloned().unwrap_or_else(|| s.clone()), *e)),
        );
        renames.insert(name.clone(), new_name.clone());
        out.insert(new_name, word);
    }
    (out, renames)
}
