//! Integer relations among rational vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::exact::Rational;

/// A basis of `{c ∈ ℤᵐ : Σ cᵢ·rowsᵢ = 0}`, size-reduced and sorted by norm.
pub fn integer_relations(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let d = rows[0].len();
    // Columns are scaled independently; this does not change the relations.
    let scale: Vec<BigInt> = (0..d)
        .map(|j| rows.iter().fold(BigInt::from(1), |acc, r| acc.lcm(r[j].denom())))
        .collect();
    let mut work: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigInt> = (0..d)
                .map(|j| r[j].numer() * (&scale[j] / r[j].denom()))
                .collect();
            row.extend((0..m).map(|k| BigInt::from((k == i) as i32)));
            row
        })
        .collect();

    let mut top = 0;
    for col in 0..d {
        loop {
            let pivot = (top..m)
                .filter(|&r| !work[r][col].is_zero())
                .min_by(|&a, &b| work[a][col].abs().cmp(&work[b][col].abs()).then(a.cmp(&b)));
            let Some(p) = pivot else { break };
            work.swap(top, p);
            let mut done = true;
            for r in top + 1..m {
                if work[r][col].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&work[r][col], &work[top][col]);
                let pivot_row = work[top].clone();
                for (x, y) in work[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !work[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                top += 1;
                break;
            }
        }
        if top == m {
            break;
        }
    }
    let mut basis: Vec<Vec<BigInt>> = work[top..].iter().map(|r| r[d..].to_vec()).collect();
    size_reduce(&mut basis);
    basis
}

fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    // The floor remainder has the sign of `b`; stepping once more moves it towards zero.
    if (BigInt::from(2) * &r).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

fn norm2(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Pairwise reduction until no vector shrinks by subtracting a multiple of a
/// shorter one.
fn size_reduce(basis: &mut [Vec<BigInt>]) {
    for _ in 0..32 {
        basis.sort_by(|a, b| norm2(a).cmp(&norm2(b)).then_with(|| a.cmp(b)));
        let mut changed = false;
        for j in 1..basis.len() {
            for i in 0..j {
                let n = norm2(&basis[i]);
                if n.is_zero() {
                    continue;
                }
                let q = nearest_quotient(&dot(&basis[j], &basis[i]), &n);
                if q.is_zero() {
                    continue;
                }
                let bi = basis[i].clone();
                let reduced: Vec<BigInt> = basis[j].iter().zip(&bi).map(|(x, y)| x - &q * y).collect();
                if norm2(&reduced) < norm2(&basis[j]) {
                    basis[j] = reduced;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for v in basis.iter_mut() {
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    basis.sort_by(|a, b| norm2(a).cmp(&norm2(b)).then_with(|| a.cmp(b)));
}
