//! Gauss-Jordan elimination on rectangular row lists.

use num_traits::{One, Zero};

use super::Rational;

/// Brings `rows` (each of length `ncols`) to reduced row echelon form in place.
/// The pivot in each column is the first non-zero entry at or below the current
/// row. Returns the pivot columns; rows past `pivots.len()` are zero afterwards.
pub fn row_echelon(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for x in rows[r].iter_mut().skip(col) {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank_of_rows(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    row_echelon(&mut work, ncols).len()
}

/// Basis of `{x : R x = 0}` for the matrix whose rows are `rows`.
/// One basis vector per free column, with a 1 in that column.
pub fn kernel_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut work = rows.to_vec();
    let pivots = row_echelon(&mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in work.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rectangular_kernel() {
        let m = rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &m {
                let s: Rational = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn rank_counts_pivots() {
        assert_eq!(rank_of_rows(&rows(&[&[0, 0], &[0, 0]]), 2), 0);
        assert_eq!(rank_of_rows(&rows(&[&[0, 1], &[1, 0], &[1, 1]]), 2), 2);
    }
}
