//! Exact rank of rational matrices by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactalg::Rational;

/// Clears denominators row by row, returning an integer matrix with the
/// same row space.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            row.iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect()
        })
        .collect()
}

/// Rank of an integer matrix; the matrix is reduced in place to a
/// fraction-free row echelon form.
///
/// Every division performed is exact: after each pivot step the active
/// entries are minors of the original matrix.
pub fn bareiss_rank(mat: &mut [Vec<BigInt>]) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot_row);
        let pivot = mat[rank][col].clone();
        for r in rank + 1..rows {
            let factor = mat[r][col].clone();
            for c in col..cols {
                let num = &pivot * &mat[r][c] - &factor * &mat[rank][c];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                mat[r][c] = q;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Exact rank of a rational matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = integer_rows(rows);
    bareiss_rank(&mut m)
}

/// Matrix-vector product over the rationals.
pub fn mat_vec(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    rows.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
