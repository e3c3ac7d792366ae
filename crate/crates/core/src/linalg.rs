//! Row reduction over GF(q).
//!
//! Two paths: a generic one over any [`FieldSpec`], and a bitset path for
//! GF(2) with at most 64 columns where row `r` is a `u64` whose bit `j` is the
//! entry in column `j`. Both return the nonzero rows of the reduced row
//! echelon form with pivots in increasing column order, so they agree
//! entry for entry.

use crate::field::FieldSpec;

/// Reduced row echelon form of `rows` (each of length `n`), zero rows dropped.
pub fn rref_generic(field: &FieldSpec, mut rows: Vec<Vec<u32>>, n: usize) -> Vec<Vec<u32>> {
    let mut rank = 0;
    for col in 0..n {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]);
        if inv != 1 {
            for x in rows[rank][col..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Bitset reduced row echelon form over GF(2).
pub fn rref_gf2(mut rows: Vec<u64>, n: usize) -> Vec<u64> {
    let mut rank = 0;
    for col in 0..n {
        if rank == rows.len() {
            break;
        }
        let bit = 1u64 << col;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & bit != 0 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Rank over GF(2) without producing the reduced form.
pub fn rank_gf2(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let r = rows[i];
        if r == 0 {
            continue;
        }
        let low = r & r.wrapping_neg();
        for row in rows[i + 1..].iter_mut() {
            if *row & low != 0 {
                *row ^= r;
            }
        }
        rank += 1;
    }
    rank
}

pub fn pack_gf2(row: &[u32]) -> u64 {
    row.iter()
        .enumerate()
        .fold(0u64, |acc, (j, &x)| acc | ((x as u64 & 1) << j))
}

pub fn unpack_gf2(bits: u64, n: usize) -> Vec<u32> {
    (0..n).map(|j| ((bits >> j) & 1) as u32).collect()
}
