//! Dense Gaussian elimination over GF(2^m).
//!
//! Pivoting is deterministic: the pivot for a column is the first remaining
//! row with a nonzero entry there.

use crate::ffield::{Fel, Field};

/// `dst += c * src`, entrywise from `start`.
fn axpy(field: &Field, dst: &mut [Fel], src: &[Fel], c: Fel, start: usize) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst[start..].iter_mut().zip(&src[start..]) {
        if !s.is_zero() {
            *d += field.mul(c, *s);
        }
    }
}

/// Forward elimination in place; returns the rank. Rows are reduced in row
/// echelon form on the columns `0..width`.
fn echelon(field: &Field, rows: &mut [Vec<Fel>], width: usize) -> usize {
    let mut rank = 0;
    for col in 0..width {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let c = row[col];
            if !c.is_zero() {
                axpy(field, row, pivot_row, field.mul(c, pivot_inv), col);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the span of `rows`.
pub fn rank(field: &Field, mut rows: Vec<Vec<Fel>>) -> usize {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(width, Fel::ZERO);
    }
    echelon(field, &mut rows, width)
}

/// A basis of `{c : sum_j c_j v_j = 0}` for the given vectors.
pub fn null_space(field: &Field, vectors: &[Vec<Fel>]) -> Vec<Vec<Fel>> {
    let k = vectors.len();
    let width = vectors.iter().map(Vec::len).max().unwrap_or(0);
    let mut rows: Vec<Vec<Fel>> = vectors
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut row = Vec::with_capacity(width + k);
            row.extend_from_slice(v);
            row.resize(width, Fel::ZERO);
            row.resize(width + k, Fel::ZERO);
            row[width + j] = Fel::ONE;
            row
        })
        .collect();
    let r = echelon(field, &mut rows, width);
    rows.drain(..r);
    rows.into_iter().map(|row| row[width..].to_vec()).collect()
}

/// Some `c` with `sum_j c_j columns[j] = target`, free coordinates set to
/// zero; `None` if the system is inconsistent.
pub fn solve(field: &Field, columns: &[Vec<Fel>], target: &[Fel]) -> Option<Vec<Fel>> {
    let k = columns.len();
    let height = columns
        .iter()
        .map(Vec::len)
        .chain(std::iter::once(target.len()))
        .max()
        .unwrap_or(0);
    let at = |v: &[Fel], i: usize| v.get(i).copied().unwrap_or(Fel::ZERO);
    let mut rows: Vec<Vec<Fel>> = (0..height)
        .map(|i| {
            let mut row: Vec<Fel> = columns.iter().map(|c| at(c, i)).collect();
            row.push(at(target, i));
            row
        })
        .collect();
    let r = echelon(field, &mut rows, k);
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    // back substitution over the pivot rows
    let mut sol = vec![Fel::ZERO; k];
    for row in rows[..r].iter().rev() {
        let p = row.iter().position(|a| !a.is_zero()).expect("pivot row");
        let mut acc = row[k];
        for j in p + 1..k {
            acc += field.mul(row[j], sol[j]);
        }
        sol[p] = field.div(acc, row[p]).expect("nonzero pivot");
    }
    Some(sol)
}
