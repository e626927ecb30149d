//! Exact rank, determinant and principal minors.
//!
//! Pivoting is fixed: columns are scanned left to right and the pivot is the
//! first remaining row (by index) with a nonzero entry in that column. The
//! pivot columns are then the lexicographically first column basis, which is a
//! property of the matrix alone, so every exact method reports the same
//! profile.
//!
//! `GF(p)` matrices are eliminated on `u32` residues with `u64` products.
//! Rational matrices have each row cleared of denominators (row scaling does
//! not change rank) and are eliminated fraction free (Bareiss), which keeps
//! every intermediate value an exact minor of the scaled input.
//! [`rank_by_fractions`] is the plain reduced-fraction elimination kept as an
//! independent second route.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::{inv_mod, FieldSpec, Scalar};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("principal size {s} exceeds {n}")]
    OutOfRange { s: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    pub field: FieldSpec,
}

pub fn rank(m: &DenseMatrix) -> RankProfile {
    let pivot_columns = match m.field().modulus() {
        Some(p) => {
            let mut data = residues(m);
            eliminate_mod_p(&mut data, m.rows(), m.cols(), p).pivots
        }
        None => {
            let mut data = integer_rows(m).0;
            eliminate_bareiss(&mut data, m.rows(), m.cols()).pivots
        }
    };
    RankProfile {
        rank: pivot_columns.len(),
        pivot_columns,
        field: m.field(),
    }
}

pub fn determinant(m: &DenseMatrix) -> Result<Scalar, RankError> {
    if !m.is_square() {
        return Err(RankError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let field = m.field();
    if n == 0 {
        return Ok(field.one());
    }
    Ok(match field.modulus() {
        Some(p) => {
            let mut data = residues(m);
            let e = eliminate_mod_p(&mut data, n, n, p);
            if e.pivots.len() < n {
                field.zero()
            } else {
                let pp = u64::from(p);
                let prod = (0..n).fold(1u64, |acc, i| acc * u64::from(data[i * n + i]) % pp);
                let v = if e.negate { (pp - prod) % pp } else { prod };
                field.residue_unchecked(v as u32)
            }
        }
        None => {
            let (mut data, scales) = integer_rows(m);
            let e = eliminate_bareiss(&mut data, n, n);
            if e.pivots.len() < n {
                field.zero()
            } else {
                let mut det = data[n * n - 1].clone();
                if e.negate {
                    det = -det;
                }
                let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
                field.fraction_unchecked(BigRational::new(det, scale))
            }
        }
    })
}

pub fn principal_minor_rank(m: &DenseMatrix, s: usize) -> Result<RankProfile, RankError> {
    Ok(rank(&principal(m, s)?))
}

/// Determinant of the top-left `s × s` block (`1` for `s = 0`).
pub fn principal_minor_det(m: &DenseMatrix, s: usize) -> Result<Scalar, RankError> {
    determinant(&principal(m, s)?)
}

fn principal(m: &DenseMatrix, s: usize) -> Result<DenseMatrix, RankError> {
    let n = m.rows().min(m.cols());
    if s > n {
        return Err(RankError::OutOfRange { s, n });
    }
    Ok(m.principal(s).expect("size checked"))
}

/// Rank by elimination over reduced fractions. Prime-field input is handled by
/// the modular kernel, since fractions do not apply there.
pub fn rank_by_fractions(m: &DenseMatrix) -> RankProfile {
    if m.field().modulus().is_some() {
        return rank(m);
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut data: Vec<BigRational> = m
        .entries()
        .iter()
        .map(|e| e.as_ratio().expect("rational entry").clone())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        swap_rows(&mut data, cols, p, r);
        let inv = data[r * cols + c].recip();
        for i in r + 1..rows {
            if data[i * cols + c].is_zero() {
                continue;
            }
            let factor = &data[i * cols + c] * &inv;
            for j in c..cols {
                let delta = &factor * &data[r * cols + j];
                data[i * cols + j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    RankProfile {
        rank: pivots.len(),
        pivot_columns: pivots,
        field: m.field(),
    }
}

struct Elimination {
    pivots: Vec<usize>,
    /// Odd number of row swaps.
    negate: bool,
}

fn swap_rows<T>(data: &mut [T], cols: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

fn residues(m: &DenseMatrix) -> Vec<u32> {
    m.entries()
        .iter()
        .map(|e| e.residue().expect("prime field entry"))
        .collect()
}

/// Row-echelon form in place over `GF(p)`. Rows below each pivot are cleared;
/// rows above are left alone, which is all rank and determinant need.
fn eliminate_mod_p(data: &mut [u32], rows: usize, cols: usize, p: u32) -> Elimination {
    let pp = u64::from(p);
    let mut pivots = Vec::new();
    let mut negate = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            swap_rows(data, cols, piv, r);
            negate = !negate;
        }
        let inv = u64::from(inv_mod(data[r * cols + c], p));
        let (head, tail) = data.split_at_mut((r + 1) * cols);
        let pivot_row = &head[r * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let lead = u64::from(row[c]);
            if lead == 0 {
                continue;
            }
            // row -= (lead / pivot) * pivot_row
            let factor = pp - lead * inv % pp;
            for j in c..cols {
                row[j] = ((u64::from(row[j]) + factor * u64::from(pivot_row[j])) % pp) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Elimination { pivots, negate }
}

/// Integer matrix with each row multiplied by the lcm of its denominators,
/// plus the per-row multipliers.
fn integer_rows(m: &DenseMatrix) -> (Vec<BigInt>, Vec<BigInt>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut data = Vec::with_capacity(rows * cols);
    let mut scales = Vec::with_capacity(rows);
    for i in 0..rows {
        let row = m.row(i);
        let lcm = row.iter().fold(BigInt::one(), |acc, e| {
            let d = e.as_ratio().expect("rational entry").denom();
            if d.is_one() {
                acc
            } else {
                acc.lcm(d)
            }
        });
        for e in row {
            let q = e.as_ratio().expect("rational entry");
            if lcm.is_one() {
                data.push(q.numer().clone());
            } else {
                data.push(q.numer() * (&lcm / q.denom()));
            }
        }
        scales.push(lcm);
    }
    (data, scales)
}

/// Fraction-free elimination in place. After the step on pivot `(r, c)` every
/// entry below row `r` is a minor of the input, so the division by the
/// previous pivot is exact.
fn eliminate_bareiss(data: &mut [BigInt], rows: usize, cols: usize) -> Elimination {
    let mut pivots = Vec::new();
    let mut negate = false;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if piv != r {
            swap_rows(data, cols, piv, r);
            negate = !negate;
        }
        let (head, tail) = data.split_at_mut((r + 1) * cols);
        let pivot_row = &head[r * cols..];
        let pivot = &pivot_row[c];
        for row in tail.chunks_exact_mut(cols) {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = &row[j] * pivot;
                if !lead.is_zero() {
                    v -= &lead * &pivot_row[j];
                }
                row[j] = if prev.is_one() { v } else { exact_div(v, &prev) };
            }
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    Elimination { pivots, negate }
}

fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    let (q, rem) = v.div_rem(d);
    debug_assert!(rem.is_zero(), "inexact Bareiss division");
    q
}
