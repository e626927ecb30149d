//! Brute-force oracles that share no code with the elimination engine:
//! Leibniz determinants over `BigRational` and rank as the largest nonzero minor.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use tournarank::field::FieldSpec;
use tournarank::{DenseMatrix, Scalar};

/// Entry as a rational; residues are lifted to `0..p`.
pub fn lift(x: &Scalar) -> BigRational {
    match (x.residue(), x.as_ratio()) {
        (Some(r), _) => BigRational::from_integer(BigInt::from(r)),
        (None, Some(q)) => q.clone(),
        _ => unreachable!(),
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    // (permutation, is_odd) by Heap-free recursion on insertion
    if n == 0 {
        return vec![(vec![], false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting the largest element at pos creates len − pos inversions
            let parity = odd ^ ((p.len() - pos) % 2 == 1);
            out.push((q, parity));
        }
    }
    out
}

/// Leibniz expansion of a square matrix of rationals.
pub fn leibniz(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut total = BigRational::zero();
    for (p, odd) in permutations(n) {
        let mut term = BigRational::one();
        for (i, &j) in p.iter().enumerate() {
            term *= &m[i][j];
        }
        if odd {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn is_zero_in(field: FieldSpec, v: &BigRational) -> bool {
    match field.order() {
        Some(p) => {
            // minors of lifted residues are integers
            assert!(v.is_integer());
            (v.to_integer() % BigInt::from(p)).is_zero()
        }
        None => v.is_zero(),
    }
}

/// Determinant reduced into the matrix's field, as a rational (residue `0..p` for GF(p)).
pub fn det_oracle(m: &DenseMatrix) -> BigRational {
    let rows: Vec<Vec<BigRational>> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| lift(m.get(i, j))).collect()).collect();
    let d = leibniz(&rows);
    match m.field().order() {
        Some(p) => {
            let p = BigInt::from(p);
            let r = ((d.to_integer() % &p) + &p) % &p;
            BigRational::from_integer(r)
        }
        None => d,
    }
}

/// Largest `k` with a nonzero `k × k` minor.
pub fn rank_oracle(m: &DenseMatrix) -> usize {
    let lifted: Vec<Vec<BigRational>> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| lift(m.get(i, j))).collect()).collect();
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<BigRational>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| lifted[i][j].clone()).collect()).collect();
                if !is_zero_in(m.field(), &leibniz(&sub)) {
                    return k;
                }
            }
        }
    }
    0
}

/// `M_T(a)` written out directly from the definition, with the tournament
/// given as a predicate `beats(i, j)`.
pub fn m_by_definition(
    field: FieldSpec,
    a: &[i64],
    beats: impl Fn(usize, usize) -> bool,
) -> DenseMatrix {
    let n = a.len();
    DenseMatrix::from_fn(field, n, n, |i, j| {
        if i == j {
            field.zero()
        } else {
            let (lo, hi) = (i.min(j), i.max(j));
            let winner = if beats(lo, hi) { lo } else { hi };
            field.from_i64(a[winner])
        }
    })
}

/// Bit `k` of `code` orients the `k`-th pair in lexicographic order, low to high.
pub fn beats_from_code(n: usize, code: u64) -> impl Fn(usize, usize) -> bool {
    let mut table = vec![vec![false; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let bit = code >> k & 1 == 1;
            table[i][j] = bit;
            table[j][i] = !bit;
            k += 1;
        }
    }
    move |i, j| table[i][j]
}
