//! Self-bisecting set families and their matrices.
//!
//! A family `A_1, …, A_m` of subsets of `[n]` is self-bisecting when every
//! distinct pair satisfies `2|A∩B| = |A|` or `2|A∩B| = |B|`. With the `±1`
//! incidence matrix `X`, the Gram matrix `XXᵀ` has `n` on the diagonal and
//! `n − 2(|A|+|B|) + 4|A∩B|` elsewhere; for a self-bisecting family the matrix
//! `½(nJ − XXᵀ)` then belongs to `M_m(a)` with `a = (|A_1|, …, |A_m|)`.
//!
//! Elements are the labels `1..=n`, as in the family file format.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{in_family, DenseMatrix, SeqA};
use crate::rank::rank;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisectError {
    #[error("set {index} is empty")]
    EmptySet { index: usize },
    #[error("set {index} contains {element}, outside [1, {n}]")]
    ElementOutOfRange { index: usize, element: usize, n: usize },
    #[error("set {index} is not strictly increasing")]
    NotIncreasing { index: usize },
    #[error("sets {first} and {second} are equal")]
    DuplicateSet { first: usize, second: usize },
    #[error("family is not self-bisecting: sets {0} and {1} violate the condition")]
    NotBisecting(usize, usize),
    #[error("family file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground_n: usize,
    sets: Vec<Vec<usize>>,
}

impl SetFamily {
    /// Each set must be nonempty, strictly increasing and inside `[1, n]`; sets
    /// must be pairwise distinct.
    pub fn new(ground_n: usize, sets: Vec<Vec<usize>>) -> Result<Self, BisectError> {
        for (index, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(BisectError::EmptySet { index });
            }
            if !s.windows(2).all(|w| w[0] < w[1]) {
                return Err(BisectError::NotIncreasing { index });
            }
            if let Some(&element) = s.iter().find(|&&e| e == 0 || e > ground_n) {
                return Err(BisectError::ElementOutOfRange {
                    index,
                    element,
                    n: ground_n,
                });
            }
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if sets[i] == sets[j] {
                    return Err(BisectError::DuplicateSet { first: i, second: j });
                }
            }
        }
        Ok(SetFamily { ground_n, sets })
    }

    pub fn ground_n(&self) -> usize {
        self.ground_n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Family file: first line `n=<n>`, then one set per line as strictly
    /// increasing space-separated integers. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, BisectError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| BisectError::Parse("missing n=<n> header".into()))?;
        let n = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| BisectError::Parse(format!("bad header {header:?}")))?;
        let sets = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| BisectError::Parse(format!("bad element {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        SetFamily::new(n, sets)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.ground_n);
        for s in &self.sets {
            let line: Vec<String> = s.iter().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn pair_bisects(a: &[usize], b: &[usize]) -> bool {
    let twice = 2 * intersection_size(a, b);
    twice == a.len() || twice == b.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BisectVerdict {
    pub bisecting: bool,
    /// First violating pair `(i, j)`, `i < j`, in index order.
    pub witness: Option<(usize, usize)>,
}

pub fn check_bisecting(f: &SetFamily) -> BisectVerdict {
    let m = f.len();
    let witness = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .find(|&(i, j)| !pair_bisects(&f.sets[i], &f.sets[j]));
    BisectVerdict {
        bisecting: witness.is_none(),
        witness,
    }
}

fn require_bisecting(f: &SetFamily) -> Result<(), BisectError> {
    match check_bisecting(f).witness {
        None => Ok(()),
        Some((i, j)) => Err(BisectError::NotBisecting(i, j)),
    }
}

/// `a` when `2|a∩b| = |b|`, otherwise `b`.
pub fn tau<'a>(a: &'a [usize], b: &'a [usize]) -> &'a [usize] {
    if 2 * intersection_size(a, b) == b.len() {
        a
    } else {
        b
    }
}

/// The `m × n` matrix over `Q` with `X(A, x) = 1` if `x ∈ A`, else `−1`.
pub fn incidence_pm1(f: &SetFamily) -> DenseMatrix {
    let q = FieldSpec::rationals();
    DenseMatrix::from_fn(q, f.len(), f.ground_n, |i, x| {
        q.from_i64(if f.sets[i].binary_search(&(x + 1)).is_ok() { 1 } else { -1 })
    })
}

pub fn gram(f: &SetFamily) -> DenseMatrix {
    let x = incidence_pm1(f);
    x.mul(&x.transpose()).expect("conformable")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramFailure {
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramVerdict {
    pub pass: bool,
    pub failure: Option<GramFailure>,
}

/// Checks `XXᵀ` entrywise against the counting identities.
pub fn gram_check(f: &SetFamily) -> Result<GramVerdict, BisectError> {
    require_bisecting(f)?;
    Ok(gram_check_against(f, &gram(f)))
}

/// Compares a supplied Gram matrix with the identities: diagonal `n`,
/// off-diagonal `n − 2(|A|+|B|) + 4|A∩B| = n − 2|τ(A,B)|`.
pub fn gram_check_against(f: &SetFamily, g: &DenseMatrix) -> GramVerdict {
    let q = FieldSpec::rationals();
    let n = f.ground_n as i64;
    let m = f.len();
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (&f.sets[i], &f.sets[j]);
            let counted = if i == j {
                n
            } else {
                n - 2 * (a.len() + b.len()) as i64 + 4 * intersection_size(a, b) as i64
            };
            let via_tau = if i == j {
                n
            } else {
                n - 2 * tau(a, b).len() as i64
            };
            let expected = q.from_i64(counted);
            let found = g.get(i, j);
            if *found != expected || counted != via_tau {
                return GramVerdict {
                    pass: false,
                    failure: Some(GramFailure {
                        row: i,
                        col: j,
                        expected: expected.to_string(),
                        found: found.to_string(),
                    }),
                };
            }
        }
    }
    GramVerdict {
        pass: true,
        failure: None,
    }
}

/// `M = ½(nJ − XXᵀ)` and `a = (|A_1|, …, |A_m|)`; `M` is verified to lie in `M_m(a)`.
pub fn family_to_m(f: &SetFamily) -> Result<(DenseMatrix, SeqA), BisectError> {
    require_bisecting(f)?;
    let q = FieldSpec::rationals();
    let m = f.len();
    let g = gram(f);
    let half = q.from_fraction(&BigInt::from(1), &BigInt::from(2)).expect("1/2");
    let n = q.from_i64(f.ground_n as i64);
    let mat = DenseMatrix::from_fn(q, m, m, |i, j| {
        n.sub(g.get(i, j)).expect("same field").mul(&half).expect("same field")
    });
    let sizes: Vec<i64> = f.sets.iter().map(|s| s.len() as i64).collect();
    let a = SeqA::from_i64s(q, &sizes).expect("sets are nonempty");
    assert!(in_family(&mat, &a), "bisecting family produced a matrix outside M_m(a)");
    Ok((mat, a))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeBoundReport {
    pub m: usize,
    pub n: usize,
    pub c: String,
    pub rank_gram: usize,
    pub rank_m: usize,
    /// `rank(M) ≥ c·m` for this instance.
    pub rank_meets_c: bool,
    /// `m ≤ (n + 1)/c`.
    pub size_within_bound: bool,
}

/// Diagnostic for the conditional size bound `m ≤ (n+1)/c`; `c` is a
/// hypothesised rank constant and must be positive.
pub fn size_bound_report(f: &SetFamily, c: &BigRational) -> Result<SizeBoundReport, BisectError> {
    if *c <= BigRational::from_integer(0.into()) {
        return Err(BisectError::Parse(format!("constant c = {c} must be positive")));
    }
    let (mat, _) = family_to_m(f)?;
    let rank_gram = rank(&gram(f)).rank;
    let rank_m = rank(&mat).rank;
    let m_big = BigRational::from_integer(f.len().into());
    let n1 = BigRational::from_integer((f.ground_n + 1).into());
    Ok(SizeBoundReport {
        m: f.len(),
        n: f.ground_n,
        c: c.to_string(),
        rank_gram,
        rank_m,
        rank_meets_c: BigRational::from_integer(rank_m.into()) >= c * &m_big,
        size_within_bound: m_big <= n1 / c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::scaled_j_minus_i;
    use crate::rank::determinant;
    use proptest::prelude::*;

    fn star(n: usize) -> SetFamily {
        SetFamily::new(n, (2..=n).map(|x| vec![1, x]).collect()).unwrap()
    }

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn check_examples() {
        assert_eq!(
            check_bisecting(&star(4)),
            BisectVerdict { bisecting: true, witness: None }
        );
        let bad = SetFamily::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(
            check_bisecting(&bad),
            BisectVerdict { bisecting: false, witness: Some((0, 1)) }
        );
        let single = SetFamily::new(3, vec![vec![2]]).unwrap();
        assert!(check_bisecting(&single).bisecting);
        // first violation in index order
        let f = SetFamily::new(6, vec![vec![1, 2], vec![1, 3], vec![4, 5], vec![5, 6]]).unwrap();
        assert_eq!(check_bisecting(&f).witness, Some((0, 2)));
    }

    #[test]
    fn family_validation() {
        assert_eq!(
            SetFamily::new(3, vec![vec![]]),
            Err(BisectError::EmptySet { index: 0 })
        );
        assert_eq!(
            SetFamily::new(3, vec![vec![1, 4]]),
            Err(BisectError::ElementOutOfRange { index: 0, element: 4, n: 3 })
        );
        assert_eq!(
            SetFamily::new(3, vec![vec![2, 1]]),
            Err(BisectError::NotIncreasing { index: 0 })
        );
        assert_eq!(
            SetFamily::new(3, vec![vec![1], vec![2], vec![1]]),
            Err(BisectError::DuplicateSet { first: 0, second: 2 })
        );
        let f = SetFamily::parse("# star\nn=5\n1 2\n1 3\n\n1 4\n1 5\n").unwrap();
        assert_eq!(f, star(5));
        assert_eq!(SetFamily::parse(&f.to_text()).unwrap(), f);
        assert!(SetFamily::parse("1 2\n").is_err());
        assert!(SetFamily::parse("n=3\n1 x\n").is_err());
    }

    #[test]
    fn tau_rule() {
        assert_eq!(tau(&[1, 2], &[1, 3]), &[1, 2]);
        // |A∩B| = 1 is half of |A| = 2 only: the B branch
        assert_eq!(tau(&[1, 2], &[1, 3, 4, 5]), &[1, 3, 4, 5]);
        // both halves hold: A wins
        assert_eq!(tau(&[1, 3], &[1, 2]), &[1, 3]);
        // B-ratio holds, A-ratio does not: A
        assert_eq!(tau(&[1, 2, 3, 4], &[1, 5]), &[1, 2, 3, 4]);
    }

    #[test]
    fn incidence_examples() {
        let f = SetFamily::new(2, vec![vec![1]]).unwrap();
        assert_eq!(
            incidence_pm1(&f),
            DenseMatrix::from_i64_rows(q(), &[&[1, -1]]).unwrap()
        );
        let x = incidence_pm1(&star(5));
        assert_eq!((x.rows(), x.cols()), (4, 5));
        assert!((0..4).all(|i| x.get(i, 0).is_one()));
        for (i, s) in star(5).sets().iter().enumerate() {
            let sum = x.row(i).iter().fold(q().zero(), |acc, e| acc.add(e).unwrap());
            assert_eq!(sum, q().from_i64(2 * s.len() as i64 - 5));
        }
    }

    #[test]
    fn star_chain() {
        let f = star(5);
        let g = gram(&f);
        let expected = DenseMatrix::from_fn(q(), 4, 4, |i, j| q().from_i64(if i == j { 5 } else { 1 }));
        assert_eq!(g, expected);
        assert!(gram_check(&f).unwrap().pass);

        let (m, a) = family_to_m(&f).unwrap();
        assert_eq!(m, scaled_j_minus_i(&q().from_i64(2), 4));
        assert_eq!(a, SeqA::from_i64s(q(), &[2, 2, 2, 2]).unwrap());
        assert!(in_family(&m, &a));
        assert_eq!(rank(&m).rank, 4);
        // 2^4 · (−1)^3 · 3
        assert_eq!(determinant(&m).unwrap(), q().from_i64(-48));
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let t = tau(&f.sets()[i], &f.sets()[j]).len() as i64;
                    assert_eq!(m.get(i, j), &q().from_i64(t));
                }
            }
        }
    }

    #[test]
    fn gram_negative_control() {
        let f = star(5);
        let mut g = gram(&f);
        g.set(2, 1, q().from_i64(3)).unwrap();
        let v = gram_check_against(&f, &g);
        assert!(!v.pass);
        let fail = v.failure.unwrap();
        assert_eq!((fail.row, fail.col), (2, 1));
        assert_eq!(fail.expected, "1");
        assert_eq!(fail.found, "3");

        let bad = SetFamily::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(gram_check(&bad), Err(BisectError::NotBisecting(0, 1)));
        assert_eq!(family_to_m(&bad).unwrap_err(), BisectError::NotBisecting(0, 1));
    }

    #[test]
    fn size_bound() {
        let half = BigRational::new(1.into(), 2.into());
        let r = size_bound_report(&star(5), &half).unwrap();
        assert_eq!((r.m, r.n, r.rank_m), (4, 5, 4));
        assert!(r.rank_meets_c && r.size_within_bound);
        assert!(r.rank_gram <= r.n);
        let single = SetFamily::new(3, vec![vec![1, 2]]).unwrap();
        // a single set gives the 1×1 zero matrix
        let r = size_bound_report(&single, &half).unwrap();
        assert_eq!(r.rank_m, 0);
        assert!(!r.rank_meets_c && r.size_within_bound);
        assert!(size_bound_report(&single, &BigRational::from_integer(0.into())).is_err());
    }

    fn random_family() -> impl Strategy<Value = SetFamily> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::btree_set(1u32..(1 << n), 1..8).prop_map(move |masks| {
                let sets = masks
                    .into_iter()
                    .map(|mask| (1..=n).filter(|x| mask >> (x - 1) & 1 == 1).collect())
                    .collect();
                SetFamily::new(n, sets).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn gram_counting_identity_holds_for_all_families(f in random_family()) {
            let g = gram(&f);
            let n = f.ground_n() as i64;
            for (i, a) in f.sets().iter().enumerate() {
                for (j, b) in f.sets().iter().enumerate() {
                    let expected = if i == j {
                        n
                    } else {
                        n - 2 * (a.len() + b.len()) as i64 + 4 * intersection_size(a, b) as i64
                    };
                    prop_assert_eq!(g.get(i, j), &q().from_i64(expected));
                }
            }
            prop_assert!(rank(&g).rank <= f.len().min(f.ground_n()));
            if check_bisecting(&f).bisecting {
                prop_assert!(gram_check(&f)?.pass);
                let (m, a) = family_to_m(&f)?;
                prop_assert!(in_family(&m, &a));
            }
        }
    }
}
