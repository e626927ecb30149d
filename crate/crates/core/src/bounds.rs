//! Rank lower bounds checked by the verifiers.
//!
//! Each bound is reduced to the least integer rank that satisfies it, so a
//! check is a plain integer comparison. The random-tournament bound
//! `n/2 − 21·sqrt(n ln n)` is irrational; it is evaluated with rational
//! interval arithmetic (an upper bound on `ln n`, then an upper bound on the
//! square root) so the returned integer never exceeds the true value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundSpec {
    /// Transitive tournaments: `⌊2n/3⌋ − 1`.
    TransitiveFloor { n: usize },
    /// `rank(M_T + M_{T_R}) ≥ n − 2` in characteristic ≠ 2.
    ReversalSum { n: usize },
    /// Random tournaments: `n/2 − 21·sqrt(n ln n)`.
    HalfMinusTail { n: usize },
    /// Constant sequences: `n − 1`.
    ConstantSeq { n: usize },
    /// Fields of order `q`: `n/(q − 1) − 1`.
    FiniteField { n: usize, q: u64 },
    /// Rank moves by at most `max_delta` under one edge flip or one entry change.
    Lipschitz { max_delta: usize },
    /// One of two consecutive principal minors of the all-`z` block is nonzero.
    Certifiability,
}

impl BoundSpec {
    /// Smallest integer rank meeting the bound; `None` for the bounds that are
    /// not rank thresholds. May be zero or negative (vacuous).
    pub fn min_rank(&self) -> Option<i64> {
        match *self {
            BoundSpec::TransitiveFloor { n } => Some((2 * n as i64) / 3 - 1),
            BoundSpec::ReversalSum { n } => Some(n as i64 - 2),
            BoundSpec::HalfMinusTail { n } => Some(half_minus_tail_floor(n)),
            BoundSpec::ConstantSeq { n } => Some(n as i64 - 1),
            BoundSpec::FiniteField { n, q } => {
                // rank ≥ n/(q−1) − 1  ⇔  rank ≥ ⌈n/(q−1)⌉ − 1 for integer rank
                Some((n as u64).div_ceil(q - 1) as i64 - 1)
            }
            BoundSpec::Lipschitz { .. } | BoundSpec::Certifiability => None,
        }
    }

    pub fn is_vacuous(&self) -> bool {
        self.min_rank().is_some_and(|b| b <= 0)
    }

    pub fn describe(&self) -> String {
        match *self {
            BoundSpec::TransitiveFloor { n } => format!("floor(2*{n}/3) - 1"),
            BoundSpec::ReversalSum { n } => format!("{n} - 2"),
            BoundSpec::HalfMinusTail { n } => format!("floor({n}/2 - 21*sqrt({n}*ln {n}))"),
            BoundSpec::ConstantSeq { n } => format!("{n} - 1"),
            BoundSpec::FiniteField { n, q } => format!("ceil({n}/({q}-1)) - 1"),
            BoundSpec::Lipschitz { max_delta } => format!("|delta rank| <= {max_delta}"),
            BoundSpec::Certifiability => "det(P_s) != 0 or det(P_(s+1)) != 0".into(),
        }
    }
}

/// Decimal digits carried through the interval evaluation.
const DIGITS: u32 = 30;

/// `⌊n/2 − 21·sqrt(n ln n)⌋` computed from a certified rational lower bound.
/// Rounding only ever lowers the value, so the result may undershoot the true
/// floor by one in pathological cases but never exceeds it.
pub fn half_minus_tail_floor(n: usize) -> i64 {
    if n <= 1 {
        // ln 1 = 0: the bound is n/2 itself
        return (n / 2) as i64;
    }
    let n_big = BigInt::from(n);
    let ln_upper = ln_upper_bound(n as u64);
    let radicand = BigRational::from_integer(n_big.clone()) * ln_upper;
    let sqrt_upper = sqrt_upper_bound(&radicand);
    let lower = BigRational::new(n_big, BigInt::from(2)) - BigRational::from_integer(21.into()) * sqrt_upper;
    lower.floor().to_integer().to_i64().expect("bound fits i64")
}

/// Floating-point value of `n/2 − 21·sqrt(n ln n)`, for display only.
pub fn half_minus_tail_f64(n: usize) -> f64 {
    let n = n as f64;
    n / 2.0 - 21.0 * (n * n.ln()).sqrt()
}

/// Rational `u ≥ ln(m)` for an integer `m ≥ 1`.
///
/// `m = 2^k · r` with `r ∈ [1, 2)`, and `ln x = 2·atanh((x−1)/(x+1))`. The series
/// has positive terms, so a partial sum is a lower bound and adding the
/// geometric tail bound gives an upper bound.
fn ln_upper_bound(m: u64) -> BigRational {
    assert!(m >= 1);
    let k = 63 - m.leading_zeros() as u64;
    let r = BigRational::new(BigInt::from(m), BigInt::one() << k);
    let (_, ln2_hi) = ln_bracket(&BigRational::from_integer(2.into()));
    let (_, r_hi) = ln_bracket(&r);
    ln2_hi * BigRational::from_integer(k.into()) + r_hi
}

/// `(lo, hi)` with `lo ≤ ln x ≤ hi` for rational `x ∈ [1, 2]`.
fn ln_bracket(x: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    if *x == one {
        return (BigRational::zero(), BigRational::zero());
    }
    let y = (x - &one) / (x + &one);
    let y2 = &y * &y;
    let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(DIGITS));
    let mut power = y.clone();
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    loop {
        let denom = BigRational::from_integer((2 * k + 1).into());
        sum += &power / &denom;
        power = &power * &y2;
        k += 1;
        // remaining terms ≤ y^(2k+1) / ((2k+1)(1 − y²))
        let tail = &power / (BigRational::from_integer((2 * k + 1).into()) * (&one - &y2));
        if tail < eps {
            let two = BigRational::from_integer(2.into());
            return (&two * &sum, two * (sum + tail));
        }
    }
}

/// Rational `s ≥ sqrt(v)` for rational `v ≥ 0`, with `DIGITS` decimals.
fn sqrt_upper_bound(v: &BigRational) -> BigRational {
    assert!(!v.is_negative());
    let scale = BigInt::from(10).pow(DIGITS);
    // ceil(v · scale²), then ceil of its integer square root
    let scaled = (v * BigRational::from_integer(&scale * &scale)).ceil().to_integer();
    let mut root = scaled.sqrt();
    if &root * &root < scaled {
        root += 1;
    }
    BigRational::new(root, scale)
}

/// `⌈n/2⌉ − 1`, the least integer with `max(rank(M_T), rank(M_{T_R})) ≥ n/2 − 1`.
pub fn half_minus_one_ceil(n: usize) -> i64 {
    n.div_ceil(2) as i64 - 1
}
