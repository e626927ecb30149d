//! Bit-packed tournaments.
//!
//! Vertices are `0..n` (vertex `v` is the label `v + 1` in text output). The
//! unordered pair `{i, j}` with `i < j` owns bit `k(i, j)`, assigned in
//! lexicographic pair order `(0,1), (0,2), …, (0,n-1), (1,2), …`; a set bit
//! means `i → j`. For small `n` the bits read as an integer code with pair
//! `(0,1)` as the least significant bit, so enumeration is a counter.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::RngCore;
use thiserror::Error;

use crate::field::{is_prime, is_quadratic_residue};
use crate::rng::{stream_rng, DOMAIN_TOURNAMENT};

/// Upper limit on vertices for single-instance constructions.
pub const MAX_VERTICES: usize = 4096;
/// Exhaustive paths need the whole tournament to fit in one `u64` code.
pub const MAX_CODE_BITS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TournamentError {
    #[error("order is not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not congruent to 3 mod 4")]
    BadCongruence(u64),
    #[error("n = {0} has more than 63 pairs; exhaustive enumeration impossible")]
    TooLarge(usize),
    #[error("n = {0} exceeds the vertex limit {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("code range {start}..{end} invalid for {pairs} pairs")]
    BadRange { start: u64, end: u64, pairs: usize },
    #[error("expected {expected} orientation bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("bad character {0:?} in orientation bits")]
    BadCharacter(char),
    #[error("cannot parse tournament {0:?}")]
    Parse(String),
}

pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of the pair `{i, j}` (`i < j < n`) in lexicographic order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    bits: Vec<u64>,
}

impl Tournament {
    fn empty(n: usize) -> Result<Self, TournamentError> {
        if n > MAX_VERTICES {
            return Err(TournamentError::TooManyVertices(n));
        }
        Ok(Tournament {
            n,
            bits: vec![0; pair_count(n).div_ceil(64)],
        })
    }

    /// Builds a tournament from a predicate `i → j` evaluated for each `i < j`.
    pub fn from_fn(
        n: usize,
        mut forward: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, TournamentError> {
        let mut t = Self::empty(n)?;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    t.bits[k / 64] |= 1 << (k % 64);
                }
                k += 1;
            }
        }
        Ok(t)
    }

    /// Tournament with integer code `code`; needs `n(n-1)/2 ≤ 63`.
    pub fn from_code(n: usize, code: u64) -> Result<Self, TournamentError> {
        let pairs = pair_count(n);
        if pairs > MAX_CODE_BITS {
            return Err(TournamentError::TooLarge(n));
        }
        if pairs < 64 && code >> pairs != 0 {
            return Err(TournamentError::BadRange {
                start: code,
                end: code + 1,
                pairs,
            });
        }
        let mut t = Self::empty(n)?;
        if !t.bits.is_empty() {
            t.bits[0] = code;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> usize {
        pair_count(self.n)
    }

    /// Integer code, `None` when the tournament has more than 63 pairs.
    pub fn code(&self) -> Option<u64> {
        (self.pairs() <= MAX_CODE_BITS).then(|| self.bits.first().copied().unwrap_or(0))
    }

    #[inline]
    fn bit(&self, k: usize) -> bool {
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    /// Whether `i → j`. Panics on `i == j` or out-of-range vertices.
    #[inline]
    pub fn beats(&self, i: usize, j: usize) -> bool {
        assert!(i != j && i < self.n && j < self.n, "bad pair ({i}, {j})");
        if i < j {
            self.bit(pair_index(self.n, i, j))
        } else {
            !self.bit(pair_index(self.n, j, i))
        }
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&w| w != v && self.beats(v, w)).count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i + 1..self.n).map(move |j| if self.beats(i, j) { (i, j) } else { (j, i) })
        })
    }

    /// Number of pairs oriented differently in `self` and `other`.
    pub fn hamming(&self, other: &Tournament) -> usize {
        assert_eq!(self.n, other.n);
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Whether some triple forms a directed 3-cycle.
    pub fn has_directed_triangle(&self) -> bool {
        let n = self.n;
        (0..n).any(|i| {
            (i + 1..n).any(|j| (j + 1..n).any(|k| {
                let (ij, jk, ki) = (self.beats(i, j), self.beats(j, k), self.beats(k, i));
                ij == jk && jk == ki
            }))
        })
    }

    fn mask_tail(&mut self) {
        let pairs = self.pairs();
        if !pairs.is_multiple_of(64) {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << (pairs % 64)) - 1;
            }
        }
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({})", format_tournament(self))
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tournament(self))
    }
}

/// Transitive tournament in which `order[0]` beats everyone, `order[1]` beats
/// everyone but `order[0]`, and so on.
///
/// `order = (n-1, …, 1, 0)` gives the tournament whose matrix is `D_n`.
pub fn transitive(n: usize, order: &[usize]) -> Result<Tournament, TournamentError> {
    if order.len() != n {
        return Err(TournamentError::InvalidPermutation(n));
    }
    let mut position = vec![usize::MAX; n];
    for (pos, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(TournamentError::InvalidPermutation(n));
        }
        position[v] = pos;
    }
    Tournament::from_fn(n, |i, j| position[i] < position[j])
}

/// Transitive tournament ranked in reverse natural order (`i → j` iff `i > j`).
pub fn reverse_natural_transitive(n: usize) -> Result<Tournament, TournamentError> {
    let order: Vec<usize> = (0..n).rev().collect();
    transitive(n, &order)
}

pub fn reverse(t: &Tournament) -> Tournament {
    let mut r = t.clone();
    for w in &mut r.bits {
        *w = !*w;
    }
    r.mask_tail();
    r
}

pub fn flip_edge(t: &Tournament, i: usize, j: usize) -> Result<Tournament, TournamentError> {
    if i == j {
        return Err(TournamentError::SelfLoop(i));
    }
    for v in [i, j] {
        if v >= t.n {
            return Err(TournamentError::OutOfRange { vertex: v, n: t.n });
        }
    }
    let k = pair_index(t.n, i.min(j), i.max(j));
    let mut out = t.clone();
    out.bits[k / 64] ^= 1 << (k % 64);
    Ok(out)
}

/// Uniform random tournament addressed by `(seed, index)`.
pub fn random_tournament(n: usize, seed: u64, index: u64) -> Result<Tournament, TournamentError> {
    let mut t = Tournament::empty(n)?;
    let mut rng = stream_rng(seed, DOMAIN_TOURNAMENT, index);
    for w in &mut t.bits {
        *w = rng.next_u64();
    }
    t.mask_tail();
    Ok(t)
}

/// Paley tournament on `GF(q)`: vertex `v` is the residue `v`, and `i → j`
/// iff `j - i` is a nonzero square mod `q`.
pub fn paley(q: u64) -> Result<Tournament, TournamentError> {
    if !is_prime(q) {
        return Err(TournamentError::NotPrime(q));
    }
    if q % 4 != 3 {
        return Err(TournamentError::BadCongruence(q));
    }
    let n = usize::try_from(q).map_err(|_| TournamentError::TooManyVertices(usize::MAX))?;
    if n > MAX_VERTICES {
        return Err(TournamentError::TooManyVertices(n));
    }
    let squares: Vec<bool> = (0..q).map(|v| is_quadratic_residue(v, q)).collect();
    Tournament::from_fn(n, |i, j| squares[(j - i) % n])
}

/// Every tournament on `n` vertices whose code lies in `codes`, in increasing code order.
pub fn enumerate_all(
    n: usize,
    codes: Range<u64>,
) -> Result<impl Iterator<Item = Tournament>, TournamentError> {
    let pairs = pair_count(n);
    if pairs > MAX_CODE_BITS {
        return Err(TournamentError::TooLarge(n));
    }
    let total = 1u64 << pairs;
    if codes.start > codes.end || codes.end > total {
        return Err(TournamentError::BadRange {
            start: codes.start,
            end: codes.end,
            pairs,
        });
    }
    Ok(codes.map(move |c| Tournament::from_code(n, c).expect("code within range")))
}

/// Number of tournaments on `n` labelled vertices, if it fits the exhaustive path.
pub fn tournament_count(n: usize) -> Result<u64, TournamentError> {
    let pairs = pair_count(n);
    if pairs > MAX_CODE_BITS {
        return Err(TournamentError::TooLarge(n));
    }
    Ok(1u64 << pairs)
}

/// `n=<n>:<bits>`, one character per pair in index order.
pub fn format_tournament(t: &Tournament) -> String {
    let mut s = format!("n={}:", t.n);
    s.extend((0..t.pairs()).map(|k| if t.bit(k) { '1' } else { '0' }));
    s
}

pub fn parse_tournament(text: &str) -> Result<Tournament, TournamentError> {
    let text = text.trim();
    let bad = || TournamentError::Parse(text.to_string());
    let rest = text.strip_prefix("n=").ok_or_else(bad)?;
    let (n, bits) = rest.split_once(':').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n > MAX_VERTICES {
        return Err(TournamentError::TooManyVertices(n));
    }
    let expected = pair_count(n);
    if let Some(c) = bits.chars().find(|c| *c != '0' && *c != '1') {
        return Err(TournamentError::BadCharacter(c));
    }
    if bits.len() != expected {
        return Err(TournamentError::LengthMismatch {
            expected,
            found: bits.len(),
        });
    }
    let mut t = Tournament::empty(n)?;
    for (k, c) in bits.bytes().enumerate() {
        if c == b'1' {
            t.bits[k / 64] |= 1 << (k % 64);
        }
    }
    Ok(t)
}

impl FromStr for Tournament {
    type Err = TournamentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tournament(s)
    }
}
