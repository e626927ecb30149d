//! Flag grammar: tournament specs, sequences, ranges and file-or-literal inputs.

use std::ops::RangeInclusive;
use std::path::Path;

use tournarank::field::{parse_scalar, FieldSpec};
use tournarank::tournament::{
    paley, parse_tournament, random_tournament, reverse_natural_transitive, transitive,
};
use tournarank::{SeqA, Tournament};

pub type Fallible<T> = Result<T, String>;

/// File contents when `arg` names an existing file, otherwise `arg` itself.
pub fn file_or_literal(arg: &str) -> Fallible<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}

pub fn read_file(arg: &str) -> Fallible<String> {
    std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))
}

/// `transitive:<n>`, `reverse-transitive:<n>`, `paley:<q>`, `random:<n>`,
/// raw `n=<n>:<bits>`, or a file holding the raw form.
pub fn tournament(arg: &str, seed: u64) -> Fallible<Tournament> {
    let text = file_or_literal(arg)?;
    let text = text.trim();
    let num = |v: &str| -> Fallible<u64> {
        v.trim().parse().map_err(|_| format!("bad number {v:?} in tournament spec {text:?}"))
    };
    let t = if let Some(v) = text.strip_prefix("transitive:") {
        let n = num(v)? as usize;
        transitive(n, &(0..n).collect::<Vec<_>>())
    } else if let Some(v) = text.strip_prefix("reverse-transitive:") {
        reverse_natural_transitive(num(v)? as usize)
    } else if let Some(v) = text.strip_prefix("paley:") {
        paley(num(v)?)
    } else if let Some(v) = text.strip_prefix("random:") {
        random_tournament(num(v)? as usize, seed, 0)
    } else {
        parse_tournament(text)
    };
    t.map_err(|e| format!("tournament {text:?}: {e}"))
}

/// Comma/whitespace separated scalars, from a file or inline.
pub fn scalars(arg: &str, field: FieldSpec) -> Fallible<Vec<tournarank::Scalar>> {
    let text = file_or_literal(arg)?;
    let vals = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_scalar(field, s).map_err(|e| format!("sequence entry {s:?}: {e}")))
        .collect::<Fallible<Vec<_>>>()?;
    if vals.is_empty() {
        return Err("empty sequence".into());
    }
    Ok(vals)
}

/// The listed entries repeated cyclically up to length `n`.
pub fn sequence(arg: &str, field: FieldSpec, n: usize) -> Fallible<SeqA> {
    let vals = scalars(arg, field)?;
    let cycled = (0..n).map(|i| vals[i % vals.len()].clone()).collect();
    SeqA::new(field, cycled).map_err(|e| format!("sequence: {e}"))
}

/// The first `n` positive integers that are nonzero in `field`.
pub fn natural_nonzero(field: FieldSpec, n: usize) -> Vec<i64> {
    let p = field.order().unwrap_or(0) as i64;
    (1..).filter(|v| p == 0 || v % p != 0).take(n).collect()
}

/// `a..b` (inclusive) or a single `n`.
pub fn n_range(arg: &str) -> Fallible<RangeInclusive<usize>> {
    let bad = || format!("bad range {arg:?}; expected <a>..<b>");
    let (lo, hi) = match arg.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (arg, arg),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

pub fn fields(arg: &str) -> Fallible<Vec<FieldSpec>> {
    // GF(p) contains no commas, so a plain split is enough
    arg.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<FieldSpec>().map_err(|e| format!("field {s:?}: {e}")))
        .collect()
}

pub fn integers(arg: &str) -> Fallible<Vec<i64>> {
    arg.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| format!("bad integer {s:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tournament_specs() {
        assert_eq!(tournament("transitive:3", 0).unwrap().code(), Some(0b111));
        assert_eq!(tournament("reverse-transitive:3", 0).unwrap().code(), Some(0));
        assert_eq!(tournament("paley:7", 0).unwrap().n(), 7);
        assert_eq!(tournament("random:6", 1).unwrap(), tournament("random:6", 1).unwrap());
        assert_eq!(tournament("n=3:101", 0).unwrap().code(), Some(0b101));
        assert!(tournament("paley:5", 0).is_err());
        assert!(tournament("bogus", 0).is_err());
    }

    #[test]
    fn sequences_and_ranges() {
        let q = FieldSpec::rationals();
        let a = sequence("1, 2", q, 5).unwrap();
        assert_eq!(a, SeqA::from_i64s(q, &[1, 2, 1, 2, 1]).unwrap());
        assert!(sequence("1,0", q, 2).is_err());
        assert_eq!(natural_nonzero(FieldSpec::prime(3).unwrap(), 4), vec![1, 2, 4, 5]);
        assert_eq!(n_range("3..30").unwrap(), 3..=30);
        assert_eq!(n_range("3..=30").unwrap(), 3..=30);
        assert_eq!(n_range("7").unwrap(), 7..=7);
        assert!(n_range("5..3").is_err());
        assert_eq!(fields("Q, GF(2)").unwrap().len(), 2);
        assert_eq!(integers("1,-2").unwrap(), vec![1, -2]);
    }
}
