use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use serde_json::Value;

use super::source::{check_exhaustive_size, SequenceSource};
use super::{ExperimentError, CHAR_TWO_REFUSAL};
use crate::bounds::{half_minus_tail_f64, BoundSpec};
use crate::exec::{shard_ranges, Exec};
use crate::matrix::{build_m, SeqA};
use crate::rank::rank;
use crate::report::{Record, Report};
use crate::rng::{sized_index, stream_rng, DOMAIN_PERMUTATION};
use crate::tournament::{random_tournament, reverse, Tournament};

/// How many argmin codes are listed in a min-rank report.
const ARGMIN_LISTED: usize = 64;

#[derive(Debug, Clone)]
pub struct MinRankConfig {
    pub a: SeqA,
    /// Number of contiguous code ranges; affects scheduling only.
    pub shards: usize,
    /// Reported, never asserted: whether the minimum reaches `c·n`.
    pub conjecture_c: Option<BigRational>,
}

/// One record per tournament code, in code order, and the minimum rank.
pub(crate) fn minrank_records(
    cfg: &MinRankConfig,
    exec: Exec,
    id_prefix: &str,
) -> Result<(Vec<Record>, usize), ExperimentError> {
    let a = &cfg.a;
    let n = a.len();
    let total = check_exhaustive_size(n)?;
    let bound = a
        .field()
        .order()
        .and_then(|q| BoundSpec::FiniteField { n, q }.min_rank());
    let mut records = Vec::with_capacity(total as usize);
    for shard in shard_ranges(total, cfg.shards) {
        let start = shard.start as usize;
        let part = exec.try_map(start..shard.end as usize, |code| {
            let t = Tournament::from_code(n, code as u64)?;
            let r = rank(&build_m(&t, a)?).rank;
            let rec = Record::new(format!("{id_prefix}code={code}"), "rank");
            Ok::<_, ExperimentError>(match bound {
                Some(b) => rec.at_least(r, b),
                None => rec.rank(r),
            })
        })?;
        records.extend(part);
    }
    let min = records.iter().filter_map(|r| r.rank).min().unwrap_or(0);
    Ok((records, min))
}

/// Ranks of `M_T(a)` for every tournament `T` on `n = len(a)` vertices.
///
/// Over `GF(q)` each rank is checked against `⌈n/(q−1)⌉ − 1`; over `Q` no
/// proven bound applies and the run is purely exploratory.
pub fn minrank_exhaustive(cfg: &MinRankConfig, exec: Exec) -> Result<Report, ExperimentError> {
    let a = &cfg.a;
    let n = a.len();
    let (records, min) = minrank_records(cfg, exec, "")?;
    let argmin: Vec<u64> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.rank == Some(min))
        .map(|(code, _)| code as u64)
        .collect();

    let mut report = Report::new("minrank_exhaustive")
        .param("n", n)
        .param("field", a.field())
        .param("sequence", SequenceSource::Cyclic(a.clone()).describe())
        .param("shards", cfg.shards.max(1));
    report.extra("min_rank", min);
    report.extra("argmin_count", argmin.len());
    report.extra(
        "argmin_codes",
        argmin.iter().take(ARGMIN_LISTED).copied().collect::<Vec<_>>(),
    );
    if let Some(q) = a.field().order() {
        let b = BoundSpec::FiniteField { n, q };
        report.extra("finite_field_bound", b.min_rank().expect("rank bound"));
    }
    if let Some(c) = &cfg.conjecture_c {
        report = report.param("conjecture_c", c);
        let holds = BigRational::from_integer(min.into()) >= c * BigRational::from_integer(n.into());
        report.extra("conjecture_min_rank_ge_cn", holds);
    }
    report.extend(records);
    Ok(report.finish())
}

#[derive(Debug, Clone)]
pub struct MonteCarloConfig {
    pub a: SeqA,
    pub samples: u64,
    pub seed: u64,
}

/// Ranks of `M_T(a)` for `samples` uniform tournaments, each checked against
/// `⌊n/2 − 21·sqrt(n ln n)⌋` outside characteristic 2.
pub fn montecarlo_rank(cfg: &MonteCarloConfig, exec: Exec) -> Result<Report, ExperimentError> {
    let a = &cfg.a;
    let n = a.len();
    let check = a.field().characteristic() != 2;
    let bound = BoundSpec::HalfMinusTail { n };
    let b = bound.min_rank().expect("rank bound");
    let records = exec.try_map(0..cfg.samples as usize, |k| {
        let t = random_tournament(n, cfg.seed, sized_index(n, k as u64))?;
        let r = rank(&build_m(&t, a)?).rank;
        let rec = Record::new(format!("sample={k}"), "rank");
        Ok::<_, ExperimentError>(if check { rec.at_least(r, b) } else { rec.rank(r) })
    })?;
    let mut report = Report::new("montecarlo_rank")
        .param("n", n)
        .param("field", a.field())
        .param("sequence", SequenceSource::Cyclic(a.clone()).describe())
        .param("samples", cfg.samples)
        .param("seed", cfg.seed);
    report.extra("bound", b);
    report.extra("bound_formula", bound.describe());
    report.extra("bound_approx", format!("{:.6}", half_minus_tail_f64(n)));
    if !check {
        report.refuse(CHAR_TWO_REFUSAL);
    }
    report.extend(records);
    Ok(report.finish())
}

/// Largest `n` for which [`PermMode::All`] is accepted (`9! = 362880`).
pub const MAX_SCAN_ALL: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermMode {
    All,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct PermScanConfig {
    pub t: Tournament,
    pub a: SeqA,
    pub mode: PermMode,
}

/// Permutation number `k` of `0..n` in lexicographic order.
pub fn permutation_by_index(n: usize, mut k: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<u64> = vec![1; n.max(1)];
    for i in 1..n {
        fact[i] = fact[i - 1] * i as u64;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let d = (k / fact[i]) as usize;
        k %= fact[i];
        out.push(pool.remove(d));
    }
    out
}

fn perm_label(sigma: &[usize]) -> String {
    let parts: Vec<String> = sigma.iter().map(|v| (v + 1).to_string()).collect();
    format!("[{}]", parts.join(" "))
}

/// Distinct values of `rank(M_T(σa))` over permutations `σ`, with the first
/// permutation reaching each. Exploratory: every record passes.
pub fn perm_scan(cfg: &PermScanConfig, exec: Exec) -> Result<Report, ExperimentError> {
    let (t, a) = (&cfg.t, &cfg.a);
    let n = t.n();
    if a.len() != n {
        return Err(ExperimentError::Invalid(format!(
            "tournament has {n} vertices, sequence has {}",
            a.len()
        )));
    }
    let count = match cfg.mode {
        PermMode::All if n > MAX_SCAN_ALL => return Err(ExperimentError::TooManyPermutations(n)),
        PermMode::All => (1..=n as u64).product::<u64>(),
        PermMode::Sampled { count, .. } => count,
    };
    let records = exec.try_map(0..count as usize, |k| {
        let sigma = match cfg.mode {
            PermMode::All => permutation_by_index(n, k as u64),
            PermMode::Sampled { seed, .. } => {
                let mut s: Vec<usize> = (0..n).collect();
                s.shuffle(&mut stream_rng(seed, DOMAIN_PERMUTATION, sized_index(n, k as u64)));
                s
            }
        };
        let r = rank(&build_m(t, &a.permuted(&sigma)?)?).rank;
        Ok::<_, ExperimentError>(Record::new(format!("sigma={}", perm_label(&sigma)), "rank").rank(r))
    })?;

    let mut witnesses: BTreeMap<String, Value> = BTreeMap::new();
    for r in &records {
        let rank = r.rank.expect("rank recorded").to_string();
        let sigma = r.id.trim_start_matches("sigma=").to_string();
        witnesses.entry(rank).or_insert(Value::from(sigma));
    }
    let reverse_rank = rank(&build_m(&reverse(t), a)?).rank;
    let in_scan = records.iter().any(|r| r.rank == Some(reverse_rank));

    let mode = match cfg.mode {
        PermMode::All => "all".to_string(),
        PermMode::Sampled { count, seed } => format!("sample:{count},seed={seed}"),
    };
    let mut report = Report::new("perm_scan")
        .param("n", n)
        .param("field", a.field())
        .param("tournament", crate::tournament::format_tournament(t))
        .param("sequence", SequenceSource::Cyclic(a.clone()).describe())
        .param("mode", mode);
    report.extra("distinct_ranks", witnesses.into_iter().collect::<serde_json::Map<_, _>>());
    report.extra("reverse_rank", reverse_rank);
    report.extra("reverse_rank_in_scan", in_scan);
    report.extend(records);
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::tournament::paley;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn minrank_small_cases() {
        let cfg = MinRankConfig {
            a: SeqA::from_i64s(q(), &[5, 5, 5]).unwrap(),
            shards: 2,
            conjecture_c: None,
        };
        let r = minrank_exhaustive(&cfg, Exec::Parallel).unwrap();
        assert_eq!(r.summary.extra["min_rank"], 3);
        assert_eq!(r.summary.extra["argmin_count"], 8);

        let cfg = MinRankConfig {
            a: SeqA::from_i64s(gf(3), &[1, 2, 1, 2, 1]).unwrap(),
            shards: 4,
            conjecture_c: Some(BigRational::new(1.into(), 2.into())),
        };
        let r = minrank_exhaustive(&cfg, Exec::Parallel).unwrap();
        assert!(r.pass());
        assert_eq!(r.summary.records, 1024);
        assert_eq!(r.summary.extra["finite_field_bound"], 2);
        assert!(r.summary.extra["min_rank"].as_u64().unwrap() >= 2);
        assert!(r.summary.extra.contains_key("conjecture_min_rank_ge_cn"));
    }

    #[test]
    fn minrank_is_shard_and_worker_invariant() {
        let a = SeqA::from_i64s(gf(5), &[1, 2, 3, 4, 1]).unwrap();
        let run = |shards, exec| {
            let mut r = minrank_exhaustive(&MinRankConfig { a: a.clone(), shards, conjecture_c: None }, exec)
                .unwrap();
            r.parameters.remove("shards");
            r.to_json(true)
        };
        let base = run(1, Exec::Sequential);
        assert_eq!(run(7, Exec::Workers(3)), base);
        assert_eq!(run(3, Exec::Parallel), base);
    }

    #[test]
    fn minrank_rejects_large_n() {
        let a = SeqA::from_i64s(q(), &[1; 12]).unwrap();
        let cfg = MinRankConfig { a, shards: 1, conjecture_c: None };
        assert!(matches!(minrank_exhaustive(&cfg, Exec::Sequential), Err(ExperimentError::TooLarge(_))));
    }

    #[test]
    fn montecarlo_is_deterministic_and_flags_vacuity() {
        let a = SequenceSource::Integers(vec![1, 2]).sequence(gf(3), 30, 0, 0).unwrap();
        let cfg = MonteCarloConfig { a, samples: 40, seed: 1 };
        let r1 = montecarlo_rank(&cfg, Exec::Workers(1)).unwrap();
        let r2 = montecarlo_rank(&cfg, Exec::Workers(4)).unwrap();
        assert_eq!(r1.to_json(false), r2.to_json(false));
        assert_eq!(r1.to_csv(), r2.to_csv());
        assert!(r1.pass() && r1.summary.vacuous);

        let a = SeqA::from_i64s(gf(2), &[1; 10]).unwrap();
        let r = montecarlo_rank(&MonteCarloConfig { a, samples: 5, seed: 1 }, Exec::Sequential).unwrap();
        assert_eq!(r.summary.refused.len(), 1);
        assert_eq!(r.check("rank").unwrap().records, 5);
        assert!(!r.summary.vacuous);
    }

    #[test]
    fn permutations_by_index() {
        assert_eq!(permutation_by_index(3, 0), vec![0, 1, 2]);
        assert_eq!(permutation_by_index(3, 1), vec![0, 2, 1]);
        assert_eq!(permutation_by_index(3, 5), vec![2, 1, 0]);
        assert!(permutation_by_index(0, 0).is_empty());
        let mut all: Vec<Vec<usize>> = (0..24).map(|k| permutation_by_index(4, k)).collect();
        let sorted = {
            let mut s = all.clone();
            s.sort();
            s
        };
        assert_eq!(all, sorted);
        all.dedup();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn perm_scan_cases() {
        let t = paley(7).unwrap();
        let a = SeqA::from_i64s(q(), &[1, 2, 3, 4, 5, 6, 7]).unwrap();
        let r = perm_scan(&PermScanConfig { t: t.clone(), a, mode: PermMode::All }, Exec::Parallel).unwrap();
        assert_eq!(r.summary.records, 5040);
        assert!(r.pass());
        assert!(!r.summary.extra["distinct_ranks"].as_object().unwrap().is_empty());

        let c = SeqA::from_i64s(q(), &[2; 7]).unwrap();
        let r = perm_scan(
            &PermScanConfig { t, a: c, mode: PermMode::Sampled { count: 50, seed: 3 } },
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(r.summary.extra["distinct_ranks"].as_object().unwrap().len(), 1);

        let t10 = Tournament::from_fn(10, |i, j| i < j).unwrap();
        let a10 = SeqA::from_i64s(q(), &[1; 10]).unwrap();
        assert_eq!(
            perm_scan(&PermScanConfig { t: t10, a: a10, mode: PermMode::All }, Exec::Sequential)
                .unwrap_err(),
            ExperimentError::TooManyPermutations(10)
        );
    }
}
