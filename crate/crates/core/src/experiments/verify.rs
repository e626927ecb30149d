use rand::seq::SliceRandom;
use rand::Rng;

use super::search::{minrank_records, MinRankConfig};
use super::source::{check_exhaustive_size, random_nonzero, SequenceSource, TournamentSet};
use super::{ExperimentError, CHAR_TWO_REFUSAL};
use crate::bounds::{half_minus_one_ceil, BoundSpec};
use crate::exec::Exec;
use crate::field::{format_scalar, FieldSpec};
use crate::matrix::{
    build_dn, build_m, build_m_f, reversal_sum_matrix, scaled_j_minus_i, LinearF, SeqA,
};
use crate::rank::{principal_minor_det, rank};
use crate::report::{Record, Report};
use crate::rng::{sized_index, stream_rng, DOMAIN_ORDER, DOMAIN_PERTURB};
use crate::tournament::{
    flip_edge, random_tournament, reverse, reverse_natural_transitive, transitive, Tournament,
};

fn rank_of(m: &crate::DenseMatrix) -> usize {
    rank(m).rank
}

fn bound(b: BoundSpec) -> i64 {
    b.min_rank().expect("rank bound")
}

#[derive(Debug, Clone)]
pub struct TransitiveConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub field: FieldSpec,
    pub source: SequenceSource,
    pub trials: u64,
    pub seed: u64,
}

/// `rank(D_n(a)) ≥ ⌊2n/3⌋ − 1`, and the same for transitive tournaments under
/// a random vertex order, for each `n` and each sampled sequence. Asserted in
/// every characteristic.
pub fn verify_transitive(cfg: &TransitiveConfig, exec: Exec) -> Result<Report, ExperimentError> {
    if cfg.n_min < 3 || cfg.n_min > cfg.n_max {
        return Err(ExperimentError::BadRange(format!(
            "n range {}..{} must satisfy 3 <= start <= end",
            cfg.n_min, cfg.n_max
        )));
    }
    let trials = cfg.trials as usize;
    let ns = cfg.n_max - cfg.n_min + 1;
    let per_item = exec.try_map(0..ns * trials, |k| {
        let n = cfg.n_min + k / trials;
        let trial = (k % trials) as u64;
        let a = cfg.source.sequence(cfg.field, n, cfg.seed, trial)?;
        let b = bound(BoundSpec::TransitiveFloor { n });
        let id = format!("n={n},trial={trial}");
        let d = Record::new(id.clone(), "D_n").at_least(rank_of(&build_dn(&a)), b);

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut stream_rng(cfg.seed, DOMAIN_ORDER, sized_index(n, trial)));
        let t = transitive(n, &order)?;
        let r = Record::new(id, "transitive_random_order").at_least(rank_of(&build_m(&t, &a)?), b);
        Ok::<_, ExperimentError>([d, r])
    })?;
    let mut report = Report::new("verify_transitive")
        .param("n_range", format!("{}..{}", cfg.n_min, cfg.n_max))
        .param("field", cfg.field)
        .param("sequence", cfg.source.describe())
        .param("trials", cfg.trials)
        .param("seed", cfg.seed);
    report.extend(per_item.into_iter().flatten());
    Ok(report.finish())
}

#[derive(Debug, Clone)]
pub struct ReversalConfig {
    pub a: SeqA,
    pub tournaments: TournamentSet,
}

/// Per tournament: `M_T + M_{T_R}` equals the reversal-sum matrix entrywise;
/// then, outside characteristic 2, `rank(sum) ≥ n − 2`,
/// `rank(M_T) + rank(M_{T_R}) ≥ n − 2` and `max ≥ ⌈(n−2)/2⌉`.
pub fn verify_reversal(cfg: &ReversalConfig, exec: Exec) -> Result<Report, ExperimentError> {
    let a = &cfg.a;
    let n = a.len();
    let count = cfg.tournaments.len(n)?;
    let field = a.field();
    let rank_checks = field.characteristic() != 2;
    let sum = reversal_sum_matrix(a);
    let sum_rank = rank_checks.then(|| rank_of(&sum));
    let b_sum = bound(BoundSpec::ReversalSum { n });
    let b_max = half_minus_one_ceil(n);

    let per_t = exec.try_map(0..count, |k| {
        let (t, id) = cfg.tournaments.get(n, k);
        let m = build_m(&t, a)?;
        let mr = build_m(&reverse(&t), a)?;
        let identity = m.add(&mr)? == sum;
        let mut recs = vec![Record::new(id.clone(), "identity").pass(identity)];
        if let Some(sr) = sum_rank {
            let (r1, r2) = (rank_of(&m), rank_of(&mr));
            recs.push(Record::new(id.clone(), "rank_sum_matrix").at_least(sr, b_sum));
            recs.push(
                Record::new(id.clone(), "rank_subadditivity")
                    .at_least(r1 + r2, b_sum)
                    .detail(format!("{r1} + {r2}")),
            );
            recs.push(Record::new(id, "max_rank").at_least(r1.max(r2), b_max));
        }
        Ok::<_, ExperimentError>(recs)
    })?;
    let mut report = Report::new("verify_reversal")
        .param("n", n)
        .param("field", field)
        .param("sequence", SequenceSource::Cyclic(a.clone()).describe())
        .param("tournaments", cfg.tournaments.describe());
    if !rank_checks {
        report.refuse(CHAR_TWO_REFUSAL);
    }
    report.extend(per_t.into_iter().flatten());
    Ok(report.finish())
}

#[derive(Debug, Clone)]
pub struct LipschitzConfig {
    pub a: SeqA,
    pub trials: u64,
    pub seed: u64,
}

/// Random single-edge flips and single-entry replacements move the rank by at
/// most 2; flipping the same edge back restores it.
pub fn verify_lipschitz(cfg: &LipschitzConfig, exec: Exec) -> Result<Report, ExperimentError> {
    let a = &cfg.a;
    let n = a.len();
    if n < 2 {
        return Err(ExperimentError::BadRange(format!("n = {n}: need at least one edge")));
    }
    let field = a.field();
    let per_trial = exec.try_map(0..cfg.trials as usize, |k| {
        let idx = sized_index(n, k as u64);
        let t = random_tournament(n, cfg.seed, idx)?;
        let mut rng = stream_rng(cfg.seed, DOMAIN_PERTURB, idx);
        let u = rng.random_range(0..n);
        let v = (u + rng.random_range(1..n)) % n;
        let id = format!("trial={k}");
        let r0 = rank_of(&build_m(&t, a)?);

        let flipped = flip_edge(&t, u, v)?;
        let r1 = rank_of(&build_m(&flipped, a)?);
        let flip = Record::new(id.clone(), "edge_flip")
            .rank(r1)
            .pass(r0.abs_diff(r1) <= 2)
            .detail(format!("flip {}-{}: {r0} -> {r1}", u + 1, v + 1));

        let back = flip_edge(&flipped, u, v)?;
        let r2 = rank_of(&build_m(&back, a)?);
        let flip_back = Record::new(id.clone(), "flip_back")
            .rank(r2)
            .pass(back == t && r2 == r0);

        let i = rng.random_range(0..n);
        let z = random_nonzero(field, &mut rng);
        let detail = format!("a_{} := {}: ", i + 1, format_scalar(&z));
        let r3 = rank_of(&build_m(&t, &a.with_entry(i, z)?)?);
        let entry = Record::new(id, "entry_replace")
            .rank(r3)
            .pass(r0.abs_diff(r3) <= 2)
            .detail(format!("{detail}{r0} -> {r3}"));
        Ok::<_, ExperimentError>([flip, flip_back, entry])
    })?;
    let mut report = Report::new("verify_lipschitz")
        .param("n", n)
        .param("field", field)
        .param("sequence", SequenceSource::Cyclic(a.clone()).describe())
        .param("trials", cfg.trials)
        .param("seed", cfg.seed);
    report.extra("max_delta", 2);
    report.extend(per_trial.into_iter().flatten());
    Ok(report.finish())
}

/// Largest `n` accepted by [`verify_certifiability`].
pub const MAX_CERTIFY_N: usize = 8;

#[derive(Debug, Clone)]
pub struct CertifiabilityConfig {
    pub n_max: usize,
    pub fields: Vec<FieldSpec>,
    pub z: Vec<i64>,
}

/// For every tournament on `n ≤ n_max` vertices and every `s ≤ n − 1`, with
/// `x_1 = … = x_{s+1} = z`, the principal `s` or `s + 1` minor of `M_T(x)` is
/// nonzero. One record per `(field, z, n, s)`, aggregated over tournaments.
pub fn verify_certifiability(
    cfg: &CertifiabilityConfig,
    exec: Exec,
) -> Result<Report, ExperimentError> {
    if cfg.n_max > MAX_CERTIFY_N {
        return Err(ExperimentError::TooLarge(format!(
            "n_max = {} (limit {MAX_CERTIFY_N})",
            cfg.n_max
        )));
    }
    for &field in &cfg.fields {
        for &z in &cfg.z {
            if field.from_i64(z).is_zero() {
                return Err(ExperimentError::Invalid(format!("z = {z} is zero in {field}")));
            }
        }
    }
    let mut report = Report::new("verify_certifiability")
        .param("n_max", cfg.n_max)
        .param("fields", join(cfg.fields.iter()))
        .param("z", join(cfg.z.iter()));
    for &field in &cfg.fields {
        for &z in &cfg.z {
            for n in 2..=cfg.n_max {
                let count = check_exhaustive_size(n)? as usize;
                for s in 1..n {
                    // filler for positions past s+1: 1, 2, …, cycling through nonzero residues
                    let vals: Vec<i64> = (0..n)
                        .map(|i| match (i <= s, field.order()) {
                            (true, _) => z,
                            (false, Some(p)) => (i as i64 % (p as i64 - 1)) + 1,
                            (false, None) => i as i64 + 1,
                        })
                        .collect();
                    let x = SeqA::from_i64s(field, &vals)?;
                    // 0 = fails, 1 = s-minor nonzero, 2 = only the (s+1)-minor nonzero
                    let outcomes = exec.try_map(0..count, |code| {
                        let t = Tournament::from_code(n, code as u64)?;
                        let m = build_m(&t, &x)?;
                        let out = if !principal_minor_det(&m, s)?.is_zero() {
                            1u8
                        } else if !principal_minor_det(&m, s + 1)?.is_zero() {
                            2
                        } else {
                            0
                        };
                        Ok::<_, ExperimentError>(out)
                    })?;
                    let failed = outcomes.iter().position(|&o| o == 0);
                    let saved = outcomes.iter().filter(|&&o| o == 2).count();
                    let mut detail = format!("tournaments={count}, saved_by_s_plus_1={saved}");
                    if let Some(code) = failed {
                        detail.push_str(&format!(", first_failure=code={code}"));
                    }
                    report.push(
                        Record::new(format!("field={field},z={z},n={n},s={s}"), "certify")
                            .pass(failed.is_none())
                            .detail(detail),
                    );
                }
            }
        }
    }
    Ok(report.finish())
}

#[derive(Debug, Clone)]
pub struct ConstantSeqConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub fields: Vec<FieldSpec>,
    /// The constant, reduced into each field.
    pub c: i64,
    /// Random tournaments per `n`, besides the two transitive ones.
    pub samples: u64,
    pub seed: u64,
}

/// Constant sequences: every `M_T(a)` is `c(J − I)`, whose rank is at least
/// `n − 1`, and exactly `n − 1` iff the characteristic divides `n − 1`.
pub fn verify_constant_seq(cfg: &ConstantSeqConfig, exec: Exec) -> Result<Report, ExperimentError> {
    if cfg.n_min < 1 || cfg.n_min > cfg.n_max {
        return Err(ExperimentError::BadRange(format!(
            "n range {}..{} must satisfy 1 <= start <= end",
            cfg.n_min, cfg.n_max
        )));
    }
    let mut report = Report::new("verify_constant_seq")
        .param("n_range", format!("{}..{}", cfg.n_min, cfg.n_max))
        .param("fields", join(cfg.fields.iter()))
        .param("c", cfg.c)
        .param("samples", cfg.samples)
        .param("seed", cfg.seed);
    for &field in &cfg.fields {
        let c = field.from_i64(cfg.c);
        if c.is_zero() {
            return Err(ExperimentError::Invalid(format!("c = {} is zero in {field}", cfg.c)));
        }
        let per_n = exec.try_map(cfg.n_min..cfg.n_max + 1, |n| {
            let a = SeqA::constant(&c, n)?;
            let expected = scaled_j_minus_i(&c, n);
            let id = format!("field={field},n={n}");
            let mut ts = vec![
                transitive(n, &(0..n).collect::<Vec<_>>())?,
                reverse_natural_transitive(n)?,
            ];
            for k in 0..cfg.samples {
                ts.push(random_tournament(n, cfg.seed, sized_index(n, k))?);
            }
            let mut form_ok = true;
            for t in &ts {
                form_ok &= build_m(t, &a)? == expected;
            }
            let r = rank_of(&expected);
            let divides = field.char_divides(n as u64 - 1);
            let exact = if divides { n - 1 } else { n };
            Ok::<_, ExperimentError>([
                Record::new(id.clone(), "matrix_form")
                    .pass(form_ok)
                    .detail(format!("tournaments={}", ts.len())),
                Record::new(id.clone(), "rank_bound").at_least(r, bound(BoundSpec::ConstantSeq { n })),
                Record::new(id, "rank_exact")
                    .rank(r)
                    .pass(r == exact)
                    .detail(format!("char divides n-1: {divides}")),
            ])
        })?;
        report.extend(per_n.into_iter().flatten());
    }
    Ok(report.finish())
}

#[derive(Debug, Clone)]
pub struct FEnsembleConfig {
    pub a: SeqA,
    pub f: LinearF,
    pub tournaments: TournamentSet,
}

/// `f(x, y) = αx + βy` with `α + β ≠ 0`: the sum `M^f_T + M^f_{T_R}` has
/// off-diagonal entries `(α+β)(a_i + a_j)`, and outside characteristic 2 the
/// two ranks add up to at least `n − 2`.
pub fn verify_f_ensemble(cfg: &FEnsembleConfig, exec: Exec) -> Result<Report, ExperimentError> {
    let (a, f) = (&cfg.a, &cfg.f);
    if f.is_degenerate() {
        return Err(ExperimentError::DegenerateF {
            alpha: format_scalar(&f.alpha),
            beta: format_scalar(&f.beta),
        });
    }
    let n = a.len();
    let field = a.field();
    if f.field() != field {
        return Err(ExperimentError::Invalid(format!(
            "f is over {} but the sequence is over {field}",
            f.field()
        )));
    }
    let count = cfg.tournaments.len(n)?;
    let rank_checks = field.characteristic() != 2;
    let expected = reversal_sum_matrix(a).scale(&f.weight())?;
    let b = bound(BoundSpec::ReversalSum { n });
    let per_t = exec.try_map(0..count, |k| {
        let (t, id) = cfg.tournaments.get(n, k);
        let m = build_m_f(&t, a, f)?;
        let mr = build_m_f(&reverse(&t), a, f)?;
        let mut recs = vec![Record::new(id.clone(), "sum_law").pass(m.add(&mr)? == expected)];
        if rank_checks {
            let (r1, r2) = (rank_of(&m), rank_of(&mr));
            recs.push(
                Record::new(id, "rank_sum")
                    .at_least(r1 + r2, b)
                    .detail(format!("{r1} + {r2}")),
            );
        }
        Ok::<_, ExperimentError>(recs)
    })?;
    let mut report = Report::new("verify_f_ensemble")
        .param("n", n)
        .param("field", field)
        .param("sequence", SequenceSource::Cyclic(a.clone()).describe())
        .param("alpha", format_scalar(&f.alpha))
        .param("beta", format_scalar(&f.beta))
        .param("tournaments", cfg.tournaments.describe());
    if !rank_checks {
        report.refuse(CHAR_TWO_REFUSAL);
    }
    report.extend(per_t.into_iter().flatten());
    Ok(report.finish())
}

#[derive(Debug, Clone)]
pub struct FiniteFieldConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub field: FieldSpec,
    pub source: SequenceSource,
    pub seed: u64,
    pub shards: usize,
}

/// Exhaustive `rank ≥ ⌈n/(q−1)⌉ − 1` over a prime field, for each `n` in range.
pub fn verify_finite_field_bound(
    cfg: &FiniteFieldConfig,
    exec: Exec,
) -> Result<Report, ExperimentError> {
    if cfg.field.is_rationals() {
        return Err(ExperimentError::Invalid("the finite-field bound needs GF(p)".into()));
    }
    if cfg.n_min < 1 || cfg.n_min > cfg.n_max {
        return Err(ExperimentError::BadRange(format!(
            "n range {}..{} must satisfy 1 <= start <= end",
            cfg.n_min, cfg.n_max
        )));
    }
    let mut report = Report::new("verify_finite_field_bound")
        .param("n_range", format!("{}..{}", cfg.n_min, cfg.n_max))
        .param("field", cfg.field)
        .param("sequence", cfg.source.describe())
        .param("seed", cfg.seed)
        .param("shards", cfg.shards);
    for n in cfg.n_min..=cfg.n_max {
        let a = cfg.source.sequence(cfg.field, n, cfg.seed, 0)?;
        let mr = MinRankConfig { a, shards: cfg.shards, conjecture_c: None };
        let (records, min) = minrank_records(&mr, exec, &format!("n={n},"))?;
        report.extra(&format!("min_rank.n={n}"), min);
        report.extend(records);
    }
    Ok(report.finish())
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
