//! `tournarank` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on violations (the first witness
//! goes to stderr), 2 on usage or input errors.

mod inputs;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use inputs::Fallible;
use tournarank::bisect::{check_bisecting, family_to_m, gram_check, size_bound_report, SetFamily};
use tournarank::experiments::*;
use tournarank::field::{format_scalar, parse_scalar};
use tournarank::matrix::{build_m, build_m_f, build_m_ratio};
use tournarank::rank::rank;
use tournarank::{DenseMatrix, Exec, FieldSpec, LinearF, Report, SeqA};

#[derive(Debug, Parser)]
#[command(name = "tournarank", version, about = "Exact ranks of tournament matrices M_T(a)")]
struct Cli {
    /// Field: Q or GF(p) [default: Q]
    #[arg(long, global = true)]
    field: Option<FieldSpec>,
    /// Seed for every random choice [default: drawn from entropy and echoed]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; never changes the output bytes [default: all cores]
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Keep every record in JSON output, however many there are
    #[arg(long, global = true)]
    full_records: bool,
    /// Include wall time in reports (makes output run-dependent)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Transitive,
    Reversal,
    Lipschitz,
    Certify,
    Constant,
    Ffbound,
    FEnsemble,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the matrix M_T(a) (or an f-ensemble variant) as CSV
    Build {
        /// transitive:<n>, reverse-transitive:<n>, paley:<q>, random:<n>, n=<n>:<bits>, or a file
        #[arg(long)]
        tournament: String,
        /// Comma-separated entries or a file; repeated cyclically to length n
        #[arg(long)]
        seq: String,
        /// f(x, y) = alpha x + beta y instead of x
        #[arg(long, requires = "beta", allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, requires = "alpha", allow_hyphen_values = true)]
        beta: Option<String>,
        /// f(x, y) = x / y
        #[arg(long, conflicts_with = "alpha")]
        ratio: bool,
    },
    /// Rank profile of a matrix CSV (entries re-read in --field when given)
    Rank {
        #[arg(long)]
        matrix: String,
    },
    /// Ranks of M_T(a) over every tournament on n vertices
    Minrank {
        #[arg(long)]
        n: usize,
        /// Default: the first n integers that are nonzero in the field
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Report (never assert) whether the minimum reaches c*n
        #[arg(long)]
        conjecture_c: Option<String>,
    },
    /// Ranks of M_T(a) for uniformly random tournaments
    Montecarlo {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long)]
        seq: Option<String>,
    },
    /// Run one of the verifiers
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Inclusive range a..b
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seq: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// exhaustive, sample:<k>, or one tournament spec
        #[arg(long)]
        tournaments: Option<String>,
        /// Comma-separated field list (certify, constant) [default: --field]
        #[arg(long)]
        fields: Option<String>,
        /// Comma-separated block values (certify) [default: 1]
        #[arg(long)]
        z: Option<String>,
        /// The constant (constant) [default: 1]
        #[arg(long, allow_hyphen_values = true)]
        c: Option<i64>,
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// Self-bisecting set families
    Bisect {
        #[command(subcommand)]
        action: BisectAction,
    },
    /// Distinct ranks of M_T(sigma a) over permutations sigma
    PermScan {
        #[arg(long)]
        tournament: String,
        #[arg(long)]
        seq: Option<String>,
        /// all, or sample:<k>
        #[arg(long, default_value = "all")]
        mode: String,
    },
}

#[derive(Debug, Subcommand)]
enum BisectAction {
    /// Check the bisecting property and the Gram identities
    Check {
        #[arg(long)]
        family: String,
    },
    /// Write M = (nJ - XX^T)/2 as CSV
    Matrix {
        #[arg(long)]
        family: String,
        /// Also report the size bound m <= (n+1)/c for this constant
        #[arg(long)]
        c: Option<String>,
    },
}

struct Ctx {
    field: FieldSpec,
    field_given: bool,
    seed: u64,
    exec: Exec,
    out: Option<PathBuf>,
    format: Format,
    full_records: bool,
    timing: bool,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        field: cli.field.unwrap_or(FieldSpec::rationals()),
        field_given: cli.field.is_some(),
        seed: cli.seed.unwrap_or_else(rand::random),
        exec: cli.workers.map_or(Exec::Parallel, Exec::Workers),
        out: cli.out.clone(),
        format: cli.format,
        full_records: cli.full_records,
        timing: cli.timing,
    };
    eprintln!("# field: {}", ctx.field);
    eprintln!("# seed: {}", ctx.seed);
    eprintln!("# format: {:?}", ctx.format);
    eprintln!("# workers: {}", ctx.exec.describe());
    eprintln!(
        "# out: {}",
        ctx.out.as_ref().map_or("stdout".into(), |p| p.display().to_string())
    );
    eprintln!("# command: {:?}", cli.command);
    match run(&ctx, cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Fallible<Outcome> {
    let field = ctx.field;
    match command {
        Command::Build { tournament, seq, alpha, beta, ratio } => {
            let t = inputs::tournament(&tournament, ctx.seed)?;
            let a = inputs::sequence(&seq, field, t.n())?;
            let m = match (alpha, beta) {
                (Some(al), Some(be)) => build_m_f(&t, &a, &linear_f(field, &al, &be)?),
                _ if ratio => build_m_ratio(&t, &a),
                _ => build_m(&t, &a),
            }
            .map_err(|e| e.to_string())?;
            emit(ctx, &m.to_csv())?;
            Ok(Outcome::Pass)
        }
        Command::Rank { matrix } => {
            let m = DenseMatrix::from_csv(&inputs::read_file(&matrix)?).map_err(|e| e.to_string())?;
            let m = if ctx.field_given { m.in_field(field).map_err(|e| e.to_string())? } else { m };
            let p = rank(&m);
            let text = match ctx.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "field": m.field().to_string(),
                        "rows": m.rows(),
                        "cols": m.cols(),
                        "rank": p.rank,
                        "pivot_columns": p.pivot_columns,
                    });
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
                Format::Csv => {
                    let pivots: Vec<String> = p.pivot_columns.iter().map(|c| c.to_string()).collect();
                    format!(
                        "field,rows,cols,rank,pivot_columns\n{},{},{},{},{}\n",
                        m.field(),
                        m.rows(),
                        m.cols(),
                        p.rank,
                        pivots.join(" ")
                    )
                }
            };
            emit(ctx, &text)?;
            eprintln!("# rank: {}", p.rank);
            Ok(Outcome::Pass)
        }
        Command::Minrank { n, seq, shards, conjecture_c } => {
            let a = seq_or_natural(seq.as_deref(), field, n)?;
            let conjecture_c = match conjecture_c {
                Some(c) => Some(
                    parse_scalar(FieldSpec::rationals(), &c)
                        .map_err(|e| format!("--conjecture-c: {e}"))?
                        .as_ratio()
                        .expect("rational")
                        .clone(),
                ),
                None => None,
            };
            let cfg = MinRankConfig { a, shards, conjecture_c };
            report(ctx, |e| minrank_exhaustive(&cfg, e))
        }
        Command::Montecarlo { n, samples, seq } => {
            let a = seq_or_natural(seq.as_deref(), field, n)?;
            let cfg = MonteCarloConfig { a, samples, seed: ctx.seed };
            report(ctx, |e| montecarlo_rank(&cfg, e))
        }
        Command::Verify {
            theorem,
            n_range,
            n,
            seq,
            trials,
            alpha,
            beta,
            tournaments,
            fields,
            z,
            c,
            shards,
        } => {
            let range = |default: (usize, usize)| -> Fallible<(usize, usize)> {
                match (&n_range, n) {
                    (Some(r), _) => inputs::n_range(r).map(|r| (*r.start(), *r.end())),
                    (None, Some(n)) => Ok((n, n)),
                    (None, None) => Ok(default),
                }
            };
            let single_n = |default: usize| n.unwrap_or(default);
            let field_list = || match &fields {
                Some(f) => inputs::fields(f),
                None => Ok(vec![field]),
            };
            let source = || -> Fallible<Option<SequenceSource>> {
                seq.as_deref()
                    .map(|s| {
                        let vals = inputs::scalars(s, field)?;
                        SeqA::new(field, vals).map(SequenceSource::Cyclic).map_err(|e| e.to_string())
                    })
                    .transpose()
            };
            let tset = |n: usize| -> Fallible<TournamentSet> {
                match tournaments.as_deref() {
                    None | Some("exhaustive") => Ok(TournamentSet::Exhaustive),
                    Some(s) if s.starts_with("sample:") => {
                        let count = s["sample:".len()..]
                            .parse()
                            .map_err(|_| format!("bad sample count in {s:?}"))?;
                        Ok(TournamentSet::Sampled { count, seed: ctx.seed })
                    }
                    Some(s) => {
                        let t = inputs::tournament(s, ctx.seed)?;
                        if t.n() != n {
                            return Err(format!("tournament has {} vertices, expected {n}", t.n()));
                        }
                        Ok(TournamentSet::Explicit(vec![t]))
                    }
                }
            };
            match theorem {
                Theorem::Transitive => {
                    let (n_min, n_max) = range((3, 30))?;
                    let cfg = TransitiveConfig {
                        n_min,
                        n_max,
                        field,
                        source: source()?.unwrap_or(SequenceSource::RandomNonzero),
                        trials: trials.unwrap_or(50),
                        seed: ctx.seed,
                    };
                    report(ctx, |e| verify_transitive(&cfg, e))
                }
                Theorem::Reversal => {
                    let n = single_n(5);
                    let cfg = ReversalConfig {
                        a: seq_or_natural(seq.as_deref(), field, n)?,
                        tournaments: tset(n)?,
                    };
                    report(ctx, |e| verify_reversal(&cfg, e))
                }
                Theorem::Lipschitz => {
                    let n = single_n(8);
                    let a = match seq.as_deref() {
                        Some(s) => inputs::sequence(s, field, n)?,
                        None => SequenceSource::RandomNonzero
                            .sequence(field, n, ctx.seed, 0)
                            .map_err(|e| e.to_string())?,
                    };
                    let cfg = LipschitzConfig { a, trials: trials.unwrap_or(1000), seed: ctx.seed };
                    report(ctx, |e| verify_lipschitz(&cfg, e))
                }
                Theorem::Certify => {
                    let (_, n_max) = range((2, 6))?;
                    let cfg = CertifiabilityConfig {
                        n_max,
                        fields: field_list()?,
                        z: z.as_deref().map_or(Ok(vec![1]), inputs::integers)?,
                    };
                    report(ctx, |e| verify_certifiability(&cfg, e))
                }
                Theorem::Constant => {
                    let (n_min, n_max) = range((2, 40))?;
                    let cfg = ConstantSeqConfig {
                        n_min,
                        n_max,
                        fields: field_list()?,
                        c: c.unwrap_or(1),
                        samples: trials.unwrap_or(3),
                        seed: ctx.seed,
                    };
                    report(ctx, |e| verify_constant_seq(&cfg, e))
                }
                Theorem::Ffbound => {
                    let (n_min, n_max) = range((1, 6))?;
                    let source = source()?
                        .unwrap_or_else(|| SequenceSource::Integers(inputs::natural_nonzero(field, n_max)));
                    let cfg = FiniteFieldConfig { n_min, n_max, field, source, seed: ctx.seed, shards };
                    report(ctx, |e| verify_finite_field_bound(&cfg, e))
                }
                Theorem::FEnsemble => {
                    let n = single_n(4);
                    let f = linear_f(field, alpha.as_deref().unwrap_or("1"), beta.as_deref().unwrap_or("0"))?;
                    let cfg = FEnsembleConfig {
                        a: seq_or_natural(seq.as_deref(), field, n)?,
                        f,
                        tournaments: tset(n)?,
                    };
                    report(ctx, |e| verify_f_ensemble(&cfg, e))
                }
            }
        }
        Command::Bisect { action } => bisect(ctx, action),
        Command::PermScan { tournament, seq, mode } => {
            let t = inputs::tournament(&tournament, ctx.seed)?;
            let a = seq_or_natural(seq.as_deref(), field, t.n())?;
            let mode = match mode.as_str() {
                "all" => PermMode::All,
                s => match s.strip_prefix("sample:").and_then(|k| k.parse().ok()) {
                    Some(count) => PermMode::Sampled { count, seed: ctx.seed },
                    None => return Err(format!("bad --mode {s:?}; expected all or sample:<k>")),
                },
            };
            let cfg = PermScanConfig { t, a, mode };
            report(ctx, |e| perm_scan(&cfg, e))
        }
    }
}

fn bisect(ctx: &Ctx, action: BisectAction) -> Fallible<Outcome> {
    let load = |path: &str| SetFamily::parse(&inputs::read_file(path)?).map_err(|e| e.to_string());
    match action {
        BisectAction::Check { family } => {
            let f = load(&family)?;
            let v = check_bisecting(&f);
            let mut text = format!("bisecting: {}\n", v.bisecting);
            if let Some((i, j)) = v.witness {
                text.push_str(&format!("witness: sets {} and {}\n", i + 1, j + 1));
            } else {
                let g = gram_check(&f).map_err(|e| e.to_string())?;
                text.push_str(&format!("gram identities: {}\n", if g.pass { "pass" } else { "fail" }));
                if let Some(fail) = g.failure {
                    text.push_str(&format!(
                        "gram failure: entry ({}, {}) expected {} found {}\n",
                        fail.row + 1,
                        fail.col + 1,
                        fail.expected,
                        fail.found
                    ));
                    emit(ctx, &text)?;
                    return Ok(Outcome::Fail);
                }
            }
            emit(ctx, &text)?;
            if let Some((i, j)) = v.witness {
                eprintln!("violation: sets {} and {} do not bisect", i + 1, j + 1);
                return Ok(Outcome::Fail);
            }
            Ok(Outcome::Pass)
        }
        BisectAction::Matrix { family, c } => {
            let f = load(&family)?;
            let (m, a) = family_to_m(&f).map_err(|e| e.to_string())?;
            let sizes: Vec<String> = a.values().iter().map(format_scalar).collect();
            eprintln!("# a: {}", sizes.join(","));
            if let Some(c) = c {
                let c = parse_scalar(FieldSpec::rationals(), &c).map_err(|e| format!("--c: {e}"))?;
                let r = size_bound_report(&f, c.as_ratio().expect("rational")).map_err(|e| e.to_string())?;
                eprintln!("# size bound: {}", serde_json::to_string(&r).expect("json"));
            }
            emit(ctx, &m.to_csv())?;
            Ok(Outcome::Pass)
        }
    }
}

fn linear_f(field: FieldSpec, alpha: &str, beta: &str) -> Fallible<LinearF> {
    let alpha = parse_scalar(field, alpha).map_err(|e| format!("--alpha: {e}"))?;
    let beta = parse_scalar(field, beta).map_err(|e| format!("--beta: {e}"))?;
    LinearF::new(alpha, beta).map_err(|e| e.to_string())
}

fn seq_or_natural(seq: Option<&str>, field: FieldSpec, n: usize) -> Fallible<SeqA> {
    match seq {
        Some(s) => inputs::sequence(s, field, n),
        None => SeqA::from_i64s(field, &inputs::natural_nonzero(field, n)).map_err(|e| e.to_string()),
    }
}

fn report(
    ctx: &Ctx,
    run: impl FnOnce(Exec) -> Result<Report, ExperimentError>,
) -> Fallible<Outcome> {
    let start = Instant::now();
    let mut report = run(ctx.exec).map_err(|e| e.to_string())?;
    if ctx.timing {
        report.summary.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = match ctx.format {
        Format::Json => report.to_json(ctx.full_records),
        Format::Csv => report.to_csv(),
    };
    emit(ctx, &text)?;
    let s = &report.summary;
    eprintln!(
        "# result: {} ({} records, {} violations{})",
        if s.pass { "pass" } else { "FAIL" },
        s.records,
        s.violations,
        if s.vacuous { ", vacuous" } else { "" }
    );
    for r in &s.refused {
        eprintln!("# refused: {r}");
    }
    match &s.first_violation {
        None => Ok(Outcome::Pass),
        Some(v) => {
            eprintln!("violation: {}", serde_json::to_string(v).expect("json"));
            Ok(Outcome::Fail)
        }
    }
}

fn emit(ctx: &Ctx, text: &str) -> Fallible<()> {
    match &ctx.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}
