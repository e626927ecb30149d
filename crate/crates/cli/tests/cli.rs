use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tournarank"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_then_rank_over_gf2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d3_111.csv");
    let o = run(&["build", "--tournament", "reverse-transitive:3", "--seq", "1,1,1", "--out", path_str(&csv)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "field=Q,rows=3,cols=3\n0,1,1\n1,0,1\n1,1,0\n");

    let o = run(&["rank", "--matrix", path_str(&csv), "--field", "GF(2)"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["field"], "GF(2)");

    let o = run(&["rank", "--matrix", path_str(&csv), "--format", "csv"]);
    assert_eq!(stdout(&o), "field,rows,cols,rank,pivot_columns\nQ,3,3,3,0 1 2\n");
}

#[test]
fn config_is_echoed_before_results() {
    let o = run(&["verify", "--theorem", "constant", "--n-range", "2..6"]);
    assert!(o.status.success());
    let err = stderr(&o);
    let seed_line = err.lines().find(|l| l.starts_with("# seed: ")).expect("seed echoed");
    assert!(seed_line["# seed: ".len()..].parse::<u64>().is_ok());
    assert!(err.contains("# field: Q"));
    assert!(err.find("# seed").unwrap() < err.find("# result").unwrap());
}

#[test]
fn transitive_verification_passes() {
    let o = run(&["verify", "--theorem", "transitive", "--field", "Q", "--n-range", "3..30", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["parameters"]["seed"], "7");
}

#[test]
fn every_theorem_runs() {
    let cases: &[&[&str]] = &[
        &["verify", "--theorem", "reversal", "--n", "4"],
        &["verify", "--theorem", "reversal", "--n", "4", "--field", "GF(2)"],
        &["verify", "--theorem", "lipschitz", "--n", "6", "--trials", "50"],
        &["verify", "--theorem", "certify", "--n-range", "2..4", "--fields", "GF(3),Q"],
        &["verify", "--theorem", "ffbound", "--field", "GF(3)", "--n-range", "1..4", "--shards", "3"],
        &["verify", "--theorem", "f-ensemble", "--alpha", "5", "--beta", "-4"],
        &["minrank", "--n", "4", "--field", "GF(5)", "--conjecture-c", "1/2"],
        &["montecarlo", "--n", "20", "--samples", "10", "--field", "GF(3)", "--seq", "1,2"],
        &["perm-scan", "--tournament", "paley:7", "--mode", "sample:20"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["summary"]["pass"], true, "{args:?}");
    }
}

#[test]
fn char_two_refusal_is_reported() {
    let o = run(&["verify", "--theorem", "reversal", "--n", "4", "--field", "GF(2)"]);
    assert!(stderr(&o).contains("# refused: rank checks refused"));
}

#[test]
fn output_bytes_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "8"] {
        let out = dir.path().join(format!("mc{workers}.json"));
        let o = run(&[
            "montecarlo", "--n", "30", "--samples", "40", "--field", "GF(3)", "--seq", "1,2", "--seed", "5",
            "--workers", workers, "--full-records", "--out", path_str(&out),
        ]);
        assert!(o.status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    // and a repeat with the same seed is identical too
    let again = dir.path().join("again.json");
    run(&[
        "montecarlo", "--n", "30", "--samples", "40", "--field", "GF(3)", "--seq", "1,2", "--seed", "5",
        "--full-records", "--out", path_str(&again),
    ]);
    assert_eq!(std::fs::read(&again).unwrap(), outputs[0]);
}

#[test]
fn bisect_commands() {
    let dir = tempfile::tempdir().unwrap();
    let star = dir.path().join("star5.txt");
    std::fs::write(&star, "n=5\n1 2\n1 3\n1 4\n1 5\n").unwrap();
    let o = run(&["bisect", "check", "--family", path_str(&star)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("bisecting: true\n"));

    let o = run(&["bisect", "matrix", "--family", path_str(&star), "--c", "1/2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "field=Q,rows=4,cols=4\n0,2,2,2\n2,0,2,2\n2,2,0,2\n2,2,2,0\n");
    assert!(stderr(&o).contains("# a: 2,2,2,2"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "n=4\n1 2\n3 4\n").unwrap();
    let o = run(&["bisect", "check", "--family", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("bisecting: false"));
    assert!(stderr(&o).contains("violation: sets 1 and 2"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--theorem", "bogus"][..],
        &["verify", "--theorem", "f-ensemble", "--alpha", "1", "--beta", "-1"],
        &["verify", "--theorem", "transitive", "--n-range", "2..5"],
        &["minrank", "--n", "12"],
        &["build", "--tournament", "paley:5", "--seq", "1"],
        &["perm-scan", "--tournament", "transitive:10"],
        &["rank", "--matrix", "/nonexistent/m.csv"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn zero_block_value_is_rejected() {
    let o = run(&["verify", "--theorem", "certify", "--fields", "GF(3)", "--z", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("z = 3 is zero in GF(3)"));
}

#[test]
fn csv_reports() {
    let o = run(&["verify", "--theorem", "reversal", "--n", "3", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("id,check,rank,bound,pass,detail\n"));
    assert_eq!(out.lines().count(), 1 + 8 * 4);
}
