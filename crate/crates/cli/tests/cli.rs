use std::fs;
use std::process::{Command, Output};

use qhe_otto::CSV_HEADER;

fn qhe_otto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhe-otto"))
        .args(args)
        .env_remove("QHE_OTTO_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fields(line: &str) -> Vec<String> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(line.as_bytes());
    r.records()
        .next()
        .unwrap()
        .unwrap()
        .iter()
        .map(String::from)
        .collect()
}

#[test]
fn cycle_prints_one_row() {
    let o = qhe_otto(&["cycle", "--tau", "1", "--ratio", "0.4"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    let row = fields(lines[1]);
    assert_eq!(row.len(), CSV_HEADER.len());
    assert_eq!(&row[..3], ["1", "0.4", "0.4"]);
    assert_eq!(row[6], "lz");
    let f1: f64 = row[10].parse().unwrap();
    assert!(f1 > 0.99 && f1 < 1.0);
    assert_eq!(row[21], "engine");
    assert_eq!(row[23], "");
}

#[test]
fn cycle_invariant_and_heat_form() {
    let base = [
        "cycle",
        "--tau",
        "1",
        "--ratio",
        "0.4",
        "--drive",
        "inv",
        "--A",
        "8",
        "--protocol",
        "sine",
    ];
    let o = qhe_otto(&base);
    assert_eq!(o.status.code(), Some(0));
    let derived = fields(stdout(&o).lines().nth(1).unwrap());
    assert_eq!(derived[7], "sine");
    assert_eq!(derived[8], "8");
    assert!(!derived[20].is_empty());

    let mut printed_args = base.to_vec();
    printed_args.extend(["--heat-form", "printed"]);
    let printed = fields(stdout(&qhe_otto(&printed_args)).lines().nth(1).unwrap());
    assert_eq!(derived[10], printed[10]);
    assert_ne!(derived[12], printed[12]);
}

#[test]
fn infeasible_cycle_exits_partial() {
    let o = qhe_otto(&[
        "cycle", "--tau", "0.05", "--ratio", "0.4", "--drive", "inv", "--A", "8",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let row = fields(stdout(&o).lines().nth(1).unwrap());
    assert!(row[10].is_empty());
    assert!(row[23].contains("radicand"), "{}", row[23]);
}

#[test]
fn usage_errors_are_fatal() {
    assert_eq!(
        qhe_otto(&["cycle", "--tau", "1", "--ratio", "0.4", "--drive", "inv"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qhe_otto(&["cycle", "--tau", "1", "--ratio", "1.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qhe_otto(&["sweep"]).status.code(), Some(1));
    assert_eq!(
        qhe_otto(&["sweep", "--preset", "fig9"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qhe_otto(&["sweep", "--config", "/nonexistent/sweep.cfg"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bad_config_reports_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "tau = 1\nratio = 0.3, 1.2\n").unwrap();
    let o = qhe_otto(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("ratio"), "{err}");
}

#[test]
fn sweep_to_file_matches_stdout_and_ignores_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "# small grid\ntau = 1, 1.5\nratio_linspace = 0.3, 0.9, 4\ndrive = lz, inv\nA = 12\nn = 2001\n").unwrap();
    let out = dir.path().join("s.csv");
    let o = qhe_otto(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--workers",
        "1",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let file = fs::read_to_string(&out).unwrap();
    assert_eq!(file.lines().count(), 1 + 2 * 4 * 2);

    let o = Command::new(env!("CARGO_BIN_EXE_qhe-otto"))
        .args(["sweep", "--config", cfg.to_str().unwrap()])
        .env("QHE_OTTO_WORKERS", "6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), file);
}

#[test]
fn invalid_worker_env_is_fatal() {
    let o = Command::new(env!("CARGO_BIN_EXE_qhe-otto"))
        .args(["sweep", "--preset", "fig2"])
        .env("QHE_OTTO_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn preset_with_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("o.cfg");
    fs::write(&cfg, "beta_ratio = 0.5\npoints = 3\n").unwrap();
    let o = qhe_otto(&[
        "sweep",
        "--preset",
        "fig2",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<String>> = text.lines().skip(1).map(fields).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1], "0.5");
    assert_eq!(rows[2][1], "1");
    for r in [&rows[0], &rows[2]] {
        assert_eq!(r[10], "1");
    }
    assert_eq!(rows[1][6], "none");
}
