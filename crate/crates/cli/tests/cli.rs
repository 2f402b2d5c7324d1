use std::process::{Command, Output};

use meanslab::report::{read_csv, read_json_lines, FIELDS};

fn meanslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meanslab"))
        .args(args)
        .env_remove("MEANSLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = meanslab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn eval_arithmetic() {
    assert_eq!(stdout(&["eval", "--mean", "arithmetic", "--a", "1", "--b", "3"]), "2\n");
}

#[test]
fn eval_prints_round_trip_digits() {
    let text = stdout(&["eval", "--mean", "neuman-sandor", "--a", "3", "--b", "1"]);
    let value: f64 = text.trim().parse().unwrap();
    assert!(text.starts_with("2.0780869"));
    assert_eq!(value, meanslab::means::neuman_sandor(meanslab::PositivePair::new(3.0, 1.0).unwrap()));
    assert!(text.trim().len() >= 16);
}

#[test]
fn constants_list_the_kernel_endpoint() {
    let text = stdout(&["constants"]);
    assert_eq!(text.lines().count(), meanslab::sharp_constants().len());
    let line = text.lines().find(|l| l.starts_with("m-over-ch.lower")).unwrap();
    assert!(line.contains("0.567296"), "{line}");
    assert!(line.contains("ln(1+sqrt(2))"));
}

#[test]
fn p0_prints_root_and_residual() {
    let text = stdout(&["p0"]);
    assert!(text.starts_with("1.843"));
    assert!(text.lines().nth(1).unwrap().starts_with("residual "));
}

#[test]
fn exit_statuses() {
    assert_eq!(meanslab(&["bogus"]).status.code(), Some(2));
    assert_eq!(meanslab(&["eval", "--mean", "arithmetic", "--a", "-1", "--b", "3"]).status.code(), Some(2));
    assert_eq!(meanslab(&["eval", "--mean", "nope", "--a", "1", "--b", "3"]).status.code(), Some(2));
    assert_eq!(meanslab(&["--samples", "0", "verify-all"]).status.code(), Some(2));
    assert_eq!(meanslab(&["--depth", "0", "series-check"]).status.code(), Some(2));
    assert_eq!(meanslab(&["verify", "--record", "nope"]).status.code(), Some(2));
    assert_eq!(meanslab(&["sharpness", "--epsilon", "-1"]).status.code(), Some(2));
    assert_eq!(meanslab(&["verify", "--record", "ky-fan", "--a", "0.7", "--b", "0.1"]).status.code(), Some(2));
}

#[test]
fn verification_failure_exits_one() {
    // a tightening far below one ulp cannot be violated, so the probe fails
    let out = meanslab(&["sharpness", "--record", "ch-ratio", "--epsilon", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(meanslab(&["verify", "--record", "ch-ratio", "--a", "3", "--b", "1"]).status.code(), Some(0));
}

#[test]
fn same_seed_same_bytes() {
    let run = |seed: &str| {
        stdout(&["--seed", seed, "--samples", "2000", "--format", "json-lines", "verify-all"])
    };
    let first = run("7");
    assert_eq!(first, run("7"));
    assert_ne!(first, run("8"));
}

#[test]
fn seed_from_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_meanslab"))
        .args(["--samples", "500", "--format", "csv", "verify", "--record", "ch-ratio"])
        .env("MEANSLAB_SEED", "9")
        .output()
        .unwrap();
    let explicit = stdout(&["--seed", "9", "--samples", "500", "--format", "csv", "verify", "--record", "ch-ratio"]);
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), explicit);
    assert!(explicit.contains("seed=9"));
}

#[test]
fn csv_and_json_lines_carry_the_same_records() {
    for args in [
        &["--samples", "3000", "export", "verify-all"][..],
        &["export", "constants"],
        &["export", "series-check"],
        &["export", "scan", "--h", "3", "--points", "50"],
        &["export", "sharpness"],
        &["export", "p0"],
    ] {
        let json = stdout(args);
        let csv = stdout(&[&["--format", "csv"][..], args].concat());
        assert!(!json.contains('\r') && !csv.contains('\r'));
        let from_json = read_json_lines(json.as_bytes()).unwrap();
        let from_csv = read_csv(csv.as_bytes()).unwrap();
        assert!(!from_json.is_empty());
        assert_eq!(from_json, from_csv, "{args:?}");
        let first: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
        for f in FIELDS {
            assert!(first.get(f).is_some(), "{args:?} lacks {f}");
        }
        assert!(csv.starts_with("id,kind,inputs,values,margins,pass\n"));
    }
}

#[test]
fn export_writes_to_a_file() {
    let dir = std::env::temp_dir().join(format!("meanslab-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let path_text = path.to_str().unwrap();
    let printed = stdout(&["--output", path_text, "--format", "csv", "export", "scan", "--h", "1", "--points", "10"]);
    assert!(printed.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&["--format", "csv", "scan", "--h", "1", "--points", "10"]));
    let rows = read_csv(written.as_bytes()).unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[9].values[0], meanslab::ratio::THETA_STAR);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn series_check_reports_three_lemmas() {
    let text = stdout(&["--depth", "20", "series-check"]);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.ends_with("PASS")));
    assert!(text.contains("first_difference=-17/240"));
}
