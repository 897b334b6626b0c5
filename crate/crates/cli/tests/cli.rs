use std::path::Path;
use std::process::{Command, Output};

use ihm_cli::{BoundsReport, ExtremalReport, GcdReport};
use ihm_core::search::{checkpoint_save, Checkpoint, SearchReport};

fn ihm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihm"))
        .args(args)
        .env_remove("IHM_WORKERS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> &str {
    std::str::from_utf8(&o.stdout).unwrap()
}

#[test]
fn verify_small_n() {
    let o = ihm(&["verify", "--n", "3"]);
    assert_eq!(code(&o), 0);
    let r: SearchReport = serde_json::from_str(stdout(&o)).unwrap();
    assert!(r.conjecture_holds && r.unique_argmin);
    assert_eq!(
        (r.total_scanned, r.argmin_indices.as_slice()),
        (8, &[5u64][..])
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("progress: 1/1 blocks"));
}

#[test]
fn invalid_flags_exit_two() {
    for args in [
        &["verify", "--n", "0"][..],
        &["verify", "--n", "10"],
        &["verify", "--n", "9"],
        &["verify", "--n", "3", "--tol", "0"],
        &["verify", "--n", "3", "--workers", "0"],
        &["verify", "--n", "3", "--block-size", "0"],
        &["verify", "--n", "3", "--format", "xml"],
        &["verify"],
        &["extremal", "--n", "0"],
        &["extremal", "--n", "65"],
        &["bounds", "--n-max", "1"],
        &["bounds", "--n-max", "3", "--checkpoint", "x.json"],
        &["gcd-check", "--set", "1,2,2"],
        &["gcd-check", "--set", "0,1"],
        &["gcd-check", "--set", "1,2", "--eps", "-1"],
        &["frobnicate"],
    ] {
        let o = ihm(args);
        assert_eq!(
            code(&o),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn workers_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ihm"))
        .args(["verify", "--n", "4"])
        .env("IHM_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_ihm"))
        .args(["verify", "--n", "4"])
        .env("IHM_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn checkpoint_rejection_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n7.json");
    checkpoint_save(&path, &Checkpoint::new(7, 1 << 20)).unwrap();
    let o = ihm(&["verify", "--n", "8", "--checkpoint", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(&corrupt, "not json").unwrap();
    assert_eq!(
        code(&ihm(&[
            "verify",
            "--n",
            "4",
            "--checkpoint",
            corrupt.to_str().unwrap()
        ])),
        3
    );
}

#[test]
fn interrupted_run_resumes_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let ck = ck.to_str().unwrap();
    let leg = ihm(&[
        "verify",
        "--n",
        "5",
        "--block-size",
        "64",
        "--checkpoint",
        ck,
        "--max-blocks",
        "3",
    ]);
    assert_eq!(code(&leg), 4);
    assert!(leg.stdout.is_empty());
    let done = ihm(&[
        "verify",
        "--n",
        "5",
        "--block-size",
        "64",
        "--checkpoint",
        ck,
    ]);
    assert_eq!(code(&done), 0);
    let resumed: SearchReport = serde_json::from_str(stdout(&done)).unwrap();
    let straight: SearchReport =
        serde_json::from_str(stdout(&ihm(&["verify", "--n", "5", "--block-size", "64"]))).unwrap();
    assert_eq!(resumed.argmin_indices, straight.argmin_indices);
    assert_eq!(resumed.c_n_estimate, straight.c_n_estimate);
    assert_eq!(resumed.total_scanned, 1024);
}

#[test]
fn uniqueness_command() {
    for n in ["2", "4"] {
        let o = ihm(&["uniqueness", "--n", n, "--prune"]);
        assert_eq!(code(&o), 0);
        let r: SearchReport = serde_json::from_str(stdout(&o)).unwrap();
        assert!(r.unique_argmin);
    }
}

#[test]
fn extremal_reports() {
    let o = ihm(&["extremal", "--n", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: ExtremalReport = serde_json::from_str(stdout(&o)).unwrap();
    let expected: Vec<Vec<String>> = [[3, -2, 1], [-2, 2, -1], [1, -1, 1]]
        .iter()
        .map(|row| row.iter().map(i64::to_string).collect())
        .collect();
    assert_eq!(r.z0_inverse, expected);

    let r: ExtremalReport = serde_json::from_str(stdout(&ihm(&["extremal", "--n", "1"]))).unwrap();
    assert_eq!(r.y0, vec![vec!["1".to_string()]]);
    assert_eq!(r.lambda_min, 1.0);

    let o = ihm(&["extremal", "--n", "20"]);
    assert_eq!(code(&o), 0);
    let r: ExtremalReport = serde_json::from_str(stdout(&o)).unwrap();
    assert!(r.all_checks_pass() && r.trace_equality == Some(true));

    let r: ExtremalReport = serde_json::from_str(stdout(&ihm(&["extremal", "--n", "45"]))).unwrap();
    let big: i128 = r.z0_inverse[0][0].parse().unwrap();
    assert!(big > 1i128 << 53, "entries past 2^53 survive as strings");
}

#[test]
fn bounds_table() {
    let o = ihm(&["bounds", "--n-max", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,c_n,mattila_general,mattila_parity,holds")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",true")));

    let r: BoundsReport = serde_json::from_str(stdout(&ihm(&["bounds", "--n-max", "2"]))).unwrap();
    assert_eq!(r.rows.len(), 1);
    let row = &r.rows[0];
    assert!((row.c_n.unwrap() - 0.381_966).abs() < 1e-6);
    assert!((row.mattila_general - 0.377_964).abs() < 1e-6);
    assert_eq!(row.holds, Some(true));

    let r: BoundsReport = serde_json::from_str(stdout(&ihm(&["bounds", "--n-max", "12"]))).unwrap();
    assert!(r.rows.iter().all(|row| row.holds == Some(true)));
}

#[test]
fn gcd_check_reports() {
    let o = ihm(&["gcd-check", "--set", "1,2,3,4,6,12"]);
    assert_eq!(code(&o), 0);
    let r: GcdReport = serde_json::from_str(stdout(&o)).unwrap();
    let smith = r.smith.unwrap();
    assert_eq!((smith.det.as_str(), smith.equal), ("32", true));
    assert!(r.hong_loewy.holds && r.c_n_exhaustive);

    let o = ihm(&["gcd-check", "--set", "2,4,6,8", "--eps", "2"]);
    assert_eq!(code(&o), 0);
    let r: GcdReport = serde_json::from_str(stdout(&o)).unwrap();
    assert!(r.hong_loewy.holds);
    assert!(r.smith.is_none() && r.smith_skipped.unwrap().contains("1 divides 2"));
}

#[test]
fn reports_round_trip_and_stay_off_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = ihm(&[
        "verify",
        "--n",
        "4",
        "--block-size",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr)
        .lines()
        .all(|l| l.starts_with("progress:")));
    let text = std::fs::read_to_string(&out).unwrap();
    let r: SearchReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    assert_eq!(
        serde_json::from_str::<SearchReport>(&serde_json::to_string(&r).unwrap()).unwrap(),
        r
    );

    let o = ihm(&["extremal", "--n", "6"]);
    let r: ExtremalReport = serde_json::from_str(stdout(&o)).unwrap();
    assert_eq!(
        serde_json::from_str::<ExtremalReport>(&serde_json::to_string(&r).unwrap()).unwrap(),
        r
    );
    assert!(Path::new(&out).exists());
}

#[test]
fn text_and_csv_formats() {
    let o = ihm(&["verify", "--n", "3", "--format", "text"]);
    assert!(stdout(&o).contains("conjecture holds   true"));
    let o = ihm(&["verify", "--n", "3", "--format", "csv"]);
    assert!(stdout(&o).starts_with("n,total_scanned,c_n_estimate,argmin_indices"));
    let o = ihm(&["gcd-check", "--set", "1,2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 2);
}
