//! End-to-end checks of the binary: golden-file schema regression,
//! determinism, exit codes, config round trip, and sweep fan-out.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ptcalogero"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should run")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("missing golden {name}: {e}"))
}

#[test]
fn simulate_matches_golden_csv() {
    let got = stdout_of(&[
        "simulate", "--omega", "1", "--gamma", "0.1", "--g", "-0.5", "--epsilon", "0", "--t-max",
        "1", "--samples", "5",
    ]);
    assert_eq!(got, golden("simulate.csv"));
}

#[test]
fn simulate_matches_golden_json() {
    let got = stdout_of(&[
        "simulate", "--omega", "1", "--gamma", "0.1", "--g", "-0.5", "--epsilon", "0", "--t-max",
        "1", "--samples", "5", "--format", "json",
    ]);
    assert_eq!(got, golden("simulate.json"));
}

#[test]
fn exact_matches_golden_csv() {
    let got = stdout_of(&[
        "exact", "--omega", "1", "--gamma", "0.3", "--g", "-0.5", "--a", "1", "--b", "1",
        "--t-max", "2", "--samples", "5",
    ]);
    assert_eq!(got, golden("exact.csv"));
}

#[test]
fn stability_matches_golden_csv() {
    let got = stdout_of(&["stability", "--omega", "1", "--gamma", "0"]);
    assert_eq!(got, golden("stability.csv"));
    // The conservative limit: numeric spectrum +-i and +-2i, while the
    // published closed form disagrees (flagged).
    assert!(got.contains("# discrepancy_flag = true"));
    assert!(got.contains("# classification = stable"));
}

#[test]
fn perturb_matches_golden_csv() {
    let got = stdout_of(&["perturb", "--omega", "1", "--t-max", "1", "--samples", "5"]);
    assert_eq!(got, golden("perturb.csv"));
    assert!(got.lines().any(|l| l == "t,x_num,y_num,x_pert,y_pert"));
}

#[test]
fn spectrum_matches_golden_csv() {
    let got = stdout_of(&[
        "spectrum", "--omega", "1", "--gamma", "0", "--g", "-0.5", "--levels", "3",
    ]);
    assert_eq!(got, golden("spectrum.csv"));
    // Ground state on the bounded-below branch: 1 + sqrt(2).
    assert!(got.contains("# e0_selected_re = 2.414213562373095"));
}

#[test]
fn spectrum_branch_flag_flips_selected_ground_state() {
    let minus = stdout_of(&["spectrum", "--omega", "1", "--gamma", "0", "--g", "-0.5"]);
    let plus = stdout_of(&[
        "spectrum", "--omega", "1", "--gamma", "0", "--g", "-0.5", "--branch", "plus",
    ]);
    assert!(minus.contains("# e0_selected_re = 2.414213562373095"));
    assert!(plus.contains("# e0_selected_re = -2.414213562373095"));
    assert!(plus.contains("# branch = plus"));
}

#[test]
fn wedges_matches_golden_json() {
    let got = stdout_of(&["wedges", "--gamma", "0.3", "--z1-0", "1"]);
    assert_eq!(got, golden("wedges.json"));
}

#[test]
fn identical_configs_are_byte_identical() {
    let args = [
        "simulate", "--omega", "1.1", "--gamma", "0.2", "--g", "-0.4", "--epsilon", "0.3",
        "--t-max", "3", "--samples", "11",
    ];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    let dump = stdout_of(&[
        "simulate",
        "--omega",
        "1.3",
        "--gamma",
        "0.25",
        "--g",
        "-0.7",
        "--epsilon",
        "-1.69",
        "--dump-config",
    ]);
    std::fs::write(&path, &dump).unwrap();
    let redump = stdout_of(&[
        "simulate",
        "--config",
        path.to_str().unwrap(),
        "--dump-config",
    ]);
    assert_eq!(dump, redump);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "omega = 1\ngamma = 0.5\nepsilon = 0\n").unwrap();
    let dump = stdout_of(&[
        "simulate",
        "--config",
        path.to_str().unwrap(),
        "--gamma",
        "0.125",
        "--dump-config",
    ]);
    assert!(dump.contains("gamma = 0.125"), "{dump}");
    assert!(dump.contains("omega = 1\n"));
}

#[test]
fn exit_codes() {
    // Missing required parameter -> usage error.
    let out = run(&["simulate"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("omega"), "stderr: {err}");

    // Unknown flag -> usage error from the parser.
    let out = run(&["simulate", "--omega", "1", "--epsilon", "0", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));

    // Computational failure -> 1.
    let out = run(&["spectrum", "--omega", "1", "--g", "0.7"]);
    assert_eq!(out.status.code(), Some(1));

    // Unknown config key -> usage error.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "omeega = 1\n").unwrap();
    let out = run(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Physical blow-up is a finding, not a failure.
    let out = run(&[
        "simulate",
        "--omega",
        "1",
        "--gamma",
        "0.75",
        "--g",
        "-0.5",
        "--epsilon",
        "-1",
        "--t-max",
        "300",
        "--samples",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# termination = blowup"), "{text}");
}

#[test]
fn charge_column_blank_outside_pair_harmonic_limit() {
    let text = stdout_of(&[
        "simulate", "--omega", "1", "--gamma", "0.1", "--g", "-0.5", "--epsilon", "0", "--t-max",
        "1", "--samples", "3",
    ]);
    let data_line = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .nth(1)
        .unwrap();
    assert!(data_line.ends_with(','), "Pi field not blank: {data_line}");
    assert!(text.contains("# pi_drift = n/a"));

    let text = stdout_of(&[
        "simulate", "--omega", "1", "--gamma", "0.1", "--g", "-0.5", "--epsilon", "-1", "--t-max",
        "1", "--samples", "3",
    ]);
    let data_line = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .nth(1)
        .unwrap();
    assert!(!data_line.ends_with(','), "Pi field missing: {data_line}");
}

#[test]
fn sweep_writes_one_file_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("run.csv");
    let out = run(&[
        "simulate",
        "--omega",
        "1",
        "--g",
        "-0.5",
        "--epsilon",
        "-1",
        "--t-max",
        "2",
        "--samples",
        "5",
        "--sweep",
        "gamma=0.1,0.2",
        "--output",
        base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    for tag in ["0p1", "0p2"] {
        let path = dir.path().join(format!("run_gamma_{tag}.csv"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains(&format!("# gamma = 0.{}", &tag[2..])));
    }

    // Sweep without --output is a usage error.
    let out = run(&[
        "simulate", "--omega", "1", "--epsilon", "0", "--sweep", "gamma=0.1,0.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wedges_rejects_csv_format() {
    let out = run(&["wedges", "--gamma", "0.1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_equals_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args = [
        "exact", "--omega", "1", "--gamma", "0.3", "--g", "-0.5", "--t-max", "1", "--samples",
        "3",
    ];
    let via_stdout = stdout_of(&args);
    let out = bin()
        .args(args)
        .arg("--output")
        .arg(path.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), via_stdout);
}
