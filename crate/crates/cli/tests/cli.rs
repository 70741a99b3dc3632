use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspmoment"))
        .args(args)
        .env_remove("CUSPMOMENT_THREADS")
        .output()
        .expect("spawn cuspmoment")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn moment_reports_parts() {
    let out = run(&["moment", "--l", "2", "--weight", "12"]);
    assert!(out.status.success());
    let v = json(&out);
    let row = &v[0];
    for key in ["value_re", "value_im", "main_term_1_re", "v1_re", "certified_tail", "cutoff"] {
        assert!(row.get(key).is_some(), "missing {key}");
    }
    let parts = row["main_term_1_re"].as_f64().unwrap()
        + row["main_term_2_re"].as_f64().unwrap()
        + 2.0 * std::f64::consts::PI * row["v1_re"].as_f64().unwrap();
    assert!((parts - row["value_re"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn average_main_term() {
    let out = run(&["average", "--l", "1", "--K", "64", "--theta1", "1", "--theta2", "2"]);
    assert!(out.status.success());
    let row = &json(&out)[0];
    let h = row["H"].as_f64().unwrap();
    assert!((row["main_term"].as_f64().unwrap() - 2.0 * h * 64.0 / 4.0).abs() < 1e-15);
}

#[test]
fn identities_exit_zero() {
    let out = run(&["identities"]);
    assert!(out.status.success());
    assert_eq!(json(&out).as_array().unwrap().len(), 7);
}

#[test]
fn bad_weight_is_config_error() {
    for args in [&["moment", "--l", "1", "--weight", "13"][..], &["moment", "--l", "0", "--weight", "12"][..]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2));
        let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["kind"], "config");
    }
}

#[test]
fn unknown_subcommand_is_config_error() {
    assert_eq!(run(&["nope"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "csv", "sweep", "--l", "1,4", "--K", "32,64,128"];
    let a = run(&["--threads", "1"].iter().chain(args.iter()).copied().collect::<Vec<_>>());
    let b = run(&["--threads", "4"].iter().chain(args.iter()).copied().collect::<Vec<_>>());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_has_header() {
    let out = run(&["--format", "csv", "bg-scan", "--n", "50,100", "--theta", "1.0", "--m", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("n,theta"), "{header}");
    assert!(lines.count() >= 2);
}
