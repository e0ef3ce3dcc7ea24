use std::process::{Command, Output};

use serde_json::Value;
use twistforge::family::FamilyCurve;
use twistforge::twist::TwistCertificate;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistforge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_code(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("error json on stderr");
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn construct_e10() {
    let o = run(&["family", "construct", "-m", "1", "-n", "0", "--sign", "minus"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["delta"], "-182");
    assert_eq!(v["H"], "-15663");
    assert_eq!(v["bad_primes"].as_array().unwrap().len(), 3);
    let c: FamilyCurve = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(c.conductor, 182.into());
}

#[test]
fn rejections_exit_two() {
    let o = run(&["family", "construct", "-m", "1", "-n", "1", "--sign", "minus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "NotSquarefree");
    let o = run(&["family", "construct", "-m", "3", "--sign", "minus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "DisallowedM");
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(run(&["family", "frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["twist", "check", "-m", "1", "--sign", "minus"]).status.code(), Some(3));
    assert_eq!(run(&["density", "--format", "xml"]).status.code(), Some(3));
}

#[test]
fn sieve_csv() {
    let o = run(&["family", "sieve", "-m", "1", "--sign", "minus", "--n-max", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,sign,n"));
    let ns: Vec<u64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(&ns[..4], &[0, 3, 4, 6]);
    assert!(!ns.contains(&1) && !ns.contains(&2));
    assert!(!text.contains('\r'));
}

#[test]
fn twist_check_229() {
    let o = run(&["twist", "check", "-m", "1", "-n", "0", "--sign", "minus", "-d", "229"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"]["class_number_3free"], false);
    assert_eq!(v["narrow_class_number"], 3);
    assert_eq!(v["selmer3"], Value::Null);
    assert_eq!(v["d"], "229");

    let o = run(&["twist", "check", "-m", "1", "--sign", "minus", "-d", "4"]);
    let c: TwistCertificate = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!c.checks.squarefree);
}

#[test]
fn enumerate_stream_is_sorted_with_footer() {
    let o = run(&["twist", "enumerate", "-m", "1", "-n", "0", "--sign", "minus", "--x-max", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let (footer, body) = lines.split_last().unwrap();
    let ds: Vec<i64> = body
        .iter()
        .map(|l| serde_json::from_str::<TwistCertificate>(l).unwrap().d)
        .collect();
    assert!(ds.windows(2).all(|w| w[0] < w[1]));
    assert!(ds.contains(&229) && !ds.contains(&61));
    let f: Value = serde_json::from_str(footer).unwrap();
    assert_eq!(f["summary"]["candidates"], body.len());
    let empty = run(&["twist", "enumerate", "-m", "1", "--sign", "minus", "--x-max", "0"]);
    assert_eq!(stdout(&empty).lines().count(), 1);
}

#[test]
fn thread_env_and_flag_agree() {
    let args = ["twist", "enumerate", "-m", "7", "--sign", "minus", "--x-max", "50000", "--format", "csv"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_twistforge"))
        .args(args)
        .env("TWISTFORGE_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("d,positive,squarefree,"));
}

#[test]
fn density_report() {
    let o = run(&["density", "-m", "1", "-n", "0", "--sign", "minus", "--x-max", "100000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let bound = v["taya_bound_decimal"].as_f64().unwrap();
    assert!((bound - 3.573e-4).abs() < 1e-6);
    assert_eq!(v["taya_bound"]["numerator"], "65");
    assert_eq!(v["taya_bound"]["pi_power"], -2);
    assert_eq!(v["checkpoints"].as_array().unwrap().len(), 2);

    let o = run(&["density", "--sieve-constant", "-m", "1"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.8516).abs() < 0.005);
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out.csv");
    std::fs::write(&cfg, "m = 1\nn = 0\nsign = \"minus\"\nx_max = 10000\nformat = \"csv\"\n").unwrap();
    let o = run(&["density", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,congruence_count,"));
    assert_eq!(text.lines().count(), 2);

    std::fs::write(&cfg, "m = 1\nunknown_knob = 3\n").unwrap();
    let o = run(&["density", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_code(&o), "Config");
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--suite", "split-classification", "--l-max", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("E[m=1,n=0,minus]"));
    assert!(text.contains("all suites agree"));

    let o = run(&["verify", "--suite", "class-numbers", "--disc-max", "200", "--inject-fault", "class-numbers"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("injected fault"));

    let o = run(&["verify", "--suite", "twist-splitting", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], true);
}
