use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymdl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn paper_example_trace() {
    let o = run(&["decode", "--family", "block", "--preset", "paper-example"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("eps = (0,-2,0,-2,1)"), "{text}");
    assert_eq!(text.lines().last(), Some("0100101001"));
}

#[test]
fn verify_single_exits_zero() {
    let o = run(&["verify", "--family", "single", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verified"], true);
}

#[test]
fn corrupt_is_deterministic() {
    let args = ["corrupt", "--seed", "7", "--t", "2", "--s-plus", "1", "0111010100"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupt_requires_seed() {
    assert_eq!(run(&["corrupt", "0101"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["decode", "0101"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["decode", "--family", "single", "--n", "6", "01x"]).status.code(), Some(2));
}

#[test]
fn decode_failure_exits_one() {
    // a word two deletions short cannot be decoded by the single code
    let o = run(&["decode", "--family", "single", "--n", "6", "--residues", "23", "0101"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn single_round_trip_through_cli() {
    let o = run(&["decode", "--family", "single", "--n", "6", "--residues", "23", "01010"]);
    assert_eq!(stdout(&o).trim(), "010100");
}

#[test]
fn systematic_encode_corrupt_decode() {
    let enc = run(&["encode", "--t-b", "1", "--ell", "2", "--s", "1", "1011001110"]);
    assert_eq!(enc.status.code(), Some(0));
    let word = stdout(&enc).trim().to_string();
    let bad = run(&["corrupt", "--family", "block", "--t-b", "1", "--ell", "2", "--s", "1", "--seed", "3", &word]);
    let y = stdout(&bad).trim().to_string();
    let dec = run(&[
        "decode", "--family", "block", "--systematic", "--k", "10", "--t-b", "1", "--ell", "2", "--s", "1", &y,
    ]);
    assert_eq!(dec.status.code(), Some(0));
    assert_eq!(stdout(&dec).trim(), "1011001110");
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("asymdl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"family": "single", "n": 12}"#).unwrap();
    let out = dir.join("codebook.txt");
    let o = run(&[
        "gen", "--config", cfg.to_str().unwrap(), "--n", "8", "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let words = std::fs::read_to_string(&out).unwrap();
    assert!(words.lines().count() > 0);
    assert!(words.lines().all(|w| w.len() == 8));
}

#[test]
fn list_decode_prints_candidates() {
    let o = run(&["decode", "--family", "list", "--n", "8", "--t", "1", "--s-plus", "1", "--p", "11", "0101101"]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
    assert!(stdout(&o).lines().all(|w| w.len() == 8));
}

#[test]
fn bounds_report_json() {
    let o = run(&["bounds", "--n", "16", "--t", "1", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["upper_size"], 2048.0);
    assert_eq!(r["asymptotic_informational"], true);
}
