//! End-to-end tests against the compiled binary: output schemas, exit codes,
//! determinism, and codec round trips through real files.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ltientropy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ltientropy-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bounds_csv_single_point() {
    let out = run(&["bounds", "-a", "1", "-b", "1", "--eps", "0.1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eps,log2_packing,log2_covering,closed_form_lower,closed_form_upper,asymptotic,ratio_lower,ratio_upper"
    );
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row[0], 0.1);
    assert!((row[1] - 80f64.log2()).abs() < 1e-12);
    assert!((row[2] - 105_600f64.log2()).abs() < 1e-12);
    // bracket ordering straight off the CSV
    assert!(row[3] <= row[1] && row[1] <= row[2] && row[2] <= row[4]);
}

#[test]
fn bounds_json_schema() {
    let out = run(&[
        "bounds", "-a", "1", "-b", "1", "--eps", "0.1:0.001:4", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // sweep is emitted coarse-to-fine (endpoints pass through exp(ln(.)))
    assert!((rows[0]["eps"].as_f64().unwrap() - 0.1).abs() < 1e-15);
    for row in rows {
        assert!(row["ratio_lower"].as_f64().unwrap() <= row["ratio_upper"].as_f64().unwrap());
    }
}

#[test]
fn bounds_deterministic_bytes() {
    let a = run(&["bounds", "-a", "2", "-b", "0.5", "--eps", "0.2:0.0002:7"]);
    let b = run(&["bounds", "-a", "2", "-b", "0.5", "--eps", "0.2:0.0002:7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bounds_output_file_and_env_fallback() {
    let path = temp_path("bounds.csv");
    let out = run(&[
        "bounds", "-a", "1", "-b", "1", "--eps", "0.1", "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("eps,"));

    let env_path = temp_path("bounds-env.csv");
    let out = bin()
        .args(["bounds", "-a", "1", "-b", "1", "--eps", "0.1"])
        .env("LTIENTROPY_OUTPUT", &env_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&env_path).unwrap(), text);
}

#[test]
fn pack_verify_and_elements() {
    let out = run(&["pack", "-a", "1", "-b", "1", "--eps", "0.1", "--verify"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // rows are (t, n_t, delta_t) for t = 0..=C1
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("0,9,"));

    let out = run(&["pack", "-a", "1", "-b", "1", "--eps", "0.1", "--elements"]);
    assert!(out.status.success());
    // 80 element rows follow the 4 table rows
    assert_eq!(stdout(&out).lines().count(), 4 + 80);
}

#[test]
fn cover_verify() {
    let out = run(&[
        "cover", "-a", "1", "-b", "1", "--eps", "0.1", "--verify", "--samples", "200",
        "--seed", "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "t,n_t,delta_t");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn element_listing_gated_by_cardinality() {
    let out = run(&["pack", "-a", "1", "-b", "1", "--eps", "0.0001", "--elements"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_configuration_exits_2() {
    // eps >= a is not admissible
    let out = run(&["pack", "-a", "1", "-b", "1", "--eps", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bounds", "-a", "-1", "-b", "1", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_decode_round_trip() {
    let input = temp_path("k.csv");
    fs::write(&input, "0.5\n-0.2\n0.1\n").unwrap();
    let stream = temp_path("k.bin");
    let out = run(&[
        "encode", "-a", "1", "-b", "1", "--eps", "0.1", "-i",
        input.to_str().unwrap(), "-o", stream.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // 25-byte header + ceil(17 / 8) payload bytes
    assert_eq!(fs::metadata(&stream).unwrap().len(), 28);

    let recon_path = temp_path("k-out.csv");
    let out = run(&[
        "decode", "-i", stream.to_str().unwrap(), "-o", recon_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let recon: Vec<f64> = fs::read_to_string(&recon_path)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(recon.len(), 4); // support 0..=C2
    for (orig, r) in [0.5, -0.2, 0.1, 0.0].iter().zip(&recon) {
        assert!((orig - r).abs() <= 0.1, "coefficient drifted: {orig} vs {r}");
    }
}

#[test]
fn encode_accepts_json_array() {
    let input = temp_path("k.json");
    fs::write(&input, "[0.5, -0.2, 0.1]\n").unwrap();
    let stream = temp_path("k-json.bin");
    let out = run(&[
        "encode", "-a", "1", "-b", "1", "--eps", "0.1", "-i",
        input.to_str().unwrap(), "-o", stream.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // identical input through the CSV path yields the identical stream
    let csv = temp_path("k-same.csv");
    fs::write(&csv, "0.5\n-0.2\n0.1\n").unwrap();
    let stream2 = temp_path("k-csv.bin");
    let out = run(&[
        "encode", "-a", "1", "-b", "1", "--eps", "0.1", "-i",
        csv.to_str().unwrap(), "-o", stream2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&stream).unwrap(), fs::read(&stream2).unwrap());
}

#[test]
fn non_member_input_exits_3() {
    let input = temp_path("bad.csv");
    fs::write(&input, "0.1\n0.9\n").unwrap(); // 0.9 > e^{-1}
    let out = run(&[
        "encode", "-a", "1", "-b", "1", "--eps", "0.1", "-i",
        input.to_str().unwrap(), "-o", temp_path("bad.bin").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corrupt_stream_exits_4() {
    let input = temp_path("ok.csv");
    fs::write(&input, "0.5\n").unwrap();
    let stream = temp_path("ok.bin");
    let out = run(&[
        "encode", "-a", "1", "-b", "1", "--eps", "0.1", "-i",
        input.to_str().unwrap(), "-o", stream.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // truncated header
    let bytes = fs::read(&stream).unwrap();
    let truncated = temp_path("trunc.bin");
    fs::write(&truncated, &bytes[..10]).unwrap();
    let out = run(&["decode", "-i", truncated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    // wrong version byte
    let mut flipped = bytes.clone();
    flipped[0] = 0x7f;
    let bad_version = temp_path("badver.bin");
    fs::write(&bad_version, &flipped).unwrap();
    let out = run(&["decode", "-i", bad_version.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn oracle_sandwich_all_ok() {
    let out = run(&["oracle", "--max-t", "1", "--levels", "3", "--eps-points", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "t_max,levels,eps,m_2eps,n_eps,m_eps,ok");
    assert_eq!(text.lines().count(), 7);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",true"), "oracle row failed: {line}");
    }
}
