use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lettercost"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn bound(report: &serde_json::Value, name: &str) -> serde_json::Value {
    report["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["name"] == name)
        .unwrap()
        .clone()
}

const FIG2: &str = "0.3333333333333333,0.3333333333333333,0.16666666666666666,0.16666666666666666";

#[test]
fn root_values() {
    let c = json(&["root", "--costs", "finite:1,2"])["c"].as_f64().unwrap();
    assert!((c - (1.0 - (5f64.sqrt() - 1.0).log2())).abs() < 1e-9);
    let c = json(&["root", "--costs", "repeat:3"])["c"].as_f64().unwrap();
    assert!((c - 2.0).abs() < 1e-9);

    let out = run(&["root", "--costs", "balanced"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tail_convergent  false"));
    assert!(text.contains("warning"));
}

#[test]
fn code_figure_two() {
    let v = json(&["code", "--costs", "finite:1,3", "--inline", FIG2]);
    let words = v["codewords"].as_array().unwrap();
    assert_eq!(words.len(), 4);
    let report = &v["report"];
    let gap = report["cost"].as_f64().unwrap() - report["lower_bound"].as_f64().unwrap();
    let c = v["c"].as_f64().unwrap();
    let best = report["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|b| b["applicable"] == true)
        .filter_map(|b| b["value"].as_f64())
        .fold(f64::INFINITY, f64::min);
    assert!(gap >= 0.0 && gap <= best / c + 1e-7);
    assert!(v.get("trace").is_none());

    let traced = json(&["code", "--costs", "finite:1,3", "--inline", FIG2, "--trace"]);
    assert!(!traced["trace"]["nodes"].as_array().unwrap().is_empty());
}

#[test]
fn singleton_file_gets_first_letter() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# one symbol\n1.0").unwrap();
    let path = file.path().to_str().unwrap();
    let v = json(&["code", "--costs", "finite:1,2", "--probs", path]);
    let words = v["codewords"].as_array().unwrap();
    assert_eq!(words.len(), 1);
    assert_eq!(words[0]["letters"], serde_json::json!([0]));
}

#[test]
fn linear_zipf_reports_kbound() {
    let v = json(&["bounds", "--costs", "linear", "--gen", "zipf:1.0,1000"]);
    let k = bound(&v, "Lem_Kbound");
    assert_eq!(k["applicable"], true);
    assert!(v["nr"].as_f64().unwrap() <= k["value"].as_f64().unwrap() + 1e-7);
}

#[test]
fn compare_examples() {
    let v = json(&["compare", "--costs", "finite:1,3", "--inline", FIG2]);
    assert!((v["opt"].as_f64().unwrap() - 3.5).abs() < 1e-12);
    assert!(v["gap"].as_f64().unwrap() >= -1e-12);

    let v = json(&["compare", "--costs", "finite:1,1", "--gen", "dyadic:4"]);
    assert!((v["opt"].as_f64().unwrap() - 1.75).abs() < 1e-12);
    assert!((v["lower_bound"].as_f64().unwrap() - 1.75).abs() < 1e-12);

    let v = json(&["compare", "--costs", "finite:1,2", "--inline", "1"]);
    assert_eq!(v["gap"].as_f64().unwrap(), 0.0);

    let out = run(&["compare", "--costs", "finite:1,2,3", "--gen", "uniform:7", "--sweep", "40", "--seed", "9"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("violations        0"));
}

#[test]
fn bench_repeat_four() {
    let out = run(&["bench", "--costs", "repeat:4", "--gen", "zipf:1,10", "--sizes", "2,1e5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,seconds,cost,nr"));
    for line in lines {
        let nr: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(nr <= 3.0 + 5f64.log2() + 1e-7, "{line}");
    }
}

#[test]
fn json_is_deterministic() {
    let args = ["code", "--costs", "fib", "--gen", "uniform:60", "--seed", "42", "--format", "json", "--trace"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = run(&["code", "--costs", "fib", "--gen", "uniform:60", "--seed", "43", "--format", "json"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn normalize_flag() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "[2, 1, 1]").unwrap();
    let path = file.path().to_str().unwrap();
    let out = run(&["code", "--costs", "finite:1,1", "--probs", path]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&["code", "--costs", "finite:1,1", "--probs", path, "--normalize"]);
    assert!((v["report"]["cost"].as_f64().unwrap() - 1.5).abs() < 1e-12);
}

#[test]
fn errors_are_single_line_with_exit_codes() {
    let cases: [(&[&str], i32, &str); 6] = [
        (&["root", "--costs", "bogus"], 2, "parse"),
        (&["code", "--costs", "finite:1,1", "--probs", "/nonexistent/p.txt"], 2, "io"),
        (&["code", "--costs", "finite:1,1", "--inline", "0.5,abc"], 2, "usage"),
        (&["oracle", "--costs", "finite:1,1", "--gen", "uniform:11"], 4, "oracle-too-large"),
        (&["oracle", "--costs", "linear", "--gen", "uniform:3"], 4, "oracle-too-large"),
        (&["code", "--costs", "finite:1,1", "--inline", "0.5", "--gen", "uniform:3"], 2, "usage"),
    ];
    for (args, code, reason) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with(&format!("error[{reason}]")), "{err}");
    }
}
