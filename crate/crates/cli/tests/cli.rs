use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sobolev-qg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header comment lines and the CSV table of a report.
fn split_csv(text: &str) -> (Vec<String>, Vec<csv::StringRecord>) {
    let header: Vec<String> = text.lines().take_while(|l| l.starts_with("# ")).map(String::from).collect();
    let body: String = text.lines().skip(header.len()).map(|l| format!("{l}\n")).collect();
    let rows = csv::Reader::from_reader(body.as_bytes()).records().map(|r| r.unwrap()).collect();
    (header, rows)
}

fn note<'a>(header: &'a [String], key: &str) -> Option<&'a str> {
    let prefix = format!("# {key}: ");
    header.iter().find_map(|l| l.strip_prefix(&prefix))
}

#[test]
fn dims_rows() {
    let o = run(&["dims", "--group", "oplus:3", "--kmax", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (header, rows) = split_csv(&text);
    assert!(text.lines().any(|l| l == "k,n_k,s_k,b_k"));
    assert_eq!(rows.len(), 11);
    assert_eq!(&rows[3][1], "21");
    assert_eq!(&rows[3][2], "441");
    assert_eq!(&rows[3][3], "515");
    assert_eq!(note(&header, "command"), Some("dims --group oplus:3 --kmax 10 --format csv"));
    assert_eq!(note(&header, "seed"), Some("none"));
    assert!(note(&header, "version").is_some());
    assert!(note(&header, "thresholds").is_some());
}

#[test]
fn scan_ultra_free_group_dual_is_bounded() {
    let o = run(&["scan-ultra", "--group", "fdual:2", "--s", "3", "--tmin", "1e-3", "--tmax", "10", "--points", "60"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = split_csv(&stdout(&o));
    assert_eq!(note(&header, "verdict"), Some("bounded"));
    assert_eq!(rows.len(), 60);
    let expect = run(&["scan-ultra", "--group", "fdual:2", "--s", "2.8", "--expect", "bounded"]);
    assert_eq!(expect.status.code(), Some(1));
    let poly = run(&["scan-ultra", "--group", "oplus:2", "--s", "3"]);
    assert_eq!(poly.status.code(), Some(0));
}

#[test]
fn hausdorff_young_battery() {
    let args = ["verify", "hy", "--group", "oplus:3", "--p", "1.3333", "--trials", "200", "--seed", "7"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (header, rows) = split_csv(&text);
    assert_eq!(note(&header, "seed"), Some("7"));
    assert_eq!(note(&header, "verdict"), Some("holds"));
    assert_eq!(rows.len(), 200);
    for r in &rows {
        let ratio: f64 = r[3].parse().unwrap();
        assert!(ratio <= 1.0 + 1e-8, "{ratio}");
    }
    assert_eq!(text, stdout(&run(&args)), "rerun with the same seed differs");
    assert_ne!(text, stdout(&run(&["verify", "hy", "--group", "oplus:3", "--p", "1.3333", "--trials", "200", "--seed", "8"])));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["dims", "--group", "bogus:3"],
        vec!["dims", "--group", "oplus:1"],
        vec!["verify", "hy", "--group", "oplus:3", "--p", "2.5", "--trials", "3"],
        vec!["verify", "hy", "--group", "fdual:2", "--p", "1.5", "--trials", "3"],
        vec!["scan-ultra", "--group", "fdual:2", "--s", "3", "--tmin", "1e-2", "--tmax", "10"],
        vec!["fgnorm", "--m", "6"],
        vec!["norm", "--input", "/nonexistent/coeffs.json"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_is_one_document_with_header() {
    let o = run(&["rd-degree", "--group", "oplus:3", "--s", "1.5,1.6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["header"]["command"], "rd-degree --group oplus:3 --s 1.5,1.6 --format json");
    assert!(doc["header"]["seed"].is_null());
    assert!(doc["header"]["thresholds"]["trend_slope_max"].is_number());
    assert_eq!(doc["result"][0]["verdict"], "divergent");
    assert_eq!(doc["result"][1]["verdict"], "converges");
}

#[test]
fn output_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("fusion.csv");
    let o = run(&["fusion", "--group", "oplus:3", "--a", "2", "--b", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let (header, rows) = split_csv(&std::fs::read_to_string(&path).unwrap());
    let labels: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(labels, ["1", "3", "5"]);
    assert_eq!(note(&header, "product_dimension"), Some("168"));
    let dims: u64 = rows.iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(dims, 168);
    let free = run(&["fusion", "--group", "fdual:2", "--a", "ab", "--b", "Ba"]);
    assert_eq!(split_csv(&stdout(&free)).1[0][0].to_string(), "a a");
    let lattice = run(&["fusion", "--group", "zd:2", "--a", "1,-2", "--b", "3,4"]);
    assert_eq!(split_csv(&stdout(&lattice)).1[0][0].to_string(), "(4,2)");
}

#[test]
fn norm_of_character_document() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("chi1.json");
    std::fs::write(&path, r#"{"group":"oplus:4","coeffs":[{"label":1,"block":{"character":[1.0,0.0]}}]}"#).unwrap();
    let o = run(&["norm", "--input", path.to_str().unwrap(), "--p", "2,4,inf"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = split_csv(&stdout(&o));
    let function: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!((function[0] - 1.0).abs() < 1e-10);
    assert!((function[1].powi(4) - 2.0).abs() < 1e-8);
    assert!((function[2] - 2.0).abs() < 1e-9);
}

#[test]
fn free_group_norms() {
    let o = run(&["fgnorm", "--rank", "2", "--radial", "0,1", "--m", "6,7,8,9,10"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = split_csv(&stdout(&o));
    assert_eq!(rows.len(), 5);
    let limit: f64 = note(&header, "extrapolated_limit").unwrap().parse().unwrap();
    assert!((limit - 2.0 * 3f64.sqrt()).abs() < 0.02 * 2.0 * 3f64.sqrt());
    assert_eq!(note(&header, "verdict"), Some("holds"));
    let h = run(&["verify", "haagerup", "--trials", "20", "--seed", "3"]);
    assert_eq!(h.status.code(), Some(0));
}

#[test]
fn sharpness_and_trends() {
    let o = run(&["scan-sharpness", "--group", "oplus:2", "--s", "0.7", "--mmax", "200", "--qmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = split_csv(&stdout(&o));
    assert_eq!(note(&header, "verdict"), Some("divergent"));
    assert_eq!(rows.len(), 200);
    let shy = run(&["verify", "shy", "--group", "oplus:3", "--p", "1.3333333333333333", "--mmax", "30"]);
    assert_eq!(shy.status.code(), Some(0));
    let sob = run(&["verify", "sobolev", "--group", "oplus:3", "--p", "1.5", "--s", "3", "--mmax", "30"]);
    assert_eq!(sob.status.code(), Some(0));
    let exps = run(&["verify", "exponents"]);
    assert_eq!(exps.status.code(), Some(0));
    for (sel, s) in [("oplus:4", "3"), ("fdual:2", "2.8"), ("splus:7", "3.2")] {
        let u = run(&["verify", "ultra", "--group", sel, "--s", s]);
        assert_eq!(u.status.code(), Some(0), "{sel} {s}");
    }
}

#[test]
fn growth_report() {
    let o = run(&["growth", "--group", "zd:2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let fit = doc["result"]["growth_order_fit"].as_f64().unwrap();
    assert!((fit - 2.0).abs() < 0.1);
    let fd = run(&["growth", "--group", "fdual:2", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&fd)).unwrap();
    assert_eq!(doc["result"]["polynomial"], false);
    assert!((doc["result"]["envelope"]["rate"].as_f64().unwrap() - 3.0).abs() < 1e-12);
}
