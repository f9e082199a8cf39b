use std::path::Path;
use std::process::{Command, Output};

fn drh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drh")).args(args).output().expect("running drh")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn meta<'a>(csv: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("# {key}: ");
    csv.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

#[test]
fn converge_is_deterministic() {
    let args = ["converge", "--tmax", "5", "--dt", "0.25", "--cutoffs", "p10,p100,inf"];
    let a = drh(&args);
    let b = drh(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert_eq!(meta(&csv, "command"), Some("converge"));
    assert!(csv.lines().any(|l| l == "t,re_p10,im_p10,re_p100,im_p100,re_inf,im_inf"));
    assert_eq!(data_rows(&csv).len(), 21);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# converge settings\nchar = chi_7a\nsigma = 0.75\ntmax = 1\ndt = 0.5\ncutoffs = p10\n").unwrap();
    let out = drh(&["converge", "--config", cfg.to_str().unwrap(), "--sigma", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = stdout(&out);
    let config = meta(&csv, "config").unwrap();
    assert!(config.contains("char=chi_7a"), "{config}");
    assert!(config.contains("sigma=1"), "{config}");
    assert!(config.contains("cutoffs=p10"), "{config}");
    assert_eq!(data_rows(&csv).len(), 3);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "sigmaa = 1\n").unwrap();
    let out = drh(&["converge", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}

#[test]
fn out_flag_writes_file_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jackson.csv");
    let out = drh(&["jackson", "--q", "2,3", "--n", "8", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(Path::new(&path)).unwrap();
    assert!(csv.starts_with("# command: jackson\n# version: "));
    assert!(!data_rows(&csv).is_empty());
}

#[test]
fn table1_reports_bad_discriminants_and_keeps_good_rows() {
    let out = drh(&["table1", "--d", "-3,16,5", "--cutoffs", "1e5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("16"));
    let rows = data_rows(&stdout(&out));
    let ds: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ds, ["-3", "5"]);
    for r in &rows {
        let ratio: f64 = r.last().unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() < 0.1, "{r:?}");
    }
}

#[test]
fn curve_drh_on_the_projective_line() {
    let out = drh(&["curve-drh", "--p1", "--q", "2", "--n", "40"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let limit: f64 = meta(&csv, "theorem2 limit").unwrap().parse().unwrap();
    assert!((limit - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 40);
    let last: f64 = rows[39][1].parse().unwrap();
    assert!((last - limit).abs() / limit < 0.05, "{last} vs {limit}");
}

#[test]
fn curve_drh_needs_exactly_one_source() {
    assert!(!drh(&["curve-drh", "--q", "2"]).status.success());
    assert!(!drh(&["curve-drh", "--p1", "--q", "2", "--hyperelliptic", "5:0,1,0,1"]).status.success());
}

#[test]
fn ff_verify_runs() {
    let out = drh(&["ff-verify", "--modulus", "5:2,0,1", "--order", "2", "--n", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = stdout(&out);
    assert_eq!(meta(&csv, "sqrt2 branch"), Some("true"));
    assert_eq!(data_rows(&csv).len(), 10);
}

#[test]
fn invalid_knobs_are_rejected() {
    for args in [
        &["converge", "--em-terms", "0"][..],
        &["converge", "--em-terms", "40"],
        &["collapse", "--zero-tol", "0.5"],
        &["converge", "--cutoffs", "p100,p10"],
        &["converge", "--dt", "0"],
        &["converge", "--char", "chi_9"],
    ] {
        let out = drh(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error"), "{args:?}");
    }
}
