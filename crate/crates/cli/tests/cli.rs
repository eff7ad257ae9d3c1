use std::process::{Command, Output};

use cusp_toolkit::report::{from_structured, without_timing};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cusp-toolkit")).args(args).env_remove("CUSP_TOOLKIT_THREADS").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn structured(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "structured"]);
    let o = bin(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn analyze_473() {
    let v = structured(&["analyze", "disc-473"]);
    assert_eq!(v["reducers"][0]["count"], 19);
    assert_eq!(v["defects"]["cusps"][0]["c"], "79/24");
    assert_eq!(v["certificates"][0]["verdict"], "general-type");
}

#[test]
fn analyze_148_is_inconclusive() {
    let v = structured(&["analyze", "148"]);
    assert_eq!(v["reducers"][0]["count"], 7);
    assert_eq!(v["defects"]["cusps"][0]["c"], "55/36");
    assert_eq!(v["certificates"][0]["verdict"], "inconclusive");
}

#[test]
fn analyze_sqrt14_table_output() {
    let o = bin(&["analyze", "sqrt14", "--upto-q", "3"]);
    assert!(o.status.success());
    let v = structured(&["analyze", "sqrt14"]);
    assert_eq!(v["reducers"][0]["count"], 2);
    assert!(!stdout(&o).is_empty());
}

#[test]
fn reproduce_exits_zero_on_match() {
    for t in ["quotsing", "6"] {
        let o = bin(&["reproduce", t]);
        assert!(o.status.success(), "table {t}:\n{}", stdout(&o));
    }
}

#[test]
fn export_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (p, threads) in [(&a, "1"), (&b, "3")] {
        let o = bin(&["--threads", threads, "export", "761", "-o", p.to_str().unwrap(), "--upto-q", "2"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ra = from_structured(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let rb = from_structured(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(without_timing(&ra), without_timing(&rb));
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.contains("\"13/4\"") && text.contains("\"13/2\""));
    let again = cusp_toolkit::report::to_structured(&ra).unwrap();
    assert_eq!(from_structured(&again).unwrap(), ra);
}

#[test]
fn quotsing_command() {
    let v = structured(&["quotsing", "1,3,2;7"]);
    assert_eq!(v["constant"], "1/252");
    assert_eq!(v["sequence"], serde_json::json!([0, 0, 0, 0, 0, 0, 1, 1, 2, 3]));
}

#[test]
fn certify_with_ingested_dimensions() {
    let o = bin(&["certify", "469", "--dims", "4:15", "--defects", "4:12"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("kappa>=1"), "{}", stdout(&o));
}

#[test]
fn bad_input_exits_with_error() {
    let o = bin(&["analyze", "no-such-field"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = bin(&["analyze", "473", "--level", "p9999"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["analyze", "473", "--group", "sp4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_setting_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_cusp-toolkit")).args(["quotsing", "1,3,2;7"]).env("CUSP_TOOLKIT_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["--threads", "0", "quotsing", "1,3,2;7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn level_notation() {
    use cusp_toolkit::fixtures::load_field;
    use cusp_toolkit::level::{parse_ideal, parse_level};
    let dir = cusp_toolkit::fixtures::fixtures_dir();
    let k = load_field("sqrt14", &dir).unwrap();
    let two = parse_ideal(&k, "2").unwrap();
    assert_eq!(parse_ideal(&k, "p2^2").unwrap(), two);
    assert_eq!(parse_ideal(&k, "(p2)*(p2)").unwrap(), two);
    assert_eq!(parse_level(&k, "(1)").unwrap().label, "(1)");
    assert!(parse_ideal(&k, "p3").is_err());
    assert!(parse_ideal(&k, "p2^x").is_err());
}
