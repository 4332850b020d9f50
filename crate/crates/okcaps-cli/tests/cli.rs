use std::process::{Command, Output};

fn okcaps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_okcaps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = okcaps(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&ok(args)).unwrap()
}

const PENTAGON: &str =
    r#"{"kind":"convex","vertices":[["0","0"],["3","0"],["3","1"],["2","2"],["0","2"]]}"#;

#[test]
fn nobody_dp5() {
    let v = json(&["nobody", "--delpezzo", "4", "--flag", "4"]);
    assert_eq!(v["mu"], serde_json::json!({"exact": "2"}));
    assert_eq!(v["weights"]["head"], "3");
    assert_eq!(
        v["weights"]["weights"],
        serde_json::json!(["1", "1", "1", "1"])
    );
    let poly: Vec<[String; 2]> = serde_json::from_value(v["polygon"].clone()).unwrap();
    let want = [["0", "0"], ["2", "0"], ["1", "2"], ["0", "1"]];
    assert_eq!(poly.len(), 4);
    for w in want {
        assert!(
            poly.iter().any(|p| p[0] == w[0] && p[1] == w[1]),
            "{poly:?}"
        );
    }
}

#[test]
fn nobody_svg() {
    let s = ok(&["nobody", "--delpezzo", "4", "--flag", "4", "--svg"]);
    assert!(s.starts_with("<svg"));
    assert!(s.contains("<polygon"));
    assert!(s.contains("(1,2)"));
}

#[test]
fn wt_flat_and_tree() {
    let v = json(&["wt", "--convex", PENTAGON]);
    assert!(v["head"].is_string());
    assert!(v["weights"].is_array());
    let t = json(&["wt", "--convex", PENTAGON, "--tree"]);
    assert!(t["cuts"].is_array());
    assert!(t.get("weights").is_none());
}

#[test]
fn algcap_csv_and_json() {
    let csv = ok(&[
        "algcap",
        "--delpezzo",
        "5",
        "--A",
        "3,1,1,1,1,1",
        "--kmax",
        "10",
        "--csv",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0], "k,c_k");
    assert_eq!(lines[2], "1,2");
    let one = json(&["algcap", "--delpezzo", "4", "--k", "1"]);
    assert_eq!(one["k"], 1);
    assert_eq!(one["cap"], "2");
    let all = json(&["algcap", "--delpezzo", "4", "--kmax", "5"]);
    assert_eq!(all.as_array().unwrap().len(), 6);
}

#[test]
fn ech_forms() {
    let b = ok(&["ech", "--ball", "1", "--kmax", "5"]);
    assert_eq!(b, "k,c_k\n0,0\n1,1\n2,1\n3,2\n4,2\n5,2\n");
    let e = ok(&["ech", "--ellipsoid", "1,2", "--kmax", "3"]);
    assert_eq!(e, "k,c_k\n0,0\n1,1\n2,2\n3,2\n");
    let d = ok(&["ech", "--domain", PENTAGON, "--kmax", "10"]);
    assert_eq!(d.lines().count(), 12);
}

#[test]
fn zariski_line_plus_exceptional() {
    let v = json(&["zariski", "--delpezzo", "8", "--D", "1,-1,0,0,0,0,0,0,0"]);
    assert_eq!(v["volume"], "1");
    assert_eq!(v["P"]["d"], "1");
    assert!(v["P"]["m"].as_array().unwrap().iter().all(|x| x == "0"));
}

#[test]
fn staircase_verdicts() {
    let v = json(&["staircase", "--weights", "9/2;1,1,1,1,1,1", "--rank", "7"]);
    assert_eq!(v["no_staircase"], true);
    assert_eq!(v["reason"], "no_accumulation");
    let w = json(&["staircase", "--weights", "13/2;1,1,1,1,1,1,1,1"]);
    assert_eq!(w["no_staircase"], true);
    let x = json(&["staircase", "--weights", "7;1,1,1,1,1,1,1,1"]);
    assert_eq!(x["no_staircase"], false);
    assert_eq!(x["reason"], "accumulates");
    assert!(x["accumulation"].is_object());
}

#[test]
fn embed_ball_into_dp5() {
    let v = json(&[
        "embed",
        "--src-ball",
        "3",
        "--delpezzo",
        "4",
        "--kmax",
        "20",
    ]);
    assert_eq!(v["status"], "obstructed");
    let w = json(&[
        "embed",
        "--src-ball",
        "1",
        "--delpezzo",
        "4",
        "--kmax",
        "20",
    ]);
    assert_eq!(w["status"], "no_obstruction_up_to");
    assert_eq!(w["kmax"], 20);
}

#[test]
fn eef_csv_and_svg() {
    let csv = ok(&[
        "eef",
        "--delpezzo",
        "4",
        "--zmin",
        "1",
        "--zmax",
        "2",
        "--zsteps",
        "4",
        "--kmax",
        "20",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "z,lower_bound,argmax_k");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("1,1/2,"));
    let svg = ok(&[
        "eef",
        "--delpezzo",
        "4",
        "--zsteps",
        "4",
        "--kmax",
        "20",
        "--svg",
    ]);
    assert!(svg.contains("<polyline"));
}

#[test]
fn asym_summary() {
    let v = json(&["asym", "--delpezzo", "4", "--klo", "50", "--khi", "200"]);
    assert!(v.is_object());
}

#[test]
fn domain_errors_exit_2() {
    let o = okcaps(&["nobody", "--delpezzo", "2", "--A", "2,1,1", "--flag", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let e: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(e["error"], "not_a_generic");
    assert!(e["message"].is_string());
}

#[test]
fn malformed_input_exits_1() {
    for args in [
        vec!["algcap", "--A", "x"],
        vec!["staircase", "--weights", "1/0;1"],
        vec!["wt", "--convex", "{not json"],
        vec!["nobody", "--delpezzo", "4", "--flag", "0"],
    ] {
        let o = okcaps(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let e: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
        assert_eq!(e["error"], "malformed_input", "{args:?}");
    }
    assert_eq!(okcaps(&["bogus"]).status.code(), Some(1));
    assert_eq!(okcaps(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["algcap", "--delpezzo", "6", "--kmax", "40", "--csv"];
    let a = ok(&args);
    let b = ok(&args);
    let c = Command::new(env!("CARGO_BIN_EXE_okcaps"))
        .args(args)
        .env("OKCAPS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a, b);
    assert_eq!(a, stdout(&c));
}

#[test]
fn emitted_tree_feeds_back() {
    let tree = ok(&["wt", "--convex", PENTAGON, "--tree"]);
    let dir = std::env::temp_dir().join(format!("okcaps-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dom = dir.join("pentagon.json");
    std::fs::write(&dom, PENTAGON).unwrap();
    let from_file = ok(&["wt", "--convex", dom.to_str().unwrap(), "--tree"]);
    assert_eq!(tree, from_file);
    let flat = json(&["wt", "--convex", PENTAGON]);
    let w: Vec<String> = serde_json::from_value(flat["weights"].clone()).unwrap();
    let seq = format!("{};{}", flat["head"].as_str().unwrap(), w.join(","));
    let caps = ok(&["ech", "--weights", &seq, "--kmax", "10"]);
    let direct = ok(&["ech", "--domain", PENTAGON, "--kmax", "10"]);
    assert_eq!(caps, direct);
    std::fs::remove_dir_all(&dir).ok();
}
