use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_constellation-lab"))
        .args(args)
        .env_remove("CONSTELLATION_LAB_CAP")
        .output()
        .expect("binary runs")
}

fn lab_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_constellation-lab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn jackson_all_p_passes_and_shows_both_sides() {
    let o = lab(&["jackson-check", "--k", "2", "--n", "3", "--all-p"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("p=(1,1): C = 6, n!^(k-1)·M = 6  ok"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("p=")).count(), 9);
}

#[test]
fn puzzle_smallest_k3_case() {
    let o = lab(&["puzzle", "--k", "3", "--n", "2", "--p", "1,1,1", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1/2 = 1/2"));
}

#[test]
fn m_of_empty_size_is_one() {
    let o = lab(&["count", "--m", "--k", "2", "--n", "0", "--p", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "M^0_(0,0) = 1");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lab(&["count", "--k", "2", "--n", "3", "--p", "1,1,1"]).status.code(), Some(2));
    assert_eq!(lab(&["jackson-check", "--k", "2"]).status.code(), Some(2));
    assert_eq!(lab(&["--cap", "0", "count", "--k", "2", "--n", "1", "--p", "1,1"]).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three() {
    let o = lab(&["--cap", "10", "jackson-check", "--k", "3", "--n", "4", "--all-p"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_constellation-lab"))
        .args(["jackson-check", "--k", "3", "--n", "4", "--all-p"])
        .env("CONSTELLATION_LAB_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_reports_are_reproducible() {
    let args = ["--format", "json", "--threads", "2", "puzzle", "--k", "2", "--n", "4", "--p", "2,2", "--sample", "2000", "--seed", "11"];
    let a = lab(&args);
    let b = lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "constellation-lab/1");
    assert_eq!(v["threads"], 2);
    assert_eq!(v["params"]["seed"], 11);
}

#[test]
fn json_errors_are_structured() {
    let o = lab(&["--format", "json", "--cap", "5", "count", "--k", "2", "--n", "4", "--p", "2,2"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert!(v["error"].as_str().unwrap().contains("cap"));
}

#[test]
fn psi_round_trip_through_stdin() {
    let nebulas = stdout(&lab(&["enumerate", "--family", "nebulas", "--k", "3", "--n", "2"]));
    let lines: Vec<&str> = nebulas.lines().collect();
    assert!(!lines.is_empty());
    for line in lines {
        let fwd = lab_stdin(&["psi", "--direction", "fwd", "--input", "-"], line);
        assert_eq!(fwd.status.code(), Some(0));
        let back = lab_stdin(&["psi", "--direction", "inv", "--input", "-"], &stdout(&fwd));
        assert_eq!(stdout(&back).trim(), line);
    }
}

#[test]
fn enumerate_counts_match_count() {
    let lines = stdout(&lab(&["enumerate", "--family", "colored", "--k", "2", "--n", "3", "--p", "2,2"]));
    let count = stdout(&lab(&["count", "--k", "2", "--n", "3", "--p", "2,2"]));
    assert_eq!(count.trim(), format!("C^3_(2,2) = {}", lines.lines().count()));
}

#[test]
fn render_is_stable_dot() {
    let a = lab(&["render", "--format", "dot", "--perms", "2,3,1;1,3,2"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.starts_with("graph constellation {"));
    assert_eq!(text, stdout(&lab(&["render", "--format", "dot", "--perms", "2,3,1;1,3,2"])));
    let bad = lab(&["render", "--perms", "2,2,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn render_detects_biddings() {
    let bidding = r#"{"omegas":[[1,4,3,2],[3,2,1,4],[4,1,3,2]],"subsets":[[2],[2,3],[1,2],[2,3]]}"#;
    let o = lab_stdin(&["render", "--input", "-"], bidding);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("graph halfedges {"));
}

#[test]
fn roundtrip_reports_counts() {
    let o = lab(&["roundtrip", "--bijection", "sigma", "--k", "2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(", 0 failures"));
}
