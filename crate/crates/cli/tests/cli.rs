//! End-to-end checks of the command line: exit codes, determinism, and
//! format round trips.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tessella"))
}

const TORUS: &str = "n=1;h=();v=();marked=all";
const L3: &str = "n=3;h=(1 2);v=(1 3);marked=singular";

#[test]
fn quotient_summary_of_the_torus() {
    let out = bin().args([TORUS, "quotient-graph"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "V=1 W=1 E=1\n");
}

#[test]
fn oracle_of_l3() {
    let out = bin().args([L3, "oracle", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["index"], 3);
    assert_eq!(v["cusps"], 2);
}

#[test]
fn runs_are_byte_deterministic() {
    let run = || {
        bin()
            .args([L3, "tessellate", "--region", "0,1,1/3,2", "--model", "disk", "--json"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn domain_errors_exit_one_with_json() {
    // Two disconnected squares.
    let out = bin()
        .args(["n=2;h=();v=();marked=all", "info", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("connected"));
}

#[test]
fn parse_errors_exit_one() {
    let out = bin().args(["n=3;h=(1 2;v=();marked=all", "info"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("parenthesis"), "{}", msg);
}

#[test]
fn usage_errors_exit_two() {
    let out = bin().args([TORUS, "no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_round_trip_through_info() {
    let out = bin().args([L3, "info", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = v["text"].as_str().unwrap().replace('\n', ";");
    let again = bin().args([&text, "oracle"]).output().unwrap();
    assert!(again.status.success());
    assert_eq!(String::from_utf8_lossy(&again.stdout), "index=3 cusps=2\n");
}

#[test]
fn locate_reports_the_farey_triangle() {
    let out = bin().args([TORUS, "locate", "--point", "1/2,1"]).output().unwrap();
    assert!(out.status.success());
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("interior"), "{}", s);
    assert!(s.contains("{0, 1, inf}"), "{}", s);
}

#[test]
fn verify_passes_on_the_torus() {
    let out = bin().args([TORUS, "verify"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("all checks passed"));
}

#[test]
fn drawing_file_is_written() {
    let dir = std::env::temp_dir().join("tessella-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("patch.svg");
    let out = bin()
        .args([
            TORUS,
            "tessellate",
            "--region",
            "0,1,1/2,2",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
}
