use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn diffeolin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffeolin")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = diffeolin(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("diffeolin-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn dual_of_coarse_space_is_zero() {
    let out = diffeolin(&["dual", "coarse_R3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("dim V* = 0"));
    assert!(stdout(&diffeolin(&["dual", "kink_R3"])).starts_with("dim V* = 2"));
}

#[test]
fn json_reports_share_one_schema() {
    for args in [
        &["dual", "kink_R2"][..],
        &["hom", "fine_R1", "coarse_R2"],
        &["bilinear", "coarse_R2", "fine_R1"],
        &["tensor", "kink_R2", "kink_R2", "--dual-iso"],
        &["check-map", "kink_functional"],
        &["check-plot", "kink_R2", "x*abs(x), 0"],
        &["hat-dual", "kink_R2", "--iso", "0,1;1,0"],
        &["oracle", "abs(x)*x"],
    ] {
        let v = json(args);
        for key in ["command", "inputs", "result", "verdicts"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
    }
    let v = json(&["dual", "kink_R2"]);
    assert_eq!(v["command"], "dual");
    assert_eq!(v["result"]["dim"], 1);
    assert_eq!(v["result"]["annihilator"]["basis"], serde_json::json!([["0", "1"]]));
}

#[test]
fn plot_membership_labels() {
    assert_eq!(stdout(&diffeolin(&["check-plot", "kink_R2", "x*abs(x), 0"])).trim(), "Plot");
    assert_eq!(stdout(&diffeolin(&["check-plot", "kink_R2", "x*abs(x)", "0"])).trim(), "Plot");
    assert!(stdout(&diffeolin(&["check-plot", "fine_R2", "abs(x), 0"])).starts_with("NotPlot"));
}

#[test]
fn unknown_is_rendered_when_the_slack_bound_is_forced() {
    let out = Command::new(env!("CARGO_BIN_EXE_diffeolin"))
        .args(["check-plot", "kink_R2", "abs(x)*x^9, 0"])
        .env("DIFFEOLIN_SLACK_DEGREE", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("UNKNOWN"));
    assert_eq!(stdout(&diffeolin(&["check-plot", "kink_R2", "abs(x)*x^9, 0"])).trim(), "Plot");
}

#[test]
fn map_verdicts() {
    assert!(stdout(&diffeolin(&["check-map", "kink_functional"])).starts_with("Smooth"));
    assert!(stdout(&diffeolin(&["check-map", "coarse_functional"])).starts_with("NotSmooth"));
    assert!(stdout(&diffeolin(&["check-map", "fine_to_coarse"])).starts_with("Smooth"));
}

#[test]
fn oracle_command() {
    assert!(stdout(&diffeolin(&["oracle", "abs(x)*x"])).starts_with("NonSmoothAt0(order 3)"));
    assert!(stdout(&diffeolin(&["oracle", "-x^3 + 2"])).starts_with("CInfinityLikely"));
    let traced = stdout(&diffeolin(&["oracle", "abs(x)", "--trace"]));
    assert!(traced.lines().count() > 10);
}

#[test]
fn hat_dual_command() {
    let text = stdout(&diffeolin(&["hat-dual", "kink_R2", "--iso", "0,1;1,0"]));
    assert!(text.contains("S basis: [[0, 1]]"), "{text}");
    let text = stdout(&diffeolin(&["hat-dual", "kink_R2", "--iso", "1,0;0,1"]));
    assert!(text.contains("S basis: [[1, 0]]"), "{text}");
    assert_eq!(diffeolin(&["hat-dual", "kink_R2", "--iso", "1,1;1,1"]).status.code(), Some(2));
}

#[test]
fn cross_validate_command() {
    let out = diffeolin(&["cross-validate", "mixed_R2", "--functional", "1,-1", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("consistent true"));
    let out = diffeolin(&["cross-validate", "mixed_R2", "--functional", "1,0", "--trials", "5"]);
    assert!(stdout(&out).starts_with("symbolic: NotSmooth"), "{}", stdout(&out));
}

#[test]
fn errors_exit_with_two() {
    for args in [
        &["dual", "nope"][..],
        &["check-map", "nope"],
        &["hat-dual", "kink_R2", "--iso", "0,1;1,x"],
        &["check-plot", "kink_R2", "abs(x)"],
        &["oracle", "sin(x)"],
        &["cross-validate", "kink_R2", "--functional", "1.5,0"],
    ] {
        let out = diffeolin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn spaces_file_option() {
    let path = temp_file(
        "spaces.json",
        r#"{ "spaces": {
              "line": { "dim": 1, "diffeology": "fine" },
              "bent": { "dim": 3, "diffeology": { "generated": [["abs(x)", "abs(x)", "0"]] } }
            },
            "maps": { "diff": { "from": "bent", "to": "line", "matrix": [["1", "-1", "5"]] } } }"#,
    );
    let p = path.to_str().unwrap();
    assert!(stdout(&diffeolin(&["--spaces", p, "dual", "bent"])).starts_with("dim V* = 2"));
    assert!(stdout(&diffeolin(&["--spaces", p, "check-map", "diff"])).starts_with("Smooth"));
    assert_eq!(diffeolin(&["--spaces", p, "dual", "kink_R2"]).status.code(), Some(2));

    let broken = temp_file("broken.json", r#"{ "spaces": { "a": { "dim": 2, "diffeology": "sparkly" } } }"#);
    assert_eq!(diffeolin(&["--spaces", broken.to_str().unwrap(), "dual", "a"]).status.code(), Some(2));
    std::fs::remove_file(path).ok();
    std::fs::remove_file(broken).ok();
}
