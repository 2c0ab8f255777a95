use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidbook"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().expect("exit code"))
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("braidbook-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn morton_word_is_not_found_for_every_conjugate() {
    let (r, code) = report(&["search", "n=4; 1:3 2:3 2:4", "--all-conjugates"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["status"], "NOT_FOUND");
    assert_eq!(r["result"]["results"].as_array().unwrap().len(), 3);
}

#[test]
fn sixteen_cacti_of_degree_four() {
    let (r, code) = report(&["cacti", "enumerate", "-n", "4", "--count-only"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["count"], 16);
}

#[test]
fn riemann_hurwitz_for_three_sheets_two_strands() {
    let (r, code) = report(&["rh", "-n", "3", "-b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["euler"], 1);
    assert_eq!(r["result"]["unknot_preimage"], true);
}

#[test]
fn reports_are_identical_apart_from_timing() {
    let args = ["search", "n=4; 3:4 -1:2 2:3", "--all-conjugates"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    let (a, _) = report(&args);
    let (b, _) = report(&args);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn exit_codes() {
    assert_eq!(report(&["analyze", "n=4; 1:5"]).1, 2);
    assert_eq!(report(&["cacti", "enumerate"]).1, 2);
    assert_eq!(report(&["search", "n=4; 1:3 2:3 2:4", "--max-states", "1"]).1, 3);
    assert_eq!(report(&["ladder", "braid3", "n=4; 1:2 2:3 3:4"]).1, 2);
    assert_eq!(report(&["pfib", "check", "--builtin", "square", "--samples", "64"]).1, 0);
}

#[test]
fn numerical_failure_exits_four() {
    let path = scratch("degenerate.json");
    std::fs::write(&path, r#"{"n":2,"m":4,"coeffs":[[[0,0],[0,0]],[[1,0],[0,0]],[[0,1],[0,0]],[[-1,0],[0,0]]]}"#).unwrap();
    let (_, code) = report(&["pfib", "check", path.to_str().unwrap()]);
    assert_eq!(code, 4);
}

#[test]
fn found_script_round_trips_through_validation_and_render() {
    let (r, code) = report(&["search", "n=4; 3:4 -1:2 2:3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["status"], "FOUND");
    let script = scratch("script.json");
    std::fs::write(&script, r["result"]["script"].to_string()).unwrap();
    let (v, code) = report(&["validate-script", script.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["script"]["valid"], true);
    assert_eq!(v["result"]["diagram"]["normative_ok"], true);
    let svg = scratch("diagram.svg");
    let (_, code) = report(&["render", "diagram", script.to_str().unwrap(), "-o", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg") && !body.contains("href"));
}

#[test]
fn reversing_loop_fails_the_certificate() {
    let (r, code) = report(&["pfib", "check", "--builtin", "reversing"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["pass"], false);
    assert_eq!(r["result"]["failing"].as_array().unwrap().len(), 2);
}

#[test]
fn every_subcommand_has_help() {
    for args in [
        &["search", "--help"][..],
        &["cacti", "move", "--help"],
        &["ladder", "passes", "--help"],
        &["pfib", "check", "--help"],
        &["rh", "--help"],
        &["render", "critical", "--help"],
    ] {
        let out = run(args);
        assert!(out.status.success());
        assert!(!out.stdout.is_empty());
    }
    let top = String::from_utf8(run(&["--help"]).stdout).unwrap();
    for name in ["Rampichini diagram", "Cacti", "Ladder diagrams", "P-fibered braids", "Riemann–Hurwitz"] {
        assert!(top.contains(name), "{name}");
    }
}
