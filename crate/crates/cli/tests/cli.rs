use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use slopelab::oracles::{replay, Certificate};
use slopelab::presentations::parse_presentation;
use slopelab::{fill, figure_eight, Slope};

fn slopelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slopelab"))
        .args(args)
        .env_remove("SLOPELAB_MAX_COSETS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn present_matches_shipped_file() {
    let text = stdout(&slopelab(&["present", "fig8"]));
    assert_eq!(text, std::fs::read_to_string(data("fig8.pres")).unwrap());
    let t = stdout(&slopelab(&["present", "torus", "2", "3"]));
    assert!(t.contains("rel: x^2 y^-3"));
}

#[test]
fn fig8_persistence_scan() {
    let out = slopelab(&["scan", "fig8", "[a,h]", "--slopes", "-4..4", "denom", "1"]);
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["knot"], "fig8");
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let slopes: Vec<&str> = rows.iter().map(|r| r["slope"].as_str().unwrap()).collect();
    assert_eq!(slopes, ["-4/1", "-3/1", "-2/1", "-1/1", "0/1", "1/1", "2/1", "3/1", "4/1"]);
    assert!(rows.iter().all(|r| r["verdict"] != "trivial"));

    // Every emitted certificate replays.
    let pres = figure_eight();
    let w = pres.word("a h a^-1 h^-1").unwrap();
    for row in rows {
        let r: Slope = row["slope"].as_str().unwrap().parse().unwrap();
        let cert: Certificate = serde_json::from_value(row["certificate"].clone()).unwrap();
        if row["verdict"] != "unknown" {
            assert!(replay(&fill(&pres, r).unwrap(), &w, &cert, &[]).unwrap(), "{row}");
        }
    }
}

#[test]
fn certify_filled_trefoil() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t5.pres");
    let filled = stdout(&slopelab(&["fill", "torus:2,3", "5/1"]));
    std::fs::write(&path, &filled).unwrap();
    assert_eq!(parse_presentation(&filled).unwrap().relators.len(), 2);

    let v = json(&slopelab(&["certify", path.to_str().unwrap(), "[x,y]"]));
    assert_eq!(v["verdict"], "trivial");
    assert_eq!(v["certificate"]["kind"], "coset_table");
    assert_eq!(v["certificate"]["cosets"], 5);
    assert!(v["budgets"].get("wall_ms").is_none());

    let timed = json(&slopelab(&["certify", path.to_str().unwrap(), "[x,y]", "--timings"]));
    assert!(timed["budgets"]["wall_ms"].is_u64());
}

#[test]
fn build_torus_gn_closed_form() {
    let text = stdout(&slopelab(&["build", "torus-gn", "2", "3", "1"]));
    assert_eq!(
        text.trim(),
        "y^-1 x^-1 y^-2 x^-1 y x y x y x y x^-1 y^-2 x^-1 y^-1 x^-1 y^-1 x y^2 x y^2 x y^-1 x^-1 y x y^-1 x^-1"
    );
    assert_eq!(stdout(&slopelab(&["build", "bmt", "a", "h"])).trim(), "h^-1 a^-1 h a h^-1 a h a^-2");
    assert_eq!(stdout(&slopelab(&["build", "powered", "a", "h", "2", "-1"])).trim(), "a^2 h^-1");
    assert_eq!(stdout(&slopelab(&["build", "alpha-m", "a", "h", "2", "1"])).trim(), "a^3 h a^-1 h^-1");
}

#[test]
fn scan_output_is_reproducible_across_job_counts() {
    let args = ["scan", "torus", "2", "3", "[x,y]", "--slopes", "4..8"];
    let one = stdout(&slopelab(&[&args[..], &["--jobs", "1"]].concat()));
    let four = stdout(&slopelab(&[&args[..], &["--jobs", "4"]].concat()));
    assert_eq!(one, four);
    let csv = stdout(&slopelab(&[&args[..], &["--csv"]].concat()));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("slope,verdict,certificate"));
    assert_eq!(lines.len(), 6);
    assert!(lines[2].starts_with("5/1,trivial"));
    assert!(lines[3].starts_with("6/1,nontrivial,finite_quotient"));
}

#[test]
fn env_var_sets_coset_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_slopelab"))
        .args(["scan", "torus", "2", "3", "[x,y]", "--slopes", "5"])
        .env("SLOPELAB_MAX_COSETS", "50")
        .output()
        .unwrap();
    assert_eq!(json(&out)["meta"]["budget"]["max_cosets"], 50);
    let flag = slopelab(&["scan", "torus", "2", "3", "[x,y]", "--slopes", "5", "--max-cosets", "70"]);
    assert_eq!(json(&flag)["meta"]["budget"]["max_cosets"], 70);
}

#[test]
fn holonomy_and_quasimorphism_commands() {
    let p = json(&slopelab(&["holonomy", "peripheral", "a^3 (h a^-1 h^-1 a^2 h^-1 a^-1 h)^-2"]));
    assert_eq!(p["peripheral"], true);
    let p = json(&slopelab(&["holonomy", "peripheral", "a^(a^h) a^-2"]));
    assert_eq!(p["peripheral"], false);
    let v = json(&slopelab(&["holonomy", "invariant", "peripheral", "3,0", "0,0"]));
    assert_eq!(v["value"][0], 2.0);
    let c = json(&slopelab(&["qm", "count", "a b", "a b a b"]));
    assert_eq!(c["count"], 2);
    let e = json(&slopelab(&["qm", "bavard", "a", "a^2", "--defect-bound", "1"]));
    assert_eq!(e["kind"], "heuristic-lower");
    assert_eq!(e["value"], 1.0);
}

#[test]
fn exit_codes() {
    assert_eq!(slopelab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(slopelab(&["certify", "fig8", "[a,z]"]).status.code(), Some(1));
    assert_eq!(slopelab(&["certify", "/no/such/file", "a"]).status.code(), Some(1));
    assert_eq!(slopelab(&["scan", "fig8", "a", "--slopes", "2/4"]).status.code(), Some(1));
    assert_eq!(slopelab(&["qm", "count", "a", "b", "--bogus"]).status.code(), Some(1));
    assert_eq!(slopelab(&["--help"]).status.code(), Some(0));
}
