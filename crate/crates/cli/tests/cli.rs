use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const TORUS: &str = r#"{"S":[[7,2],[2,5]]}"#;

fn tropabel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropabel"))
        .args(args)
        .env_remove("TROPABEL_JOBS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn type_of_a_skew_form() {
    let out = tropabel(&["type", "--Q", "{C:[[1,0],[0,3]],tau:0}"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["d1"], 1);
    assert_eq!(doc["d2"], 3);
    assert_eq!(doc["schema"], "1");
}

#[test]
fn build_check_and_sigma_on_a_twisted_family() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.json");
    let out = tropabel(&["mumford-build", "--torus", TORUS, "--B", "[[2,0],[0,2]]", "--tau", "1"]);
    assert_eq!(code(&out), 0);
    fs::write(&fam, &out.stdout).unwrap();
    let fam = fam.to_str().unwrap();

    let check = tropabel(&["mumford-check", "--family", fam]);
    assert_eq!(code(&check), 0);
    assert_eq!(json(&check)["holds"], true);

    let s = tropabel(&["sigma", "--Z", fam, "--B", "[[2,0],[0,2]]", "--delta", "2"]);
    assert_eq!(code(&s), 0);
    let doc = json(&s);
    assert_eq!(doc["exponent"]["re"], "1/2");
    assert_eq!(doc["exponent"]["im"], "0");
    assert_eq!(doc["is_one"], false);

    let riemann = tropabel(&["check-polarization", "--Z", fam, "--Q", "{C:[[1,0],[0,1]],tau:0}"]);
    assert_eq!(code(&riemann), 1, "wrong form must give a false verdict");
    assert_eq!(json(&riemann)["holds"], false);
}

#[test]
fn errors_are_machine_readable() {
    let out = tropabel(&["type", "--Q", "{C:[[0,0],[0,0]],tau:0}"]);
    assert_eq!(code(&out), 2);
    assert!(json(&out)["error"].is_string());

    let out = tropabel(&["type", "--Q", "{C:[[1,0],[0,3]],tau:0,extra:1}"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "Parse");

    let out = tropabel(&["type"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "Usage");

    let out = tropabel(&["type", "--Q", "/nonexistent/q.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn strict_refuses_special_tori() {
    let special = r#"{"S":[[5,2],[3,5]]}"#;
    let args = ["check-tropical", "--torus", special, "--C", "[[1,0],[0,1]]"];
    assert_ne!(code(&tropabel(&args)), 2);
    let mut strict = vec!["--strict"];
    strict.extend(args);
    let out = tropabel(&strict);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "InvalidArgument");

    let generic = ["--strict", "check-tropical", "--torus", TORUS, "--C", "[[1,0],[0,1]]"];
    assert_eq!(code(&tropabel(&generic)), 0);
}

#[test]
fn documents_round_trip() {
    let q = tropabel(&["poincare-dual", "--Q", "{C:[[2,1],[0,3]],tau:1}"]);
    assert_eq!(code(&q), 0);

    let fam = tropabel(&["mumford-build", "--torus", TORUS, "--B", "[[1,0],[0,1]]"]);
    let doc = json(&fam);
    let again = tropabel(&["mumford-check", "--family", &doc.to_string()]);
    assert_eq!(code(&again), 0);
    let q = doc["Q"].to_string();
    assert_eq!(json(&tropabel(&["type", "--Q", &q]))["d1"], 1);
}

#[test]
fn enumerate_then_invariant_then_draw() {
    let dir = tempfile::tempdir().unwrap();
    let res = dir.path().join("result.json");
    let res_s = res.to_str().unwrap();
    let out = tropabel(&[
        "enumerate",
        "--torus",
        TORUS,
        "--degree",
        "[[1,0],[0,1]]",
        "--genus",
        "2",
        "--seed",
        "1",
        "--out",
        res_s,
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["bounds_stable"], true);
    assert_eq!(fs::read(&res).unwrap(), out.stdout);

    let inv = tropabel(&["invariant", "--result", res_s, "--k", "1"]);
    assert_eq!(code(&inv), 0);
    assert_eq!(json(&inv)["value"], doc["total"]);
    assert_eq!(
        json(&tropabel(&["invariant", "--result", res_s, "--k", "2"]))["value"],
        0
    );

    let curve = doc["curves"][0]["curve"].to_string();
    let v = tropabel(&["validate-curve", "--torus", TORUS, "--curve", &curve]);
    assert_eq!(code(&v), 0);
    let v = json(&v);
    assert_eq!(v["genus"], 2);
    assert_eq!(v["degree"], v["degree_by_crossing"]);
    assert_eq!(v["degree"], serde_json::json!([[1, 0], [0, 1]]));

    let m = tropabel(&["multiplicity", "--torus", TORUS, "--curve", &curve]);
    assert_eq!(json(&m)["total"], doc["curves"][0]["multiplicity"]["total"]);

    let svg = dir.path().join("c.svg");
    let out = tropabel(&[
        "svg",
        "--torus",
        TORUS,
        "--curve",
        &curve,
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.as_bytes(), out.stdout.as_slice());
    // bounding box of 0, (7,2), (9,7), (2,5)
    assert!(text.contains(r#"viewBox="0 0 9 7""#), "{text}");
}

#[test]
fn multicover_is_deterministic_across_job_counts() {
    let args = [
        "multicover",
        "--torus",
        TORUS,
        "--degree",
        "[[2,0],[0,2]]",
        "--genus",
        "2",
        "--seed",
        "1",
    ];
    let run = |jobs: &str| {
        let mut a = vec!["--jobs", jobs];
        a.extend(args);
        tropabel(&a)
    };
    let one = run("1");
    let four = run("4");
    let again = run("4");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
    let doc = json(&one);
    assert_eq!(doc["verdict"], true);
    assert_eq!(doc["status"], "certified");
    assert_eq!(doc["lhs"]["value"], 120);
    assert_eq!(doc["rhs"], 120);
}

#[test]
fn multicover_writes_drawings() {
    let dir = tempfile::tempdir().unwrap();
    let out = tropabel(&[
        "multicover",
        "--torus",
        TORUS,
        "--degree",
        "[[1,0],[0,1]]",
        "--genus",
        "2",
        "--svg",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let n = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(n, 2);
}
