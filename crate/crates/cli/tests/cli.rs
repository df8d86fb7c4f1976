use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn jordan(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordan"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

const HERM3: &str = r#"{"factors":[{"kind":"herm","n":3,"field":"complex"}]}"#;

#[test]
fn spectral_of_spin_element() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "x.json",
        r#"{"blocks":[{"lambda":2.0,"v":[1.0,0.0]}]}"#,
    );
    let o = jordan(&["spectral", "x.json"], dir.path());
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["eigenvalues"], serde_json::json!([3.0, 1.0]));
    assert_eq!(
        v["projections"][0]["blocks"][0]["v"],
        serde_json::json!([0.5, 0.0])
    );
}

#[test]
fn dyadic_digits_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "x.json",
        r#"{"blocks":[[[1.0,0.0],[0.0,0.5]]]}"#,
    );
    let v = stdout_json(&jordan(&["dyadic", "x.json", "--digits", "2"], dir.path()));
    assert_eq!(v["residual_norm"], 0.25);
    assert_eq!(
        v["digits"][1]["blocks"][0],
        serde_json::json!([[1.0, 0.0], [0.0, 0.0]])
    );

    write(
        dir.path(),
        "bad.json",
        r#"{"blocks":[[[2.0,0.0],[0.0,0.5]]]}"#,
    );
    assert_eq!(
        jordan(&["dyadic", "bad.json"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn reconstruction_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "d.json", HERM3);
    for args in [
        &[
            "poset",
            "build",
            "--descriptor",
            "d.json",
            "--random",
            "5",
            "--out",
            "f.json",
        ][..],
        &[
            "automorphism",
            "--descriptor",
            "d.json",
            "--transpose",
            "--seed",
            "9",
            "--out",
            "psi.json",
        ],
        &[
            "oracle",
            "--fragment",
            "f.json",
            "--map",
            "psi.json",
            "--out",
            "o.json",
        ],
    ] {
        let o = jordan(args, d);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = jordan(
        &[
            "reconstruct",
            "--fragment",
            "f.json",
            "--oracle",
            "o.json",
            "--variant",
            "as",
            "--out",
            "L.json",
        ],
        d,
    );
    assert!(o.status.success());
    let report = stdout_json(&o);
    assert_eq!(report["passed"], true);
    assert_eq!(report["unique"], true);
    assert!(report["audits"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["passed"] == true));

    let rec =
        jordan_core::LinearMap::from_json(&std::fs::read_to_string(d.join("L.json")).unwrap())
            .unwrap();
    let psi =
        jordan_core::LinearMap::from_json(&std::fs::read_to_string(d.join("psi.json")).unwrap())
            .unwrap();
    assert!(rec.distance(&psi) < 1e-8);
}

#[test]
fn spin_factor_asu_reconstruction_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "d.json", r#"{"factors":[{"kind":"spin","n":3}]}"#);
    assert!(jordan(
        &[
            "poset",
            "build",
            "--descriptor",
            "d.json",
            "--random",
            "4",
            "--variant",
            "asu",
            "--out",
            "f.json"
        ],
        d
    )
    .status
    .success());
    assert!(jordan(
        &["automorphism", "--descriptor", "d.json", "--out", "m.json"],
        d
    )
    .status
    .success());
    assert!(jordan(
        &[
            "oracle",
            "--fragment",
            "f.json",
            "--map",
            "m.json",
            "--out",
            "o.json"
        ],
        d
    )
    .status
    .success());
    let o = jordan(
        &[
            "reconstruct",
            "--fragment",
            "f.json",
            "--oracle",
            "o.json",
            "--variant",
            "asu",
        ],
        d,
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["stage"], "hypothesis");
}

#[test]
fn poset_queries() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "xs.json",
        r#"[{"blocks":[[[3.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,3.0]]]}]"#,
    );
    assert!(jordan(
        &["poset", "build", "--elements", "xs.json", "--out", "f.json"],
        d
    )
    .status
    .success());
    let heights = stdout_json(&jordan(&["poset", "height", "--fragment", "f.json"], d));
    let mut h: Vec<u64> = heights["heights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    h.sort();
    // span{p, 1-p}, and the atoms span{1}, span{p}, span{1-p}
    assert_eq!(h, vec![1, 1, 1, 2]);
    let atoms = stdout_json(&jordan(
        &["poset", "atoms", "--fragment", "f.json", "--variant", "as"],
        d,
    ));
    assert_eq!(atoms["atoms"].as_array().unwrap().len(), 3);
    assert!(jordan(&["poset", "maximal", "--fragment", "f.json"], d)
        .status
        .success());

    write(
        d,
        "rr.json",
        r#"{"factors":[{"kind":"real"},{"kind":"real"}]}"#,
    );
    let c = stdout_json(&jordan(
        &["poset", "classify", "--descriptor", "rr.json"],
        d,
    ));
    assert_eq!(c["two_dim_maximal"], true);
    assert_eq!(c["search_agrees"], true);
    write(d, "h3.json", HERM3);
    let c = stdout_json(&jordan(
        &["poset", "classify", "--descriptor", "h3.json"],
        d,
    ));
    assert_eq!(c["two_dim_maximal"], false);
}

#[test]
fn amplify_test_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "d.json",
        r#"{"factors":[{"kind":"herm","n":2,"field":"complex"}]}"#,
    );
    assert!(jordan(
        &["automorphism", "--descriptor", "d.json", "--out", "u.json"],
        d
    )
    .status
    .success());
    assert!(jordan(
        &[
            "automorphism",
            "--descriptor",
            "d.json",
            "--transpose",
            "--out",
            "t.json"
        ],
        d
    )
    .status
    .success());
    let ok = jordan(
        &[
            "amplify-test",
            "--map",
            "u.json",
            "--n",
            "2",
            "--trials",
            "20",
        ],
        d,
    );
    assert!(ok.status.success());
    assert_eq!(
        stdout_json(&ok)["amplification"]["verdict"],
        "star-isomorphism"
    );
    let bad = jordan(
        &[
            "amplify-test",
            "--map",
            "t.json",
            "--n",
            "2",
            "--trials",
            "20",
        ],
        d,
    );
    assert_eq!(bad.status.code(), Some(1));
    let v = stdout_json(&bad);
    assert!(
        (v["two_positivity"]["witness_min_eigenvalue"]
            .as_f64()
            .unwrap()
            + 0.5)
            .abs()
            < 1e-9
    );
}

#[test]
fn suite_is_reproducible_without_timestamps() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "d.json",
        r#"{"factors":[{"kind":"herm","n":2,"field":"real"}]}"#,
    );
    let args = [
        "suite",
        "--descriptor",
        "d.json",
        "--seed",
        "7",
        "--samples",
        "5",
        "--no-timestamp",
    ];
    let a = jordan(&args, d);
    let b = jordan(&args, d);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!(v.get("timestamp").is_none());
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c.get("runtime_ms").is_none()));
}

#[test]
fn suite_config_and_expected_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "c.json",
        r#"{"descriptor":{"factors":[{"kind":"spin","n":3}]},"seed":3,"samples":5}"#,
    );
    let o = jordan(&["suite", "--config", "c.json", "--pretty"], d);
    assert!(o.status.success());
    let v = stdout_json(&o);
    let asu = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "reconstruction.asu")
        .unwrap()
        .clone();
    assert_eq!(asu["expected_failure"], true);
    assert_eq!(asu["status"], "pass");

    write(d, "empty.json", r#"{"descriptor":{"factors":[]}}"#);
    assert_eq!(
        jordan(&["suite", "--config", "empty.json"], d)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn demos_and_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["spin-flip", "rr-permutation", "transpose"] {
        let o = jordan(&["demo", name, "--no-timestamp"], d);
        assert!(o.status.success(), "{name}");
        assert_eq!(stdout_json(&o)["passed"], true);
    }
    assert!(!jordan(&["demo", "nope"], d).status.success());

    let flip = stdout_json(&jordan(&["counterexample", "spin-flip", "--n", "3"], d));
    assert_eq!(flip["passed"], true);
    assert_eq!(flip["report"]["jordan"]["passed"], true);
    let rr = jordan(&["counterexample", "rr-permutation"], d);
    assert!(rr.status.success());
    assert_eq!(
        stdout_json(&rr)["report"]["rows"].as_array().unwrap().len(),
        6
    );
}
