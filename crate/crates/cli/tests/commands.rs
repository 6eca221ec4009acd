use std::path::PathBuf;
use std::process::{Command, Output};

use patchwork_cli::report::{render_table, Report};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn patchwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patchwork"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Report {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = patchwork(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn plane_betti_numbers() {
    let r = json(&["real-betti", &data("plane.json")]);
    assert_eq!(r.schema, "patchwork/1");
    assert_eq!(r.values["real_betti"], serde_json::json!([1, 1, 1]));
    assert_eq!(r.instance.sha256.len(), 64);
}

#[test]
fn plane_spectral_sequence() {
    let r = json(&["spectral", &data("plane.json")]);
    let e1 = &r.tables[0];
    assert_eq!(e1.title, "E^1 dimensions");
    for (q, row) in e1.rows.iter().enumerate() {
        for p in 0..3 {
            assert_eq!(row[p + 1], if p == q { "1" } else { "0" });
        }
    }
    assert_eq!(r.values["degenerates_at"], 1);
    assert!(r.verdicts.iter().any(|v| v.name == "maximal" && v.holds));
    let capped = json(&["spectral", &data("plane.json"), "--max-page", "2"]);
    assert_eq!(
        capped
            .tables
            .iter()
            .filter(|t| t.title.starts_with("E^") && t.title != "E^inf dimensions")
            .count(),
        2
    );
}

#[test]
fn concurrent_components() {
    assert_eq!(
        json(&["curve", "components", &data("concurrent-T1.json")]).values["components"],
        2
    );
    assert_eq!(
        json(&["curve", "components", &data("concurrent-T2.json")]).values["components"],
        3
    );
    let haas = json(&["curve", "haas", &data("concurrent-T1.json")]);
    assert!(haas.verdicts.iter().any(|v| v.name == "haas" && !v.holds));
}

#[test]
fn cubic_enumeration() {
    let r = json(&["curve", "enumerate", &data("cubic.json")]);
    assert_eq!(r.values["maximal"], r.values["haas"]);
    let t = &r.tables[0];
    assert_eq!(
        t.rows.len() as u64,
        r.values["admissible"].as_u64().unwrap()
    );
    let capped = patchwork(&["curve", "enumerate", &data("cubic.json"), "--cap", "3"]);
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn json_and_table_agree() {
    let cases: [&[&str]; 6] = [
        &["validate", "plane.json"],
        &["trop-homology", "cubic.json"],
        &["spectral", "cubic.json"],
        &["audit", "line.json"],
        &["curve", "components", "concurrent-T2.json"],
        &["emit-ids", "line.json"],
    ];
    for case in cases {
        let mut args: Vec<String> = case.iter().map(|s| s.to_string()).collect();
        let last = args.len() - 1;
        args[last] = data(&args[last]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let report = json(&refs);
        let table = patchwork(&refs);
        assert!(table.status.success());
        assert_eq!(
            String::from_utf8(table.stdout).unwrap(),
            render_table(&report),
            "{case:?}"
        );
    }
}

#[test]
fn audit_passes_on_bundled_instances() {
    for file in [
        "line.json",
        "plane.json",
        "cubic.json",
        "concurrent-T1.json",
    ] {
        let out = patchwork(&["audit", &data(file)]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        let r = json(&["audit", &data(file)]);
        assert!(r.audits.iter().all(|a| a.holds));
        assert_eq!(r.audits.len(), 4);
    }
}

#[test]
fn thread_cap_does_not_change_results() {
    let a = patchwork(&["spectral", &data("cubic.json"), "--format", "json"]);
    let b = Command::new(env!("CARGO_BIN_EXE_patchwork"))
        .args(["spectral", &data("cubic.json"), "--format", "json"])
        .env("PATCHWORK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn regularity_warning() {
    let warned = json(&["validate", &data("cubic.json")]);
    assert_eq!(warned.warnings.len(), 1);
    let quiet = json(&["validate", &data("cubic.json"), "--assume-regular"]);
    assert!(quiet.warnings.is_empty());
}

#[test]
fn errors_exit_with_diagnostics() {
    let bad = scratch(
        "volume-two.json",
        r#"{"ambient_dim": 2, "points": [[0,0],[2,0],[0,1]], "triangulation": [[0,1,2]]}"#,
    );
    let out = patchwork(&["validate", &bad, "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"]["details"][0]
        .as_str()
        .unwrap()
        .contains("[0, 1, 2]"));

    let mismatch = scratch(
        "mismatch.json",
        r#"{"ambient_dim": 2, "points": [[0,0],[1,0],[0,1]], "triangulation": [[0,1,2]],
            "signs": ["+","-","-"], "phase": {"sed{}/cell{0,1}": [1,1]}}"#,
    );
    let out = patchwork(&["validate", &mismatch]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cross-check"));

    assert_eq!(
        patchwork(&["curve", "twists", &data("plane.json")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        patchwork(&["real-betti", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    let no_phase = scratch(
        "no-phase.json",
        r#"{"ambient_dim": 2, "points": [[0,0],[1,0],[0,1]], "triangulation": [[0,1,2]]}"#,
    );
    assert_eq!(patchwork(&["validate", &no_phase]).status.code(), Some(0));
    assert_eq!(patchwork(&["real-betti", &no_phase]).status.code(), Some(2));
}

#[test]
fn torus_compactification_uses_borel_moore() {
    let torus = scratch(
        "torus-line.json",
        r#"{"ambient_dim": 2, "points": [[0,0],[1,0],[0,1]], "triangulation": [[0,1,2]],
            "signs": ["+","-","-"], "compactification": "torus"}"#,
    );
    let r = json(&["real-betti", &torus]);
    assert_eq!(r.flavor.as_deref(), Some("borel-moore"));
    assert_eq!(patchwork(&["maximal", &torus]).status.code(), Some(2));
}
