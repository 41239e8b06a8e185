use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value as Json;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extfair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn check_ef1_but_not_efx() {
    let inst = fixture("swap_envy.json");
    let alloc = fixture("swap_envy_ef1_allocation.json");
    let out = run(&[
        "check",
        "--instance",
        p(&inst),
        "--allocation",
        p(&alloc),
        "--concepts",
        "ef1,efx",
    ]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    assert_eq!(report["EF1"]["holds"], true);
    assert_eq!(report["EFX"]["holds"], false);
}

#[test]
fn check_single_agent_is_ef() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("one.json");
    let alloc = dir.path().join("pi.json");
    std::fs::write(&inst, r#"{"agents":1,"items":["a","b"],"values":[[[2],[-1]]]}"#).unwrap();
    std::fs::write(&alloc, r#"{"assignment":{"a":1,"b":1}}"#).unwrap();
    let out = run(&[
        "check",
        "--concepts",
        "ef",
        "--instance",
        p(&inst),
        "--allocation",
        p(&alloc),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_input_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let alloc = fixture("swap_envy_allocation.json");
    assert_eq!(
        code(&run(&["check", "--instance", p(&bad), "--allocation", p(&alloc)])),
        2
    );
    assert_eq!(
        code(&run(&[
            "check",
            "--instance",
            "/nonexistent.json",
            "--allocation",
            p(&alloc)
        ])),
        2
    );
    let inst = fixture("swap_envy.json");
    assert_eq!(
        code(&run(&[
            "check",
            "--instance",
            p(&inst),
            "--allocation",
            p(&alloc),
            "--concepts",
            "nope"
        ])),
        2
    );
    assert_eq!(code(&run(&["solve"])), 2);
}

#[test]
fn solve_two_agent_algorithms() {
    let inst = fixture("swap_envy.json");
    for alg in ["two-efx", "two-ef1"] {
        let out = run(&["solve", "--algorithm", alg, "--instance", p(&inst)]);
        assert_eq!(code(&out), 0);
        let doc = stdout_json(&out);
        assert_eq!(doc["assignment"].as_object().unwrap().len(), 3);
    }
    let three = fixture("no_efx.json");
    assert_eq!(
        code(&run(&["solve", "--algorithm", "two-efx", "--instance", p(&three)])),
        2
    );
}

#[test]
fn three_binary_guard_and_trace() {
    let inst = fixture("ef_not_prop_three.json");
    assert_eq!(
        code(&run(&[
            "solve",
            "--algorithm",
            "three-binary-ef1",
            "--instance",
            p(&inst)
        ])),
        2
    );

    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("bin.json");
    let gen = run(&[
        "gen",
        "--agents",
        "3",
        "--items",
        "14",
        "--binary",
        "--no-chore",
        "--min",
        "0",
        "--max",
        "1",
        "--out",
        p(&bin),
    ]);
    assert_eq!(code(&gen), 0, "{}", String::from_utf8_lossy(&gen.stderr));
    let trace = dir.path().join("trace.json");
    let out_file = dir.path().join("pi.json");
    let out = run(&[
        "solve",
        "--algorithm",
        "three-binary-ef1",
        "--instance",
        p(&bin),
        "--trace",
        p(&trace),
        "--out",
        p(&out_file),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let t: Json = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(t["steps"].is_array() && t["kernel"].is_array());
    let check = run(&[
        "check",
        "--instance",
        p(&bin),
        "--allocation",
        p(&out_file),
        "--concepts",
        "ef1",
    ]);
    assert_eq!(code(&check), 0);
}

#[test]
fn maxmin_with_order() {
    let dir = tempfile::tempdir().unwrap();
    let pdm = dir.path().join("p.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--kind",
            "pdm",
            "--agents",
            "3",
            "--items",
            "7",
            "--out",
            p(&pdm)
        ])),
        0
    );
    let out = run(&[
        "solve",
        "--algorithm",
        "maxmin-rr",
        "--pdm",
        p(&pdm),
        "--order",
        "3,1,2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["choices"].as_object().unwrap().len(), 7);
    assert_eq!(
        code(&run(&[
            "solve",
            "--algorithm",
            "maxmin-rr",
            "--pdm",
            p(&pdm),
            "--order",
            "1,1,2"
        ])),
        2
    );
    let inst = fixture("swap_envy.json");
    assert_eq!(
        code(&run(&[
            "solve",
            "--algorithm",
            "two-efx",
            "--instance",
            p(&inst),
            "--order",
            "1,2"
        ])),
        2
    );
}

#[test]
fn enumerate_reports_count_and_witness() {
    let inst = fixture("no_efx.json");
    let out = run(&["enumerate", "--predicate", "efx", "--instance", p(&inst)]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["count"], 0);
    assert_eq!(doc["total"], 2187);
    assert!(doc["first_witness"].is_null());
    let out = run(&["enumerate", "--predicate", "ef1", "--instance", p(&inst)]);
    let doc = stdout_json(&out);
    assert!(doc["count"].as_u64().unwrap() > 0);
    assert!(doc["first_witness"]["assignment"].is_object());
}

#[test]
fn audit_small_run_is_clean() {
    let out = run(&["audit", "--trials", "40"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let doc = stdout_json(&out);
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 11);
    assert!(doc["non_edges"]
        .as_array()
        .unwrap()
        .iter()
        .all(|n| n["confirmed"] == true));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let a = run(&["gen", "--agents", "2", "--items", "5", "--seed", "7"]);
    let b = run(&["gen", "--agents", "2", "--items", "5", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    std::fs::write(&inst, &a.stdout).unwrap();
    let alloc = run(&["gen", "--kind", "allocation", "--instance", p(&inst)]);
    assert_eq!(code(&alloc), 0);
    let pi = dir.path().join("pi.json");
    std::fs::write(&pi, &alloc.stdout).unwrap();
    let check = run(&["check", "--instance", p(&inst), "--allocation", p(&pi)]);
    assert!(matches!(code(&check), 0 | 1));
}
