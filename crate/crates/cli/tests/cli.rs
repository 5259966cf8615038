use std::process::{Command, Output};

use fu_forge_core::construction::ConstructionTrace;

fn fu_forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fu-forge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_base_matches_the_documented_example() {
    let o = fu_forge(&["gen-base", "-b", "3", "--json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "[[0,1],[2,4],[3,5],[6,9],[7,10],[8,11]]\n");
    let o = fu_forge(&["gen-base", "-b", "2"]);
    assert_eq!(stdout(&o), "({0,1},{2,4},{3,5})\n");
}

#[test]
fn exit_codes() {
    assert_eq!(fu_forge(&["frs", "-n", "1", "-c", "5"]).status.code(), Some(0));
    assert_eq!(fu_forge(&["frs", "-n", "2", "-c", "2", "--max-m", "3"]).status.code(), Some(1));
    assert_eq!(fu_forge(&["frs", "-n", "2", "-c", "2", "--budget", "2"]).status.code(), Some(3));
    assert_eq!(fu_forge(&["frs", "-n", "2"]).status.code(), Some(2));
    assert_eq!(fu_forge(&["verify", "/nonexistent/trace.json"]).status.code(), Some(2));
}

#[test]
fn frs_reports_progress_on_stderr() {
    let o = fu_forge(&["frs", "-n", "2", "-c", "2", "--max-m", "5"]);
    assert_eq!(stdout(&o), "5\n");
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("m = 4: refuted"));
    assert!(err.contains("m = 5: all colorings pass"));
}

#[test]
fn construct_then_verify_and_reject_a_tampered_trace() {
    let dir = tempfile::tempdir().unwrap();
    let stages = dir.path().join("stages.json");
    let trace = dir.path().join("trace.json");
    std::fs::write(
        &stages,
        r#"[{"colorings":[{"kind":"support_parity"}],"witness_sizes":[1,2],"drop_budget":2}]"#,
    )
    .unwrap();
    let o = fu_forge(&[
        "construct",
        "--blocks",
        "6",
        "--stages",
        stages.to_str().unwrap(),
        "--out",
        trace.to_str().unwrap(),
        "--len",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fu_forge(&["verify", trace.to_str().unwrap()]).status.success());

    let mut t: ConstructionTrace = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    t.stages[0].audit.minima[0] += 1;
    std::fs::write(&trace, serde_json::to_string(&t).unwrap()).unwrap();
    let o = fu_forge(&["verify", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL stage[0].min_pool"));
    assert!(String::from_utf8(o.stderr).unwrap().contains("failed: stage[0].min_pool"));
}

#[test]
fn unreachable_construction_writes_the_partial_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let o = fu_forge(&[
        "construct",
        "--blocks",
        "3",
        "--stages",
        r#"[{"witness_sizes":[1]},{"witness_sizes":[3]}]"#,
        "--out",
        trace.to_str().unwrap(),
        "--len",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let t: ConstructionTrace = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t.stages.len(), 1);
}

#[test]
fn random_audits_print_their_seed() {
    let o = fu_forge(&["pi-audit", "--random", "10", "--len", "5", "--seed", "42", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert!(String::from_utf8(o.stderr).unwrap().contains("seed: 42"));
}
