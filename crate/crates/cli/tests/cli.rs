use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rbasis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbasis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_examples() {
    let out = rbasis(&["check", "--preset", "paper-example", "--set", "0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["ok"], true);

    let out = rbasis(&["check", "--preset", "dowd(2,1)", "--set", "0,1,2"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["violations"][0]["n"], 2);

    let out = rbasis(&["check", "--preset", "dowd(2,3)", "--set", "[0]"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["window"], serde_json::json!([0, 0]));
}

#[test]
fn check_with_window_and_oracle() {
    let out = rbasis(&["check", "--preset", "paper-example", "--set", "0,1", "--window", "500"]);
    assert_eq!(code(&out), 0);
    let out = rbasis(&["check", "--preset", "dowd(2,1)", "--set", "0,1,2", "--oracle"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["ok"], false);
}

#[test]
fn profile_examples() {
    let r = |out: &Output| lines(out).iter().map(|l| l["r"].as_u64().unwrap()).collect::<Vec<_>>();
    let out = rbasis(&["profile", "--preset", "dowd(2,2)", "--set", "0,1", "--window", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(r(&out), vec![1, 1, 1]);

    let out = rbasis(&["profile", "--preset", "paper-example", "--set", "0,1", "--window", "5"]);
    assert_eq!(r(&out), vec![1; 6]);

    let out = rbasis(&["profile", "--preset", "dowd(3,2)", "--set", "0", "--window", "0"]);
    let l = lines(&out);
    assert_eq!(l.len(), 1);
    assert_eq!(l[0], serde_json::json!({"n": 0, "r": 1}));
}

#[test]
fn profile_counts_are_exact() {
    let set = (0..=30).map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let out = rbasis(&["profile", "--preset", "dowd(60,1)", "--set", &set, "--window", "900"]);
    let l = lines(&out);
    // far past u64: printed as a decimal string
    let r = l[900]["r"].as_str().unwrap();
    assert!(r.len() > 20 && r.bytes().all(|b| b.is_ascii_digit()), "{r}");
}

#[test]
fn search_examples() {
    let out = rbasis(&["search", "--preset", "dowd(2,1)", "--target", "10"]);
    assert_eq!(code(&out), 3);
    let o = json(&out);
    assert_eq!(o["kind"], "exhausted");
    assert_eq!(o["stats"]["deepest"], serde_json::json!([0, 1, 3, 5]));

    let out = rbasis(&["search", "--preset", "dowd(2,100)", "--target", "100"]);
    assert_eq!(code(&out), 0);
    let o = json(&out);
    assert!(o["witness"].as_array().unwrap().last().unwrap().as_u64().unwrap() >= 100);

    let out = rbasis(&["search", "--preset", "paper-example", "--target", "50"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["kind"], "found");
}

#[test]
fn search_bound_cap_is_exit_5() {
    let out = rbasis(&[
        "search",
        "--preset",
        "paper-example",
        "--target",
        "50",
        "--strategy",
        "bfs",
        "--hard-cap",
        "500",
    ]);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("max(H_n)/n"));
}

#[test]
fn budget_checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let args = ["search", "--preset", "dowd(2,1)", "--target", "10", "--record-vertices"];
    let straight = rbasis(&args);

    let mut first = args.to_vec();
    first.extend(["--budget", "2", "--checkpoint", path(&cp)]);
    let out = rbasis(&first);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["checkpoint_path"], path(&cp));

    let mut second = args.to_vec();
    second.extend(["--resume", path(&cp), "--parallel", "4"]);
    let resumed = rbasis(&second);
    assert_eq!(code(&resumed), 3);
    assert_eq!(stdout(&resumed), stdout(&straight));

    let out = rbasis(&[
        "search",
        "--preset",
        "dowd(2,2)",
        "--target",
        "10",
        "--resume",
        path(&cp),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("different configuration"));
}

#[test]
fn periodic_checkpoints_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let out = rbasis(&[
        "search",
        "--preset",
        "dowd(2,3)",
        "--target",
        "100000",
        "--budget",
        "40",
        "--checkpoint-every",
        "10",
        "--checkpoint",
        path(&cp),
        "--heartbeat",
        "0",
    ]);
    assert_eq!(code(&out), 4);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&cp).unwrap()).unwrap();
    assert_eq!(saved["stats"]["expanded"], 40);
}

#[test]
fn unbounded_instance_gives_no_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let out = rbasis(&[
        "search",
        "--preset",
        "dowd(2,2)",
        "--target",
        "18446744073709551615",
        "--budget",
        "100",
        "--checkpoint",
        path(&cp),
    ]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["witness"], Value::Null);
    assert!(cp.exists());
}

#[test]
fn parallel_output_is_identical() {
    for strategy in ["dfs-smallest-first", "dfs-largest-first", "bfs", "iterative-deepening"] {
        let base = [
            "search",
            "--preset",
            "dowd(2,2)",
            "--target",
            "40",
            "--strategy",
            strategy,
            "--record-vertices",
            "--budget",
            "300",
        ];
        let seq = rbasis(&base);
        let mut par = base.to_vec();
        par.extend(["--parallel", "4"]);
        assert_eq!(stdout(&seq), stdout(&rbasis(&par)), "{strategy}");
    }
}

#[test]
fn enumerate_examples() {
    let out = rbasis(&["enumerate", "--preset", "dowd(2,1)", "--max-element", "6"]);
    assert_eq!(code(&out), 0);
    assert_eq!(lines(&out).len(), 4);

    let out = rbasis(&["enumerate", "--preset", "dowd(2,2)", "--max-element", "3"]);
    let sets: Vec<Value> = lines(&out).into_iter().map(|l| l["set"].clone()).collect();
    assert_eq!(
        sets,
        serde_json::json!([[0], [0, 1], [0, 1, 2], [0, 1, 2, 3], [0, 1, 3]])
            .as_array()
            .unwrap()
            .clone()
    );

    let out = rbasis(&["enumerate", "--preset", "exact-f(3,1)", "--max-element", "0"]);
    assert_eq!(stdout(&out), "{\"set\":[0]}\n");
}

#[test]
fn enumerate_matches_hidden_oracle() {
    for preset in ["dowd(2,2)", "dowd(3,2)", "exact-f(2,1,2=2)"] {
        let fast = rbasis(&["enumerate", "--preset", preset, "--max-element", "10"]);
        let slow = rbasis(&["enumerate", "--preset", preset, "--max-element", "10", "--oracle"]);
        assert_eq!(stdout(&fast), stdout(&slow), "{preset}");
    }
}

#[test]
fn dumped_presets_reload_identically() {
    let dir = tempfile::tempdir().unwrap();
    for preset in ["dowd(2,3)", "exact-f(2,1,4=2)", "paper-example"] {
        let dumped = rbasis(&["preset", preset]);
        assert_eq!(code(&dumped), 0);
        let via_flag = rbasis(&["check", "--preset", preset, "--set", "0", "--dump-config"]);
        assert_eq!(stdout(&dumped), stdout(&via_flag));
        let file = dir.path().join("pair.json");
        std::fs::write(&file, stdout(&dumped)).unwrap();
        for args in [["enumerate", "--max-element", "8"], ["check", "--set", "0,1"]] {
            let from_preset = rbasis(&[args[0], "--preset", preset, args[1], args[2]]);
            let from_file = rbasis(&[args[0], "--config", path(&file), args[1], args[2]]);
            assert_eq!(stdout(&from_preset), stdout(&from_file));
            assert_eq!(code(&from_preset), code(&from_file));
        }
    }
}

#[test]
fn malformed_input_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"H":{"kind":"constant","set":[2]},"R":{"kind":"constant","set":[5]},"start_index":0}"#,
    )
    .unwrap();
    let out = rbasis(&["check", "--config", path(&bad), "--set", "0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("card(H_0)"));

    std::fs::write(&bad, "{").unwrap();
    assert_eq!(code(&rbasis(&["check", "--config", path(&bad), "--set", "0"])), 2);
    assert_eq!(code(&rbasis(&["check", "--preset", "dowd(2,1)", "--set", "0,-1"])), 2);
    assert_eq!(code(&rbasis(&["check", "--preset", "nope", "--set", "0"])), 2);
    assert_eq!(
        code(&rbasis(&[
            "search",
            "--preset",
            "dowd(2,1)",
            "--target",
            "5",
            "--strategy",
            "dfs"
        ])),
        2
    );
    assert_eq!(
        code(&rbasis(&[
            "search",
            "--preset",
            "dowd(2,1)",
            "--target",
            "5",
            "--budget",
            "0"
        ])),
        2
    );
    assert_eq!(
        code(&rbasis(&[
            "profile",
            "--config",
            "/nonexistent/pair.json",
            "--set",
            "0",
            "--window",
            "3"
        ])),
        2
    );
}
