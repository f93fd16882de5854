use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sdkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdkit")).args(args).output().expect("runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn culf_check_passes() {
    let out = sdkit(&["check", "culf", "corpus:parallel-pair-over-arrow"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.trim_start().starts_with("{\n  \"holds\": true,\n  \"verified_dim\": 7"));
    assert_eq!(json(&out)["holds"], true);
}

#[test]
fn failing_check_exits_one_with_witness() {
    let out = sdkit(&["check", "segal", "corpus:horn-2-1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert!(v["witness"]["description"].is_string());
}

#[test]
fn conventions_agree_on_culf() {
    for name in ["codegeneracy-2-1", "vertex-1-of-arrow", "boundary-2-inclusion", "untwist-arrow-over-poset-1"] {
        let uri = format!("corpus:{name}");
        let direct = sdkit(&["check", "culf", &uri]).status.code();
        for conv in ["q", "qprime"] {
            assert_eq!(sdkit(&["check", "culf", &uri, "--convention", conv]).status.code(), direct, "{name} {conv}");
        }
    }
}

#[test]
fn roundtrip_over_poset_2() {
    let out = sdkit(&["roundtrip", "corpus:nerve-poset-2", "--dim", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["right_fibrations"], 502);
    assert_eq!(v["right_fibration_roundtrips"], 502);
    assert_eq!(v["culf_maps"], v["culf_roundtrips"]);
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"kind\":\"trunc_sset\",\"dim\":1,\"levels\":[[\"a\"],[\"b\"]],\"faces\":{\"1\":[[0],[5]]},\"degeneracies\":{\"0\":[[0]]}}").unwrap();
    assert_eq!(sdkit(&["check", "segal", path(&bad)]).status.code(), Some(2));
    assert_eq!(sdkit(&["check", "segal", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(sdkit(&["check", "segal", "corpus:no-such-thing"]).status.code(), Some(2));
    // a property that does not apply
    assert_eq!(sdkit(&["check", "segal", "corpus:codegeneracy-2-1"]).status.code(), Some(2));
}

#[test]
fn truncation_and_budget_exit_three() {
    let out = sdkit(&["nel", "corpus:simplex-1", "--dim", "1", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_sdkit"))
        .args(["roundtrip", "corpus:nerve-poset-2"])
        .env("SDKIT_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["corpus", "emit", "nerve-lattice-2x2"][..],
        &["check", "decomposition", "corpus:boundary-3"],
        &["factor", "comprehensive", "corpus:parallel-pair-over-arrow-functor"],
        &["corpus", "list"],
    ] {
        let (a, b) = (sdkit(args), sdkit(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn files_roundtrip_through_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (x, sx, sx2) = (dir.path().join("x.json"), dir.path().join("sx.json"), dir.path().join("sx2.json"));
    assert!(sdkit(&["corpus", "emit", "horn-2-1", "--dim", "5", "-o", path(&x)]).status.success());
    assert!(sdkit(&["sd", path(&x), "-o", path(&sx)]).status.success());
    assert!(sdkit(&["sd", "corpus:horn-2-1", "--dim", "5", "-o", path(&sx2)]).status.success());
    assert_eq!(std::fs::read(&sx).unwrap(), std::fs::read(&sx2).unwrap());
    let v = json(&sdkit(&["check", "segal", path(&sx)]));
    assert_eq!(v["verified_dim"], 2);
    let el = json(&sdkit(&["el", path(&x), "--degree", "1"]));
    assert_eq!(el["kind"], "fincat");
    let xi = json(&sdkit(&["xi", path(&x), "--degree", "1"]));
    assert_eq!(xi["kind"], "smap");
    let tw = json(&sdkit(&["tw", "corpus:poset-1"]));
    assert_eq!(tw["objects"].as_array().unwrap().len(), 3);
}

#[test]
fn factor_writes_both_parts() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("f");
    let out = sdkit(&["factor", "comprehensive", "corpus:vertex-1-of-arrow-functor", "-o", path(&prefix)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["composes"], true);
    assert_eq!(v["report"]["left_final"], true);
    assert_eq!(v["report"]["right_discrete_fibration"], true);
    let right = dir.path().join("f.right.json");
    assert_eq!(sdkit(&["check", "discrete-fibration", path(&right)]).status.code(), Some(0));
    let left = dir.path().join("f.left.json");
    assert_eq!(sdkit(&["check", "final", path(&left)]).status.code(), Some(0));

    let v = json(&sdkit(&["factor", "culf", "corpus:horn-2-1-inclusion"]));
    assert_eq!(v["report"]["composes"], true);
    assert_eq!(v["report"]["right_culf"], true);
}

#[test]
fn untwist_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let (p, x) = (dir.path().join("p.json"), dir.path().join("x.json"));
    assert!(sdkit(&["sd", "corpus:untwist-arrow-over-poset-1", "-o", path(&p)]).status.success());
    assert!(sdkit(&["corpus", "emit", "nerve-poset-1", "-o", path(&x)]).status.success());
    let out = sdkit(&["untwist", path(&p), path(&x)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["culf"]["holds"], true);
    // the base must match the subdivision
    assert_eq!(sdkit(&["untwist", path(&p), "corpus:nerve-poset-2"]).status.code(), Some(2));
}

#[test]
fn quick_verification_is_green() {
    let out = sdkit(&["verify-all", "--quick"]);
    let v = json(&out);
    assert_eq!(v["passed"], true, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["checks"].as_array().unwrap().len(), 29);
}
