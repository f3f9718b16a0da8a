use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn flowcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn body(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Witness fields are matrix objects; wrap bare row arrays.
fn witness(a: Value, b: Value, r: Value, s: Value, lag: usize) -> Value {
    json!({
        "A": { "rows": a },
        "B": { "rows": b },
        "R": { "rows": r },
        "S": { "rows": s },
        "lag": lag,
        "semiring": "Zplus"
    })
}

fn full_to_two_witness() -> Value {
    witness(json!([[1, 1], [1, 1]]), json!([[2]]), json!([[1], [1]]), json!([[1, 1]]), 1)
}

#[test]
fn components_of_a_chain() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a.json", &json!([[1, 1], [0, 1]]));
    let out = flowcert(&["components", arg(&f)]);
    assert_eq!(status(&out), 0);
    let v = body(&out);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
    assert_eq!(v["trivial_indices"], json!([]));
    assert_eq!(v["poset"]["covers"], json!([["1", "2"]]));
    assert!(v.get("partition").is_some());
}

#[test]
fn components_report_trivial_indices() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a.json", &json!({ "rows": [[0, 1], [0, 0]] }));
    let out = flowcert(&["components", arg(&f)]);
    assert_eq!(status(&out), 0);
    let v = body(&out);
    assert_eq!(v["trivial_indices"], json!(["1", "2"]));
    assert!(v.get("partition").is_none());
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("bad.json");
    fs::write(&f, "{ rows: [[1, 2]").unwrap();
    assert_eq!(status(&flowcert(&["components", arg(&f)])), 2);
    assert_eq!(status(&flowcert(&["components", "/nonexistent/matrix.json"])), 2);
    let neg = write(dir.path(), "neg.json", &json!([[1, -1], [0, 1]]));
    assert_eq!(status(&flowcert(&["invariants", arg(&neg)])), 2);
    assert_eq!(status(&flowcert(&["no-such-command"])), 2);
}

#[test]
fn invariants_examples() {
    let dir = TempDir::new().unwrap();
    let out = flowcert(&["invariants", arg(&write(dir.path(), "a.json", &json!([[4]])))]);
    assert_eq!(status(&out), 0);
    assert_eq!(body(&out), json!({"torsion": [3], "free_rank": 0, "det": -3, "det_poly": [1, -4]}));

    let out = flowcert(&["invariants", arg(&write(dir.path(), "b.json", &json!([[2]])))]);
    assert_eq!(body(&out), json!({"torsion": [], "free_rank": 0, "det": -1, "det_poly": [1, -2]}));

    let out = flowcert(&["invariants", arg(&write(dir.path(), "c.json", &json!([[0, 1], [1, 0]])))]);
    let v = body(&out);
    assert_eq!(v["free_rank"], json!(1));
    assert_eq!(v["det"], json!(0));
    assert_eq!(v["det_poly"], json!([1, 0, -1]));
}

#[test]
fn decide_irreducible() {
    let dir = TempDir::new().unwrap();
    let two = write(dir.path(), "two.json", &json!([[2]]));
    let three = write(dir.path(), "three.json", &json!([[3]]));
    let full = write(dir.path(), "full.json", &json!([[1, 1], [1, 1]]));
    let out = flowcert(&["decide-fe-irreducible", arg(&two), arg(&three)]);
    assert_eq!(status(&out), 1);
    let v = body(&out);
    assert_eq!(v["flow_equivalent"], json!(false));
    assert_eq!(v["a"]["determinant"], json!(-1));
    assert_eq!(v["b"]["determinant"], json!(-2));

    let out = flowcert(&["decide-fe-irreducible", arg(&two), arg(&full)]);
    assert_eq!(status(&out), 0);

    let swap = write(dir.path(), "swap.json", &json!([[0, 1], [1, 0]]));
    let out = flowcert(&["decide-fe-irreducible", arg(&swap), arg(&two)]);
    assert_eq!(status(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("permutation"));
}

#[test]
fn verify_se_verdicts() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "good.json", &full_to_two_witness());
    let out = flowcert(&["verify-se", arg(&good)]);
    assert_eq!(status(&out), 0);
    assert_eq!(body(&out)["pass"], json!(true));

    let bad = witness(json!([[1, 1], [1, 1]]), json!([[2]]), json!([[1], [2]]), json!([[1, 1]]), 1);
    let out = flowcert(&["verify-se", arg(&write(dir.path(), "bad.json", &bad))]);
    assert_eq!(status(&out), 1);
    assert_eq!(body(&out)["pass"], json!(false));
}

#[test]
fn pse_at_one_on_the_two_shift() {
    let dir = TempDir::new().unwrap();
    let w = witness(json!([[2]]), json!([[2]]), json!([[2]]), json!([[1]]), 1);
    let f = write(dir.path(), "w.json", &w);
    let out = flowcert(&["pse", arg(&f), "--at-one"]);
    assert_eq!(status(&out), 0);
    let v = body(&out);
    assert_eq!(v["at_one"]["u1"]["rows"], json!([[1, 2], [-1, -1]]));
    assert_eq!(v["report"]["pass"], json!(true));

    let out = flowcert(&["pse", arg(&f)]);
    assert_eq!(status(&out), 0);
    let v = body(&out);
    assert_eq!(v["report"]["det_one"], json!(true));
    assert!(v["certificate"]["intertwiner"]["rows"].is_array());

    assert_eq!(status(&flowcert(&["pse", arg(&f), "--variant", "5"])), 2);
}

#[test]
fn pse_partitioned() {
    let dir = TempDir::new().unwrap();
    let w = witness(json!([[1, 1], [0, 1]]), json!([[1, 1], [0, 1]]), json!([[1, 1], [0, 1]]), json!([[1, 0], [0, 1]]), 1);
    let out = flowcert(&["pse", arg(&write(dir.path(), "w.json", &w)), "--partitioned"]);
    assert_eq!(status(&out), 0);
    let v = body(&out);
    assert_eq!(v["report"]["partitioned"], json!(true));
    assert!(v["certificate"]["poset"].is_object());
}

#[test]
fn reduce_removes_trivial_indices() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a.json", &json!([[0, 1], [0, 1]]));
    let out = flowcert(&["reduce", arg(&f)]);
    assert_eq!(status(&out), 0);
    let v = body(&out);
    assert_eq!(v["reduced"]["rows"], json!([[1]]));
    assert_eq!(v["chain"].as_array().unwrap().len(), 1);

    let nil = write(dir.path(), "nil.json", &json!([[0, 1], [0, 0]]));
    assert_eq!(status(&flowcert(&["reduce", arg(&nil)])), 2);

    let w = write(dir.path(), "w.json", &full_to_two_witness());
    let out = flowcert(&["reduce", arg(&w)]);
    assert_eq!(status(&out), 0);
    assert!(body(&out)["se"]["A"].is_object());
}

#[test]
fn certify_and_recheck() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "w.json", &full_to_two_witness());
    let out = flowcert(&["certify-fe", arg(&f), "--row-side"]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert = body(&out);
    assert_eq!(cert["overall"], json!(true));
    for key in ["reduction", "lift", "pse", "at_one", "sl_p", "cycle_match", "positivity"] {
        assert!(!cert[key].is_null(), "missing {key}");
    }

    let stored = dir.path().join("cert.json");
    fs::write(&stored, &out.stdout).unwrap();
    let out = flowcert(&["recheck", arg(&stored)]);
    assert_eq!(status(&out), 0);
    assert_eq!(body(&out), json!({"recorded": true, "recomputed": true}));

    let mut tampered = cert.clone();
    tampered["at_one"]["u1"]["rows"][0][0] = json!(7);
    let bad = write(dir.path(), "tampered.json", &tampered);
    let out = flowcert(&["recheck", arg(&bad)]);
    assert_eq!(status(&out), 1);
    assert_eq!(body(&out)["recomputed"], json!(false));
}

#[test]
fn certify_rejects_invalid_witness() {
    let dir = TempDir::new().unwrap();
    let bad = witness(json!([[1, 1], [1, 1]]), json!([[2]]), json!([[1], [2]]), json!([[1, 1]]), 1);
    let out = flowcert(&["certify-fe", arg(&write(dir.path(), "bad.json", &bad))]);
    assert_eq!(status(&out), 1);
    let v = body(&out);
    assert_eq!(v["overall"], json!(false));
    assert_eq!(v["failure"]["stage"], json!("verify-se"));
}

#[test]
fn batch_certify_is_atomic_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let one = write(dir.path(), "one.json", &full_to_two_witness());
    let swap = witness(
        json!([[0, 1], [1, 0]]),
        json!([[0, 1], [1, 0]]),
        json!([[1, 0], [0, 1]]),
        json!([[0, 1], [1, 0]]),
        1,
    );
    let two = write(dir.path(), "two.json", &swap);
    let out_dir = dir.path().join("certs");
    let run = || flowcert(&["certify-fe", arg(&one), arg(&two), "--out-dir", arg(&out_dir)]);
    let out = run();
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let results = body(&out)["results"].as_array().unwrap().clone();
    assert_eq!(results.len(), 2);
    assert!(results.iter().all(|r| r["overall"] == json!(true)));
    let first = fs::read(out_dir.join("one.cert.json")).unwrap();
    let second_cert = fs::read(out_dir.join("two.cert.json")).unwrap();
    let names: Vec<_> = fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "leftover temporary files: {names:?}");

    assert_eq!(status(&run()), 0);
    assert_eq!(fs::read(out_dir.join("one.cert.json")).unwrap(), first);
    assert_eq!(fs::read(out_dir.join("two.cert.json")).unwrap(), second_cert);

    let out = flowcert(&["recheck", arg(&out_dir.join("two.cert.json"))]);
    assert_eq!(status(&out), 0);

    assert_eq!(status(&flowcert(&["certify-fe", arg(&one), arg(&two)])), 2);
}

#[test]
fn selftest_passes() {
    let out = flowcert(&["selftest", "--seed", "3", "--count", "12"]);
    assert_eq!(status(&out), 0);
    let v = body(&out);
    assert_eq!(v["pass"], json!(true));
    assert_eq!(v["fe_pass"], json!(12));
    let seq = flowcert(&["selftest", "--seed", "3", "--count", "12", "--sequential"]);
    assert_eq!(seq.stdout, out.stdout);
}
