use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn filippov() -> Command {
    Command::cargo_bin("filippov").unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = filippov()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    serde_json::from_slice(&out).expect("json")
}

#[test]
fn verify_builtin_passes() {
    let v = json_of(&["verify", "--algebra", "simple:3"]);
    assert_eq!(v["filippov"], true);
    assert_eq!(v["anticommutative"], true);
    assert!(v.get("filippov_witness").is_none());
}

#[test]
fn verify_perturbed_fails_with_witness() {
    let out = filippov()
        .args(["verify", "--algebra", &fixture("perturbed.json")])
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["filippov"], false);
    let w = &v["filippov_witness"];
    assert_eq!(w["x"].as_array().unwrap().len(), 3);
    assert_ne!(w["lhs"], w["rhs"]);
}

#[test]
fn verify_zero_fixture_passes() {
    filippov()
        .args([
            "verify",
            "--algebra",
            &fixture("zero.json"),
            "--format",
            "tsv",
        ])
        .assert()
        .success()
        .stdout("check\tresult\nanticommutative\tpass\nfilippov\tpass\n");
}

#[test]
fn solve_dimensions() {
    let dim = |args: &[&str]| json_of(args)["dimension"].as_u64().unwrap();
    assert_eq!(
        dim(&["solve", "--space", "gder", "--algebra", "simple:3"]),
        16
    );
    assert_eq!(
        dim(&["solve", "--space", "der", "--algebra", "semisimple:2:2"]),
        6
    );
    assert_eq!(
        dim(&["solve", "--space", "centroid", "--algebra", "simple:3"]),
        1
    );
    assert_eq!(
        dim(&["solve", "--space", "nary-der", "--algebra", "simple:3"]),
        18
    );
    let q = json_of(&["solve", "--space", "qder", "--algebra", "simple:2"]);
    assert_eq!(q["dimension"], 9);
    assert_eq!(q["head_dimension"], 9);
    let v = json_of(&[
        "solve",
        "--space",
        "delta-der",
        "--delta",
        "1/2",
        "--algebra",
        "simple:2",
    ]);
    assert_eq!(v["delta"], "1/2");
    assert_eq!(v["kind"], "delta_der");
    assert_eq!(v["dimension"], 1);
}

#[test]
fn solve_usage_errors_exit_2() {
    filippov()
        .args(["solve", "--space", "delta-der", "--algebra", "simple:2"])
        .assert()
        .code(2);
    filippov()
        .args(["solve", "--space", "bogus", "--algebra", "simple:2"])
        .assert()
        .code(2);
    filippov()
        .args(["verify", "--algebra", "simple:x"])
        .assert()
        .code(2);
    filippov()
        .args(["verify", "--algebra", "no/such/file.json"])
        .assert()
        .code(2);
}

#[test]
fn chain_tails() {
    let last_line = |alg: &str| {
        let out = filippov()
            .args(["chain", "--algebra", alg, "--format", "tsv"])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone();
        String::from_utf8(out)
            .unwrap()
            .lines()
            .last()
            .unwrap()
            .to_string()
    };
    assert!(last_line("simple:3").ends_with("QDer = GDer = End"));
    assert!(last_line("semisimple:3:2").ends_with("QDer = GDer ⊂ End"));
    assert_eq!(
        last_line(&fixture("zero.json")),
        "chain\tDer = Der_{1/2} = QDer = GDer = End"
    );
}

#[test]
fn chain_accepts_custom_deltas() {
    let v = json_of(&["chain", "--algebra", "simple:2", "--delta", "-1,3"]);
    let deltas: Vec<&str> = v["deltas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["delta"].as_str().unwrap())
        .collect();
    assert_eq!(deltas, ["-1", "3"]);
}

#[test]
fn delta_report_dimensions() {
    let v = json_of(&["delta-report", "--algebra", "simple:2"]);
    assert_eq!(v["combined"]["quotient_dim"], 8);
    assert_eq!(v["combined"]["sl_compatible"], true);
    let v = json_of(&["delta-report", "--algebra", "semisimple:2:3"]);
    assert_eq!(v["combined"]["quotient_dim"], 24);
    assert_eq!(v["blocks"].as_array().unwrap().len(), 3);
}

#[test]
fn delta_report_simple_5() {
    let v = json_of(&["delta-report", "--algebra", "simple:5", "--format", "json"]);
    assert_eq!(v["combined"]["quotient_dim"], 35);
}

#[test]
fn decompose_fixtures() {
    let v = json_of(&[
        "decompose",
        "--algebra",
        "simple:4",
        "--tuple",
        &fixture("lemma1_a5.json"),
    ]);
    let b = &v["blocks"][0];
    assert_eq!(b["h"], serde_json::json!(["0", "0", "0", "0"]));
    assert_eq!(b["d"][0], serde_json::json!(["0", "0", "-3", "0", "0"]));
    assert_eq!(b["residual"], "zero");
    let v = json_of(&[
        "decompose",
        "--algebra",
        "simple:3",
        "--tuple",
        &fixture("centroid_a4.json"),
    ]);
    let b = &v["blocks"][0];
    assert_eq!(b["h"], serde_json::json!(["1", "2", "3"]));
    assert!(b["d"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap())
        .all(|x| x == "0"));
}

#[test]
fn decompose_rejects_non_derivation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"[[["1","0","0"],["0","1","0"],["0","0","1"]],
            [["1","0","0"],["0","1","0"],["0","0","1"]],
            [["1","0","0"],["0","1","0"],["0","0","1"]]]"#,
    )
    .unwrap();
    let out = filippov()
        .args(["decompose", "--algebra", "simple:2", "--tuple"])
        .arg(&path)
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["verified"], false);
    assert!(v["witness"].as_str().unwrap().contains("identity fails"));
}

#[test]
fn decompose_solved_element_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let space = json_of(&["solve", "--space", "nary-der", "--algebra", "simple:2"]);
    let path = dir.path().join("t.json");
    std::fs::write(&path, serde_json::to_string(&space["basis"][3]).unwrap()).unwrap();
    let out = filippov()
        .args([
            "decompose",
            "--algebra",
            "simple:2",
            "--format",
            "tsv",
            "--tuple",
        ])
        .arg(&path)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert!(String::from_utf8(out)
        .unwrap()
        .trim_end()
        .ends_with("yes\tzero"));
}

#[test]
fn probe_conjecture_shapes() {
    let v = json_of(&["probe-conjecture", "--algebra", "simple:3"]);
    assert_eq!(v["gder_is_end"], true);
    assert_eq!(v["shape"], "simple (n+1)-dim");
    let v = json_of(&["probe-conjecture", "--algebra", "semisimple:3:2"]);
    assert_eq!(v["gder_is_end"], false);
    let v = json_of(&[
        "probe-conjecture",
        "--algebra",
        &fixture("small_ternary.json"),
    ]);
    assert_eq!(v["gder_is_end"], true);
    assert_eq!(v["shape"], "dim <= n");
}

#[test]
fn out_flag_writes_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        filippov()
            .args(["solve", "--space", "der", "--algebra", "simple:3", "--out"])
            .arg(p)
            .assert()
            .success()
            .stdout(format!("pass: wrote {}\n", p.display()));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let stdout = filippov()
        .args(["solve", "--space", "der", "--algebra", "simple:3"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(stdout, x);
}

#[test]
fn blocks_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ss.json");
    let a3 = filippov_core::nary_algebra::NaryAlgebra::make_simple(2).unwrap();
    filippov_core::nary_algebra::NaryAlgebra::direct_sum(&[a3.clone(), a3])
        .unwrap()
        .save(&path)
        .unwrap();
    let out = filippov()
        .args(["delta-report", "--format", "tsv", "--algebra"])
        .arg(&path)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("block2\t9\t1\t8\t0\t8\tyes"));
    assert!(text.contains("combined\t18\t2\t16\t0\t16\tyes"));
}
