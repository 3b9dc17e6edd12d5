use std::path::PathBuf;
use std::process::{Command, Output};

fn noether(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noether")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("noether-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const A: &str = r#"{"m":2,"r":2,"matrices":[[["1","2"],["0","3"]],[["0","1"],["1","0"]]]}"#;
// P^{-1} A P with P = [[1,1],[0,1]].
const A_CONJ: &str = r#"{"m":2,"r":2,"matrices":[[["1","0"],["0","3"]],[["-1","0"],["1","1"]]]}"#;
const C: &str = r#"{"m":2,"r":2,"matrices":[[["1","0"],["0","3"]],[["0","0"],["0","0"]]]}"#;

#[test]
fn conjugate_tuples_intersect() {
    let a = fixture("a.json", A);
    let b = fixture("b.json", A_CONJ);
    let o = noether(&["orbit", "intersect", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("intersect"));
}

#[test]
fn different_traces_give_witness() {
    let a = fixture("a2.json", A);
    let c = fixture("c.json", C);
    let o = noether(&["orbit", "intersect", "--a", a.to_str().unwrap(), "--b", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("disjoint-closures"));
}

#[test]
fn missing_file_is_input_error() {
    let o = noether(&["orbit", "signature", "--tuple", "/definitely/not/here.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/definitely/not/here.json"));
}

#[test]
fn malformed_json_reports_position() {
    let p = fixture("bad.json", "{\"m\": 2,\n \"r\": }");
    let o = noether(&["orbit", "signature", "--tuple", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn empty_esop_fails_verification() {
    let set = fixture("empty_set.json", &stdout(&noether(&["hitting", "sz", "--r", "32", "--d", "4", "--count", "0"])));
    let esop = noether(&["esop", "matrix", "--m", "2", "--r", "2", "--set", set.to_str().unwrap()]);
    assert_eq!(esop.status.code(), Some(0), "{}", String::from_utf8_lossy(&esop.stderr));
    let e = fixture("empty_esop.json", &stdout(&esop));
    let o = noether(&["esop", "verify", "--esop", e.to_str().unwrap(), "--m", "2", "--r", "2", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("counterexample"));
}

#[test]
fn arity_mismatch_is_input_error() {
    let set = fixture("small_set.json", &stdout(&noether(&["hitting", "diag3", "--r", "3", "--e", "1", "--k", "1"])));
    let o = noether(&["esop", "matrix", "--m", "2", "--r", "2", "--set", set.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let run = || stdout(&noether(&["--seed", "7", "hitting", "sz", "--r", "3", "--d", "5", "--count", "4"]));
    assert_eq!(run(), run());
    let other = stdout(&noether(&["--seed", "8", "hitting", "sz", "--r", "3", "--d", "5", "--count", "4"]));
    assert_ne!(run(), other);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("noether-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("necklaces.json");
    let o = noether(&["--out", path.to_str().unwrap(), "invariants", "necklaces", "--r", "2", "--l", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["count"], 6);
}

#[test]
fn reynolds_kz_of_determinant_square() {
    let o = noether(&["reynolds", "kz", "--m", "2", "--poly", "z11^2*z22^2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["text"], "1/3*z11^2*z22^2 - 2/3*z11*z12*z21*z22 + 1/3*z12^2*z21^2");
}

#[test]
fn reynolds_rejects_unknown_variable() {
    let o = noether(&["reynolds", "kz", "--m", "2", "--poly", "w^2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fft_check_passes() {
    let o = noether(&["invariants", "fft-check", "--m", "2", "--r", "2", "--l", "3", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn strict_pipeline_round_trip() {
    let w = fixture("det2.json", &stdout(&noether(&["variety", "det", "--m", "2"])));
    let t = fixture("grid.json", &stdout(&noether(&["hitting", "diag3", "--r", "4", "--e", "1", "--k", "1"])));
    let s = noether(&["esop", "strict", "--variety", w.to_str().unwrap(), "--set", t.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0), "{}", String::from_utf8_lossy(&s.stderr));
    let s = fixture("det2_esop.json", &stdout(&s));
    let z = noether(&[
        "esop",
        "zerolocus",
        "--variety",
        w.to_str().unwrap(),
        "--esop",
        s.to_str().unwrap(),
        "--trials",
        "10",
    ]);
    assert_eq!(z.status.code(), Some(0), "{}", stdout(&z));
}

#[test]
fn circuit_eval_and_validate() {
    let c = stdout(&noether(&["invariants", "generic", "--m", "1", "--r", "1", "--l", "2", "--k", "1"]));
    let p = fixture("gen.json", &c);
    let e = noether(&["circuit", "eval", "--circuit", p.to_str().unwrap(), "--point", "3,2"]);
    assert_eq!(e.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&e)).unwrap();
    assert_eq!(v[0], "36");
    let val = noether(&["circuit", "validate", "--circuit", p.to_str().unwrap()]);
    assert_eq!(val.status.code(), Some(0));
}
