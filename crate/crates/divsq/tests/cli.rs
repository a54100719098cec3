use std::path::PathBuf;
use std::process::{Command, Output};

use divsq::format::complex_to_json;
use divsq_core::rchain::RVSComplex;

fn divsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divsq"))
        .args(args)
        .output()
        .expect("the divsq binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn decompose_prints_sorted_summands() {
    let o = divsq(&["decompose", &data("f2_plus_t12.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "F(2) + T(1,2)\n");
    let o = divsq(&["decompose", &data("empty.json")]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn malformed_input_exits_with_2() {
    let o = divsq(&["decompose", &data("bad_phi.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degree 1"), "{}", stderr(&o));
    let o = divsq(&["decompose", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = divsq(&["adem"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pi_u_of_shifted_free_point() {
    let o = divsq(&["pi-u", &data("sigma2_f1.json"), "--max-homotopy", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dims = v["dims"].as_object().unwrap();
    let keys: Vec<&str> = dims.keys().map(String::as_str).collect();
    assert_eq!(keys, ["(0,0)", "(2,1)", "(4,2)", "(6,3)"]);
    assert!(dims.values().all(|c| c == 1));
}

#[test]
fn pi_u_oracle_matches_on_a_cell() {
    let o = divsq(&["pi-u", &data("sigma1_c11.json"), "--oracle", "--max-homotopy", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("MATCH\n"), "{}", stdout(&o));
}

#[test]
fn zero_complex_has_only_the_unit() {
    let o = divsq(&["pi-u", &data("zero.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"], serde_json::json!({"(0,0)": 1}));
}

#[test]
fn oracle_guardrail_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k20.json");
    std::fs::write(&path, complex_to_json(&RVSComplex::shifted_free_point(2, 0, 8))).unwrap();
    let o = divsq(&["pi-u", path.to_str().unwrap(), "--oracle", "--max-homotopy", "8", "--max-internal", "8"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("smaller"));
}

#[test]
fn levels_below_t_plus_one_are_refused() {
    let o = divsq(&["pi-u", &data("sigma2_f1.json"), "--oracle", "--max-homotopy", "4", "--levels", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn collapse_qx_and_adem() {
    let o = divsq(&["collapse", "--degrees", "1", "--max-degree", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUAL through degree 20\n"));
    let o = divsq(&["collapse", "--degrees", "1,2", "--max-degree", "30"]);
    assert!(stdout(&o).starts_with("EQUAL through degree 30\n"));
    let o = divsq(&["adem", "3", "4"]);
    assert_eq!(stdout(&o), "d5 d2\n");
    let o = divsq(&["qx", "--degrees", "1", "--max-degree", "3"]);
    let degrees: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(degrees, ["1", "2", "3"]);
}

#[test]
fn e2_json_shape() {
    let o = divsq(&["e2", "--degrees", "2", "--max-degree", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["max_degree"], 10);
    assert_eq!(v["series_equal"], true);
    let e2 = v["e2"].as_array().unwrap();
    assert!(e2.iter().all(|g| g.get("s").is_some() && g.get("a").is_some() && g.get("I").is_some()));
    assert_eq!(e2.len(), v["dl"].as_array().unwrap().len());
}

#[test]
fn json_output_is_byte_stable() {
    let path = data("sigma1_c11.json");
    let args = ["e-infinity", path.as_str(), "--max-homotopy", "3", "--format", "json"];
    let a = divsq(&args);
    let b = divsq(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn golden_snapshots_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().to_str().unwrap();
    let first = divsq(&["selftest", "--golden", golden]);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 9);
    let second = divsq(&["selftest", "--golden", golden]);
    assert_eq!(second.status.code(), Some(0), "{}", stdout(&second));
    std::fs::write(dir.path().join("criterion_4.json"), "{}").unwrap();
    let third = divsq(&["selftest", "--golden", golden]);
    assert_eq!(third.status.code(), Some(1));
}
