use std::process::{Command, Output};

use serde_json::Value;

fn dlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlc")).args(args).output().expect("dlc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The last stderr line is the JSON diagnostic.
fn diagnostic(o: &Output) -> Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(err.lines().last().expect("diagnostic line")).unwrap()
}

fn write_spec(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("dlc-test-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

const ROBUSTNESS: &str = "\
# identity network, v = 0
fun net: identity 1
fun sub: vec_sub 2
fun norm: norm_inf 1
vec x = [0]
vec v = [0]
goal:
norm(sub(net(x), net(v)))[0] <= 0.1
";

#[test]
fn eval_prints_the_value() {
    let o = dlc(&["eval", "--logic", "dl2", "--expr", "3 == 3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("0"));
    let o = dlc(&["eval", "--logic", "stl", "--expr", "1 <= 3", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 2.0);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn shadow_prints_one_over_arity() {
    let o = dlc(&["shadow", "--logic", "stl:nu=1", "--arity", "3", "--p", "1.0", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let coords = v["coords"].as_array().unwrap();
    assert_eq!(coords.len(), 3);
    for c in coords {
        assert!((c["right_limit"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-4);
    }
}

#[test]
fn shadow_grid_matches_golden() {
    let o = dlc(&["shadow", "--grid"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_codes_follow_the_contract() {
    let usage = dlc(&["eval", "--logic", "dl2", "--expr", "1 <="]);
    assert_eq!(usage.status.code(), Some(2));
    let d = diagnostic(&usage);
    assert_eq!(d["kind"], "usage");
    assert_eq!((d["line"].as_u64(), d["col"].as_u64()), (Some(1), Some(5)));

    let bad_flag = dlc(&["eval", "--logic", "nope", "--expr", "1 <= 2"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert_eq!(diagnostic(&bad_flag)["kind"], "usage");

    let negation = dlc(&["eval", "--logic", "dl2", "--flag", "defined", "--expr", "!(1 <= 2)"]);
    assert_eq!(negation.status.code(), Some(2));
    assert_eq!(diagnostic(&negation)["code"], "negation_undefined");

    let unsound = dlc(&["soundness-fuzz", "--logic", "lukasiewicz", "--budget", "2000"]);
    assert_eq!(unsound.status.code(), Some(1));
    assert_eq!(diagnostic(&unsound)["kind"], "check");

    let sound = dlc(&["soundness-fuzz", "--logic", "product", "--budget", "2000", "--range"]);
    assert!(sound.status.success());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["table2", "--budget", "1000", "--seed", "3", "--json"];
    assert_eq!(dlc(&args).stdout, dlc(&args).stdout);
    let args = ["soundness-fuzz", "--logic", "yager:p=2", "--budget", "1000", "--json"];
    assert_eq!(dlc(&args).stdout, dlc(&args).stdout);
}

#[test]
fn table2_against_a_wrong_golden_fails() {
    let mut pattern = serde_json::to_value(ldl::metatheory::Table2Pattern::expected()).unwrap();
    pattern["rows"][0]["cells"][0] = "no".into();
    pattern["note"] = "tampered".into();
    let path = write_spec("golden.json", &pattern.to_string());
    let o = dlc(&["table2", "--budget", "1000", "--golden", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(diagnostic(&o)["code"], "table2_mismatch");
}

#[test]
fn robustness_spec_optimizes_to_the_boundary() {
    let path = write_spec("rob.ldl", ROBUSTNESS);
    let o = dlc(&["optimize", path.to_str().unwrap(), "--logic", "stl", "--wrt", "x", "--box", "0,1", "--direction", "min"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["step"], 0);
    let summary = &lines.last().unwrap()["summary"];
    assert!((summary["loss"].as_f64().unwrap() + 0.9).abs() < 1e-6);
    assert_eq!(summary["converged"], true);

    let grad = dlc(&["grad", path.to_str().unwrap(), "--logic", "stl", "--wrt", "x"]);
    assert_eq!(grad.status.code(), Some(1));
    assert_eq!(diagnostic(&grad)["code"], "non_differentiable");
}

#[test]
fn compile_emits_json_and_reparsable_text() {
    let path = write_spec("compile.ldl", ROBUSTNESS);
    let o = dlc(&["compile", path.to_str().unwrap(), "--logic", "stl", "--emit", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 0.1);
    assert_eq!(v["goal"], "norm(sub(net(x), net(v)))[0] <= 0.1");

    let text = dlc(&["compile", path.to_str().unwrap(), "--logic", "stl"]);
    let again = write_spec("compile2.ldl", &stdout(&text));
    let o2 = dlc(&["compile", again.to_str().unwrap(), "--logic", "stl"]);
    assert_eq!(stdout(&text), stdout(&o2));
}

#[test]
fn grad_check_agrees_with_finite_differences() {
    let path = write_spec("grad.ldl", "vec x = [0.3, 0.7]\ngoal:\nx[0] <= x[1] /\\ x[0] == 0.5\n");
    for logic in ["godel", "lukasiewicz", "yager:p=2", "product", "dl2", "stl"] {
        let o = dlc(&["grad", path.to_str().unwrap(), "--logic", logic, "--check"]);
        assert!(o.status.success(), "{logic}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
