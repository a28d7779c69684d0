use std::process::{Command, Output};

use serde_json::Value;

fn djet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_djet")).args(args).output().expect("djet runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn compare_passes_for_a_deformed_metric() {
    let out = djet(&["compare", "--sigma", "x1*x2", "--h11", "1+t^2", "--count", "10", "--seed", "1", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["schema"], "djet-report/1");
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["points"], 10);
    for (name, d) in report["discrepancies"].as_object().unwrap() {
        assert!(d["max_rel"].as_f64().unwrap() < 1e-6, "{name}: {d}");
    }
    assert!(report["identities"]["conservation_momentum"]["pass"].as_bool().unwrap());
}

#[test]
fn empty_and_constant_runs() {
    let out = djet(&["compare", "--sigma", "x1", "--h11", "1", "--count", "0", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["verdict"], "pass");
    assert!(report["discrepancies"].as_object().unwrap().is_empty());

    let out = djet(&["compare", "--sigma", "0", "--h11", "1", "--count", "5", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["warnings"][0], "constant sigma");
}

#[test]
fn report_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = djet(&["compare", "--sigma", "sin(x2)", "--h11", "exp(t)", "--count", "4", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("verdict: PASS"), "{summary}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["config"]["count"], 4);
}

#[test]
fn custom_hamiltonian_is_checked_against_the_closed_forms() {
    let same = "4*exp(-2*x1)*(1+t^2)*(p1*p2*p3*p4)^(1/2)";
    let out = djet(&["compare", "--sigma", "x1", "--h11", "1+t^2", "--hamiltonian", same, "--count", "5", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let other = "4*exp(-3*x1)*(1+t^2)*(p1*p2*p3*p4)^(1/2)";
    let out = djet(&["compare", "--sigma", "x1", "--h11", "1+t^2", "--hamiltonian", other, "--count", "5", "--json", "-"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_stdout(&out)["verdict"], "fail");
}

#[test]
fn sampling_exhaustion_and_bad_input_exit_with_errors() {
    let out = djet(&["compare", "--sigma", "x1", "--h11", "t", "--count", "10", "--t-range", "-1", "-0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sampling exhausted"));

    let out = djet(&["compare", "--sigma", "x1 +", "--h11", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = djet(&["compare", "--sigma", "p1", "--h11", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = djet(&["compare", "--sigma", "x1", "--h11", "1", "--p-range", "0.01", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_examples() {
    let out = djet(&["eval", "--sigma", "0", "--h11", "1", "--point", "t=0,x=[0,0,0,0],p=[1,1,1,1]", "--objects", "g,ginv,sc,em"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_stdout(&out);
    let objects = &doc["objects"];
    for name in ["g", "ginv"] {
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { -0.5 } else { 0.5 };
                assert!((objects[name][i][j].as_f64().unwrap() - expected).abs() < 1e-14);
            }
        }
    }
    assert!((objects["sc"].as_f64().unwrap() + 1.5).abs() < 1e-12);
    let em = djet(&["eval", "--sigma", "x1*x2", "--h11", "1+t^2", "--point", "t=0.3,x=[0.2,-0.4,0.1,0.5],p=[0.5,2,3,1.5]", "--objects", "em"]);
    let em = json_stdout(&em);
    assert!(em["objects"]["em"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|v| v.as_f64().unwrap().abs() < 1e-9));
}

#[test]
fn eval_text_and_closed_form() {
    let args = ["eval", "--sigma", "x1*x2", "--h11", "1", "--point", "p=[1,1,1,1]", "--objects", "ricci", "--format", "text"];
    let generic = String::from_utf8(djet(&args).stdout).unwrap();
    assert!(generic.contains("ricci_r[1,2]"), "{generic}");
    let line = generic.lines().find(|l| l.trim_start().starts_with("ricci_r[1,2]")).unwrap();
    let value: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
    assert!((value + 2.0).abs() < 1e-12);

    let mut closed = args.to_vec();
    closed.extend(["--pipeline", "closed-form"]);
    let closed = String::from_utf8(djet(&closed).stdout).unwrap();
    assert!(closed.contains("ricci_s[4,4]"));
}

#[test]
fn eval_rejects_bad_requests() {
    let out = djet(&["eval", "--sigma", "0", "--h11", "1", "--point", "p=[1,1,1,1]", "--objects", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown object selector"));
    let out = djet(&["eval", "--sigma", "0", "--h11", "1", "--point", "p=[1,-1,1,1]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = djet(&["eval", "--sigma", "0", "--h11", "t", "--point", "t=-1,p=[1,1,1,1]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn log_level_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_djet"))
        .args(["compare", "--sigma", "x1", "--h11", "1", "--count", "2"])
        .env("DJET_LOG", "info")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("sampled 2 points"));
}
