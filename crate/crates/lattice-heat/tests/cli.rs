use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattice-heat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn float(v: &Value) -> f64 {
    v.to_string().parse().unwrap()
}

#[test]
fn dual_kernel_values_agree() {
    let r = json(&[
        "kernel",
        "--geometry",
        "cycle",
        "--p",
        "4",
        "--alpha",
        "0",
        "--j",
        "1",
        "--jp",
        "0",
        "--t",
        "1.0",
        "--method",
        "both",
    ]);
    let row = &r["results"][0];
    assert!((float(&row["images"]) - float(&row["modes"])).abs() <= 1e-12);
    assert_eq!(r["checks"][0]["pass"], Value::Bool(true));
    assert_eq!(r["report_version"], "1.0.0");
}

#[test]
fn kernel_at_time_zero_is_a_delta() {
    let r = json(&[
        "kernel",
        "--geometry",
        "integers",
        "--j",
        "0",
        "--jp",
        "0",
        "--t",
        "0",
    ]);
    assert_eq!(float(&r["results"][0]["images"]), 1.0);
    let r = json(&[
        "kernel",
        "--geometry",
        "integers",
        "--j",
        "3",
        "--jp",
        "0",
        "--t",
        "0,0.5",
        "--method",
        "both",
    ]);
    assert_eq!(float(&r["results"][0]["images"]), 0.0);
    assert_eq!(r["all_pass"], Value::Bool(true));
}

#[test]
fn single_mode_interval_kernel() {
    let r = json(&[
        "kernel",
        "--geometry",
        "interval",
        "--bc",
        "dn",
        "--p",
        "1",
        "--j",
        "1",
        "--jp",
        "1",
        "--t",
        "2",
    ]);
    assert!((float(&r["results"][0]["images"]) - (-2.0f64).exp()).abs() < 1e-15);
}

#[test]
fn twisted_kernel_reports_imaginary_parts() {
    let r = json(&[
        "kernel",
        "--geometry",
        "cycle",
        "--p",
        "5",
        "--alpha",
        "0.3",
        "--j",
        "2",
        "--t",
        "0.1,1,5",
        "--method",
        "both",
    ]);
    assert_eq!(r["results"].as_array().unwrap().len(), 3);
    assert!(r["results"][1].get("modes_im").is_some());
    assert_eq!(r["all_pass"], Value::Bool(true));
}

#[test]
fn exact_dirichlet_green_function() {
    let r = json(&[
        "green",
        "--geometry",
        "interval",
        "--bc",
        "dd",
        "--free",
        "1",
        "--r",
        "1",
        "--rp",
        "1",
        "--exact-x",
        "3/2",
    ]);
    // single free vertex: lambda = 2, m^2 = 2x - 2 = 1
    assert_eq!(r["results"][0]["value"], "1/3");
    assert_eq!(r["checks"][0]["pass"], Value::Bool(true));
}

#[test]
fn cycle_green_function_at_origin() {
    let r = json(&[
        "green",
        "--geometry",
        "cycle",
        "--p",
        "3",
        "--alpha",
        "0",
        "--j",
        "0",
        "--gamma",
        "0.5",
    ]);
    let x = (1.0f64).cosh();
    let want = (4.0 * x * x - 1.0) / (2.0 * (4.0 * x * x * x - 3.0 * x - 1.0));
    assert!((float(&r["results"][0]["value"]) - want).abs() < 1e-14);
    assert_eq!(r["all_pass"], Value::Bool(true));
}

#[test]
fn integer_lattice_green_function() {
    let r = json(&[
        "green",
        "--geometry",
        "integers",
        "--j",
        "2",
        "--jp",
        "0",
        "--gamma",
        "1",
    ]);
    let want = (-4.0f64).exp() / (2.0 * 2.0f64.sinh());
    assert!((float(&r["results"][0]["value"]) - want).abs() < 1e-16);
}

#[test]
fn identity_suites_pass() {
    let r = json(&["identities", "--suite", "all"]);
    assert_eq!(r["all_pass"], Value::Bool(true));
    assert!(r["checks"].as_array().unwrap().len() > 300);
    let r = json(&["identities", "--suite", "bessel", "--z", "7.5"]);
    for c in r["checks"].as_array().unwrap() {
        assert!(float(&c["residual"]) <= 1e-12, "{c}");
    }
    let r = json(&[
        "identities",
        "--suite",
        "trig",
        "--p",
        "12",
        "--alpha",
        "0.3",
        "--gamma",
        "0.1",
    ]);
    let names: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for want in ["determinant_product", "resolvent_trace", "kubert"] {
        assert!(names.contains(&want));
    }
    assert_eq!(r["all_pass"], Value::Bool(true));
}

#[test]
fn walk_generating_function_text() {
    let r = json(&["walks", "--p", "3", "--emit", "rational"]);
    assert_eq!(r["rational"], "(-1+s)/(-1+s+2s^2)");
    let r = json(&["walks", "--p", "3", "--emit", "rational", "--var", "σ"]);
    assert_eq!(r["rational"], "(-1+σ)/(-1+σ+2σ^2)");
}

#[test]
fn bump_table_for_four_cycle() {
    let r = json(&["walks", "--p", "4", "--k-max", "6", "--emit", "f"]);
    let row = |k: u64| -> Vec<String> {
        r["results"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|e| e["k"] == k)
            .map(|e| e["f"].as_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(row(2), ["0", "2", "0"]);
    assert_eq!(row(4), ["2", "2", "2", "2", "0"]);
    assert_eq!(row(6), ["0", "6", "12", "8", "4", "2", "0"]);
    assert_eq!(r["all_pass"], Value::Bool(true));
}

#[test]
fn closed_walk_counts() {
    let r = json(&["walks", "--p", "2", "--k-max", "4", "--emit", "g"]);
    assert_eq!(r["results"][4]["g"], "16");
    assert_eq!(r["all_pass"], Value::Bool(true));
}

#[test]
fn determinant_and_trees() {
    let r = json(&["walks", "--p", "5", "--emit", "detlog"]);
    assert!((float(&r["results"][0]["det_prime"]) - 25.0).abs() < 1e-6);
    let r = json(&["walks", "--p", "37", "--emit", "trees"]);
    assert_eq!(r["results"][0]["cofactor"], "37");
}

#[test]
fn laplacian_matrices() {
    let r = json(&["matrix", "--geometry", "interval", "--bc", "dn", "--p", "3"]);
    assert_eq!(
        r["matrix"],
        serde_json::json!([["2", "-1", "0"], ["-1", "2", "-1"], ["0", "-1", "1"]])
    );
    let r = json(&[
        "matrix",
        "--geometry",
        "cycle",
        "--p",
        "3",
        "--kind",
        "adjacency",
    ]);
    assert_eq!(
        r["matrix"],
        serde_json::json!([["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]])
    );
    let r = json(&[
        "matrix",
        "--geometry",
        "interval",
        "--bc",
        "nn",
        "--p",
        "2",
        "--kind",
        "green",
        "--exact-x",
        "2",
    ]);
    assert_eq!(
        r["matrix"],
        serde_json::json!([["3/8", "1/8"], ["1/8", "3/8"]])
    );
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "kernel",
        "--geometry",
        "cycle",
        "--p",
        "7",
        "--alpha",
        "0.25",
        "--j",
        "3",
        "--t",
        "0.1,1,5",
        "--method",
        "both",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let r = json(&args);
    assert!(r.get("wall_clock_seconds").is_none());
    let mut timed = args.to_vec();
    timed.push("--timing");
    assert!(json(&timed).get("wall_clock_seconds").is_some());
}

#[test]
fn other_formats() {
    let out = run(&[
        "kernel",
        "--geometry",
        "integers",
        "--t",
        "0,1",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,images"));
    assert_eq!(text.lines().count(), 3);
    let out = run(&["walks", "--p", "3", "--format", "pretty"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("verdict: PASS"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["kernel", "--geometry", "cycle", "--t", "1"][..],
        &["kernel", "--geometry", "moebius", "--t", "1"],
        &[
            "kernel",
            "--geometry",
            "interval",
            "--bc",
            "dd",
            "--p",
            "3",
            "--j",
            "4",
            "--t",
            "1",
        ],
        &["kernel", "--geometry", "integers", "--t", "-1"],
        &[
            "green",
            "--geometry",
            "cycle",
            "--p",
            "3",
            "--exact-x",
            "3/2",
        ],
        &[
            "green",
            "--geometry",
            "interval",
            "--bc",
            "dd",
            "--p",
            "2",
            "--exact-x",
            "1/2",
        ],
        &["green", "--geometry", "integers", "--gamma", "0"],
        &["walks", "--p", "0"],
        &["walks", "--p", "1", "--emit", "detlog"],
        &["identities", "--tol=-1"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn failing_checks_exit_with_three() {
    // a tolerance no computation can meet
    let out = run(&[
        "identities",
        "--suite",
        "bessel",
        "--z",
        "1",
        "--tol",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("check failed"));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["all_pass"], Value::Bool(false));
}
