use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ci-slope");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CI_SLOPE_GRID")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn slope_examples() {
    let out = run(&["slope", "--n", "3", "--d", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["outputs"]["lambda"], "24/5");
    assert_eq!(v["outputs"]["genus"], "10");
    assert_eq!(
        json(&run(&["slope", "--n", "2", "--d", "4"]))["outputs"]["lambda"],
        "3"
    );

    let out = run(&["slope", "--n", "2", "--d", "2"]);
    assert_eq!(code(&out), 2);
    let diag = json(&out)["diagnostics"][0].as_str().unwrap().to_string();
    assert!(diag.contains("slope undefined: denominator zero"), "{diag}");
}

#[test]
fn fibration_examples() {
    let v = json(&run(&[
        "fibration",
        "--n",
        "3",
        "--d",
        "3",
        "--b",
        "0",
        "--deg-e",
        "1",
        "--coeffs",
        "0,0",
    ]));
    assert_eq!(v["outputs"]["k2"], "72");
    assert_eq!(v["outputs"]["chi"], "15");
    assert_eq!(v["outputs"]["slope_equality"], true);
    assert_eq!(v["outputs"]["cross_checks"]["k2_closed_eq_chow"], true);

    let v = json(&run(&[
        "fibration",
        "--n",
        "2",
        "--d",
        "4",
        "--b",
        "0",
        "--deg-e",
        "1",
        "--coeffs",
        "0",
    ]));
    assert_eq!(
        (&v["outputs"]["k2"], &v["outputs"]["chi"]),
        (&Value::from("12"), &Value::from("4"))
    );
    let v = json(&run(&[
        "fibration",
        "--n",
        "2",
        "--d",
        "4",
        "--b",
        "0",
        "--deg-e",
        "0",
        "--coeffs",
        "0",
    ]));
    assert_eq!(
        (&v["outputs"]["k2"], &v["outputs"]["chi"]),
        (&Value::from("0"), &Value::from("0"))
    );

    let out = run(&[
        "fibration",
        "--n",
        "3",
        "--d",
        "3",
        "--b",
        "1",
        "--deg-e",
        "-2",
        "--coeffs",
        "-1,2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["inputs"]["coeffs"], serde_json::json!([-1, 2]));
}

#[test]
fn malformed_coeffs_are_usage_errors() {
    let base = [
        "fibration",
        "--n",
        "3",
        "--d",
        "3",
        "--b",
        "0",
        "--deg-e",
        "1",
        "--coeffs",
    ];
    for bad in ["0,x", "0", "0,0,0"] {
        let mut args = base.to_vec();
        args.push(bad);
        assert_eq!(code(&run(&args)), 1, "{bad}");
    }
    assert_eq!(code(&run(&["slope", "--n", "3"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn singularity_examples() {
    let v = json(&run(&[
        "singularity",
        "--emb-dim",
        "3",
        "--pg",
        "1",
        "--k2",
        "-1",
        "--exc",
        "1",
        "--mu0",
        "0",
    ]));
    assert_eq!(v["outputs"]["sigma"], -8);
    assert_eq!(v["outputs"]["bound"], "-3");
    assert_eq!(v["outputs"]["satisfied"], true);
    assert_eq!(v["outputs"]["margin"], "5");

    for exc in ["1", "8"] {
        let v = json(&run(&[
            "singularity",
            "--emb-dim",
            "3",
            "--pg",
            "0",
            "--k2",
            "0",
            "--exc",
            exc,
            "--mu0",
            "0",
        ]));
        assert_eq!(v["outputs"]["equality"], true);
    }
    // mu0 > 2 pg leaves mu_plus negative
    assert_eq!(
        code(&run(&[
            "singularity",
            "--emb-dim",
            "3",
            "--pg",
            "0",
            "--k2",
            "0",
            "--exc",
            "1",
            "--mu0",
            "1"
        ])),
        2
    );
}

#[test]
fn eliminate_examples() {
    let v = json(&run(&["eliminate", "--n", "2", "--d", "4", "--m", "10"]));
    assert_eq!(v["outputs"]["lambda_coeff"], "3");
    assert_eq!(v["outputs"]["c_coeff"], "0");
    let v = json(&run(&["eliminate", "--n", "3", "--d", "3", "--m", "100"]));
    assert_eq!(v["outputs"]["lambda_coeff"], "24/5");
    assert_eq!(
        code(&run(&["eliminate", "--n", "3", "--d", "2", "--m", "10"])),
        2
    );
}

#[test]
fn table_and_json_carry_the_same_values() {
    let args = [
        "fibration",
        "--n",
        "3",
        "--d",
        "3",
        "--b",
        "0",
        "--deg-e",
        "1",
        "--coeffs",
        "0,0",
    ];
    let v = json(&run(&args));
    let mut table_args = vec!["--format", "table"];
    table_args.extend(args);
    let table = String::from_utf8(run(&table_args).stdout).unwrap();
    for (key, value) in v["outputs"].as_object().unwrap() {
        if let Some(s) = value.as_str() {
            let line = table
                .lines()
                .find(|l| l.starts_with(&format!("outputs.{key} ")))
                .unwrap();
            assert_eq!(line.split_whitespace().last().unwrap(), s);
        }
    }
}

#[test]
fn verify_grids() {
    let out = run(&[
        "verify", "--grid-n", "2..3", "--grid-d", "2..4", "--grid-m", "5,10,100",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["outputs"]["passed"], true);
    let per_m = v["outputs"]["elimination_lambda"]["(n=3, d=3)"]
        .as_object()
        .unwrap();
    assert_eq!(per_m.len(), 3);
    assert!(per_m.values().all(|l| l == "24/5"));

    let out = Command::new(BIN)
        .arg("verify")
        .env("CI_SLOPE_GRID", "n=2..2;d=2..3;m=5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["outputs"]["grid"]["m"], serde_json::json!([5]));

    assert_eq!(code(&run(&["verify", "--grid-n", "1..40"])), 1);
}

#[test]
fn batch_writes_one_line_per_request() {
    let mut child = Command::new(BIN)
        .arg("batch")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(
            br#"{"command":"slope","n":3,"d":3}

{"command":"fibration","n":2,"d":4,"b":0,"deg_e":1,"coeffs":[0]}
{"command":"eliminate","n":2,"d":4}
"#,
        )
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["outputs"]["lambda"], "24/5");
    assert_eq!(lines[1]["outputs"]["k2"], "12");
    assert_eq!(lines[2]["inputs"]["m"], 100);
}

#[test]
fn batch_reports_the_worst_exit_code() {
    let mut child = Command::new(BIN)
        .arg("batch")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"{\"command\":\"slope\",\"n\":2,\"d\":2}\nnot json\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 2);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
}
