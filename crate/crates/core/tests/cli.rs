//! End-to-end tests of the `gauge-certify` binary: exit codes, report
//! shapes (validated against docs/report.schema.json), CSV artifacts, config
//! handling, and logging.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gauge-certify"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn schema_for(report: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let text = std::fs::read_to_string(path).expect("schema file");
    let root: Value = serde_json::from_str(&text).expect("schema parses");
    root["reports"][report].clone()
}

/// Minimal structural validator for the subset of JSON Schema the report
/// schemas use: type (string or list), enum, required, properties, items.
fn validate(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(t) = schema.get("type") {
        let allowed: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect(),
            _ => return Err(format!("{path}: malformed schema type")),
        };
        let actual = match value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) => {
                if n.is_i64() || n.is_u64() {
                    "integer"
                } else {
                    "number"
                }
            }
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        let ok = allowed
            .iter()
            .any(|t| *t == actual || (*t == "number" && actual == "integer"));
        if !ok {
            return Err(format!("{path}: expected {allowed:?}, got {actual}"));
        }
        if value.is_null() {
            return Ok(());
        }
    }
    if let Some(en) = schema.get("enum") {
        let hit = en
            .as_array()
            .map(|a| a.contains(value))
            .unwrap_or(false);
        if !hit {
            return Err(format!("{path}: {value} not in enum {en}"));
        }
    }
    if let Some(req) = schema.get("required").and_then(|r| r.as_array()) {
        for key in req.iter().filter_map(|k| k.as_str()) {
            if value.get(key).is_none() {
                return Err(format!("{path}: missing required key '{key}'"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                validate(sub, v, &format!("{path}.{key}"))?;
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate(items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn assert_schema(report: &str, value: &Value) {
    let schema = schema_for(report);
    if let Err(e) = validate(&schema, value, report) {
        panic!("schema violation: {e}\nvalue: {value}");
    }
}

#[test]
fn certify_quadratic_is_certified_with_exit_zero() {
    let out = run(&["certify", "--function", "quadratic", "--domain", "-1,1", "--resolution", "201"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "certified-convex");
    assert!(v["graph_size"].as_u64().unwrap() > 0);
    assert_schema("certify", &v);
}

#[test]
fn certify_neg_abs_is_witnessed_with_exit_one() {
    let out = run(&["certify", "--function", "neg_abs"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "nonconvex-witnessed");
    assert!(v["worst_pair"].is_object());
    assert!(v["worst_pair"]["value"].as_f64().unwrap() <= -3.9);
    assert_schema("certify", &v);
}

#[test]
fn certify_indicator_is_inconclusive_with_exit_two() {
    let out = run(&["certify", "--function", "indicator_box"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "inconclusive");
    assert_schema("certify", &v);
}

#[test]
fn certify_expression_function() {
    let out = run(&["certify", "--expr", "max(x, 2*x)", "--resolution", "101"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "certified-convex");
}

#[test]
fn barrier_ray_sweep_emits_csv() {
    let out = run(&["barrier", "--body", "ball:1", "--ray", "1,0", "--steps", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "x0,x1,mu,k");
    assert_eq!(lines.len(), 52); // header + steps+1 rows
    let last: Vec<f64> = lines
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let (mu, k) = (last[2], last[3]);
    assert!(mu >= 0.98, "mu = {mu}");
    assert!(k >= 49.0, "k = {k}");
}

#[test]
fn minty_exit_codes_follow_the_relation() {
    let related = run(&["minty", "--function", "abs", "--x0", "0", "--x0star", "0.5"]);
    assert_eq!(related.status.code(), Some(0));
    let v = stdout_json(&related);
    assert_eq!(v["related"], Value::Bool(true));
    assert_eq!(v["x0_in_domain"], Value::Bool(true));
    assert_schema("minty", &v);

    let unrelated = run(&["minty", "--function", "abs", "--x0", "0", "--x0star", "1.5"]);
    assert_eq!(unrelated.status.code(), Some(1));
    let v = stdout_json(&unrelated);
    assert_eq!(v["related"], Value::Bool(false));
    assert!(v["witness"].is_object());
    assert_schema("minty", &v);
}

#[test]
fn ekeland_walks_linear_descent_to_zero() {
    let out = run(&[
        "ekeland",
        "--expr",
        "x",
        "--domain",
        "0,1",
        "--resolution",
        "101",
        "--x0",
        "0.2",
        "--eps",
        "0.25",
        "--lambda",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["y"], serde_json::json!([0.0]));
    assert_schema("ekeland", &v);
}

#[test]
fn trace_emits_summary_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("trace.csv");
    let out = run(&[
        "trace",
        "--function",
        "quadratic",
        "--domain",
        "-0.5,1.5",
        "--body",
        "tube:0:1:0.5",
        "--resolution",
        "101",
        "--nmax",
        "6",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["converged"], Value::Bool(true));
    assert_eq!(v["steps"].as_array().unwrap().len(), 6);
    assert_schema("trace", &v);

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.trim().lines().collect();
    assert_eq!(lines.len(), 7); // header + one row per step
    assert!(lines[0].starts_with("n,eps,x0,"));
}

#[test]
fn graph_dump_is_csv() {
    let out = run(&["graph", "--function", "abs", "--resolution", "51"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "x0,xstar0,fx");
    assert!(lines.len() > 10);
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), 3);
        for v in row.split(',') {
            v.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn config_file_loads_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    std::fs::write(
        &cfg_path,
        r#"{"function":"quadratic","resolution":101,"domain":[[-1.0,1.0]]}"#,
    )
    .unwrap();

    let base = bin()
        .args(["--config", cfg_path.to_str().unwrap(), "certify"])
        .output()
        .unwrap();
    assert_eq!(base.status.code(), Some(0));
    assert_eq!(stdout_json(&base)["verdict"], "certified-convex");

    // Flag overrides the config's function.
    let overridden = bin()
        .args(["--config", cfg_path.to_str().unwrap(), "certify", "--function", "neg_abs"])
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(1));
    assert_eq!(stdout_json(&overridden)["verdict"], "nonconvex-witnessed");
}

#[test]
fn out_flag_redirects_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "certify",
        "--function",
        "quadratic",
        "--resolution",
        "101",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "certified-convex");
}

#[test]
fn config_errors_exit_64_with_one_line_messages() {
    let unknown_fn = run(&["certify", "--function", "no_such_thing"]);
    assert_eq!(unknown_fn.status.code(), Some(64));
    let msg = String::from_utf8(unknown_fn.stderr).unwrap();
    assert!(msg.contains("unknown function"), "stderr: {msg}");
    assert_eq!(msg.trim().lines().count(), 1);

    let bad_expr = run(&["certify", "--expr", "x +"]);
    assert_eq!(bad_expr.status.code(), Some(64));

    let bad_dim = run(&["certify", "--function", "quadratic", "--dimension", "4"]);
    assert_eq!(bad_dim.status.code(), Some(64));

    let missing = run(&["certify"]);
    assert_eq!(missing.status.code(), Some(64));

    let unknown_flag = run(&["certify", "--function", "abs", "--frobnicate"]);
    assert_eq!(unknown_flag.status.code(), Some(64));

    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.json");
    std::fs::write(&cfg_path, r#"{"functon":"abs"}"#).unwrap();
    let bad_cfg = bin()
        .args(["--config", cfg_path.to_str().unwrap(), "certify"])
        .output()
        .unwrap();
    assert_eq!(bad_cfg.status.code(), Some(64));
}

#[test]
fn log_env_var_controls_stderr() {
    let quiet = bin()
        .args(["certify", "--function", "quadratic", "--resolution", "51"])
        .env("GAUGE_CERTIFY_LOG", "quiet")
        .output()
        .unwrap();
    assert!(quiet.stderr.is_empty());

    let info = bin()
        .args(["certify", "--function", "quadratic", "--resolution", "51"])
        .env("GAUGE_CERTIFY_LOG", "info")
        .output()
        .unwrap();
    let msg = String::from_utf8(info.stderr).unwrap();
    assert!(msg.contains("dispatching certify"), "stderr: {msg}");
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8(help.stdout).unwrap();
    for sub in ["certify", "minty", "barrier", "ekeland", "trace", "graph"] {
        assert!(text.contains(sub), "help missing {sub}");
    }
    let version = run(&["--version"]);
    assert_eq!(version.status.code(), Some(0));
}
