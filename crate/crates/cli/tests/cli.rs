use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_asymwell"));
    cmd.env_remove("ASYMWELL_CONFIG");
    cmd
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr is not JSON: {}", String::from_utf8_lossy(&o.stderr)))
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json_rows(o: &Output) -> Vec<serde_json::Value> {
    let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
    v["rows"].as_array().unwrap().clone()
}

#[test]
fn missing_field_is_a_config_error_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        &dir,
        "bad.json",
        r#"{"potential":{"family":"piecewise_parabolic",
            "left":{"a":-3,"v_min":0,"parabolic_extent":2},
            "right":{"a":3,"omega":1,"v_min":0,"parabolic_extent":2},
            "barrier_height":3}}"#,
    );
    let o = run(&["spectrum", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr_json(&o);
    assert_eq!(err["error"]["kind"], "config");
    assert!(err["error"]["message"].as_str().unwrap().contains("omega"));
}

#[test]
fn config_from_environment_is_used() {
    let o = bin()
        .env("ASYMWELL_CONFIG", configs().join("symmetric.json"))
        .args(["spectrum", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_rows(&o).len(), 2);
}

#[test]
fn single_well_quartic_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        &dir,
        "single.json",
        r#"{"potential":{"family":"biased_quartic","half_separation":3,"barrier_scale":1,"bias":50}}"#,
    );
    let o = run(&["spectrum", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    stderr_json(&o);
}

#[test]
fn pcf_order_out_of_range_is_numeric_error() {
    let o = run(&["pcf", "--nu", "20", "--z", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["kind"], "range");
}

#[test]
fn pcf_ground_order_matches_gaussian() {
    let o = run(&["pcf", "--nu", "0", "--z", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let expect = (-1.0f64).exp();
    assert!((v["value"].as_f64().unwrap() - expect).abs() < 1e-12);
    assert_eq!(v["regime"], "series");
}

#[test]
fn default_verify_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn coarse_grid_fails_oracle_convergence() {
    let o = run(&["verify", "--n-points", "501", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let rows = json_rows(&o);
    let conv = rows.iter().find(|r| r["name"] == "oracle_convergence").unwrap();
    assert_eq!(conv["pass"], false);
    assert_eq!(stderr_json(&o)["error"]["kind"], "verification");
}

#[test]
fn matching_point_does_not_move_energies() {
    let energies: Vec<(f64, f64)> = ["-0.4", "0.0", "0.4"]
        .iter()
        .map(|c| {
            let o = run(&["spectrum", "--c-override", c, "--format", "json"]);
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
            let r = &json_rows(&o)[0];
            (r["e_minus_exact"].as_f64().unwrap(), r["e_plus_exact"].as_f64().unwrap())
        })
        .collect();
    for (m, p) in &energies[1..] {
        assert!((m - energies[0].0).abs() < 1e-9);
        assert!((p - energies[0].1).abs() < 1e-9);
    }
}

#[test]
fn output_is_deterministic() {
    let cfg = configs().join("symmetric.json");
    let a = run(&["spectrum", "-c", cfg.to_str().unwrap()]);
    let b = run(&["spectrum", "-c", cfg.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_starts_with_provenance_header() {
    let o = run(&["spectrum"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# asymwell spectrum"));
    assert!(text.lines().any(|l| l.starts_with("# config.potential = ")));
    assert!(text.lines().any(|l| l.starts_with("experiment,")));
}

#[test]
fn unbiased_sweep_point_reproduces_splitting() {
    let cfg = configs().join("sweep.json");
    let o = run(&["sweep", "-c", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = json_rows(&o);
    assert_eq!(rows.len(), 6);
    let r0 = &rows[0];
    assert_eq!(r0["parameter_value"].as_f64(), Some(0.0));
    let de = r0["delta_e_quadratic"].as_f64().unwrap();
    let delta = r0["delta"].as_f64().unwrap();
    assert!((de / delta - 1.0).abs() < 1e-12);
    // Gap grows with the bias.
    let gaps: Vec<f64> = rows.iter().map(|r| r["delta_e_exact"].as_f64().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn parallel_sweep_matches_serial() {
    let cfg = configs().join("sweep.json");
    let serial = run(&["sweep", "-c", cfg.to_str().unwrap(), "--jobs", "1"]);
    let parallel = run(&["sweep", "-c", cfg.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn output_path_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let o = run(&["export-potential", "--points", "11", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "x,v,dv_dx");
    assert_eq!(data.len(), 12);
}

#[test]
fn schema_lists_every_config_field() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("config.schema.json")).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    let props = schema["properties"].as_object().unwrap();
    let cfg = asymwell_cli::config::RunConfig::symmetric_default();
    let v = serde_json::to_value(&cfg).unwrap();
    for key in v.as_object().unwrap().keys() {
        assert!(props.contains_key(key), "schema misses {key}");
    }
    assert_eq!(props.len(), v.as_object().unwrap().len());
}

#[test]
fn shipped_configs_parse() {
    for name in ["symmetric.json", "sweep.json"] {
        asymwell_cli::config::RunConfig::load(&configs().join(name)).unwrap();
    }
}
