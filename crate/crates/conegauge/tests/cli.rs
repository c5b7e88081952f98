use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> String {
    crate_dir().join("data").join(name).display().to_string()
}

fn conegauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conegauge"))
        .args(args)
        .env_remove("CONEGAUGE_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = crate_dir().join("schemas").join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

fn assert_valid(name: &str, v: &Value) {
    let val = schema(name);
    let errors: Vec<String> = val.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name} schema violations: {errors:#?}");
}

#[test]
fn every_subcommand_output_matches_its_schema() {
    let problem = data("problem_ray.json");
    let chain = data("chain_ray.json");
    let mixed = data("problem_mixed.json");
    let inst = data("instance_small.json");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("project", vec!["project", "--p", "3", "--point", "0,2,0"]),
        ("project", vec!["project", "--p", "1.5", "--point", "-1,0.3,0.2,4"]),
        ("exponent", vec!["exponent", "--p", "1.5", "--z", "1,-1,0", "--samples", "200"]),
        ("exponent", vec!["exponent", "--p", "3", "--z", "1,-1,0", "--eta", "0"]),
        ("tightness", vec!["tightness", "--family", "small", "--p", "3", "--z", "1,-1,0", "--samples", "100"]),
        ("tightness", vec!["tightness", "--family", "large", "--p", "2", "--z", "1,-0.6,-0.8"]),
        ("tightness", vec!["tightness", "--family", "exp-plus"]),
        ("tightness", vec!["tightness", "--family", "exp-minus"]),
        ("tightness", vec!["tightness", "--family", "exp-beta", "--beta", "-0.5"]),
        ("gamma", vec!["gamma", "--p", "3", "--z", "1,-1,0", "--samples", "500", "--check", "50"]),
        ("gamma", vec!["gamma", "--p", "2", "--z", "1,-1,0", "--samples", "500", "--check", "0"]),
        ("chain", vec!["chain", "--problem", &problem, "--chain", &chain, "--samples", "200"]),
        ("chain", vec!["chain", "--problem", &mixed]),
        ("chain", vec!["chain", "--problem", &problem, "--zero-intersection"]),
        ("kl", vec!["kl", "--p", "3", "--d", "1"]),
        ("kl", vec!["kl", "--instance", &inst]),
        ("solve", vec!["solve", "--instance", &inst]),
    ];
    for (name, args) in cases {
        let out = conegauge(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_valid(name, &json_of(&out));
    }
}

#[test]
fn non_ray_exponent_output_matches_schema_and_exits_4() {
    let out = conegauge(&["exponent", "--p", "3", "--z", "2,1,0"]);
    assert_eq!(out.status.code(), Some(4));
    let v = json_of(&out);
    assert_eq!(v["class"], "zero");
    assert_valid("exponent", &v);
}

#[test]
fn input_files_match_input_schemas() {
    for f in ["problem_ray.json", "problem_affine.json", "problem_mixed.json"] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(data(f)).unwrap()).unwrap();
        assert_valid("problem", &v);
    }
    for f in ["chain_ray.json", "chain_bad.json"] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(data(f)).unwrap()).unwrap();
        assert_valid("certificates", &v);
    }
    let v: Value = serde_json::from_str(&std::fs::read_to_string(data("instance_small.json")).unwrap()).unwrap();
    assert_valid("instance", &v);
    assert!(!schema("problem").is_valid(&serde_json::json!({"cone": {"blocks": []}, "A": [], "b": []})));
}

#[test]
fn documented_examples() {
    let v = json_of(&conegauge(&["kl", "--p", "3", "--d", "1"]));
    assert_eq!(v["exponent"]["exact"], "2/3");

    let v = json_of(&conegauge(&["chain", "--problem", &data("problem_ray.json"), "--chain", &data("chain_ray.json")]));
    assert_eq!(v["exponent"]["exact"], "2/3");

    let v = json_of(&conegauge(&["tightness", "--family", "small", "--p", "3", "--z", "1,-1,0", "--samples", "0"]));
    assert!((v["slope"].as_f64().unwrap() - 3.0).abs() < 0.05);
    let v = json_of(&conegauge(&["tightness", "--family", "large", "--p", "2", "--z", "1,-0.6,-0.8", "--samples", "0"]));
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() < 0.05);
    let v = json_of(&conegauge(&["tightness", "--family", "exp-plus"]));
    assert!(v["g1_limsup"].as_f64().unwrap() <= 1.05);

    let v = json_of(&conegauge(&["project", "--p", "3", "--point", "0,2,0"]));
    assert_eq!(v["projection"], serde_json::json!([1.0, 1.0, 0.0]));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| conegauge(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["project", "--p", "3", "--point", "1,x,0"]), Some(2));
    assert_eq!(code(&["project", "--p", "0.5", "--point", "1,0,0"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["kl", "--p", "3"]), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"cone\": ").unwrap();
    assert_eq!(code(&["chain", "--problem", broken.to_str().unwrap()]), Some(2));

    let inst = data("instance_small.json");
    assert_eq!(code(&["solve", "--instance", &inst, "--step", "5"]), Some(3));

    let out = conegauge(&["chain", "--problem", &data("problem_affine.json"), "--chain", &data("chain_bad.json")]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("⟨z, a⟩"));
    assert_eq!(code(&["exponent", "--p", "3", "--z", "0,0,0"]), Some(4));
}

fn run_to(dir: &Path, file: &str, args: &[&str], threads: Option<&str>) -> Vec<u8> {
    let path = dir.join(file);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conegauge"));
    cmd.args(args).arg("--out").arg(&path).env_remove("CONEGAUGE_THREADS");
    if let Some(t) = threads {
        cmd.env("CONEGAUGE_THREADS", t);
    }
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    std::fs::read(path).unwrap()
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let configs: [&[&str]; 3] = [
        &["gamma", "--p", "2", "--z", "1,-0.6,-0.8,0", "--samples", "3000", "--check", "300", "--seed", "99"],
        &["tightness", "--family", "small", "--p", "1.5", "--z", "1,-1,0", "--samples", "2000", "--format", "csv"],
        &["exponent", "--p", "5", "--z", "1,-1,0,0", "--samples", "2000", "--seed", "3"],
    ];
    for (k, args) in configs.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{k}"), args, None);
        let b = run_to(dir.path(), &format!("b{k}"), args, Some("1"));
        let c = run_to(dir.path(), &format!("c{k}"), args, Some("3"));
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a, c, "{args:?}");
    }
    let args = ["gamma", "--p", "3", "--z", "1,-1,0", "--samples", "2000", "--check", "0"];
    let s1 = run_to(dir.path(), "s1", &[&args[..], &["--seed", "1"]].concat(), None);
    let s2 = run_to(dir.path(), "s2", &[&args[..], &["--seed", "2"]].concat(), None);
    assert_ne!(s1, s2);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_conegauge"))
        .args(["gamma", "--p", "3", "--z", "1,-1,0", "--samples", "10", "--check", "0"])
        .env("CONEGAUGE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_floats_round_trip() {
    let out = conegauge(&["project", "--p", "3", "--point", "0.1,0.7,-0.3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,point,projection,polar"));
    for line in lines {
        for field in line.split(',').skip(1) {
            let x: f64 = field.parse().unwrap();
            assert_eq!(format!("{x:.16e}"), field);
        }
    }
}

#[test]
fn library_entry_point_matches_binary() {
    assert_eq!(conegauge::cli::run(["conegauge", "kl", "--p", "2", "--d", "1"]), 0);
    assert_eq!(conegauge::cli::run(["conegauge", "kl", "--p", "nope", "--d", "1"]), 2);
}
