//! End-to-end runs of the `zygops` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_zygops");

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("tests/fixtures").join(name)
}

fn run(cmd: &str, config: &Path, out: &Path, set: &[&str]) -> Output {
    let mut c = Command::new(BIN);
    c.arg(cmd).arg("--config").arg(config).arg("--out").arg(out);
    for s in set {
        c.arg("--set").arg(s);
    }
    c.output().expect("spawn zygops")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn validator() -> jsonschema::Validator {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(manifest_dir().join("schema/report.schema.json")).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(report: &Path) {
    let v = validator();
    let instance = json(report);
    let errors: Vec<String> = v.iter_errors(&instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{}: {errors:#?}", report.display());
}

const GOLDEN: [&str; 3] = ["compact", "unbounded", "bounded_noncompact"];

#[test]
fn golden_reports_reproduce() {
    let bless = std::env::var_os("ZYGOPS_BLESS").is_some();
    for name in GOLDEN {
        let dir = tempfile::tempdir().unwrap();
        let o = run("analyze", &fixture(&format!("{name}.toml")), dir.path(), &[]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let payload = fs::read(dir.path().join("payload.json")).unwrap();
        let golden = manifest_dir().join("tests/golden").join(format!("{name}.payload.json"));
        if bless {
            fs::write(&golden, &payload).unwrap();
            continue;
        }
        let want = fs::read(&golden).unwrap_or_else(|_| panic!("missing {}; run with ZYGOPS_BLESS=1", golden.display()));
        assert!(payload == want, "{name}: payload differs from {}", golden.display());
        assert_valid(&dir.path().join("report.json"));
    }
}

#[test]
fn payload_is_deterministic_across_thread_counts() {
    let mut payloads = Vec::new();
    for threads in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let o = Command::new(BIN)
            .env("ZYGOPS_THREADS", threads)
            .args(["analyze", "--config"])
            .arg(fixture("bounded_noncompact.toml"))
            .arg("--out")
            .arg(dir.path())
            .args(["--set", "grid.j=60", "--set", "grid.k_max=12"])
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        payloads.push(fs::read(dir.path().join("payload.json")).unwrap());
        let report = json(&dir.path().join("report.json"));
        assert!(report["timing"]["started_at"].is_string());
        assert!(report["payload"].get("timing").is_none());
    }
    assert_eq!(payloads[0], payloads[1]);
}

#[test]
fn analyze_compact_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("analyze", &fixture("compact.toml"), dir.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = json(&dir.path().join("payload.json"));
    assert_eq!(p["analysis"]["boundedness"]["verdict"], "bounded");
    assert_eq!(p["analysis"]["compactness"]["verdict"], "compact");
    assert_eq!(p["analysis"]["compactness"]["essential"]["estimate"], 0.0);
    let profiles = fs::read_to_string(dir.path().join("profiles.csv")).unwrap();
    assert!(profiles.starts_with("quantity,level,radius_or_eps,value\n"));
    assert!(profiles.contains("C_limsup,1,0.5,"));
    let monomials = fs::read_to_string(dir.path().join("monomials.csv")).unwrap();
    assert!(monomials.starts_with("j,value\n1,"));
    assert_eq!(monomials.lines().count(), 201);
}

#[test]
fn analyze_unbounded_stops_before_essential_norm() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("analyze", &fixture("unbounded.toml"), dir.path(), &[]);
    assert!(o.status.success());
    let p = json(&dir.path().join("payload.json"));
    assert_eq!(p["analysis"]["boundedness"]["verdict"], "unbounded");
    assert!(p["analysis"]["compactness"].is_null());
    assert!(p["analysis"]["note"].as_str().unwrap().contains("not bounded"));

    let o = run("analyze", &fixture("unbounded.toml"), dir.path(), &["analysis.require_bounded=true"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn malformed_phi_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("analyze", &fixture("compact.toml"), dir.path(), &["operator.phi=\"z+\""]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for set in [
        vec!["grid.j=0"],
        vec!["grid.k_max=25"],
        vec!["grid.m=5000"],
        vec!["spaces.beta=0"],
        vec!["operator.phi=z*1.2"],
        vec!["operator.n=0"],
        vec!["operator.u={ catalog = \"nope\" }"],
        vec!["grid.bogus=1"],
        vec!["no-equals-sign"],
    ] {
        let o = run("analyze", &fixture("compact.toml"), dir.path(), &set);
        assert_eq!(o.status.code(), Some(2), "{set:?}: {}", stderr(&o));
    }
    let o = run("analyze", &dir.path().join("missing.toml"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn monomials_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("monomials", &fixture("compact.toml"), dir.path(), &["grid.j=80"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = json(&dir.path().join("payload.json"));
    let terms = p["sequence"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 80);
    assert!(p["sequence"]["argmax_j"].as_u64().unwrap() <= 5);
    let last = terms.last().unwrap()["value"].as_f64().unwrap();
    assert!(last < 1e-12 * p["sequence"]["sup"].as_f64().unwrap());
    assert_valid(&dir.path().join("report.json"));

    let o = run("monomials", &fixture("bounded_noncompact.toml"), dir.path(), &[]);
    assert!(o.status.success());
    let p = json(&dir.path().join("payload.json"));
    assert_eq!(p["trend"]["verdict"], "converged");
    let last = p["sequence"]["terms"].as_array().unwrap().last().unwrap()["value"].as_f64().unwrap();
    assert!(last > 1e-3, "tail {last}");

    let o = run("monomials", &fixture("compact.toml"), dir.path(), &["grid.j=0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_over_beta_finds_the_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[operator]
u = "1"
phi = "z"
n = 1

[spaces]
alpha = 0.5

[grid]
j = 60

[sweep]
beta = [1.25, 1.5, 1.75]
"#,
    );
    let o = run("sweep", &cfg, &dir.path().join("out"), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = json(&dir.path().join("out/payload.json"));
    let verdicts: Vec<&str> = p["rows"].as_array().unwrap().iter().map(|r| r["boundedness"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["unbounded", "bounded", "bounded"]);
    let csv = fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("alpha,beta,route,boundedness,compactness,quantity_sup,essential_norm\n"));
    assert_valid(&dir.path().join("out/report.json"));
}

#[test]
fn sweep_over_symbol_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[operator]
u = "1"
phi = { expr = "s*z", params = { s = 0.5 } }
n = 1

[spaces]
alpha = 0.5
beta = 1.5

[grid]
j = 60

[sweep.params]
s = [0.3, 0.6, 0.9]
"#,
    );
    let o = run("sweep", &cfg, &dir.path().join("out"), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = json(&dir.path().join("out/payload.json"));
    let rows = p["rows"].as_array().unwrap();
    let sups: Vec<f64> = rows.iter().map(|r| r["quantity_sup"].as_f64().unwrap()).collect();
    let norms: Vec<f64> = rows.iter().map(|r| r["essential_norm"].as_f64().unwrap()).collect();
    eprintln!("quantity sups {sups:?}, essential norms {norms:?}");
    assert!(sups.windows(2).all(|w| w[1] >= w[0]), "{sups:?}");
    assert!(norms.windows(2).all(|w| w[1] >= w[0]), "{norms:?}");
}

#[test]
fn sweep_errors() {
    let dir = tempfile::tempdir().unwrap();
    let base = "[operator]\nu = \"1\"\nphi = \"z\"\nn = 1\n[spaces]\nalpha = 0.5\nbeta = 1.5\n";
    for extra in ["[sweep]\nbeta = []\n", "[sweep]\n", "", "[sweep.params]\nq = [1.0]\n"] {
        let cfg = write_config(dir.path(), &format!("{base}{extra}"));
        let o = run("sweep", &cfg, &dir.path().join("out"), &[]);
        assert_eq!(o.status.code(), Some(2), "{extra:?}: {}", stderr(&o));
    }
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[verify]\nsuites = [\"klm-identities\", \"jet-closed-forms\"]\n");
    let o = run("verify", &cfg, &dir.path().join("out"), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines = fs::read_to_string(dir.path().join("out/verify.jsonl")).unwrap();
    assert!(lines.lines().count() > 20);
    for l in lines.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["passed"], true, "{l}");
    }
    assert_valid(&dir.path().join("out/report.json"));

    let cfg = write_config(dir.path(), "[verify]\nsuites = [\"nope\"]\n");
    assert_eq!(run("verify", &cfg, &dir.path().join("out"), &[]).status.code(), Some(2));
}

#[test]
fn failing_suite_exits_with_one() {
    // the higher-order derivative bound has counterexamples, so this suite fails
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[verify]\nsuites = [\"growth-bounds\"]\n");
    let o = run("verify", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let p = json(&dir.path().join("out/payload.json"));
    let checks = p["checks"].as_array().unwrap();
    let failing: Vec<&str> = checks
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|id| id.starts_with("derivative-bound-n") && !id.starts_with("derivative-bound-n1")), "{failing:?}");
}

#[test]
fn weighted_type_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[operator]\nu = \"1\"\nphi = \"z/2\"\nn = 0\n[weighted]\nnu = 1.0\nomega = 1.0\nmax_power = 100\n",
    );
    let o = run("weighted-type", &cfg, &dir.path().join("out"), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = json(&dir.path().join("out/payload.json"));
    assert_eq!(p["report"]["monomial_limsup"]["estimate"], 0.0);
    let csv = fs::read_to_string(dir.path().join("out/weighted_terms.csv")).unwrap();
    assert_eq!(csv.lines().count(), 102); // header plus n = 0..=100
    assert_valid(&dir.path().join("out/report.json"));

    let cfg = write_config(dir.path(), "[operator]\nu = \"1\"\nphi = \"z\"\nn = 0\n[weighted]\nnu = \"flat\"\nomega = 1.0\n");
    assert_eq!(run("weighted-type", &cfg, &dir.path().join("out"), &[]).status.code(), Some(2));
}

#[test]
fn bad_thread_setting() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .env("ZYGOPS_THREADS", "many")
        .args(["analyze", "--config"])
        .arg(fixture("compact.toml"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
