use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sasaki(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sasaki"));
    cmd.args(args).env_remove("SASAKI_OUT_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn err(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s7.json");
    let f = file.to_str().unwrap();
    let o = sasaki(&["build", "--family", "sp", "--n", "1", "--alpha", "2", "--delta", "1", "-o", f], &[]);
    assert_eq!(code(&o), 0, "{}", err(&o));
    let report = dir.path().join("report.json");
    let dumps = dir.path().join("dumps");
    let o = sasaki(
        &["verify", f, "--report", report.to_str().unwrap(), "--dump-tensors", dumps.to_str().unwrap()],
        &[],
    );
    assert_eq!(code(&o), 0, "{}{}", text(&o), err(&o));
    assert!(text(&o).contains("37 checks, 0 failing"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["checks"].as_array().unwrap().len(), 37);
    let curv: Value = serde_json::from_str(&std::fs::read_to_string(dumps.join("curvature_canonical.json")).unwrap()).unwrap();
    assert_eq!(curv["shape"], serde_json::json!([7, 7, 7, 7]));
    assert_eq!(curv["data"].as_array().unwrap().len(), 7usize.pow(4));
}

#[test]
fn sign_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = sasaki(
        &["build", "--family", "su", "--n", "1", "--alpha", "1", "--delta", "1", "--variant", "noncompact"],
        &[("SASAKI_OUT_DIR", dir.path())],
    );
    assert_eq!(code(&o), 2);
    assert!(err(&o).contains("ParameterSignMismatch"), "{}", err(&o));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn default_output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = sasaki(
        &["build", "--family", "alekseevsky", "--q", "2", "--l", "1", "--alpha", "1", "--delta", "-1"],
        &[("SASAKI_OUT_DIR", dir.path())],
    );
    assert_eq!(code(&o), 0, "{}", err(&o));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let o = sasaki(&["info", files[0].to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0);
    let out = text(&o);
    assert!(out.contains("dim M = 19, n = 4"), "{out}");
    assert!(out.contains("scal_N = 16 n (n+2) alpha delta = -384"), "{out}");
}

#[test]
fn faulty_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("aw.json");
    let f = file.to_str().unwrap();
    let o = sasaki(&["build", "--family", "aloff-wallach", "--alpha", "2", "--delta", "1", "-o", f], &[]);
    assert_eq!(code(&o), 0, "{}", err(&o));
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();

    // one entry of phi_1 changed: the suite runs and reports failures
    let mut bad = v.clone();
    bad["phi"][0][3][4] = Value::String("7".into());
    let p = dir.path().join("bad_phi.json");
    std::fs::write(&p, bad.to_string()).unwrap();
    let o = sasaki(&["verify", p.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("FAIL structure.compatibility"), "{}", text(&o));

    // c[j][i][k] = c[i][j][k] is a schema violation
    let c = v["algebra"]["c"].as_array_mut().unwrap();
    let e = c[0].clone();
    c.push(serde_json::json!([e[1], e[0], e[2], e[3]]));
    let p = dir.path().join("bad_c.json");
    std::fs::write(&p, v.to_string()).unwrap();
    let o = sasaki(&["verify", p.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
    assert!(err(&o).contains("schema violation at \"/algebra/c/"), "{}", err(&o));

    let p = dir.path().join("not_json.json");
    std::fs::write(&p, "{").unwrap();
    assert_eq!(code(&sasaki(&["verify", p.to_str().unwrap()], &[])), 2);
    assert_eq!(code(&sasaki(&["verify", "/nonexistent/model.json"], &[])), 2);
}

#[test]
fn float_backend_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s7f.json");
    let f = file.to_str().unwrap();
    let o = sasaki(
        &["build", "--family", "sp", "--n", "1", "--alpha", "1", "--delta", "3", "--backend", "float", "-o", f],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", err(&o));
    let o = sasaki(&["verify", f, "--tolerance", "1e-10"], &[]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("backend=float"));

    assert_eq!(code(&sasaki(&["frobnicate"], &[])), 2);
    assert_eq!(code(&sasaki(&["build", "--family", "sp", "--alpha", "x", "--delta", "1", "-o", f], &[])), 2);
    assert_eq!(code(&sasaki(&["build", "--family", "so", "--n", "2", "--alpha", "1", "--delta", "1", "-o", f], &[])), 2);
}

#[test]
fn catalog_lists_implemented_rows() {
    let o = sasaki(&["catalog"], &[]);
    assert_eq!(code(&o), 0);
    let out = text(&o);
    for needle in ["Sp(n+1)", "SU(n+2)", "SO(n+4)", "aloff-wallach", "su21", "--q 2 --l 1"] {
        assert!(out.contains(needle), "{needle}");
    }
}
