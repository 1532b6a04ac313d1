use std::process::{Command, Output};

fn fueter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fueter"))
        .args(args)
        .env_remove("FUETER_THREADS")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn cp1_dimension_of_minus_three() {
    let out = fueter(&["cp1", "dim", "--k", "-3"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2");
    let out = fueter(&["cp1", "dim", "--k", "0"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
}

#[test]
fn singular_sigma_is_outside_punctured_hull() {
    // 1 + i q vanishes at q = i; the same point as a matrix has a zero column.
    for sigma in [r#"{"x":[1,0,0,0],"y":[0,1,0,0]}"#, "[[[1,0],[0,0]],[[0,0],[0,0]]]"] {
        let out = fueter(&["hull", "contains", "--domain", "H*:n=1", "--sigma", sigma]);
        assert!(out.status.success());
        assert_eq!(report(&out)["result"]["verdict"], false);
    }
    let out = fueter(&["hull", "contains", "--domain", "H*:n=1", "--sigma", r#"{"x":[1,0,0,0],"y":[0,0.5,0,0]}"#]);
    assert_eq!(report(&out)["result"]["verdict"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(fueter(&["hull", "contains", "--domain", "nowhere", "--sigma", "{}"]).status.code(), Some(2));
    assert_eq!(fueter(&["cf", "check", "--field", "no_such_field"]).status.code(), Some(2));
    assert_eq!(fueter(&["cf", "check", "--field", "E", "--samples", "20"]).status.code(), Some(0));
    let out = fueter(&["cf", "check", "--field", "conj_q", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("monogenicity of conj_q"));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = fueter(&["penrose", "roundtrip", "--points", "3", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file, report(&out));
    for key in ["command", "n", "seed", "passed", "failures", "result"] {
        assert!(file.get(key).is_some(), "{key}");
    }
    for key in ["mode", "n", "tolerances", "max_error", "per_point"] {
        assert!(file["result"].get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_all_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let ra = fueter(&["verify", "all", "--n", "1", "--seed", "7", "-o", a.to_str().unwrap()]);
    let rb = fueter(&["verify", "all", "--n", "1", "--seed", "7", "--threads", "2", "-o", b.to_str().unwrap()]);
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    assert!(rb.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(report(&ra)["result"]["criteria"].as_array().unwrap().len(), 8);
}
