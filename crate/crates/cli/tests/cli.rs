use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use eqmf_core::positivity::{PositivityReport, Status};

fn eqmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqmf")).args(args).env_remove("EQMF_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_named_forms() {
    let o = eqmf(&["expand", "E4", "--prec", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 1\n1 240\n2 2160\n");
    let o = eqmf(&["expand", "delta", "--prec", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,coefficient\n0,0\n1,1\n2,-24\n3,252\n");
    let o = eqmf(&["expand", "E2", "--prec", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1", "-24"]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(eqmf(&["expand", "E5"]).status.code(), Some(2));
    assert_eq!(eqmf(&["expand", "E4", "--prec", "0"]).status.code(), Some(2));
    assert_eq!(eqmf(&["bound", "12", "--w", "14"]).status.code(), Some(2));
    assert_eq!(eqmf(&["extremal", "--w", "12..14", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(eqmf(&["verify", "--w", "x"]).status.code(), Some(2));
}

#[test]
fn empty_grid_warns_and_succeeds() {
    let o = eqmf(&["verify", "--w", "7..7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn decompose_low_weights() {
    let o = eqmf(&["decompose", "6", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "weight,depth,order,eis_weight,eisenstein,cusp_zero\n6,1,0,6,0,true\n6,1,1,4,3,true\n");
}

#[test]
fn dims_table() {
    let o = eqmf(&["dims", "12", "--format", "csv"]);
    assert_eq!(stdout(&o), "w,dim_m,dim_s,dim_qm1,dim_qm2,dim_qm3,dim_qm4\n12,2,1,3,4,5,6\n");
}

#[test]
fn bound_reports_threshold() {
    let o = eqmf(&["bound", "12", "4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["n0"].as_u64().unwrap() > 1);
    assert_eq!(v["constants"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_reports_round_trip() {
    let o = eqmf(&["verify", "--w", "4..24", "--format", "json", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut count = 0;
    for line in text.lines() {
        let rep: PositivityReport = serde_json::from_str(line).unwrap();
        assert_eq!(rep.status, Status::Verified);
        assert_eq!(rep.to_json(), line);
        count += 1;
    }
    assert!(count > 30);
    assert!(String::from_utf8_lossy(&o.stderr).contains(&format!("{count} jobs: {count} verified")));
}

#[test]
fn precision_cap_gives_inconclusive() {
    let o = eqmf(&["verify", "24", "4", "--prec-cap", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("inconclusive"));
}

fn entries(dir: &Path) -> usize {
    fs::read_dir(dir).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv")).count()
}

#[test]
fn cache_is_reused_and_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let plain = stdout(&eqmf(&["extremal", "16", "2", "--prec", "20", "--format", "csv"]));
    let first = stdout(&eqmf(&["extremal", "16", "2", "--prec", "20", "--format", "csv", "--cache-dir", d]));
    assert_eq!(entries(dir.path()), 1);
    let second = Command::new(env!("CARGO_BIN_EXE_eqmf"))
        .args(["extremal", "16", "2", "--prec", "20", "--format", "csv"])
        .env("EQMF_CACHE_DIR", d)
        .output()
        .unwrap();
    assert_eq!(plain, first);
    assert_eq!(first, stdout(&second));
    assert_eq!(entries(dir.path()), 1);

    // a corrupt entry is treated as a miss and rewritten
    for e in fs::read_dir(dir.path()).unwrap() {
        fs::write(e.unwrap().path(), "garbage").unwrap();
    }
    let third = stdout(&eqmf(&["extremal", "16", "2", "--prec", "20", "--format", "csv", "--cache-dir", d]));
    assert_eq!(third, plain);
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let args = ["decompose", "--w", "12..18", "--format", "json", "--out", path.to_str().unwrap()];
    assert!(eqmf(&args).status.success());
    let a = fs::read(&path).unwrap();
    assert!(eqmf(&args).status.success());
    assert_eq!(a, fs::read(&path).unwrap());
    assert!(!a.is_empty());
}
