use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use touter::io::{read_t3, write_t3};
use touter::samples;
use touter::tensor::tprod;
use touter::Tensor3;

fn touter(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_touter")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn put(dir: &TempDir, name: &str, t: &Tensor3) -> PathBuf {
    let path = dir.path().join(name);
    write_t3(&path, t).unwrap();
    path
}

#[test]
fn gen_inv_verify_pipeline() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let gen = ["gen", "--family", "kahan", "--theta", "1.2", "--size", "8x8x4", "--seed", "3", "-o", "k.t3"];
    assert_eq!(code(&touter(d, &gen)), 0);
    let t = read_t3(d.join("k.t3")).unwrap();
    assert_eq!(t.dims(), (8, 8, 4));

    let inv = touter(d, &["inv", "--kind", "mp", "k.t3", "-o", "x.t3"]);
    assert_eq!(code(&inv), 0, "{}", stderr(&inv));
    assert!(String::from_utf8_lossy(&inv.stdout).contains("rank_t("));

    let verify = touter(d, &["verify", "k.t3", "x.t3", "--csv", "r.csv"]);
    assert_eq!(code(&verify), 0);
    let csv = fs::read_to_string(d.join("r.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("path,residual,value"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    for row in rows.iter().filter(|r| ["E1", "E2", "E3", "E4"].contains(&r[1])) {
        let v: f64 = row[2].parse().unwrap();
        assert!(v < 1e-8, "{row:?}");
    }
}

#[test]
fn identical_commands_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for out in ["a.t3", "b.t3"] {
        let args = ["gen", "--family", "cycol", "--size", "6x5x3", "--seed", "11", "--perturb", "1e-3", "-o", out];
        assert_eq!(code(&touter(d, &args)), 0);
    }
    assert_eq!(fs::read(d.join("a.t3")).unwrap(), fs::read(d.join("b.t3")).unwrap());
    for out in ["x1.t3", "x2.t3"] {
        let args = ["inv", "--kind", "mp", "--method", "rqr", "--seed", "5", "a.t3", "-o", out];
        let o = touter(d, &args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    assert_eq!(fs::read(d.join("x1.t3")).unwrap(), fs::read(d.join("x2.t3")).unwrap());
    for out in ["r1.csv", "r2.csv"] {
        assert_eq!(code(&touter(d, &["verify", "a.t3", "x1.t3", "--csv", out])), 0);
    }
    assert_eq!(fs::read(d.join("r1.csv")).unwrap(), fs::read(d.join("r2.csv")).unwrap());
}

#[test]
fn tprod_matches_library() {
    let dir = TempDir::new().unwrap();
    let (s, t) = (samples::base_operand(), samples::range_prescriber());
    put(&dir, "s.t3", &s);
    put(&dir, "t.t3", &t);
    assert_eq!(code(&touter(dir.path(), &["tprod", "s.t3", "t.t3", "-o", "p.t3"])), 0);
    assert_eq!(read_t3(dir.path().join("p.t3")).unwrap(), tprod(&s, &t).unwrap());
}

#[test]
fn prescribed_inverses_from_files() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    put(&dir, "s.t3", &samples::base_operand());
    put(&dir, "t.t3", &samples::range_prescriber());
    put(&dir, "n.t3", &samples::null_prescriber());
    assert_eq!(code(&touter(d, &["inv", "--kind", "outer", "--range", "t.t3", "s.t3", "-o", "x.t3"])), 0);
    let x = read_t3(d.join("x.t3")).unwrap();
    assert!((x.get(1, 0, 0).re - 0.5).abs() < 1e-12);
    assert_eq!(code(&touter(d, &["inv", "--kind", "outer", "--null", "n.t3", "s.t3", "-o", "y.t3"])), 0);

    put(&dir, "g.t3", &samples::group_operand());
    assert_eq!(code(&touter(d, &["inv", "--kind", "group", "g.t3", "-o", "gx.t3"])), 0);
    assert_eq!(code(&touter(d, &["inv", "--kind", "group", "--method", "qr", "g.t3", "-o", "gq.t3"])), 0);
    let (a, b) = (read_t3(d.join("gx.t3")).unwrap(), read_t3(d.join("gq.t3")).unwrap());
    assert!(a.max_abs_diff(&b) < 1e-9);
    let verify = touter(d, &["verify", "g.t3", "gx.t3", "--k", "1"]);
    assert!(String::from_utf8_lossy(&verify.stdout).contains("tensor,E1k,"));
}

#[test]
fn existence_failure_exits_three_with_ranks() {
    let dir = TempDir::new().unwrap();
    put(&dir, "s.t3", &samples::base_operand());
    put(&dir, "b.t3", &samples::two_sided_range());
    put(&dir, "c.t3", &samples::two_sided_null());
    let out = touter(dir.path(), &["inv", "--kind", "outer", "--b", "b.t3", "--c", "c.t3", "s.t3", "-o", "x.t3"]);
    assert_eq!(code(&out), 3);
    let err = stderr(&out);
    assert!(err.contains("rank_t(C*T*B)=1") && err.contains("rank_t(C)=4"), "{err}");
    assert!(!dir.path().join("x.t3").exists());
}

#[test]
fn structural_failures_exit_four() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let uneven = Tensor3::from_array([
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    ]);
    put(&dir, "u.t3", &uneven);
    let out = touter(d, &["inv", "--kind", "mp", "--method", "qr", "u.t3", "-o", "x.t3"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("[3, 1]"), "{}", stderr(&out));
    put(&dir, "j.t3", &Tensor3::from_array([[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]]));
    assert_eq!(code(&touter(d, &["inv", "--kind", "group", "j.t3", "-o", "x.t3"])), 4);
    assert_eq!(code(&touter(d, &["inv", "--kind", "drazin", "j.t3", "-o", "x.t3"])), 0);
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&touter(d, &["bogus"])), 2);
    assert_eq!(code(&touter(d, &["gen", "--family", "chow", "--size", "4x4", "-o", "a.t3"])), 2);
    assert_eq!(code(&touter(d, &["gen", "--family", "kahan", "--theta", "2", "--size", "4x4x2", "-o", "a.t3"])), 2);
    assert_eq!(code(&touter(d, &["bench", "--family", "chow", "--size", "4x4x2", "--trials", "1"])), 2);
    assert_eq!(code(&touter(d, &["--tol", "-1", "gen", "--family", "chow", "--size", "4x4x2", "-o", "a.t3"])), 2);
}

#[test]
fn unreadable_input_is_reported() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("junk.t3"), b"not a tensor").unwrap();
    let out = touter(dir.path(), &["inv", "--kind", "mp", "junk.t3", "-o", "x.t3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("T3v1"));
}

#[test]
fn tolerance_flag_changes_rank_decisions() {
    let dir = TempDir::new().unwrap();
    let t = Tensor3::from_array([[[1.0, 0.0], [0.0, 1e-4]], [[0.0, 0.0], [0.0, 0.0]]]);
    put(&dir, "t.t3", &t);
    let ranks = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_touter"));
        cmd.current_dir(dir.path()).env_remove("TOUTER_RANK_TOL");
        if let Some(v) = env {
            cmd.env("TOUTER_RANK_TOL", v);
        }
        let out = cmd.args(extra).args(["inv", "--kind", "mp", "t.t3", "-o", "x.t3"]).output().unwrap();
        String::from_utf8_lossy(&out.stdout).into_owned()
    };
    assert!(ranks(None, &[]).contains("rank_t(S)=4"));
    assert!(ranks(None, &["--tol", "1e-2"]).contains("rank_t(S)=2"));
    assert!(ranks(Some("1e-2"), &[]).contains("rank_t(S)=2"));
    assert!(ranks(Some("1e-2"), &["--tol", "auto"]).contains("rank_t(S)=4"));
}

#[test]
fn bench_writes_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let args = [
        "bench", "--family", "gearmat", "--size", "5x5x3", "--op", "drazin", "--trials", "3", "--csv", "b.csv",
        "--json", "b.json",
    ];
    let out = touter(d, &args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(d.join("b.csv")).unwrap();
    assert!(csv.starts_with("family,op,size_tensor,size_matrix,mt_t,mt_m,residual,error_t,error_m\n"));
    assert!(csv.lines().skip(1).all(|l| l.starts_with("gearmat,drazin,5x5x3,15x15,")));
    assert!(csv.contains(",E1k,"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("b.json")).unwrap()).unwrap();
    assert_eq!(json["trials"], 3);
    assert_eq!(json["problem"]["family"]["name"], "gearmat");

    let failing = touter(d, &["bench", "--family", "chow", "--size", "4x4x3", "--op", "qr", "--trials", "3"]);
    assert_eq!(code(&failing), 4);
    assert!(String::from_utf8_lossy(&failing.stdout).contains(",failed,"));
}
