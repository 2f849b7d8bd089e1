use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_szego");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("SZEGO_OUT_DIR")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let r = run_in(dir, args);
    assert_eq!(
        r.code, 0,
        "{args:?}\nstdout:\n{}\nstderr:\n{}",
        r.stdout, r.stderr
    );
    r.stdout
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites the file.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "output differs from {}", path.display());
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

fn even_a0_tensor(dir: &Path) {
    ok(
        dir,
        &[
            "bracket", "build", "--parity", "even", "--k", "2", "--a0", "1",
        ],
    );
}

#[test]
fn bracket_build_a0_curve() {
    let d = TempDir::new().unwrap();
    let out = ok(
        d.path(),
        &[
            "bracket", "build", "--parity", "even", "--k", "2", "--a0", "1",
        ],
    );
    golden("bracket_build_even_a0.txt", &out);
    golden("tensor_even_a0.json", &read(d.path(), "tensor.json"));
}

#[test]
fn bracket_build_explicit_coefficients() {
    let d = TempDir::new().unwrap();
    let out = ok(
        d.path(),
        &[
            "bracket",
            "build",
            "--parity",
            "odd",
            "--k",
            "2",
            "--Q",
            "0,1",
            "--P",
            "1,-1/2,0,3",
            "--c",
            "2",
        ],
    );
    golden("bracket_build_odd.txt", &out);
    let t = json(d.path(), "tensor.json");
    assert_eq!(t["n"], 5);
    assert_eq!(
        t["curve"]["P"],
        serde_json::json!(["1/1", "-1/2", "0/1", "3/1"])
    );
}

#[test]
fn zero_curve_equals_family_constant_term() {
    let d = TempDir::new().unwrap();
    ok(
        d.path(),
        &[
            "bracket",
            "build",
            "--parity",
            "odd",
            "--k",
            "1",
            "--P",
            "0,0,0,0",
            "--Q",
            "0,0,0",
            "--c",
            "0",
            "--out",
            "zero.json",
        ],
    );
    ok(
        d.path(),
        &["bracket", "family", "--parity", "odd", "--k", "1"],
    );
    assert_eq!(
        json(d.path(), "zero.json"),
        json(d.path(), "family.json")["basis"][0]
    );
}

#[test]
fn usage_errors_exit_with_two() {
    let d = TempDir::new().unwrap();
    for args in [
        &["bracket", "build", "--parity", "even"][..],
        &[
            "bracket", "build", "--parity", "even", "--k", "0", "--a0", "1",
        ],
        &[
            "bracket",
            "build",
            "--parity",
            "even",
            "--k",
            "2",
            "--P",
            "1,0,0,0,0,1",
        ],
        &[
            "bracket", "build", "--parity", "even", "--k", "2", "--Q", "1", "--c", "1",
        ],
        &[
            "bracket", "build", "--parity", "even", "--k", "2", "--Q", "x",
        ],
        &["bracket", "build", "--parity", "flat", "--k", "2"],
        &[
            "bracket", "build", "--parity", "even", "--k", "2", "--a0", "1", "--P", "1",
        ],
        &["szego", "check", "--parity", "even", "--P", "1"],
        &["helix", "--range", "5..-5"],
        &["helix", "solve", "--d", "2", "--r", "3"],
        &["helix", "solve", "--d", "8", "--r", "4"],
        &["verify", "jacobi", "--in", "missing.json"],
        &["--threads", "0", "helix"],
    ] {
        let r = run_in(d.path(), args);
        assert_eq!(r.code, 2, "{args:?}: {}{}", r.stdout, r.stderr);
        assert!(!r.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_artifact_is_a_usage_error() {
    let d = TempDir::new().unwrap();
    fs::write(d.path().join("bad.json"), "{\"parity\": \"even\"").unwrap();
    let r = run_in(d.path(), &["verify", "jacobi", "--in", "bad.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("malformed"), "{}", r.stderr);
    fs::write(d.path().join("fam.json"), "[]").unwrap();
    assert_eq!(
        run_in(d.path(), &["verify", "compat", "--family", "fam.json"]).code,
        2
    );
}

#[test]
fn verify_jacobi_passes_and_catches_perturbation() {
    let d = TempDir::new().unwrap();
    even_a0_tensor(d.path());
    golden(
        "verify_jacobi.txt",
        &ok(d.path(), &["verify", "jacobi", "--in", "tensor.json"]),
    );

    let mut t = json(d.path(), "tensor.json");
    let pi = t["pi"].as_array_mut().unwrap();
    let pair = pi.iter_mut().find(|e| e["a"] == 0 && e["b"] == 3).unwrap();
    pair["q"] = serde_json::json!([{ "u": 1, "v": 1, "val": "1/1" }]);
    fs::write(
        d.path().join("bad.json"),
        serde_json::to_string(&t).unwrap(),
    )
    .unwrap();
    let r = run_in(
        d.path(),
        &["--json", "verify", "jacobi", "--in", "bad.json"],
    );
    assert_eq!(r.code, 1, "{}", r.stdout);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["status"], "fail");
    assert_eq!(report["witnesses"].as_array().unwrap().len(), 1);
    assert!(report["witnesses"][0]["triple"].is_array());
}

#[test]
fn family_certification() {
    let d = TempDir::new().unwrap();
    golden(
        "bracket_family.txt",
        &ok(
            d.path(),
            &["bracket", "family", "--parity", "even", "--k", "2"],
        ),
    );
    golden(
        "verify_compat.txt",
        &ok(d.path(), &["verify", "compat", "--family", "family.json"]),
    );
    golden(
        "verify_independence.txt",
        &ok(
            d.path(),
            &["verify", "independence", "--family", "family.json"],
        ),
    );
}

#[test]
fn independence_fails_for_a_degenerate_family() {
    let d = TempDir::new().unwrap();
    ok(
        d.path(),
        &["bracket", "family", "--parity", "even", "--k", "1"],
    );
    let r = run_in(
        d.path(),
        &["verify", "independence", "--family", "family.json"],
    );
    assert_eq!(r.code, 1);
    golden("verify_independence_k1.txt", &r.stdout);
}

#[test]
fn linearity() {
    let d = TempDir::new().unwrap();
    golden(
        "verify_linearity.txt",
        &ok(
            d.path(),
            &[
                "verify",
                "linearity",
                "--parity",
                "odd",
                "--k",
                "2",
                "--seed",
                "7",
            ],
        ),
    );
}

#[test]
fn rank_scan_histogram() {
    let d = TempDir::new().unwrap();
    even_a0_tensor(d.path());
    let out = ok(
        d.path(),
        &[
            "rank",
            "scan",
            "--in",
            "tensor.json",
            "--samples",
            "50",
            "--seed",
            "42",
            "--expect-rank",
            "2",
        ],
    );
    golden("rank_scan.txt", &out);
    golden("rank_histogram.csv", &read(d.path(), "rank-histogram.csv"));
    let r = run_in(
        d.path(),
        &[
            "rank",
            "scan",
            "--in",
            "tensor.json",
            "--samples",
            "5",
            "--expect-rank",
            "4",
        ],
    );
    assert_eq!(r.code, 1);
}

#[test]
fn szego_residues() {
    let d = TempDir::new().unwrap();
    let out = ok(
        d.path(),
        &[
            "szego",
            "check",
            "--parity",
            "even",
            "--Q",
            "0,0,0",
            "--P",
            "1,0,0,0,1",
        ],
    );
    golden("szego_even.txt", &out);
    golden("szego_even.json", &read(d.path(), "szego.json"));
    let out = ok(
        d.path(),
        &[
            "szego", "check", "--parity", "odd", "--Q", "0,1", "--P", "1,0,2,1", "--c", "1",
        ],
    );
    golden("szego_odd.txt", &out);
}

#[test]
fn helix_table_and_solver() {
    let d = TempDir::new().unwrap();
    golden(
        "helix.txt",
        &ok(
            d.path(),
            &["helix", "--range", "-5..5", "--out", "helix.json"],
        ),
    );
    golden("helix.json", &read(d.path(), "helix.json"));
    assert_eq!(
        ok(d.path(), &["helix"]),
        ok(d.path(), &["helix", "--range=-5..5"])
    );
    golden(
        "helix_solve.txt",
        &ok(d.path(), &["helix", "solve", "--d", "10", "--r", "3"]),
    );
    let r = run_in(d.path(), &["helix", "solve", "--d", "9", "--r", "3"]);
    assert_eq!(r.code, 1);
    golden("helix_solve_none.txt", &r.stdout);
}

#[test]
fn json_report_envelope() {
    let d = TempDir::new().unwrap();
    let r = run_in(
        d.path(),
        &["--json", "helix", "solve", "--d", "7", "--r", "3"],
    );
    assert_eq!(r.code, 0);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["command"], "helix solve");
    assert_eq!(report["status"], "pass");
    assert_eq!(report["config_digest"].as_str().unwrap().len(), 64);
    assert!(report["wall_time_ms"].is_u64());
    assert_eq!(
        report["witnesses"][0],
        serde_json::json!({ "m": 2, "k": 2, "sign": 1, "n": 1 })
    );
    // the report file carries the same payload
    assert_eq!(
        json(d.path(), "helix-solve.report.json")["config_digest"],
        report["config_digest"]
    );
}

#[test]
fn output_directory_from_environment() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("artifacts");
    let status = Command::new(BIN)
        .args([
            "bracket", "build", "--parity", "even", "--k", "2", "--a0", "1",
        ])
        .current_dir(d.path())
        .env("SZEGO_OUT_DIR", &out)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(out.join("tensor.json").exists());
    assert!(out.join("bracket-build.report.json").exists());
    assert!(!d.path().join("tensor.json").exists());
}

/// Runs a fixed pipeline in a fresh directory and returns every file in it.
fn pipeline(threads: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let d = TempDir::new().unwrap();
    let p = d.path();
    let t = ["--threads", threads];
    ok(
        p,
        &[
            &t[..],
            &[
                "bracket", "build", "--parity", "odd", "--k", "2", "--a0", "3",
            ],
        ]
        .concat(),
    );
    ok(
        p,
        &[
            &t[..],
            &["bracket", "family", "--parity", "odd", "--k", "1"],
        ]
        .concat(),
    );
    ok(
        p,
        &[&t[..], &["verify", "jacobi", "--in", "tensor.json"]].concat(),
    );
    ok(
        p,
        &[&t[..], &["verify", "compat", "--family", "family.json"]].concat(),
    );
    ok(
        p,
        &[
            &t[..],
            &["verify", "linearity", "--parity", "even", "--k", "2"],
        ]
        .concat(),
    );
    ok(
        p,
        &[
            &t[..],
            &["rank", "scan", "--in", "tensor.json", "--samples", "10"],
        ]
        .concat(),
    );
    ok(
        p,
        &[
            &t[..],
            &[
                "szego", "check", "--parity", "odd", "--P", "1,2,0,1", "--c", "-1",
            ],
        ]
        .concat(),
    );
    ok(
        p,
        &[&t[..], &["helix", "--range", "-3..3", "--out", "h.json"]].concat(),
    );
    let mut files: Vec<(PathBuf, Vec<u8>)> = fs::read_dir(p)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let mut bytes = fs::read(&path).unwrap();
            if path.to_string_lossy().ends_with(".report.json") {
                let mut v: Value = serde_json::from_slice(&bytes).unwrap();
                v["wall_time_ms"] = Value::Null;
                bytes = serde_json::to_vec(&v).unwrap();
            }
            (PathBuf::from(path.file_name().unwrap()), bytes)
        })
        .collect();
    files.sort();
    files
}

#[test]
fn artifacts_are_byte_identical_across_reruns_and_thread_counts() {
    let a = pipeline("1");
    let b = pipeline("1");
    let c = pipeline("4");
    assert_eq!(a.len(), 14);
    assert_eq!(a, b);
    assert_eq!(a, c);
}
