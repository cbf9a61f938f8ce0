use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinphoton"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn spinphoton")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn circuit(name: &str) -> String {
    core_dir().join("circuits").join(name).to_string_lossy().into_owned()
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "{name} differs from golden file");
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn exit_status_contract() {
    let bad_file = core_dir().join("tests/fixtures/malformed/syntax_unknown_kind.qc");
    let bad_file = bad_file.to_str().unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["cnot-table"], 0),
        (&["--help"], 0),
        (&["ghz", "8"], 0),
        (&[], 2),
        (&["teleport"], 2),
        (&["cnot-table", "--model", "leaky"], 2),
        (&["cnot-table", "--bogus"], 2),
        (&["cnot-table", "--q-ratio-sq", "0.5"], 2),
        (&["cnot-table", "--model", "lossy", "--q-ratio-sq", "1.5"], 2),
        (&["cnot-table", "--model", "lossy", "--alpha-m", "13.9"], 2),
        (
            &[
                "cnot-table",
                "--model",
                "lossy",
                "--alpha-m",
                "1",
                "--alpha-scat",
                "1",
                "--alpha-rad",
                "1",
                "--q-ratio-sq",
                "0.5",
            ],
            2,
        ),
        (&["cnot-table", "--samples", "10", "--seed", "1"], 2),
        (&["bsa-table", "--samples", "100"], 2),
        (&["bsa-table", "--seed", "x"], 2),
        (&["ghz", "1"], 2),
        (&["ghz", "17"], 2),
        (&["sweep-delta", "--model", "ideal"], 2),
        (&["sweep-delta", "--q-values", "1.2"], 2),
        (&["run"], 2),
        (&["run", "/no/such/file.qc"], 1),
        (&["run", bad_file], 1),
        (&["run", &circuit("cnot.qc"), "--model", "lossy"], 1),
        (&["cnot-table", "--out", "/no/such/dir/out.csv"], 1),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn parse_errors_report_line_and_column() {
    let f = core_dir().join("tests/fixtures/malformed/semantic_unknown_port.qc");
    let out = run(&["run", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("4:24: semantic error: unknown port 'Q'"), "{err}");
}

#[test]
fn cnot_table_ideal() {
    let out = stdout(&["cnot-table"]);
    golden("cnot_table_ideal.csv", &out);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let flipped = r[1] == "Down";
        assert_eq!(r[2] != r[0], flipped, "{r:?}");
        assert_eq!(r[3], r[1]);
        assert_eq!(num(&r[5]), 1.0);
        assert_eq!(num(&r[6]), 1.0);
    }
}

#[test]
fn cnot_table_lossy() {
    let out = stdout(&["cnot-table", "--model", "lossy"]);
    golden("cnot_table_lossy.csv", &out);
    for r in csv_rows(&out) {
        let (f, s) = (num(&r[5]), num(&r[6]));
        assert!(f > 0.0 && f <= 1.0 && s > 0.0 && s <= 1.0, "{r:?}");
    }
}

#[test]
fn bsa_table_matches_outcome_table() {
    let out = stdout(&["bsa-table"]);
    golden("bsa_table_ideal.csv", &out);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 32);
    for bell in ["psi+", "psi-", "phi+", "phi-"] {
        let mine: Vec<_> = rows.iter().filter(|r| r[0] == bell).collect();
        assert_eq!(mine.len(), 8);
        for r in mine {
            assert_eq!(num(&r[6]), 0.125);
            assert_eq!(r[7], bell);
            assert_eq!(num(&r[9]), 1.0);
        }
    }
    // ψ+ row of the table: same port and polarization with spin +.
    let has = |cols: [&str; 6]| rows.iter().any(|r| r[..6] == cols);
    assert!(has(["psi+", "H", "C", "H", "C", "+"]));
    assert!(has(["psi+", "V", "D", "H", "C", "-"]));
    assert!(has(["phi-", "H", "C", "V", "D", "+"]));
}

#[test]
fn bsa_table_sampling_is_seeded() {
    let args = ["bsa-table", "--samples", "20000", "--seed", "42"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    golden("bsa_table_sampled.csv", &a);
    for r in csv_rows(&a) {
        assert!((num(&r[11]) - num(&r[6])).abs() < 0.02, "{r:?}");
    }
    assert_ne!(a, stdout(&["bsa-table", "--samples", "20000", "--seed", "43"]));
}

#[test]
fn bsa_table_lossy_reports_losses() {
    let out = stdout(&["bsa-table", "--model", "lossy"]);
    let rows = csv_rows(&out);
    assert!(rows.iter().any(|r| r[2] == "lost" && r[7] == "none"));
    let detected: f64 =
        rows.iter().filter(|r| r[0] == "phi+" && r[2] != "lost" && r[4] != "lost").map(|r| num(&r[6])).sum();
    assert!((detected - 0.64).abs() < 1e-9, "{detected}");
    assert!(rows.iter().all(|r| (num(&r[8]) - 0.64).abs() < 1e-9));
}

#[test]
fn ghz_fidelity_and_decay() {
    for n in 2..=8 {
        let rows = csv_rows(&stdout(&["ghz", &n.to_string()]));
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert_eq!(num(&r[3]), 1.0, "n={n}");
            assert_eq!(num(&r[2]), 0.5);
        }
        let lossy = csv_rows(&stdout(&["ghz", &n.to_string(), "--model", "lossy"]));
        assert!((num(&lossy[0][4]) - 0.8f64.powi(n)).abs() < 1e-11);
    }
    let dephased = csv_rows(&stdout(&["ghz", "3", "--spin-phase", "0.3"]));
    assert!(num(&dephased[0][3]) < 1.0);
}

#[test]
fn json_reports_carry_metadata() {
    let out = stdout(&["ghz", "3", "--model", "lossy", "--purcell", "10", "--format", "json", "--seed", "9"]);
    golden("ghz3_lossy.json", &out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["seed"], 9);
    assert_eq!(v["generator"], "chacha20/inverse-cdf/v1");
    assert_eq!(v["model"]["mode"], "lossy");
    assert_eq!(v["model"]["purcell"], 10.0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);

    let from_losses = stdout(&[
        "cnot-table",
        "--model",
        "lossy",
        "--alpha-m",
        "13.9",
        "--alpha-scat",
        "1.7",
        "--alpha-rad",
        "0.0017",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&from_losses).unwrap();
    let q = v["model"]["q_ratio_sq"].as_f64().unwrap();
    assert!((q - 0.794).abs() < 0.01, "{q}");
    assert_eq!(v["model"]["losses"]["alpha_m"], 13.9);
}

#[test]
fn sweep_delta_grid() {
    let out = stdout(&["sweep-delta"]);
    golden("sweep_delta.csv", &out);
    let rows = csv_rows(&out);
    let op: Vec<_> = rows.iter().filter(|r| r[5] == "true").collect();
    assert_eq!(op.len(), 1);
    assert_eq!((num(&op[0][0]), num(&op[0][1])), (0.8, 6.0));
    assert!((num(&op[0][2]) - 0.78).abs() < 0.005);
    for r in &rows {
        if num(&r[1]) == 0.0 {
            assert_eq!(num(&r[2]), 0.0);
        }
    }
    // Δ grows along both grid axes.
    for a in &rows {
        for b in &rows {
            let (qa, fa, qb, fb) = (num(&a[0]), num(&a[1]), num(&b[0]), num(&b[1]));
            if qa <= qb && fa <= fb {
                assert!(num(&a[2]) <= num(&b[2]) + 1e-12, "{a:?} vs {b:?}");
            }
        }
    }
    let custom = csv_rows(&stdout(&["sweep-delta", "--q-values", "0.9", "--purcell-values", "1,3"]));
    assert_eq!(custom.len(), 3, "operating point is added to custom grids");
}

#[test]
fn run_reproduces_cnot_rows() {
    let out = stdout(&["run", &circuit("cnot.qc")]);
    golden("run_cnot.csv", &out);
    let rows = csv_rows(&out);
    // Photon R with spin |+⟩: the table's (R, Up) and (R, Down) rows, half each.
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().any(|r| r[..3] == ["R", "D", "Up"] && num(&r[3]) == 0.5));
    assert!(rows.iter().any(|r| r[..3] == ["L", "D", "Down"] && num(&r[3]) == 0.5));

    let lossy = csv_rows(&stdout(&["run", &circuit("cnot_lossy.qc"), "--model", "lossy"]));
    let total: f64 = lossy.iter().map(|r| num(&r[3])).sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(lossy.iter().any(|r| r[1].starts_with("Loss")));
}

#[test]
fn run_bsa_circuit_with_sampling() {
    let args = ["run", &circuit("bsa.qc"), "--samples", "5000", "--seed", "7"];
    let out = stdout(&args);
    assert_eq!(out, stdout(&args));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 8);
    assert_eq!(rows.iter().map(|r| r[6].parse::<u64>().unwrap()).sum::<u64>(), 5000);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = run(&["bsa-table", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "bsa-table");
    assert_eq!(v["rows"].as_array().unwrap().len(), 32);
}
