//! Criterion 12: deterministic byte-identical JSON across repeated runs, a
//! machine-checkable exit-code contract (0 pass / 1 violated / 2
//! inconclusive / 3 input error), and round-tripping reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_apcalc")
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).expect("fixture written");
    path
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().expect("tempdir");
        let d = dir.path();
        write(d, "quadratic.csv", "2/1,1/1,2/1,5/1,10/1,17/1,26/1");
        write(d, "cubic.csv", "1,5,5,7,17,41,85");
        write(d, "pow2.csv", "1,2,4,8,16,32");
        write(d, "tiny.csv", "1,2");
        write(d, "garbage.csv", "alpha,beta,gamma");
        write(d, "negative.csv", "1,-2,3,4");
        write(d, "broken.json", "{\"kind\": \"rational\", \"elements\": [");
        write(
            d,
            "squares.csv",
            "1,4,9,16,25,36,49,64,81,100,121,144",
        );
        write(d, "constant.csv", "7,7,7,7,7,7,7,7");
        write(
            d,
            "vector_seq.json",
            r#"{"kind":"vector","elements":[["0","0"],["1","1"],["4","2"],["9","3"],["16","4"],["25","5"],["36","6"]]}"#,
        );
        write(
            d,
            "float_seq.json",
            r#"{"kind":"float","elements":[1.0, 2.0, 5.0, 10.0, 17.0, 26.0, 37.0],"tolerance":1e-9}"#,
        );
        write(
            d,
            "shear_mq.json",
            r#"{"system": {"kind": "normed", "matrix": {"dim": 2, "entries": [["1","1"],["0","1"]]}, "norm": "l2"}, "m": 3, "q": "2"}"#,
        );
        write(
            d,
            "shear_mq_violated.json",
            r#"{"system": {"kind": "normed", "matrix": {"dim": 2, "entries": [["1","1"],["0","1"]]}, "norm": "l2"}, "m": 2, "q": "2"}"#,
        );
        write(
            d,
            "scaling_mq.json",
            r#"{"system": {"kind": "normed", "matrix": {"dim": 2, "entries": [["2","0"],["0","2"]]}, "norm": "l2"}, "m": 3, "q": "2"}"#,
        );
        write(
            d,
            "rho_shear.json",
            r#"{"system": {"kind": "normed", "matrix": {"entries": [["1","1"],["0","1"]]}, "norm": "l2"}, "m": 3, "q": "2", "x": ["0","0"], "y": ["0","1"]}"#,
        );
        write(
            d,
            "ring_jordan.json",
            r#"{"y": {"entries": [["1","0"],["0","1"]]}, "x": {"entries": [["1","0"],["0","1"]]}, "a": {"entries": [["0","1"],["0","0"]]}, "b": {"entries": [["0","0"],["1","0"]]}, "horizon": 8}"#,
        );
        write(
            d,
            "ring_short.json",
            r#"{"y": {"entries": [["1","0"],["0","1"]]}, "x": {"entries": [["1","0"],["0","1"]]}, "a": {"entries": [["0","1"],["0","0"]]}, "b": {"entries": [["0","0"],["1","0"]]}, "horizon": 4}"#,
        );
        write(
            d,
            "ring_noncommuting.json",
            r#"{"y": {"entries": [["1","0"],["0","1"]]}, "x": {"entries": [["1","0"],["0","2"]]}, "a": {"entries": [["0","1"],["0","0"]]}, "b": {"entries": [["0","0"],["0","0"]]}, "horizon": 8}"#,
        );
        write(
            d,
            "m_isometry_shear.json",
            r#"{"t": {"entries": [["1","1"],["0","1"]]}, "m": 3}"#,
        );
        write(
            d,
            "m_isometry_no.json",
            r#"{"t": {"entries": [["2","0"],["0","2"]]}, "m": 3}"#,
        );
        write(
            d,
            "hs_jordan.json",
            r#"{"t": {"entries": [["1","0"],["0","1"]]}, "q": {"entries": [["0","1"],["0","0"]]}}"#,
        );
        write(
            d,
            "inverse_jordan.json",
            r#"{"s": {"entries": [["1","0"],["0","1"]]}, "t": {"entries": [["1","0"],["0","1"]]}, "p": {"entries": [["0","0"],["1","0"]]}, "q": {"entries": [["0","1"],["0","0"]]}}"#,
        );
        write(
            d,
            "n_inverse_rotation.json",
            r#"{"s": {"entries": [["3/5","-4/5"],["4/5","3/5"]]}, "t": {"entries": [["3/5","4/5"],["-4/5","3/5"]]}, "n": 1}"#,
        );
        write(d, "gcd_refine.json", r#"{"c": 4, "h": 3, "d": 6, "k": 1}"#);
        write(
            d,
            "decimate.json",
            r#"{"sequence": ["0","1","4","9","16","25","36","49","64","81","100","121"], "d": 3}"#,
        );
        write(
            d,
            "steps.json",
            r#"{"sequence": ["0","1","4","9","16","25","36","49","64","81","100","121","144","169","196","225","256","289","324","361","400","441","484","529","576","625","676","729","784","841","900","961","1024","1089","1156","1225","1296","1369","1444","1521","1600","1681","1764","1849","1936","2025"], "steps": [0,1,2,3,4,5,6,7,8]}"#,
        );
        write(
            d,
            "diagonal.json",
            r#"{"grid": [[0,0,0,0,0,0,0,0],[0,1,2,3,4,5,6,7],[0,2,4,6,8,10,12,14],[0,3,6,9,12,15,18,21],[0,4,8,12,16,20,24,28],[0,5,10,15,20,25,30,35],[0,6,12,18,24,30,36,42],[0,7,14,21,28,35,42,49]]}"#,
        );
        write(
            d,
            "product_shears.json",
            r#"{"s": {"entries": [["1","1"],["0","1"]]}, "t": {"entries": [["1","1"],["0","1"]]}, "norm": "l2", "n": 3, "m": 3, "q": "2"}"#,
        );
        write(
            d,
            "power_shear.json",
            r#"{"system": {"kind": "normed", "matrix": {"entries": [["1","1"],["0","1"]]}, "norm": "l2"}, "k": 3, "m": 3, "q": "2"}"#,
        );
        write(
            d,
            "power_gcd_shear.json",
            r#"{"system": {"kind": "normed", "matrix": {"entries": [["1","1"],["0","1"]]}, "norm": "l2"}, "c": 2, "m": 3, "d": 3, "l": 3, "q": "2"}"#,
        );
        write(
            d,
            "metric_rotation.json",
            r#"{"system": {"kind": "metric", "points": 4, "dist": [[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]], "map": [1,2,3,0]}, "m": 1, "q": "2"}"#,
        );
        write(
            d,
            "metric_bad_triangle.json",
            r#"{"system": {"kind": "metric", "points": 3, "dist": [[0,1,5],[1,0,1],[5,1,0]], "map": [0,1,2]}, "m": 1, "q": "2"}"#,
        );
        Fixtures { dir }
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }
}

/// Every command in the matrix must produce byte-identical stdout across
/// repeated runs.
#[test]
fn reports_are_byte_identical_across_runs() {
    let fx = Fixtures::new();
    let commands: Vec<Vec<&str>> = vec![
        vec!["analyze", "quadratic.csv"],
        vec!["analyze", "cubic.csv"],
        vec!["analyze", "pow2.csv", "--max-order", "4"],
        vec!["analyze", "vector_seq.json"],
        vec!["analyze", "float_seq.json", "--tolerance", "1e-9"],
        vec!["analyze", "quadratic.csv", "--format", "text"],
        vec!["classify", "squares.csv", "--candidates", "1/2,1,2,3"],
        vec!["classify", "constant.csv", "--candidates", "1,2"],
        vec!["classify", "pow2.csv", "--candidates", "1/2,1,2", "--max-order", "3"],
        vec!["verify", "identities"],
        vec!["verify", "gcd-refine", "gcd_refine.json"],
        vec!["verify", "decimate", "decimate.json"],
        vec!["verify", "steps", "steps.json"],
        vec!["verify", "diagonal", "diagonal.json"],
        vec!["verify", "ring-perturbation", "ring_jordan.json"],
        vec!["verify", "mq-isometry", "shear_mq.json"],
        vec!["verify", "mq-isometry", "metric_rotation.json"],
        vec!["verify", "rho", "rho_shear.json"],
        vec!["verify", "power", "power_shear.json"],
        vec!["verify", "power-gcd", "power_gcd_shear.json"],
        vec!["verify", "product", "product_shears.json"],
        vec!["verify", "m-isometry", "m_isometry_shear.json"],
        vec!["verify", "hs-perturbation", "hs_jordan.json"],
        vec!["verify", "n-inverse", "n_inverse_rotation.json"],
        vec!["verify", "inverse-perturbation", "inverse_jordan.json"],
    ];
    for args in &commands {
        let first = run(args, fx.path());
        let second = run(args, fx.path());
        assert_eq!(
            first.stdout, second.stdout,
            "stdout differs across runs for {args:?}"
        );
        assert_eq!(
            first.status.code(),
            second.status.code(),
            "exit code differs across runs for {args:?}"
        );
    }
    println!("criterion 12a: PASS ({} commands byte-identical)", commands.len());
}

#[test]
fn exit_code_contract() {
    let fx = Fixtures::new();
    let d = fx.path();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        // Pass.
        (vec!["analyze", "quadratic.csv"], 0),
        (vec!["analyze", "quadratic.csv", "--expect-order", "2"], 0),
        (vec!["analyze", "pow2.csv", "--max-order", "4"], 0),
        (vec!["verify", "mq-isometry", "shear_mq.json"], 0),
        (vec!["verify", "m-isometry", "m_isometry_shear.json"], 0),
        (vec!["verify", "hs-perturbation", "hs_jordan.json"], 0),
        (vec!["verify", "inverse-perturbation", "inverse_jordan.json"], 0),
        (vec!["verify", "identities"], 0),
        (vec!["classify", "squares.csv", "--candidates", "1/2,1,2"], 0),
        // Violated.
        (vec!["analyze", "quadratic.csv", "--expect-order", "3"], 1),
        (vec!["analyze", "pow2.csv", "--max-order", "4", "--expect-order", "1"], 1),
        (vec!["verify", "mq-isometry", "shear_mq_violated.json"], 1),
        (vec!["verify", "mq-isometry", "scaling_mq.json"], 1),
        (vec!["verify", "m-isometry", "m_isometry_no.json"], 1),
        (vec!["verify", "ring-perturbation", "ring_noncommuting.json"], 1),
        // Inconclusive.
        (vec!["analyze", "tiny.csv", "--max-order", "3"], 2),
        (vec!["verify", "ring-perturbation", "ring_short.json"], 2),
        // Input errors: malformed files, a non-metric distance matrix,
        // nonpositive data, unknown theorems, missing arguments.
        (vec!["analyze", "garbage.csv"], 3),
        (vec!["analyze", "broken.json"], 3),
        (vec!["analyze", "missing.csv"], 3),
        (vec!["verify", "mq-isometry", "metric_bad_triangle.json"], 3),
        (vec!["classify", "pow2.csv", "--candidates", "0"], 3),
        (vec!["classify", "negative.csv", "--candidates", "1"], 3),
        (vec!["verify", "no-such-theorem", "gcd_refine.json"], 3),
        (vec!["verify", "mq-isometry"], 3),
    ];
    for (args, expected) in &cases {
        let out = run(args, d);
        assert_eq!(
            out.status.code(),
            Some(*expected),
            "exit code mismatch for {:?}\nstdout: {}\nstderr: {}",
            args,
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
    println!("criterion 12b: PASS ({} exit-code cases)", cases.len());
}

/// Emitted JSON reports re-parse into equal values.
#[test]
fn reports_round_trip() {
    let fx = Fixtures::new();
    for args in [
        vec!["analyze", "quadratic.csv"],
        vec!["classify", "squares.csv", "--candidates", "1/2,1,2"],
        vec!["verify", "hs-perturbation", "hs_jordan.json"],
    ] {
        let out = run(&args, fx.path());
        let text = String::from_utf8(out.stdout).expect("utf8");
        let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        let re = serde_json::to_string_pretty(&value).expect("serializable");
        assert_eq!(text.trim_end(), re, "round trip changed the report for {args:?}");
    }
    println!("criterion 12c: PASS (reports re-parse and re-serialize identically)");
}
