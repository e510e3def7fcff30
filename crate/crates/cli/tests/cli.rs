use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FIVE_LABEL: &str = include_str!("../../core/tests/data/five_label.txt");

fn capaloss(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capaloss"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn example_instance(dir: &Path) {
    write(
        dir,
        "ex.csv",
        "y_1,y_2,y_3,y_4,y_5,y_6,s_1,s_2,s_3,s_4,s_5,s_6\n0,1,1,0,0,0,0.2,0.3,0.9,0.1,0.4,0.3\n",
    );
}

#[test]
fn loss_on_the_worked_instance() {
    let dir = tempfile::tempdir().unwrap();
    example_instance(dir.path());
    write(
        dir.path(),
        "fifteenths.txt",
        "format=1\nK=6\ncounting: 0 0 0.0666666666666667 0.2 0.4 0.666666666666667 1\n",
    );
    for (spec, want) in [
        ("hamming", "0.300000"),
        ("subset01", "0.700000"),
        ("counting:@fifteenths.txt", "0.433333"),
    ] {
        let out = capaloss(&["loss", "--loss", spec, "ex.csv"], dir.path());
        assert!(out.status.success());
        let text = stdout(&out);
        let mean = text.lines().last().unwrap();
        assert!(mean.contains(want), "{spec}: {text}");
    }
}

#[test]
fn bayes_on_reference_tables() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "three.txt",
        "format=1\nK=3\n0 0 0 0.25\n1 1 1 0.1875\n0 1 1 0.1875\n1 0 1 0.1875\n1 1 0 0.1875\n",
    );
    write(dir.path(), "five.txt", FIVE_LABEL);
    for (spec, file, want) in [
        ("hamming", "three.txt", "1 1 1"),
        ("subset01", "three.txt", "0 0 0"),
        ("binom:4", "five.txt", "1 1 0 0 0"),
    ] {
        let out = capaloss(&["bayes", "--strict", "--loss", spec, file], dir.path());
        assert!(out.status.success());
        assert_eq!(stdout(&out).lines().next().unwrap(), want);
    }
}

#[test]
fn strict_mode_rejects_unnormalized_mass() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d.txt", "K=1\n0 0.3\n1 0.3\n");
    let strict = capaloss(
        &["bayes", "--strict", "--loss", "hamming", "d.txt"],
        dir.path(),
    );
    assert_eq!(strict.status.code(), Some(2));
    let lenient = capaloss(&["bayes", "--loss", "hamming", "d.txt"], dir.path());
    assert!(lenient.status.success());
}

#[test]
fn measure_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "additive.txt",
        "format=1\nK=3\ncounting: 0 0.333333333333333 0.666666666666667 1\n",
    );
    write(d, "s01.txt", "K=3\ncapacity 0x7 1\n");
    write(
        d,
        "bad.txt",
        "K=2\ncapacity 0x1 0.5\ncapacity 0x2 0.7\ncapacity 0x3 0.4\n",
    );
    write(d, "broken.txt", "K=2\ncapacity 0x1 abc\n");

    assert_eq!(
        capaloss(&["measure", "validate", "additive.txt"], d)
            .status
            .code(),
        Some(0)
    );
    let bad = capaloss(&["measure", "validate", "bad.txt"], d);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("monotonicity"));
    let broken = capaloss(&["measure", "validate", "broken.txt"], d);
    assert_eq!(broken.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&broken.stderr).contains(":2"));

    let moeb = capaloss(&["measure", "moebius", "s01.txt"], d);
    let masses: Vec<String> = stdout(&moeb)
        .lines()
        .filter(|l| l.starts_with("subset"))
        .map(String::from)
        .collect();
    assert_eq!(masses, ["subset 1,2,3 mass 1"]);

    let cover = capaloss(
        &[
            "measure",
            "from-covering",
            "--labels",
            "4",
            "--subset",
            "1,2",
            "--subset",
            "3,4",
            "--out",
            "cov.txt",
        ],
        d,
    );
    assert!(cover.status.success());
    let expanded = capaloss(&["measure", "expand", "cov.txt"], d);
    assert!(stdout(&expanded).contains("capacity 0xf 1"));
    assert_eq!(
        capaloss(&["measure", "validate", "cov.txt"], d)
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(capaloss(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(capaloss(&["--help"], dir.path()).status.code(), Some(0));
    example_instance(dir.path());
    assert_eq!(
        capaloss(&["loss", "--loss", "poly:0.5", "ex.csv"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        capaloss(&["loss", "--loss", "hamming", "missing.csv"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn perfect_predictions_give_a_zero_curve() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "perfect.csv",
        "y_1,y_2,y_3,s_1,s_2,s_3\n1,0,1,1,0,1\n0,0,1,0,0,1\n",
    );
    let out = capaloss(
        &[
            "sweep",
            "--family",
            "binom",
            "--k-range",
            "1..3",
            "--out",
            "r.csv",
            "perfect.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",0")), "{csv}");
}

#[test]
fn fixture_sweep_and_pairwise() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(capaloss(&["fixture", "--out-dir", "fx"], d)
        .status
        .success());
    let files = ["fx/marginal.csv", "fx/joint.csv"];

    let mut outputs = Vec::new();
    for threads in ["1", "2", "8"] {
        let out_name = format!("r{threads}.csv");
        let json_name = format!("p{threads}.json");
        let mut args = vec![
            "--threads",
            threads,
            "sweep",
            "--family",
            "poly",
            "--alpha-grid",
            "20",
            "--out",
            &out_name,
            "--plot-json",
            &json_name,
            "--pair",
            "marginal:joint",
        ];
        args.extend(files);
        let out = capaloss(&args, d);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push((
            fs::read(d.join(&out_name)).unwrap(),
            fs::read(d.join(&json_name)).unwrap(),
            out.stdout,
        ));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));

    let mut args = vec![
        "pairwise",
        "--family",
        "binom",
        "--method-a",
        "marginal",
        "--method-b",
        "joint",
        "--out",
        "trace.csv",
    ];
    args.extend(files);
    let out = capaloss(&args, d);
    let text = stdout(&out);
    assert!(text.contains("crossings: 1"), "{text}");
    assert!(text.contains("concave"));
    let trace = fs::read_to_string(d.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 7);

    let mut args = vec![
        "pairwise",
        "--family",
        "binom",
        "--method-a",
        "joint",
        "--method-b",
        "joint",
    ];
    args.extend(files);
    let text = stdout(&capaloss(&args, d));
    assert!(text.contains("crossings: 0"));
    assert!(text.contains("curvature: 0 "), "{text}");
}
