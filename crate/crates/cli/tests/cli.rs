use std::path::Path;
use std::process::{Command, Output};

fn cpmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpmap")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TRIALS: &str = "a a2 target\nb b2 target\nc c2 target\na b nontarget\na c nontarget\nb c nontarget\n";
const SCORES: &str = "a a2 0.4\nb b2 0.6\nc c2 0.8\na b 0.1\na c 0.3\nb c 0.5\n";

#[test]
fn eval_prints_fixed_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "trials.txt", TRIALS);
    let s = write(dir.path(), "scores.txt", SCORES);
    let out = cpmap(&["eval", "--trials", &t, "--scores", &s]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(
        stdout(&out),
        "eer=0.333333 min_dcf=0.333333 threshold_eer=0.450000 threshold_dcf=0.550000\n"
    );
}

#[test]
fn analytic_synth() {
    let out = cpmap(&[
        "synth",
        "--mu-pos",
        "3",
        "--mu-neg",
        "0",
        "--sigma-pos",
        "1",
        "--sigma-neg",
        "1",
        "--analytic",
    ]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out), "eer=0.066807 threshold=1.500000\n");
}

#[test]
fn negative_means_parse() {
    let out = cpmap(&[
        "synth",
        "--mu-pos",
        "-1",
        "--mu-neg",
        "-4",
        "--sigma-pos",
        "1",
        "--sigma-neg",
        "1",
        "--analytic",
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).ends_with("threshold=-2.500000\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "trials.txt", TRIALS);
    let s = write(dir.path(), "scores.txt", SCORES);

    assert_eq!(cpmap(&["--help"]).status.code(), Some(0));
    assert_eq!(cpmap(&["--version"]).status.code(), Some(0));
    assert_eq!(cpmap(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cpmap(&["eval", "--trials", &t]).status.code(), Some(1));

    let bad = write(dir.path(), "bad.txt", "a a2 0.4\nb b2 oops\n");
    let out = cpmap(&["eval", "--trials", &t, "--scores", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"), "{out:?}");

    let missing = dir.path().join("nope.txt");
    let out = cpmap(&["eval", "--trials", &t, "--scores", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // no nontarget trials: nothing to evaluate
    let only_targets = write(dir.path(), "t1.txt", "a a2 target\n");
    let out = cpmap(&["eval", "--trials", &only_targets, "--scores", &s]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");

    let out = cpmap(&["eval", "--trials", &t, "--scores", &s, "--p-target", "1.5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = cpmap(&[
        "synth",
        "--mu-pos",
        "0",
        "--mu-neg",
        "1",
        "--sigma-pos",
        "1",
        "--sigma-neg",
        "1",
        "--analytic",
    ]);
    assert_ne!(out.status.code(), Some(0));
    let out = cpmap(&[
        "synth",
        "--mu-pos",
        "3",
        "--mu-neg",
        "0",
        "--sigma-pos",
        "1",
        "--sigma-neg",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn order_cpmap_delta_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let t = write(p, "trials.txt", TRIALS);
    let s = write(p, "scores.txt", SCORES);
    let s2 = write(
        p,
        "other.txt",
        "a a2 0.9\nb b2 0.2\nc c2 0.7\na b 0.0\na c 0.6\nb c 0.1\n",
    );
    let order_dir = p.join("order");
    let order_dir = order_dir.to_str().unwrap();

    let out = cpmap(&["order", "--trials", &t, "--scores", &s, &s2, "--out", order_dir]);
    assert!(out.status.success(), "{out:?}");
    let pos = std::fs::read_to_string(p.join("order/positive_order.txt")).unwrap();
    assert_eq!(pos.lines().count(), 3);

    let csv_a = p.join("a.csv");
    let csv_b = p.join("b.csv");
    let pgm = p.join("a.pgm");
    let out = cpmap(&[
        "cpmap",
        "--trials",
        &t,
        "--scores",
        &s,
        "--order",
        order_dir,
        "--grid",
        "3",
        "--min-trials",
        "1",
        "--out-csv",
        csv_a.to_str().unwrap(),
        "--out-pgm",
        pgm.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let csv = std::fs::read_to_string(&csv_a).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "x_frac,0.333333,0.666667,1.000000");
    // top-right cell is the global EER
    assert!(csv.lines().nth(1).unwrap().ends_with(",0.333333"), "{csv}");
    assert!(std::fs::read_to_string(&pgm).unwrap().starts_with("P2\n3 3\n255\n"));

    let out = cpmap(&[
        "cpmap",
        "--trials",
        &t,
        "--scores",
        &s2,
        "--order",
        order_dir,
        "--grid",
        "3",
        "--min-trials",
        "1",
        "--out-csv",
        csv_b.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    let delta_csv = p.join("d.csv");
    let ppm = p.join("d.ppm");
    let out = cpmap(&[
        "delta",
        "--ref-csv",
        csv_a.to_str().unwrap(),
        "--test-csv",
        csv_a.to_str().unwrap(),
        "--out-csv",
        delta_csv.to_str().unwrap(),
        "--out-ppm",
        ppm.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let line = stdout(&out);
    assert!(
        line.starts_with("win=0.000000 tie=1.000000 lose=0.000000 defined="),
        "{line}"
    );
    assert!(std::fs::read_to_string(&ppm).unwrap().starts_with("P3\n3 3\n255\n"));

    let out = cpmap(&[
        "delta",
        "--ref-csv",
        csv_a.to_str().unwrap(),
        "--test-csv",
        csv_b.to_str().unwrap(),
        "--out-csv",
        delta_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    let out = cpmap(&[
        "cpmap",
        "--trials",
        &t,
        "--scores",
        &s,
        "--order",
        "self",
        "--metric",
        "min_dcf",
        "--grid",
        "2",
        "--min-trials",
        "1",
        "--out-csv",
        csv_b.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(
        cpmap(&[
            "cpmap",
            "--trials",
            &t,
            "--scores",
            &s,
            "--order",
            "self",
            "--grid",
            "1",
            "--out-csv",
            "x.csv"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn synth_writes_files_that_eval_reads() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("syn");
    let out = cpmap(&[
        "synth",
        "--mu-pos",
        "3",
        "--mu-neg",
        "0",
        "--sigma-pos",
        "1",
        "--sigma-neg",
        "1",
        "--n-pos",
        "2000",
        "--n-neg",
        "3000",
        "--seed",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let t = out_dir.join("trials.txt");
    let s = out_dir.join("scores.txt");
    let out = cpmap(&["eval", "--trials", t.to_str().unwrap(), "--scores", s.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let eer: f64 = text
        .split(' ')
        .next()
        .unwrap()
        .trim_start_matches("eer=")
        .parse()
        .unwrap();
    assert!((eer - 0.0668).abs() < 0.02, "{text}");
}
