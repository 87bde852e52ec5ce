use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use domsearch::problems::lookup;
use domsearch::{non_dominated, ObjectiveVector};

const BIN: &str = env!("CARGO_BIN_EXE_domsearch");

fn domsearch(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn domsearch")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut full = vec!["run"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", dir.to_str().unwrap()]);
    domsearch(&full)
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let head = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (head, rows)
}

fn floats(row: &[String], cols: std::ops::Range<usize>) -> Vec<f64> {
    row[cols].iter().map(|v| v.parse().unwrap()).collect()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn temp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn run_writes_the_artifact_set() {
    let root = temp();
    let dir = root.path().join("zdt2");
    let out = run_in(&dir, &["--problem", "zdt2", "--seed", "7", "--replications", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut names: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "front_0.csv",
            "front_1.csv",
            "front_2.csv",
            "history_0.json",
            "history_1.json",
            "history_2.json",
            "manifest.json",
            "summary.csv"
        ]
    );

    let (head, rows) = read_csv(&dir.join("summary.csv"));
    assert_eq!(head, ["problem", "replication", "lambda", "upsilon", "runtime_seconds"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3][1], "best");

    for r in 0..3u64 {
        let h = json(&dir.join(format!("history_{r}.json")));
        assert_eq!(h["schema_version"], 1);
        assert_eq!(h["config"]["seed"], 7 + r);
    }
    let m = json(&dir.join("manifest.json"));
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["replications"], 3);
    assert_eq!(m["base_seed"], 7);
    assert!(m["created_at"].as_str().is_some_and(|s| !s.is_empty()));

    let (head, rows) = read_csv(&dir.join("front_0.csv"));
    assert_eq!(head.len(), 30 + 2 + 2);
    assert!(!rows.is_empty());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        fs::read_to_string(dir.join("summary.csv")).unwrap()
    );
}

#[test]
fn best_row_is_the_columnwise_minimum() {
    let root = temp();
    let dir = root.path().join("mop4");
    let out = run_in(
        &dir,
        &["--problem", "mop4", "--seed", "3", "--replications", "4", "--n0", "300"],
    );
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.join("summary.csv"));
    let (reps, best) = rows.split_at(4);
    let col = |c: usize| {
        reps.iter()
            .map(|r| r[c].parse::<f64>().unwrap())
            .fold(f64::INFINITY, f64::min)
    };
    assert_eq!(best[0][2].parse::<f64>().unwrap(), col(2));
    assert_eq!(best[0][3].parse::<f64>().unwrap(), col(3));
    let total: f64 = reps.iter().map(|r| r[4].parse::<f64>().unwrap()).sum();
    assert!((best[0][4].parse::<f64>().unwrap() - total).abs() <= 1e-12 * total.max(1.0));
}

#[test]
fn exit_codes() {
    let root = temp();
    let code = |o: Output| o.status.code().unwrap();
    assert_eq!(code(run_in(&root.path().join("a"), &["--problem", "nope"])), 3);
    assert_eq!(
        code(domsearch(&["run", "--problem", "mop4", "--rho", "2", "--out", "x"])),
        2
    );
    assert_eq!(code(domsearch(&["run"])), 2);
    assert_eq!(
        code(domsearch(&["dmeasure", "--problem", "identity2d", "--samples", "0"])),
        2
    );
    assert_eq!(
        code(domsearch(&["dmeasure", "--problem", "zdt2", "--estimator", "exact"])),
        3
    );
    assert_eq!(
        code(domsearch(&[
            "dmeasure",
            "--problem",
            "discrete_example",
            "--estimator",
            "exact",
            "--samples",
            "5"
        ])),
        2
    );
    assert_eq!(code(domsearch(&["frobnicate"])), 2);
    assert!(!root.path().join("a").exists());
}

#[test]
fn occupied_output_needs_force() {
    let root = temp();
    let dir = root.path().join("run");
    let args = ["--problem", "mop4", "--seed", "1", "--n0", "200", "--tmax", "3"];
    assert!(run_in(&dir, &args).status.success());
    fs::write(dir.join("notes.txt"), "mine").unwrap();
    let again = run_in(&dir, &args);
    assert_eq!(again.status.code(), Some(2));

    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(run_in(&dir, &forced).status.success());
    assert_eq!(fs::read_to_string(dir.join("notes.txt")).unwrap(), "mine");
    assert!(dir.join("history_0.json").exists());
}

#[test]
fn discrete_front_lands_in_the_pareto_set() {
    let root = temp();
    let dir = root.path().join("d");
    assert!(run_in(&dir, &["--problem", "discrete_example", "--seed", "1"])
        .status
        .success());
    let set: Vec<i64> = lookup("discrete_example")
        .unwrap()
        .true_pareto_set()
        .unwrap()
        .iter()
        .map(|x| x[0] as i64)
        .collect();
    let (_, rows) = read_csv(&dir.join("front_0.csv"));
    let inside = rows
        .iter()
        .filter(|r| set.contains(&(r[0].parse::<f64>().unwrap().round() as i64)))
        .count();
    assert!(!rows.is_empty());
    assert!(inside as f64 >= 0.9 * rows.len() as f64, "{inside} of {}", rows.len());
}

#[test]
fn exact_dmeasure_lists_the_whole_space() {
    let out = domsearch(&["dmeasure", "--problem", "discrete_example", "--estimator", "exact"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["index", "x1", "f1", "f2", "dmeasure"]
    );
    let rows: Vec<_> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 101);
    let set: Vec<f64> = lookup("discrete_example")
        .unwrap()
        .true_pareto_set()
        .unwrap()
        .iter()
        .map(|x| x[0])
        .collect();
    for row in rows {
        let x: f64 = row[1].parse().unwrap();
        let d: f64 = row[4].parse().unwrap();
        assert_eq!(d == 0.0, set.contains(&x), "x = {x}");
    }
}

#[test]
fn uniform_dmeasure_near_the_center() {
    let out = domsearch(&[
        "dmeasure",
        "--problem",
        "identity2d",
        "--samples",
        "100000",
        "--seed",
        "5",
    ]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let near: Vec<f64> = r
        .records()
        .map(Result::unwrap)
        .filter(|row| {
            let x: f64 = row[1].parse().unwrap();
            let y: f64 = row[2].parse().unwrap();
            (x - 0.5).abs() <= 0.01 && (y - 0.5).abs() <= 0.01
        })
        .map(|row| row[5].parse().unwrap())
        .collect();
    assert!(near.len() > 10);
    let mean = near.iter().sum::<f64>() / near.len() as f64;
    assert!((mean - 0.25).abs() <= 0.01, "{mean}");
}

#[test]
fn uniform_dmeasure_is_seeded() {
    let args = ["dmeasure", "--problem", "mop6", "--samples", "500", "--seed", "9"];
    assert_eq!(domsearch(&args).stdout, domsearch(&args).stdout);
    assert_eq!(domsearch(&["dmeasure", "--problem", "mop6"]).status.code(), Some(2));
}

fn front_files(problem: &str, dir: &Path) -> (PathBuf, PathBuf) {
    let out = domsearch(&[
        "front",
        "--problem",
        problem,
        "--seed",
        "2",
        "--n0",
        "300",
        "--tmax",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    (dir.join("true_front.csv"), dir.join("approx_front.csv"))
}

#[test]
fn zdt2_true_front_is_the_parabola() {
    let root = temp();
    let (truth, approx) = front_files("zdt2", &root.path().join("f"));
    let (head, rows) = read_csv(&truth);
    assert_eq!(head, ["f1", "f2"]);
    assert_eq!(rows.len(), 500);
    for r in &rows {
        let f = floats(r, 0..2);
        assert!((f[1] - (1.0 - f[0] * f[0])).abs() <= 1e-9);
    }
    let (head, rows) = read_csv(&approx);
    assert_eq!(head.len(), 2 + 30);
    assert!(!rows.is_empty());
}

#[test]
fn mop6_true_front_is_non_dominated_and_reproducible() {
    let root = temp();
    let (truth, approx) = front_files("mop6", &root.path().join("a"));
    let (_, rows) = read_csv(&truth);
    let front: Vec<ObjectiveVector> = rows.iter().map(|r| ObjectiveVector::new(floats(r, 0..2))).collect();
    assert_eq!(non_dominated(&front).unwrap().len(), front.len());

    let (truth2, approx2) = front_files("mop6", &root.path().join("b"));
    assert_eq!(fs::read(truth).unwrap(), fs::read(truth2).unwrap());
    assert_eq!(fs::read(approx).unwrap(), fs::read(approx2).unwrap());
}

#[test]
fn maximization_problems_report_native_objectives() {
    let root = temp();
    let (truth, _) = front_files("mop3", &root.path().join("m"));
    let problem = lookup("mop3").unwrap();
    assert_eq!(problem.sense(), domsearch::problems::Sense::Max);
    let (_, rows) = read_csv(&truth);
    let reference = problem.sample_reference_front(500).unwrap();
    assert_eq!(rows.len(), reference.len());
    for (r, f) in rows.iter().zip(&reference) {
        let native = floats(r, 0..2);
        assert_eq!(native, f.as_slice().iter().map(|v| -v).collect::<Vec<_>>());
    }
}

#[test]
fn output_root_from_environment() {
    let root = temp();
    let out = Command::new(BIN)
        .args(["run", "--problem", "mop4", "--seed", "11", "--n0", "200", "--tmax", "2"])
        .env("DOMSEARCH_OUTPUT_ROOT", root.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(root.path().join("mop4-seed11").join("manifest.json").exists());
}

#[test]
fn config_file_precedence_is_echoed() {
    let root = temp();
    let cfg = root.path().join("c.toml");
    fs::write(&cfg, "problem = \"mop3\"\nn0 = 250\nrho = 0.2\nt_max = 3\n").unwrap();
    let dir = root.path().join("out");
    let out = run_in(
        &dir,
        &["--config", cfg.to_str().unwrap(), "--problem", "mop4", "--rho", "0.3"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = json(&dir.join("manifest.json"));
    assert_eq!(m["config"]["problem"], "mop4");
    assert_eq!(m["config"]["n0"], 250);
    assert_eq!(m["config"]["rho"], 0.3);
    assert_eq!(m["config"]["alpha"], 0.1);
    assert!(m["initial_threshold"].as_f64().unwrap() > 0.0);

    fs::write(&cfg, "problem = \"mop3\"\nsamples = 3\n").unwrap();
    let bad = run_in(&root.path().join("bad"), &["--config", cfg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_front_format() {
    let root = temp();
    let dir = root.path().join("j");
    let out = run_in(
        &dir,
        &[
            "--problem",
            "mop4",
            "--seed",
            "4",
            "--n0",
            "200",
            "--tmax",
            "3",
            "--format",
            "json",
        ],
    );
    assert!(out.status.success());
    assert!(!dir.join("front_0.csv").exists());
    let doc = json(&dir.join("front_0.json"));
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["problem"], "mop4");
    let points = doc["points"].as_array().unwrap();
    assert!(!points.is_empty());
    assert_eq!(points[0]["point"].as_array().unwrap().len(), 3);
    assert_eq!(points[0]["objectives"].as_array().unwrap().len(), 2);
}

#[test]
fn problems_lists_the_registry() {
    let out = domsearch(&["problems"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let names: Vec<&str> = doc["problems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["name"].as_str().unwrap())
        .collect();
    for n in [
        "zdt2",
        "zdt3",
        "zdt4",
        "mop3",
        "mop4",
        "mop5",
        "mop6",
        "dtlz1",
        "dtlz2",
        "discrete_example",
        "identity2d",
    ] {
        assert!(names.contains(&n), "{n}");
    }
}
