use serde_json::Value;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ghzsep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn ghzsep")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(o: &Output) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(&o.stdout[..]);
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn classify_exit_codes() {
    let d = TempDir::new().unwrap();
    let sep = write(&d, "a.json", r#"{"werner":{"p":0.05}}"#);
    let o = run(&["classify", s(&sep)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"], "Separable");
    for k in [
        "omega", "r_tilde", "case", "l_min", "margins", "verdict", "ppt", "kay", "witness",
    ] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["witness"]["M"].as_array().unwrap().len(), 15);
    assert!(v["margins"].get("III").is_some());

    let ent = write(&d, "b.json", r#"{"werner":{"p":0.5}}"#);
    let o = run(&["classify", s(&ent)]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["verdict"], "Entangled");

    // asymmetric but inside every necessary bound
    let mut p = [1.0 / 16.0; 16];
    p[1] += 0.004;
    p[2] -= 0.004;
    let und = write(&d, "c.json", &serde_json::json!({ "probabilities": p }).to_string());
    let o = run(&["classify", s(&und)]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["verdict"], "Undetermined");

    // asymmetric and violating the anti-diagonal bound
    let mut p = [0.02; 16];
    p[0] = 1.0 - 15.0 * 0.02;
    p[1] = 0.03;
    p[2] = 0.01;
    let nec = write(&d, "d.json", &serde_json::json!({ "probabilities": p }).to_string());
    let o = run(&["classify", s(&nec)]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["verdict"], "EntangledByNecessity");
}

#[test]
fn bad_input_exits_one() {
    let d = TempDir::new().unwrap();
    for (name, body) in [
        ("malformed.json", r#"{"werner":"#),
        ("unknown.json", r#"{"wern":{"p":0.1}}"#),
        ("range.json", r#"{"werner":{"p":1.5}}"#),
        ("short.json", r#"{"probabilities":[0.5,0.5]}"#),
    ] {
        let p = write(&d, name, body);
        let o = run(&["classify", s(&p)]);
        assert_eq!(code(&o), 1, "{name}");
        assert!(!o.stderr.is_empty());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(code(&run(&["classify", "/nonexistent/state.json"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["boundary", "fig2"])), 1);
    let p = write(&d, "w.json", r#"{"werner":{"p":0.05}}"#);
    assert_eq!(code(&run(&["classify", s(&p), "--format", "csv"])), 1);
    let o = bin()
        .args(["classify", s(&p)])
        .env("GHZSEP_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn fig2_regimes() {
    let o = run(&[
        "boundary",
        "fig2",
        "--p16",
        "0.3",
        "--samples",
        "100",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let mut r = csv::Reader::from_reader(&o.stdout[..]);
    assert_eq!(r.headers().unwrap(), vec!["label", "param1", "param2", "l_min"]);
    let rows = csv_rows(&o);
    let labels: BTreeSet<String> = rows.iter().map(|r| r[0].to_string()).collect();
    let want: BTreeSet<String> = ["KL", "KN", "LM", "MN"].iter().map(|s| s.to_string()).collect();
    assert_eq!(labels, want);
    assert_eq!(rows.len(), 400);
    for r in &rows {
        let l: f64 = r[3].parse().unwrap();
        assert!((l - 1.0).abs() < 1e-9, "{r:?}");
    }

    let o = run(&["boundary", "fig2", "--p16", "0", "--samples", "10"]);
    let v = json(&o);
    let labels: BTreeSet<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["GH", "GJ", "HJ"].into_iter().collect());

    let o = run(&["boundary", "fig2", "--p16", "0.05", "--samples", "10"]);
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 6);
    assert_eq!(code(&run(&["boundary", "fig2", "--p16", "0.7"])), 1);
}

#[test]
fn fig3_mesh() {
    let o = run(&["boundary", "fig3", "--omega", "0.0625", "--grid", "50"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let segs = v.as_array().unwrap();
    let labels: BTreeSet<&str> = segs.iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert!(labels.contains("curvedSurfacePlus") && labels.contains("curvedSurfaceMinus"));
    for seg in segs {
        let pts = seg["points"].as_array().unwrap();
        assert!(pts.iter().all(|p| p.as_array().unwrap().len() == 3));
        if let Some(shape) = seg.get("shape") {
            let (r, c) = (shape[0].as_u64().unwrap(), shape[1].as_u64().unwrap());
            assert_eq!((r * c) as usize, pts.len());
        }
    }

    let o = run(&["boundary", "fig3", "--omega", "0.04", "--grid", "8", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(&o.stdout[..]);
    assert_eq!(
        r.headers().unwrap(),
        vec!["label", "param1", "param2", "param3", "l_min"]
    );
    for row in csv_rows(&o) {
        let l: f64 = row[4].parse().unwrap();
        assert!((l - 1.0).abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn decompose_and_verify_round_trip() {
    let d = TempDir::new().unwrap();
    let target = write(
        &d,
        "t.json",
        &serde_json::json!({
            "symmetric": {"p1": 0.0625, "p2": 0.0625, "p4": 0.0625, "p13": 0.0625, "p15": 0.0625, "p16": 0.0625}
        })
        .to_string(),
    );
    let out = d.path().join("dec.json");
    let o = run(&[
        "decompose",
        "--construction",
        "rho-pm",
        "--params",
        "phi=0.4,sign=1",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["terms"].as_array().unwrap().iter().all(|t| t["theta"].is_array()));

    // sym-point reads its coordinates from the target
    let (x, z) = (0.3f64, 0.5f64);
    let y = 0.5 * (1.0 - z + ((1.0 + z) * (1.0 + x)).sqrt());
    let om = 1.0 / 16.0;
    let mut p = [0.0; 16];
    // symmetric classes from (d, a) = (om, om * ratio)
    let a = [x, y, y, z, y, z, z, y].map(|r| r * om);
    for i in 0..8 {
        p[i] = om + a[i];
        p[15 - i] = om - a[i];
    }
    let state = serde_json::json!({ "probabilities": p });
    let tgt = write(&d, "sym.json", &state.to_string());
    let dec = d.path().join("sym-dec.json");
    let o = run(&[
        "decompose",
        "--construction",
        "sym-point",
        "--target",
        s(&tgt),
        "--out",
        s(&dec),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", "--decomposition", s(&dec), "--target", s(&tgt)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["ok"], true);
    assert!(v["target_residual"].as_f64().unwrap() < 1e-12);
    assert!((v["l_min"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    // the same decomposition does not reproduce a different state
    let o = run(&["verify", "--decomposition", s(&dec), "--target", s(&target)]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["ok"], false);

    assert_eq!(
        code(&run(&["decompose", "--construction", "line", "--params", "p16=0.1"])),
        1
    );
    assert_eq!(
        code(&run(&["decompose", "--construction", "rho3", "--params", "phi"])),
        1
    );
    let o = run(&[
        "decompose",
        "--construction",
        "sym-boundary",
        "--params",
        "mu=inf,phi=0.2,variant=minus-pi2",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn witness_commands() {
    let d = TempDir::new().unwrap();
    let w = write(&d, "w.json", r#"{"M":[0,0,0,0,0,0,1,1,-1,-1,-1,-1,-1,-1,1]}"#);
    let st = write(&d, "s.json", r#"{"werner":{"p":0.111111111111111111}}"#);
    let o = run(&["witness", "eval", s(&w), "--state", s(&st)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!((v["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["state"]["witness_value"].as_f64().unwrap().abs() < 1e-12);

    let ent = write(&d, "e.json", r#"{"werner":{"p":0.3}}"#);
    let o = run(&["witness", "matched", s(&ent)]);
    assert!(json(&o)["witness_value"].as_f64().unwrap() < 0.0);

    let a = run(&["witness", "search", s(&ent), "--rounds", "500", "--seed", "3"]);
    let b = run(&["witness", "search", s(&ent), "--rounds", "500", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["l_best"].as_f64().unwrap() < 1.0);
    assert_eq!(code(&run(&["witness", "search", s(&ent), "--rounds", "0"])), 1);
}

#[test]
fn oracle_suites() {
    let o = run(&["oracle", "check-ppt", "--trials", "500", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v[0]["passed"], true);
    assert_eq!(v[0]["trials"], 500);

    let o = run(&["oracle", "check-lambda", "--trials", "8", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = csv_rows(&o).iter().map(|r| r[0].to_string()).collect();
    assert_eq!(names, ["lambda-inside", "lambda-outside"]);

    for suite in ["check-gtilde", "check-rtilde"] {
        let o = run(&["oracle", suite, "--trials", "20", "--seed", "1"]);
        assert_eq!(code(&o), 0, "{suite}");
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = [
        "oracle",
        "check-gtilde",
        "--trials",
        "30",
        "--seed",
        "5",
        "--grid",
        "32",
    ];
    let one = bin().args(args).env("GHZSEP_THREADS", "1").output().unwrap();
    let many = bin().args(args).env("GHZSEP_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, many.stdout);
    let a = run(&[
        "boundary",
        "fig2",
        "--p16",
        "0.08",
        "--samples",
        "40",
        "--format",
        "csv",
    ]);
    let b = bin()
        .args([
            "boundary",
            "fig2",
            "--p16",
            "0.08",
            "--samples",
            "40",
            "--format",
            "csv",
        ])
        .env("GHZSEP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}
