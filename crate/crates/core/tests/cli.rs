use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use lipfree::io::{self, FunctionFile, MoleculeFile, SpaceFile};
use lipfree::{LipFunction, Molecule};
use serde_json::Value;

fn lipfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lipfree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn generated_spaces_validate_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let grid = path(dir.path(), "grid.json");
    assert_eq!(
        code(&lipfree(&[
            "gen",
            "grid",
            "--length",
            "4",
            "--spacing",
            "1",
            "--out",
            &grid
        ])),
        0
    );
    let x = io::load_space(Path::new(&grid)).unwrap();
    assert_eq!(x.len(), 5);
    assert_eq!(
        io::read_json::<SpaceFile>(Path::new(&grid)).unwrap(),
        SpaceFile::from_space(&x)
    );

    let aug = path(dir.path(), "aug.json");
    assert_eq!(
        code(&lipfree(&[
            "gen",
            "augmented-interval",
            "--n",
            "2",
            "--out",
            &aug
        ])),
        0
    );
    let y = io::load_space(Path::new(&aug)).unwrap();
    assert_eq!(y.len(), 8);
    assert_eq!(y.base(), Some(0));

    let rnd = path(dir.path(), "random.json");
    assert_eq!(
        code(&lipfree(&[
            "gen", "random", "--points", "10", "--seed", "7", "--out", &rnd
        ])),
        0
    );
    let out = lipfree(&["validate", "--space", &rnd]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let again = lipfree(&["gen", "random", "--points", "10", "--seed", "7"]);
    assert_eq!(stdout(&again), std::fs::read_to_string(&rnd).unwrap());

    assert_eq!(
        code(&lipfree(&[
            "gen",
            "grid",
            "--length",
            "4",
            "--spacing",
            "0.3"
        ])),
        2
    );
    assert_eq!(code(&lipfree(&["gen", "random", "--points", "0"])), 2);
}

#[test]
fn norms_of_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let space = write(
        d,
        "s.json",
        r#"{"points": ["e","a","b"], "base": "e", "dist": [[0,1,1],[1,0,2],[1,2,0]]}"#,
    );
    let f = write(
        d,
        "f.json",
        r#"{"space": "s.json", "values": {"e": 0, "a": 3, "b": -1}}"#,
    );
    let m = write(
        d,
        "m.json",
        r#"{"space": "s.json", "coeffs": {"a": 1, "b": -1}}"#,
    );

    let out = lipfree(&[
        "lipnorm",
        "--space",
        &space,
        "--function",
        &f,
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lipschitz_number"], 3.0);
    assert_eq!(v["sup_norm"], 3.0);
    assert_eq!(v["lip_norm"], 3.0);
    assert_eq!(v["vanishes_at_base"], true);

    let out = lipfree(&[
        "aenorm",
        "--space",
        &space,
        "--molecule",
        &m,
        "--certify",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["primal"], 2.0);
    assert_eq!(v["dual"], 2.0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["plan"], serde_json::json!([["a", "b", 1.0]]));

    let out = lipfree(&["aenorm", "--space", &space, "--molecule", &m, "--exact"]);
    assert_eq!(stdout(&out).trim(), "ae_norm 2");

    let out = lipfree(&[
        "pair",
        "--space",
        &space,
        "--function",
        &f,
        "--molecule",
        &m,
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pairing"], 4.0);
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let space = write(
        d,
        "s.json",
        r#"{"points": ["e","a"], "base": "e", "dist": [[0,1],[1,0]]}"#,
    );
    let junk = write(d, "junk.json", "{");
    let stray = write(
        d,
        "f.json",
        r#"{"space": "s.json", "values": {"e": 0, "a": 1, "z": 2}}"#,
    );
    let short = write(d, "g.json", r#"{"space": "s.json", "values": {"e": 0}}"#);
    let extra = write(
        d,
        "x.json",
        r#"{"points": ["a"], "dist": [[0]], "colour": 1}"#,
    );

    assert_eq!(code(&lipfree(&["validate", "--space", &junk])), 2);
    assert_eq!(code(&lipfree(&["validate", "--space", &extra])), 2);
    assert_eq!(
        code(&lipfree(&["validate", "--space", &path(d, "missing.json")])),
        2
    );
    assert_eq!(
        code(&lipfree(&[
            "lipnorm",
            "--space",
            &space,
            "--function",
            &stray
        ])),
        2
    );
    assert_eq!(
        code(&lipfree(&[
            "lipnorm",
            "--space",
            &space,
            "--function",
            &short
        ])),
        2
    );
    assert_eq!(code(&lipfree(&["verify", "nonsense"])), 2);
    assert_eq!(code(&lipfree(&["verify", "amalgam", "--trials", "0"])), 2);
    assert_eq!(code(&lipfree(&["verify", "amalgam", "--tol", "-1"])), 2);
    assert_eq!(code(&lipfree(&["example25", "--n-max", "26"])), 2);
    assert_eq!(code(&lipfree(&["frobnicate"])), 2);
}

#[test]
fn non_metric_file_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"points": ["a","b","c"], "dist": [[0,1,5],[1,0,1],[5,1,0]]}"#,
    );
    let out = lipfree(&["validate", "--space", &bad, "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["violation"].as_str().unwrap().contains("triangle"));
}

#[test]
fn verify_reports() {
    let out = lipfree(&["verify", "example25", "--n-max", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["check"], "example25");
    assert_eq!(v["passed"], true);
    assert_eq!(v["counterexample"], Value::Null);
    assert_eq!(v["table"][3]["positive_mass"], 4.0);

    let out = lipfree(&[
        "verify", "all", "--trials", "5", "--exact", "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 10);
    assert!(list
        .iter()
        .all(|r| r["passed"] == true && r["max_residual"] == 0.0));

    let text = stdout(&lipfree(&["example25", "--n-max", "2"]));
    assert!(text.starts_with("PASS example25"));
    assert!(text.contains("0.65625"));
}

#[test]
fn emitted_function_and_molecule_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let space = write(
        d,
        "s.json",
        r#"{"points": ["e","a","b"], "base": "e", "dist": [[0,1,1],[1,0,2],[1,2,0]]}"#,
    );
    let x = Arc::new(io::load_space(Path::new(&space)).unwrap());
    let f = LipFunction::new(x.clone(), vec![0.0, 0.1, -2.5]).unwrap();
    let m = Molecule::new(x.clone(), vec![0.0, 1.0 / 3.0, -1.0]).unwrap();
    let fp = path(d, "f.json");
    let mp = path(d, "m.json");
    io::write_json(Path::new(&fp), &FunctionFile::from_function(&f, "s.json")).unwrap();
    io::write_json(Path::new(&mp), &MoleculeFile::from_molecule(&m, "s.json")).unwrap();
    assert_eq!(io::load_function(Path::new(&fp), &x).unwrap(), f);
    assert_eq!(io::load_molecule(Path::new(&mp), &x).unwrap(), m);
}
