use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cayden::literal::parse_digraph;
use cayden::mdd::{verify_mdd, Mdd};

fn cayden(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayden"))
        .args(args)
        .env_remove("CAYDEN_KAPPA_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cayden(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    cayden(args).status.code().unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares against the committed file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert!(expected == actual, "{name} differs:\n{actual}");
}

#[test]
fn tables_match_golden_files() {
    check_golden("table1.txt", &stdout(&["table1"]));
    check_golden("table2.txt", &stdout(&["table2"]));
    check_golden("table1.csv", &stdout(&["table1", "--format", "csv"]));
    check_golden("table2.csv", &stdout(&["table2", "--format", "csv"]));
}

#[test]
fn bounds() {
    assert_eq!(
        stdout(&["bound", "-d", "2", "-n", "72"]),
        "d:   2\nn:   72\nell: 13\n"
    );
    assert_eq!(
        stdout(&["bound", "-d", "2", "-n", "72", "--format", "jsonl"]),
        "{\"d\":2,\"n\":72,\"ell\":13}\n"
    );
    assert!(stdout(&["bound", "-d", "3", "-n", "2000"]).contains("ell: 26'"));
    assert!(stdout(&["bound", "-d", "3", "-k", "8"]).contains("max_order: 111'"));
    assert_eq!(
        stdout(&["bound", "-d", "3", "-n", "2000", "--format", "csv"]),
        "d,n,ell\n3,2000,26\n"
    );
}

#[test]
fn tightness() {
    assert!(stdout(&["tight", "coeff", "-d", "2", "-n", "3"]).contains("INFINITE"));
    assert!(stdout(&["tight", "coeff", "-d", "3", "-n", "16"]).contains("coefficient: 4'"));
    assert!(stdout(&["tight", "coeff", "-d", "2", "-n", "72"]).contains("coefficient: 3\n"));
    assert!(stdout(&["tight", "xd", "-d", "3"]).contains("x_d: 10"));
    assert!(stdout(&["tight", "cd", "-d", "2", "-x", "6"]).contains("in_cd: true"));
    let t = stdout(&["tight", "digraph", r#"{"moduli":[72],"gens":[[4],[11]]}"#]);
    assert!(t.contains("tightness: 0\n"), "{t}");
}

#[test]
fn snf_and_digraph_queries() {
    let s = stdout(&["snf", "[[-1,-1,0],[-1,0,-4],[1,-3,0]]"]);
    assert!(s.contains("invariant_factors: [1,1,16]"), "{s}");
    let d = stdout(&[
        "diameter",
        r#"{"moduli":[3,24],"gens":[[0,1],[-1,3]]}"#,
        "--format",
        "jsonl",
    ]);
    let v: serde_json::Value = serde_json::from_str(d.trim()).unwrap();
    assert_eq!(v["diameter"], 13);
    parse_digraph(&v["digraph"].to_string()).unwrap();
    let p = stdout(&["proper", r#"{"moduli":[1,3],"gens":[[0,1],[1,-1]]}"#]);
    assert!(p.contains("proper:           true"), "{p}");
    let u = stdout(&["upsilon", "-d", "3", "-m", "2"]);
    assert!(
        u.contains("diameter: 17") && u.contains("density:  21/250"),
        "{u}"
    );
    let dens = stdout(&["density", r#"{"moduli":[1,3],"gens":[[0,1],[1,-1]]}"#]);
    assert!(dens.contains("attains:        true"), "{dens}");
}

#[test]
fn mdd_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.mdd");
    let f = file.to_str().unwrap();
    stdout(&[
        "mdd",
        "build",
        r#"{"moduli":[3,24],"gens":[[0,1],[-1,3]]}"#,
        "-o",
        f,
    ]);
    let h = Mdd::parse_text(&fs::read_to_string(&file).unwrap()).unwrap();
    assert!(verify_mdd(&h));
    assert!(stdout(&["mdd", "verify", f]).contains("valid:          true"));
    let svg = stdout(&["mdd", "render", f]);
    assert_eq!(svg.matches("<rect").count(), 72);
    let dilated = stdout(&["dilate", "--mdd", f, "-m", "2"]);
    let h2 = Mdd::parse_text(&dilated).unwrap();
    assert_eq!(h2.len(), 288);
    assert!(verify_mdd(&h2));
    let csv = stdout(&[
        "mdd",
        "build",
        r#"{"moduli":[16],"gens":[[1],[4],[5]]}"#,
        "--format",
        "csv",
    ]);
    assert_eq!(csv.lines().count(), 17);

    // drop a cube: no longer an MDD
    let text = fs::read_to_string(&file).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    fs::write(&file, lines.join("\n")).unwrap();
    assert_eq!(code(&["mdd", "verify", f]), 1);
}

#[test]
fn kappa_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("kappa.jsonl");
    let c = cache.to_str().unwrap();
    let first = stdout(&[
        "kappa", "-d", "3", "-n", "16", "--cache", c, "--format", "jsonl",
    ]);
    let v: serde_json::Value = serde_json::from_str(first.trim()).unwrap();
    assert_eq!(v["kappa"], 3);
    assert_eq!(v["cached"], false);
    parse_digraph(&v["witness"].to_string()).unwrap();
    let second = stdout(&[
        "kappa", "-d", "3", "-n", "16", "--cache", c, "--format", "jsonl",
    ]);
    let w: serde_json::Value = serde_json::from_str(second.trim()).unwrap();
    assert_eq!(w["cached"], true);
    assert_eq!(w["witness"], v["witness"]);

    let via_env = Command::new(env!("CARGO_BIN_EXE_cayden"))
        .args(["kappa", "-d", "3", "-n", "16", "--format", "jsonl"])
        .env("CAYDEN_KAPPA_CACHE", &cache)
        .output()
        .unwrap();
    assert!(String::from_utf8(via_env.stdout)
        .unwrap()
        .contains("\"cached\":true"));

    // a second record for the same key with another value
    let mut text = fs::read_to_string(&cache).unwrap();
    text.push_str(&text.clone().replace("\"kappa\":3", "\"kappa\":4"));
    fs::write(&cache, text).unwrap();
    assert_eq!(code(&["kappa", "-d", "3", "-n", "16", "--cache", c]), 3);
}

#[test]
fn gaps_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gaps.csv");
    let svg = dir.path().join("gaps.svg");
    let out = stdout(&[
        "gaps",
        "-d",
        "3",
        "--from",
        "4",
        "--to",
        "20",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.starts_with("n   gap\n4   "), "{out}");
    assert!(out.contains("16  0'"), "{out}");
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,gap\n4,"));
    assert!(text.contains("\n16,0\n"));
    assert_eq!(text.lines().count(), 18);
    assert_eq!(
        fs::read_to_string(&svg).unwrap().matches("<rect").count(),
        17
    );
    assert_eq!(
        stdout(&["gaps", "-d", "2", "--from", "9", "--to", "8", "--format", "csv"]),
        "n,gap\n"
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["bound", "-d", "2"]), 2);
    assert_eq!(code(&["diameter", "{not json"]), 2);
    assert_eq!(code(&["diameter", r#"{"moduli":[4],"gens":[[2]]}"#]), 2);
    assert_eq!(code(&["bound", "-d", "5", "-n", "10"]), 2);
    assert_eq!(
        code(&["kappa", "-d", "2", "-n", "9", "--symmetry", "all"]),
        2
    );
    assert_eq!(code(&["frobnicate"]), 2);
}
