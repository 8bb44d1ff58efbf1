use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const OBTUSE: &str = "dim 2\n0 0\n4 0\n2 1\n";
const EQUILATERAL: &str = "dim 2\n0 0\n1 0\n0.5 0.8660254037844386\n";
const SQUARE: &str = "# unit square\ndim 2\n0 0\n1 0\n1 1\n0 1\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delcech"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_wrap_obtuse() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.txt", OBTUSE);
    let o = run(&["build", "--type", "wrap", "--cap", "4.0", s(&pts)]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "wrap dim=2 E=all cap=4\n0 0\n1 0\n2 0\n0,2 1.25\n1,2 1.25\n"
    );
}

#[test]
fn build_delaunay_and_selective() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.txt", OBTUSE);
    let out = dir.path().join("del.txt");
    let o = run(&[
        "build",
        "--type",
        "delaunay",
        "--cap",
        "inf",
        "-o",
        s(&out),
        s(&pts),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("complex dim=2 E=all cap=inf\n"));
    assert_eq!(text.lines().count(), 8);

    let o = run(&[
        "build",
        "--type",
        "selective",
        "--E",
        "0,2",
        "--cap",
        "4.0",
        s(&pts),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("complex dim=2 E=0,2 cap=4\n"));
}

#[test]
fn build_usage_errors() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.txt", OBTUSE);
    assert_eq!(
        code(&run(&["build", "--type", "delaunay", "--E", "0", s(&pts)])),
        2
    );
    assert_eq!(code(&run(&["build", "--type", "selective", s(&pts)])), 2);
    assert_eq!(
        code(&run(&["build", "--type", "cech", "--cap", "abc", s(&pts)])),
        2
    );
    assert_eq!(code(&run(&["build", "--type", "voronoi", s(&pts)])), 2);
    let bad = write(&dir, "bad.txt", "dim 2\n0 0 0\n");
    assert_eq!(code(&run(&["build", "--type", "cech", s(&bad)])), 2);
}

#[test]
fn build_degenerate_suggests_perturb() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "sq.txt", SQUARE);
    let o = run(&["build", "--type", "delaunay", s(&pts)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("perturb"));
}

#[test]
fn gradient_examples() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.txt", OBTUSE);
    let o = run(&["gradient", "--E", "all", s(&pts)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with("critical")).count(), 5);
    assert!(text.contains("interval lower=0,1 upper=0,1,2 value=6.25\n"));

    let one = write(&dir, "one.txt", "dim 3\n1 2 3\n");
    let o = run(&["gradient", "--E", "empty", s(&one)]);
    assert_eq!(
        stdout(&o),
        "gradient E=empty\ninterval lower=0 upper=0 value=0 critical\n"
    );

    assert_eq!(code(&run(&["gradient", "--E", "0,x", s(&pts)])), 2);
    assert_eq!(code(&run(&["gradient", "--E", "5", s(&pts)])), 2);
}

#[test]
fn collapse_examples() {
    let dir = TempDir::new().unwrap();
    let ob = write(&dir, "ob.txt", OBTUSE);
    let o = run(&["collapse", "--from", "cech", "--to", "wrap", s(&ob)]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "collapse from=cech to=wrap\nstep 0: facet=0,1 cofacet=0,1,2 value=6.25\n"
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("verified 1 steps"));

    let eq = write(&dir, "eq.txt", EQUILATERAL);
    let o = run(&["collapse", "--from", "delaunay", "--to", "wrap", s(&eq)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "collapse from=delaunay to=wrap\n");

    assert_eq!(
        code(&run(&[
            "collapse",
            "--from",
            "wrap",
            "--to",
            "cech",
            s(&eq)
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "collapse",
            "--from",
            "selective",
            "--to",
            "wrap",
            s(&eq)
        ])),
        2
    );
}

#[test]
fn persistence_golden_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let eq = write(&dir, "eq.txt", EQUILATERAL);
    let o = run(&["persistence", "--type", "cech", s(&eq)]);
    assert_eq!(code(&o), 0);
    let golden = "dim,birth,death\n0,0,0.25\n0,0,0.25\n0,0,inf\n1,0.25,0.333333333333\n";
    assert_eq!(stdout(&o), golden);

    let pts = write(
        &dir,
        "r.txt",
        &stdout(&run(&["random", "--count", "7", "--seed", "3"])),
    );
    for kind in ["cech", "delcech", "delaunay", "wrap"] {
        let file = dir.path().join(format!("{kind}.txt"));
        assert_eq!(
            code(&run(&["build", "--type", kind, "-o", s(&file), s(&pts)])),
            0
        );
        let from_file = stdout(&run(&["persistence", s(&file)]));
        let direct = stdout(&run(&["persistence", "--type", kind, s(&pts)]));
        assert_eq!(from_file, direct, "{kind}");
    }
}

#[test]
fn compare_examples() {
    let dir = TempDir::new().unwrap();
    let pts = dir.path().join("r7.txt");
    assert_eq!(code(&run(&["random", "--seed", "7", "-o", s(&pts)])), 0);
    let o = run(&["compare", "--types", "cech,delcech,delaunay,wrap", s(&pts)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "EQUAL\n");

    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let ob = write(&dir, "ob.txt", OBTUSE);
    run(&["build", "--type", "cech", "-o", s(&a), s(&pts)]);
    run(&["build", "--type", "cech", "-o", s(&b), s(&ob)]);
    assert_eq!(code(&run(&["compare", s(&a), s(&b)])), 2);

    // Same ground set, different filtrations.
    let eq = write(&dir, "eq.txt", EQUILATERAL);
    run(&["build", "--type", "cech", "-o", s(&a), s(&eq)]);
    run(&[
        "build",
        "--type",
        "cech",
        "--cap",
        "0.3",
        "-o",
        s(&b),
        s(&eq),
    ]);
    let o = run(&["compare", s(&a), s(&b)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("DIFFERENT\n"));
}

#[test]
fn checkgp_and_perturb() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.txt", SQUARE);
    let o = run(&["checkgp", s(&sq)]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("on smallest circumsphere"));

    let moved = dir.path().join("moved.txt");
    let o = run(&[
        "perturb",
        "--magnitude",
        "1e-3",
        "--seed",
        "1",
        "-o",
        s(&moved),
        s(&sq),
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&["checkgp", s(&moved)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "general position: ok\n");

    assert_eq!(
        code(&run(&["checkgp", s(&dir.path().join("missing.txt"))])),
        2
    );
    assert_eq!(code(&run(&["perturb", "--magnitude", "0", s(&sq)])), 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = stdout(&run(&[
        "random",
        "--count",
        "8",
        "--dim",
        "3",
        "--max-weight",
        "0.5",
        "--seed",
        "11",
    ]));
    let b = stdout(&run(&[
        "random",
        "--count",
        "8",
        "--dim",
        "3",
        "--max-weight",
        "0.5",
        "--seed",
        "11",
    ]));
    assert_eq!(a, b);
    assert_ne!(
        a,
        stdout(&run(&[
            "random", "--count", "8", "--dim", "3", "--seed", "12"
        ]))
    );
    let pts = write(&dir, "p.txt", &a);
    for args in [
        vec!["build", "--type", "delcech"],
        vec!["gradient", "--E", "0,3,5"],
        vec!["collapse", "--from", "cech", "--to", "wrap"],
        vec!["persistence", "--type", "wrap"],
    ] {
        let mut args = args.clone();
        args.push(s(&pts));
        let one = run(&args);
        let mut threaded = vec!["--threads", "3"];
        threaded.extend(&args);
        let two = run(&threaded);
        assert_eq!(code(&one), 0, "{args:?}");
        assert_eq!(one.stdout, two.stdout, "{args:?}");
    }
}
