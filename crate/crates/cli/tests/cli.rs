use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qbaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbaf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn strengths(out: &str) -> Vec<(String, f64)> {
    out.lines()
        .filter(|l| !l.contains(':'))
        .filter_map(|l| {
            let (k, v) = l.split_once(' ')?;
            Some((k.to_string(), v.parse().ok()?))
        })
        .collect()
}

#[test]
fn isolated_arguments_keep_base_scores() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "iso.qbaf", "arg a 0.25\narg b 0.9\n# no edges\n");
    let o = qbaf(&["solve", &f]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("status: Converged"));
    assert_eq!(strengths(&s), vec![("a".into(), 0.25), ("b".into(), 0.9)]);
}

#[test]
fn divergence_family_oscillates_discretely_and_settles_continuously() {
    let d = TempDir::new().unwrap();
    let f = path(&d, "div.qbaf");
    assert!(qbaf(&["gen", "divergence", "3", "3", "0.5", "0.4", "0.7", "--out", &f]).status.success());

    let o = qbaf(&["solve", &f]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&o);
    assert!(s.contains("status: Oscillating"), "{s}");
    assert!(s.contains("b1 ⊥"));

    let o = qbaf(&["solve", &f, "--semantics", "continuous"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(strengths(&stdout(&o)).len(), 6);
}

#[test]
fn trace_writes_one_row_per_step() {
    let d = TempDir::new().unwrap();
    let f = path(&d, "div.qbaf");
    let csv = path(&d, "trace.csv");
    qbaf(&["gen", "divergence", "2", "2", "0.5", "0.5", "1", "--out", &f]);
    let o = qbaf(&["trace", &f, "--max-iter", "30", "--out", &csv]);
    assert_ne!(o.status.code(), Some(1));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "step,b1,b2,g1,g2");
    let last_step: usize = lines.last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert_eq!(lines.len(), last_step + 2);
}

#[test]
fn acyclic_chain_converges_within_depth_plus_one() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "chain.qbaf", "arg a 0.9\narg b 0.5\narg c 0.5\narg e 0.5\nedge a b -1\nedge b c 2\nedge c e -0.5\n");
    let o = qbaf(&["solve", &f]);
    assert_eq!(o.status.code(), Some(0));
    let steps: usize = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("steps: "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(steps <= 4, "{steps}");
}

#[test]
fn analyze_reports_guarantees() {
    let d = TempDir::new().unwrap();
    let f = path(&d, "div.qbaf");
    qbaf(&["gen", "divergence", "3", "3", "0.5", "0.4", "0.7", "--out", &f]);
    let s = stdout(&qbaf(&["analyze", &f]));
    assert!(s.contains("not guaranteed"), "{s}");
    assert!(s.contains("not applicable"));

    let f = write(&d, "small.qbaf", "arg a 0.5\narg b 0.5\nedge a b 1\nedge b a -1\n");
    let s = stdout(&qbaf(&["analyze", &f]));
    assert!(s.contains("verdict: guaranteed"), "{s}");

    let f = write(&d, "dag.qbaf", "arg a 0.5\narg b 0.5\nedge a b 1\n");
    let s = stdout(&qbaf(&["analyze", &f]));
    assert!(s.contains("acyclic"), "{s}");
}

#[test]
fn check_reports_invalid_files() {
    let d = TempDir::new().unwrap();
    let bad = write(&d, "bad.qbaf", "arg a 0.3\narg b 2\nedge a b 1\n");
    let o = qbaf(&["check", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let good = write(&d, "good.qbaf", "arg a 0.3\narg b 0.2\nedge a b 1\n");
    assert_eq!(qbaf(&["check", &good]).status.code(), Some(0));
}

#[test]
fn malformed_input_is_an_error() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "x.qbaf", "arg a 0.3\nfrobnicate\n");
    let o = qbaf(&["solve", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(qbaf(&["solve", &path(&d, "missing.qbaf")]).status.code(), Some(1));
}

#[test]
fn properties_on_files_and_random_instances() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "one.qbaf", "arg a 0.4\n");
    assert_eq!(qbaf(&["properties", &f]).status.code(), Some(0));

    let json = path(&d, "report.json");
    let o = qbaf(&["properties", "--random", "10", "--seed", "2", "--out", &json]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v.is_object());

    let o = qbaf(&["properties", "--random", "5", "--seed", "2", "--inject-fault", "0.1"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn translate_round_trips() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "dag.qbaf", "arg a 0.3\narg b 0.6\narg c 0.5\nedge a b 1.5\nedge a c -1\nedge b c 2\n");
    let o = qbaf(&["translate", "--to-mlp", &f, "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max strength deviation"));

    let mlp = path(&d, "dag.mlp");
    assert!(qbaf(&["translate", "--to-mlp", &f, "--out", &mlp]).status.success());
    let back = path(&d, "back.qbaf");
    assert!(qbaf(&["translate", "--from-mlp", &mlp, "--out", &back]).status.success());
    let a = strengths(&stdout(&qbaf(&["solve", &f])));
    let mut b = strengths(&stdout(&qbaf(&["solve", &back])));
    b.sort_by(|x, y| x.0.cmp(&y.0));
    let mut a = a;
    a.sort_by(|x, y| x.0.cmp(&y.0));
    assert_eq!(a.len(), b.len());
    for ((la, va), (lb, vb)) in a.iter().zip(&b) {
        assert_eq!(la, lb);
        assert!((va - vb).abs() < 1e-12);
    }

    let cyc = write(&d, "cyc.qbaf", "arg a 0.5\narg b 0.5\nedge a b 1\nedge b a 1\n");
    assert_eq!(qbaf(&["translate", "--to-mlp", &cyc]).status.code(), Some(1));
}

#[test]
fn generators_are_deterministic() {
    let d = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = path(&d, name);
        let o = qbaf(&["gen", "random", "--args", "12", "--density", "0.3", "--seed", "9", "--out", &out]);
        assert!(o.status.success());
        fs::read(Path::new(&out)).unwrap()
    };
    assert_eq!(run("r1.qbaf"), run("r2.qbaf"));

    let a = stdout(&qbaf(&["gen", "stock", "--scale", "2", "--base", "sell=0.7"]));
    assert!(a.contains("arg sell 0.7"));
    assert!(a.contains("edge sell buy -2"));
}
