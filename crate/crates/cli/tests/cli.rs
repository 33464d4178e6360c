use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lamina::{fixtures, io};
use tempfile::TempDir;

fn lamina(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lamina"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_then_check_basilica() {
    let dir = TempDir::new().unwrap();
    let portrait = put(&dir, "basilica.por", "degree 2\npolygon {1/6,1/3,2/3,5/6}\n");
    let out = dir.path().join("basilica.lam");
    let o = lamina(&["build", "--portrait", s(&portrait), "--depth", "4", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let built = io::parse_lamination(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(built, fixtures::basilica(4).unwrap());
    for kind in ["sibling", "thurston"] {
        assert_eq!(code(&lamina(&["check", "--kind", kind, s(&out)])), 0, "{kind}");
    }
    let minor = stdout(&lamina(&["minor", s(&out)]));
    assert!(minor.contains("\"minor\": \"1/3 2/3\""), "{minor}");
    assert!(minor.contains("\"hyperbolic\": true"));
}

#[test]
fn scripted_build_reproduces_the_fan() {
    let dir = TempDir::new().unwrap();
    let portrait = put(&dir, "d.por", "degree 2\nleaf 0 1/2\n");
    let script = put(&dir, "fan.script", "0 1/2 -> 0 1/4 ; 1/4 1/2 ; 1/2 3/4 ; 0 3/4\n");
    let out = dir.path().join("fan.lam");
    let policy = format!("script:{}", s(&script));
    let o = lamina(&["build", "--portrait", s(&portrait), "--depth", "3", "--policy", &policy, "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let built = io::parse_lamination(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(built.leaves(), fixtures::l12_fan(3).unwrap().leaves());
}

#[test]
fn amended_example_fails_only_the_sibling_check() {
    let dir = TempDir::new().unwrap();
    let file = put(&dir, "l12a.lam", &io::serialize_lamination(&fixtures::l12_amended(4).unwrap()));
    let o = lamina(&["check", "--kind", "sibling", s(&file)]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("0 1/4"), "{}", stdout(&o));
    assert_eq!(code(&lamina(&["check", "--kind", "thurston", s(&file)])), 0);
}

#[test]
fn qml_file_lists_period_three_minors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("qml.lam");
    let o = lamina(&["--jobs", "2", "qml", "--max-period", "3", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text, "qml max_period 3\n1/7 2/7\n1/3 2/3\n3/7 4/7\n5/7 6/7\n0\n");
}

#[test]
fn limits_and_quotient() {
    let dir = TempDir::new().unwrap();
    let lq = put(&dir, "basilica.lam", &io::serialize_lamination(&fixtures::basilica(4).unwrap()));
    let rabbit = put(&dir, "rabbit.lam", &io::serialize_lamination(&fixtures::rabbit(4).unwrap()));
    let limits = dir.path().join("limits");
    let o = lamina(&["limits", s(&lq), "--depth", "4", "--out-dir", s(&limits)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut files: Vec<PathBuf> = fs::read_dir(&limits).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 4);

    let qml = dir.path().join("qml.lam");
    assert_eq!(code(&lamina(&["qml", "--max-period", "3", "--out", s(&qml)])), 0);
    let mut args = vec!["quotient", s(&lq), s(&rabbit)];
    args.extend(files.iter().map(|p| s(p)));
    args.extend(["--qml", s(&qml)]);
    let o = lamina(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2, "{v}");
}

#[test]
fn gaps_hausdorff_and_siegel() {
    let dir = TempDir::new().unwrap();
    let lq = put(&dir, "basilica.lam", &io::serialize_lamination(&fixtures::basilica(3).unwrap()));
    let o = lamina(&["gaps", s(&lq), "--classify"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"fatou\""), "{}", stdout(&o));

    let o = lamina(&["hausdorff", s(&lq), s(&lq), "--resolution", "32"]);
    assert_eq!(stdout(&o).trim(), "0.000000");

    let o = lamina(&["siegel", "--diameter", "1/4 3/4", "--iters", "10"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let survivors: Vec<&str> = v["survivors"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(survivors.contains(&"1/3") && survivors.contains(&"2/3"));
    assert_eq!(code(&lamina(&["siegel", "--diameter", "0 1/2", "--iters", "4"])), 64);
}

#[test]
fn render_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let lq = put(&dir, "basilica.lam", &io::serialize_lamination(&fixtures::basilica(3).unwrap()));
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for out in [&a, &b] {
        assert_eq!(code(&lamina(&["render", s(&lq), "--out", s(out), "--size", "256"])), 0);
    }
    let svg = fs::read(&a).unwrap();
    assert_eq!(svg, fs::read(&b).unwrap());
    assert!(String::from_utf8(svg).unwrap().starts_with("<svg"));
    assert_eq!(code(&lamina(&["render", s(&lq), "--out", s(&a), "--size", "10"])), 64);
}

#[test]
fn usage_and_parse_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let bad = put(&dir, "bad.lam", "degree 2 depth 1\n1/3 two-thirds\n");
    let o = lamina(&["check", "--kind", "sibling", s(&bad)]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&lamina(&["frobnicate"])), 64);
    assert_eq!(code(&lamina(&["check", "--kind", "sideways", s(&bad)])), 64);
    assert_eq!(code(&lamina(&["minor", "/nonexistent/x.lam"])), 64);
}

#[test]
fn crossing_leaves_exit_2_with_a_report() {
    let dir = TempDir::new().unwrap();
    let crossed = put(&dir, "x.lam", "degree 2 depth 0\n0 1/2\n1/4 3/4\n");
    let o = lamina(&["gaps", s(&crossed)]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("error"));
}
