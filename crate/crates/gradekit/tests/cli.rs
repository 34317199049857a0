use std::path::{Path, PathBuf};
use std::process::Command;

use gradekit::cli::run;

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gradekit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn gallery_file(name: &str) -> PathBuf {
    let (code, out, _) = call(&["gallery", name]);
    assert_eq!(code, 0);
    tmp(&format!("{name}.struct"), &out)
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["gradekit"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn grades_json_for_a() {
    let a = gallery_file("A");
    let (code, out, _) = call(&["grades", path(&a), "--pair", "1,2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["grades"]["id"], false);
    assert_eq!(v["grades"]["indiscNeqFull"], true);
    assert_eq!(v["grades"].as_object().unwrap().len(), 12);
}

#[test]
fn conform_g() {
    let g = gallery_file("G");
    let (code, out, _) = call(&["conform", path(&g), "--regime", "finite-relational"]);
    assert_eq!((code, out.as_str()), (0, "0 violations\n"));
}

#[test]
fn lattice_dot_has_twelve_nodes() {
    let (code, out, _) = call(&["lattice", "--regime", "general-arbitrary", "--dot"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("[label=")).count(), 12);
    let (_, fin, _) = call(&["lattice", "--regime", "finite-arbitrary", "--dot"]);
    assert_eq!(fin.lines().filter(|l| l.contains("[label=")).count(), 8);
}

#[test]
fn auto_and_rel() {
    let g = gallery_file("G");
    let (code, out, _) = call(&["auto", path(&g), "--map", "1:2", "--swap"]);
    assert_eq!((code, out.as_str()), (0, "(1 2)(3 6)(4 5)\n"));
    let (_, out, _) = call(&["auto", path(&g), "--map", "1:2", "--total"]);
    assert_eq!(out, "no automorphism\n");
    let c = gallery_file("C");
    let (code, out, _) = call(&["rel", path(&c), "--grade", "total", "--pair", "1,2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1 ~ₜ 2: true\nwitness {"));
}

#[test]
fn indisc_reports_a_discerning_formula() {
    let b = gallery_file("B");
    let (code, out, _) = call(&["indisc", path(&b), "--grade", "indiscNeqFull", "--pair", "1,2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1 ≈⁻ 2: false\ndiscerning formula: "), "{out}");
}

#[test]
fn capture_galois_quotient_inflate() {
    let d = gallery_file("D");
    let (code, out, _) = call(&["capture", path(&d), "--grade", "sym-total"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("captured ≈ₜ on all 16 pairs\n"));
    let (code, out, _) = call(&["galois", path(&d), "--check"]);
    assert_eq!((code, out.as_str()), (0, "4 quotient automorphism(s) checked, 0 failure(s)\n"));
    let f = gallery_file("F");
    let (_, out, _) = call(&["quotient", path(&f)]);
    assert!(out.starts_with("# [1] = { 1, 2 }\n"));
    let b = gallery_file("B");
    let (code, out, _) = call(&["inflate", path(&b), "--element", "1", "--copies", "1"]);
    assert_eq!(code, 0);
    let n = gradekit::dsl::parse_structure(&out).unwrap();
    assert_eq!(n.elements(), ["1", "2", "1$1"]);
}

#[test]
fn random_is_deterministic() {
    let spec = tmp("spec.sig", "signature { pred R/2; } density = 0.5;");
    let args = ["random", "--seed", "7", "--size", "5", "--spec", path(&spec)];
    let (code, first, _) = call(&args);
    assert_eq!(code, 0);
    assert_eq!(call(&args).1, first);
}

#[test]
fn output_flag_writes_file() {
    let target = std::env::temp_dir().join(format!("gradekit-cli-out-{}.struct", std::process::id()));
    let (code, out, _) = call(&["gallery", "D", "-o", target.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let text = std::fs::read_to_string(&target).unwrap();
    assert_eq!(gradekit::dsl::parse_structure(&text).unwrap(), gradekit_core::gallery::d());
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["lattice", "--regime", "nope"]).0, 2);
    assert_eq!(call(&["gallery", "Z"]).0, 2);
    let a = gallery_file("A");
    assert_eq!(call(&["grades", path(&a), "--pair", "1,9"]).0, 2);
    let bad = tmp("bad.struct", "signature { func f/1; } structure { domain = { a, b }; f = { a -> b }; }");
    let (code, _, err) = call(&["grades", path(&bad)]);
    assert_eq!(code, 1);
    assert!(err.contains("partial function"), "{err}");
    let f = gallery_file("F");
    let (code, _, err) = call(&["conform", path(&f), "--regime", "finite-relational"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: lattice:"), "{err}");
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_gradekit");
    let out = Command::new(bin).args(["gallery", "A"]).output().unwrap();
    assert!(out.status.success());
    let out = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
