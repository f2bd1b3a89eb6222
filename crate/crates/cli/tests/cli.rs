use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use ncpoly::exact::rat::{frac, rat};
use ncpoly::io::{self, ConeDoc, TupleDoc, KIND_TUPLE};
use ncpoly::polyhedral::{facets_of, families};
use ncpoly::{base_witness, Sym2, VRep};
use ncpoly_cli::{run, Cli, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, EXIT_SIMPLEX};
use serde_json::Value;
use tempfile::TempDir;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ncpoly(args: &[&str]) -> Out {
    let cli = Cli::try_parse_from(std::iter::once("ncpoly").chain(args.iter().copied())).unwrap();
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(&cli, &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn cone_file(dir: &TempDir, name: &str, v: &VRep) -> String {
    write(dir, name, &io::to_json(&ConeDoc::from_vrep(v)))
}

fn tuple_file(dir: &TempDir, name: &str, entries: &[Sym2]) -> String {
    write(dir, name, &io::to_json(&TupleDoc::new(KIND_TUPLE, entries)))
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn square(dir: &TempDir) -> String {
    cone_file(dir, "square.json", &families::square_cone())
}

#[test]
fn analyze_reports_counts() {
    let dir = TempDir::new().unwrap();
    let out = ncpoly(&["analyze", &square(&dir)]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "dim=3 rays=4 facets=4 proper=true simplex=false\n");
    let out = ncpoly(&["--format", "json", "analyze", &cone_file(&dir, "o.json", &families::orthant(3))]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["simplex"], Value::Bool(true));
}

#[test]
fn convert_round_trips_through_functionals() {
    let dir = TempDir::new().unwrap();
    let h = path(&dir, "h.json");
    assert_eq!(ncpoly(&["convert", &square(&dir), "--to", "h", "-o", &h]).code, EXIT_OK);
    let doc = io::parse_cone(&fs::read_to_string(&h).unwrap()).unwrap();
    assert!(doc.generators.is_none());
    assert_eq!(doc.to_hrep().unwrap().unwrap().canonical(), facets_of(&families::square_cone()).unwrap().canonical());
    let out = ncpoly(&["convert", &h, "--to", "v"]);
    let back = io::parse_cone(&out.stdout).unwrap().to_vrep().unwrap();
    assert_eq!(back.canonical(), families::square_cone().canonical());
}

#[test]
fn witness_then_verify() {
    let dir = TempDir::new().unwrap();
    let cone = square(&dir);
    let w = path(&dir, "w.json");
    assert_eq!(ncpoly(&["witness", &cone, "-o", &w]).code, EXIT_OK);
    let out = ncpoly(&["verify", &cone, &w]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "pass\n"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(doc["trail"][0]["step"], "base3");
    let tuple = io::parse_tuple(&doc["tuple"].to_string()).unwrap();
    assert_eq!(tuple, base_witness());
}

#[test]
fn tampered_certificate_names_the_failed_constraint() {
    let dir = TempDir::new().unwrap();
    let cone = square(&dir);
    let w = path(&dir, "w.json");
    ncpoly(&["witness", &cone, "-o", &w]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    doc["certificate"]["entries"][2]["a11"] = Value::String("-5".into());
    let bad = write(&dir, "bad.json", &doc.to_string());
    let out = ncpoly(&["verify", &cone, &bad]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert!(out.stdout.starts_with("fail: certificate is not PSD on generator"), "{}", out.stdout);

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    doc["tuple"]["entries"][2]["a11"] = Value::String("0".into());
    let bad = write(&dir, "bad2.json", &doc.to_string());
    let out = ncpoly(&["verify", &cone, &bad]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert!(out.stdout.contains("facet"), "{}", out.stdout);
}

#[test]
fn check_writes_verifiable_proofs() {
    let dir = TempDir::new().unwrap();
    let cone = square(&dir);
    let inside = tuple_file(&dir, "in.json", &[Sym2::diag(rat(0), rat(-1)), Sym2::zero(), Sym2::identity()]);
    let proof = path(&dir, "dec.json");
    let out = ncpoly(&["check", "pt", &cone, &inside, "-o", &proof]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "member\n"));
    assert_eq!(ncpoly(&["verify", &cone, &proof]).stdout, "pass\n");

    let witness = tuple_file(&dir, "w.json", &base_witness().entries);
    assert_eq!(ncpoly(&["check", "ph", &cone, &witness]).stdout, "member\n");
    let cert = path(&dir, "cert.json");
    let out = ncpoly(&["check", "pt", &cone, &witness, "-o", &cert]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_NEGATIVE, "non-member\n"));
    assert_eq!(ncpoly(&["verify", &cone, &cert]).stdout, "pass\n");

    let out = ncpoly(&["--format", "json", "check", "pt", &cone, &witness]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "non-member");
    assert_eq!(v["proof"]["kind"], "sep_certificate");
}

#[test]
fn non_psd_decomposition_block_fails() {
    let dir = TempDir::new().unwrap();
    let cone = square(&dir);
    let inside = tuple_file(&dir, "in.json", &[Sym2::zero(), Sym2::zero(), Sym2::identity()]);
    let proof = path(&dir, "dec.json");
    ncpoly(&["check", "pt", &cone, &inside, "-o", &proof]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&proof).unwrap()).unwrap();
    doc["entries"][0] = serde_json::json!({ "a11": "1", "a12": "2", "a22": "1" });
    let bad = write(&dir, "bad.json", &doc.to_string());
    let out = ncpoly(&["verify", &cone, &bad]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert_eq!(out.stdout, "fail: decomposition block 0 is not PSD\n");
}

#[test]
fn ph_non_member_names_a_facet() {
    let dir = TempDir::new().unwrap();
    let t = tuple_file(&dir, "t.json", &[Sym2::diag(rat(2), rat(0)), Sym2::zero(), Sym2::identity()]);
    let out = ncpoly(&["check", "ph", &square(&dir), &t]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert!(out.stdout.starts_with("non-member: facet"));
}

#[test]
fn simplex_cone_has_no_witness() {
    let dir = TempDir::new().unwrap();
    let out = ncpoly(&["witness", &cone_file(&dir, "o.json", &families::orthant(3))]);
    assert_eq!(out.code, EXIT_SIMPLEX);
    assert!(out.stderr.contains("simplex cone"));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let cone = square(&dir);
    assert_eq!(ncpoly(&["analyze", &path(&dir, "missing.json")]).code, EXIT_INPUT);
    assert_eq!(ncpoly(&["analyze", &write(&dir, "junk.json", "{not json")]).code, EXIT_INPUT);
    let t = tuple_file(&dir, "t2.json", &[Sym2::identity(), Sym2::identity()]);
    let out = ncpoly(&["check", "pt", &cone, &t]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("dimension"), "{}", out.stderr);
    let odd = write(&dir, "odd.json", r#"{"dim": 2, "generators": [["1", "0"], ["0", "1"]], "functionals": [["1", "1"], ["0", "1"]]}"#);
    assert_eq!(ncpoly(&["analyze", &odd]).code, EXIT_INPUT);
    let flat = cone_file(&dir, "flat.json", &VRep::from_ints(&[&[1, 0, 0], &[0, 1, 0]]).unwrap());
    assert_eq!(ncpoly(&["witness", &flat]).code, EXIT_INPUT);
}

#[test]
fn section_csv_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cone = square(&dir);
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    assert_eq!(ncpoly(&["section", &cone, "--grid", "9", "-o", &a]).code, EXIT_OK);
    assert_eq!(ncpoly(&["section", &cone, "--grid", "9", "-o", &b]).code, EXIT_OK);
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.lines().count(), 82);
    assert!(text.contains("\n0,0,member,member\n"));
    let out = ncpoly(&["--format", "svg", "section", &cone, "--grid", "5", "--lo", "-1", "--hi", "1"]);
    assert!(out.stdout.starts_with("<svg"));
}

#[test]
fn section_spec_file() {
    let dir = TempDir::new().unwrap();
    let t = |e: Vec<Sym2>| serde_json::to_value(TupleDoc::new(KIND_TUPLE, &e)).unwrap();
    let spec = serde_json::json!({
        "base": t(vec![Sym2::zero(), Sym2::zero(), Sym2::identity()]),
        "dx": t(vec![Sym2::diag(rat(1), rat(-1)), Sym2::zero(), Sym2::zero()]),
        "dy": t(vec![Sym2::zero(), Sym2::diag(rat(1), rat(-1)), Sym2::zero()]),
        "grid": [3, 2],
        "range": [["-1/2", "1/2"], ["0", "1/4"]],
    });
    let s = write(&dir, "spec.json", &spec.to_string());
    let out = ncpoly(&["section", &square(&dir), "--spec", &s]);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[1], "-0.5,0,member,member");
    assert_eq!(lines[6], "0.5,0.25,member,member");
    let _ = frac(1, 2);
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_ncpoly"))
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let status = |args: &[&str]| Process::new(binary()).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["--help"]), 0);
    assert_eq!(status(&["frobnicate"]), EXIT_INPUT);
    assert_eq!(status(&["analyze", &square(&dir)]), EXIT_OK);
    assert_eq!(status(&["witness", &cone_file(&dir, "o.json", &families::orthant(4))]), EXIT_SIMPLEX);
    assert!(Path::new(&binary()).exists());
}
