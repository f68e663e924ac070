use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_predicheck")).args(args).env_remove("PREDICHECK_FUEL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn c(name: &str) -> String {
    corpus().join(name).display().to_string()
}

#[test]
fn ca_schema_checks() {
    let o = run(&["check", &c("ca-schema.hao")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn removing_lem_fails_at_lem_nodes() {
    let o = run(&["check", "--profile=-lem", &c("ca-schema.hao")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("lemma chi-functional failed: lem at"), "{out}");
    assert!(out.contains("LEM disabled by the axiom profile"));
}

#[test]
fn empty_file_has_no_records() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.hao");
    std::fs::write(&p, "").unwrap();
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("0 record(s)"));
}

#[test]
fn parse_errors_are_records() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.dtt");
    std::fs::write(&p, "(check (lam x x) Nat)\n(chek 0 Nat)\n").unwrap();
    let o = run(&["check", "--json", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let recs = &v["stable"]["files"][0]["records"];
    assert_eq!(recs.as_array().unwrap().len(), 2);
    assert_eq!(recs[1]["status"], "failed");
    assert_eq!(recs[1]["line"], 2);
}

#[test]
fn unknown_extension_is_a_usage_error() {
    let o = run(&["check", "notes.txt"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn translate_formulas_to_mltt_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.dtt");
    let o = run(&["translate", &c("formulas.hao"), "--target", "mltt", "-o", out.to_str().unwrap(), "--check"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(std::fs::read_to_string(out).unwrap().starts_with("(mode mltt)"));
}

#[test]
fn translate_aca_to_emtt() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.dtt");
    let o = run(&["translate", &c("aca-examples.aca"), "--target", "emtt", "-o", out.to_str().unwrap(), "--check"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("classify evens ok: sort Prop"));
}

#[test]
fn proofs_do_not_go_to_fol() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.fol");
    let o = run(&["translate", &c("basics.hao"), "--target", "fol", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("proofs not transportable to fol target"));
}

#[test]
fn category_mismatch() {
    let o = run(&["translate", &c("aca-examples.aca"), "--target", "mltt"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("usage error"));
}

#[test]
fn synthesize() {
    let dir = tempfile::tempdir().unwrap();
    let ca = dir.path().join("ca.hao");
    let o = run(&["synthesize", "ca", "--phi", "(= N x 0)", "-o", ca.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(std::fs::read_to_string(&ca).unwrap(), std::fs::read_to_string(corpus().join("ca-schema.hao")).unwrap());

    let ac = dir.path().join("ac.dtt");
    let o = run(&["synthesize", "ac", "-o", ac.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("reject ac-mtt expected-reject: sort violation: fst"));

    assert_eq!(code(&run(&["synthesize", "ca"])), 2);
}

#[test]
fn fuel_from_environment() {
    let bad = Command::new(env!("CARGO_BIN_EXE_predicheck"))
        .args(["check", &c("ac.dtt")])
        .env("PREDICHECK_FUEL", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("k.hao");
    std::fs::write(&p, "(lemma k-reduces (= N (ap (k N N) 3 4) 3) (refl 3))\n").unwrap();
    let run_with = |fuel: &str| {
        Command::new(env!("CARGO_BIN_EXE_predicheck"))
            .arg("check")
            .arg(&p)
            .env("PREDICHECK_FUEL", fuel)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run_with("10")), 0);
    let starved = run_with("0");
    assert_eq!(code(&starved), 1);
    assert!(stdout(&starved).contains("fuel"), "{}", stdout(&starved));
    let o = Command::new(env!("CARGO_BIN_EXE_predicheck"))
        .arg("check")
        .arg("--fuel=10")
        .arg(&p)
        .env("PREDICHECK_FUEL", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn report_matches_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(corpus().join("../docs/report.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in [vec!["check", "--json"], vec!["check", "--json", "--profile=-lem,-irc"]] {
        let mut args: Vec<String> = args.into_iter().map(String::from).collect();
        args.extend(["ca-schema.hao", "ac.dtt", "aca-examples.aca"].iter().map(|f| c(f)));
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let v: serde_json::Value = serde_json::from_slice(&run(&args).stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{errors:?}");
    }
}

fn copy_corpus(to: &Path) {
    for e in std::fs::read_dir(corpus()).unwrap() {
        let p = e.unwrap().path();
        if p.is_file() {
            std::fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
        }
    }
}

#[test]
fn corpus_goldens() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let d = dir.path().to_str().unwrap();
    let o = run(&["corpus", "--dir", d]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("golden report.json failed"), "{}", stdout(&o));
    assert_eq!(code(&run(&["corpus", "--dir", d, "--bless"])), 0);
    let o = run(&["corpus", "--dir", d]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("golden/report.json")).unwrap(),
        std::fs::read_to_string(corpus().join("golden/report.json")).unwrap()
    );
}
