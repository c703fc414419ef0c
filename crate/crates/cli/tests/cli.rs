//! End-to-end runs of the `chv` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use chevalley::gauss::GaussForm;
use chevalley::json::{gauss_form_from_json, word_from_json, word_to_json};
use chevalley::{Group, Oracle};
use chv::random_word;
use serde_json::{json, Value};

fn chv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chv")).args(args).env_remove("CHV_WITNESS_BOUND").output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn random_word_matches_golden_file() {
    let g = Group::new("A2".parse().unwrap(), "zmod:6".parse().unwrap());
    let w = random_word(&g, 7, 0, 5);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/a2_zmod6_seed7.json");
    let got = word_to_json(&g, &w);
    if std::env::var_os("CHV_BLESS").is_some() {
        fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
    }
    let golden: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(got, golden);
    assert_eq!(word_from_json(&golden).unwrap().1, w);
}

#[test]
fn empty_word_decomposes_to_identity() {
    let dir = tempfile::tempdir().unwrap();
    let word = write(dir.path(), "w.json", &json!({"system":{"type":"B","rank":3},"ring":"zmod:8","word":[]}));
    let o = chv(&["decompose", "--type", "B3", "--ring", "zmod:8", "--word", &word]);
    assert_eq!(o.status.code(), Some(0));
    let g = Group::new("B3".parse().unwrap(), "zmod:8".parse().unwrap());
    assert_eq!(gauss_form_from_json(&g, &stdout_json(&o)).unwrap(), GaussForm::identity(&g));
}

#[test]
fn decompose_writes_a_verifiable_form() {
    let dir = tempfile::tempdir().unwrap();
    let g = Group::new("B2".parse().unwrap(), "zmod:9".parse().unwrap());
    let w = random_word(&g, 42, 0, 20);
    let word = write(dir.path(), "w.json", &word_to_json(&g, &w));
    let out = dir.path().join("form.json");
    let o = chv(&["decompose", "--word", &word, "--out", out.to_str().unwrap(), "--verify", "adjoint"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let f = gauss_form_from_json(&g, &v).unwrap();
    assert!(f.supports_ok(&g));
    assert!(Oracle::faithful(&g).unwrap().verify_equal(&g, &w, &f.to_word(&g)).unwrap());
}

#[test]
fn conjugate_and_unitri5_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let g = Group::new("G2".parse().unwrap(), "gf:5".parse().unwrap());
    let word = write(dir.path(), "w.json", &word_to_json(&g, &random_word(&g, 3, 1, 12)));
    let o = chv(&["conjugate", "--word", &word]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout_json(&o).get("conjugator").is_some());
    let o = chv(&["unitri5", "--word", &word]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["blocks"].as_array().unwrap().len(), 5);
}

#[test]
fn eval_prints_the_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let word = write(
        dir.path(),
        "w.json",
        &json!({"system":{"type":"A","rank":1},"ring":"zmod:7","word":[{"gen":"x","root":[1],"param":"3"}]}),
    );
    let o = chv(&["eval", "--rep", "natural-a", "--word", &word]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), json!([["1", "3"], ["0", "1"]]));
    assert_eq!(chv(&["eval", "--rep", "natural-c", "--word", &word]).status.code(), Some(2));
}

#[test]
fn integer_words_need_a_bound_and_lack_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let word = write(
        dir.path(),
        "w.json",
        &json!({"system":{"type":"A","rank":1},"ring":"int","word":[
            {"gen":"x","root":[-1],"param":"2"},
            {"gen":"x","root":[1],"param":"1"},
            {"gen":"x","root":[-1],"param":"1"}]}),
    );
    let o = chv(&["decompose", "--word", &word]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_chv"))
        .args(["decompose", "--word", &word])
        .env("CHV_WITNESS_BOUND", "500")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("witness"));
}

#[test]
fn mismatched_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let word = write(dir.path(), "w.json", &json!({"system":{"type":"A","rank":2},"ring":"zmod:6","word":[]}));
    let o = chv(&["decompose", "--type", "B2", "--word", &word]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--type"));
    let o = chv(&["decompose", "--word", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn campaign_report_shape() {
    let o = chv(&["random-test", "--type", "C2", "--ring", "prod:zmod:4,gf:3", "--trials", "8", "--maxlen", "12", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["trials"], 8);
    assert_eq!(v["failures"], 0);
    assert!(v.get("elapsed_ms").is_none());
    let o = chv(&["random-test", "--type", "A1", "--ring", "gf:3", "--trials", "2", "--timing"]);
    assert!(stdout_json(&o)["elapsed_ms"].is_u64());
    assert_eq!(chv(&["random-test", "--type", "A1", "--ring", "int", "--trials", "2"]).status.code(), Some(2));
}

#[test]
fn constants_table_rows() {
    let o = chv(&["constants", "--type", "G2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = stdout_json(&o);
    let rows = rows.as_array().unwrap();
    assert!(rows.iter().any(|r| r["i"] == 3 && r["j"] == 2));
    assert!(rows.iter().all(|r| r["coeff"].as_i64().unwrap() != 0));
}
