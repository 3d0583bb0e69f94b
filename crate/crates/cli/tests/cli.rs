use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn reltor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reltor")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("reltor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read_json(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn betti_of_residue_field() {
    let o = reltor(&["betti", "preset:k", "--length", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[1, 2, 4, 8, 16]");
    let q = reltor(&["--field", "Q", "betti", "preset:k", "--length", "4"]);
    assert_eq!(stdout(&q).trim(), "[1, 2, 4, 8, 16]");
}

#[test]
fn broken_ring_names_the_witness() {
    let o = reltor(&["ring", "validate", &data("broken_ring.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not associative: (b1*b1)*b2"), "{}", stderr(&o));
}

#[test]
fn presets_validate() {
    for p in ["square_zero_2vars", "truncated_poly(3)", "field"] {
        let o = reltor(&["ring", "validate", p]);
        assert_eq!(o.status.code(), Some(0), "{p}");
    }
    assert_eq!(reltor(&["ring", "validate", "nope"]).status.code(), Some(2));
}

#[test]
fn relative_tor_table_values() {
    let out = scratch("reltor.json");
    let o = reltor(&["reltor", "k", "omega", "--with", "preset:omega", "--flavor", "fc-m", "--degree", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = read_json(&out);
    assert_eq!(v["dims"], serde_json::json!([8, 16, 32, 64]));
    let o = reltor(&["reltor", "k", "omega", "--flavor", "m-fc", "--degree", "2", "--strategy", "direct"]);
    assert!(stdout(&o).contains("[2, 0, 0]"));
    assert_eq!(reltor(&["reltor", "k", "k", "--flavor", "sideways"]).status.code(), Some(2));
}

#[test]
fn absolute_and_relative_ext() {
    let o = reltor(&["ext", "k", "R", "--degree", "2"]);
    assert!(stdout(&o).contains("[2, 3, 6]"), "{}", stdout(&o));
    let o = reltor(&["ext", "k", "k", "--degree", "1", "--flavor", "pc-m"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn semidualizing_and_classes() {
    let o = reltor(&["semidualizing", "omega", "--bound", "4"]);
    assert!(stdout(&o).contains("is semidualizing"));
    let o = reltor(&["semidualizing", "k"]);
    assert!(stdout(&o).contains("1 != 3"), "{}", stdout(&o));
    let o = reltor(&["classes", "omega", "--bound", "3"]);
    assert!(stdout(&o).contains("Bass class: IN"), "{}", stdout(&o));
    let o = reltor(&["fcpd", "k", "--bound", "3"]);
    assert!(stdout(&o).contains("fc_pd = ABOVE-BOUND(3)"), "{}", stdout(&o));
}

#[test]
fn les_and_purity_files() {
    let o = reltor(&["les", &data("residue_ses.json"), "k", "--length", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exact: true"));
    // Hom(C, -) does not preserve this sequence
    let o = reltor(&["les", &data("residue_ses.json"), "k", "--relative", "first"]);
    assert_eq!(o.status.code(), Some(2));
    let o = reltor(&["purity", &data("m_in_r.json")]);
    assert!(stdout(&o).starts_with("not pure"));
    let o = reltor(&["purity", &data("omega_identity.json")]);
    assert!(stdout(&o).starts_with("pure"));
}

#[test]
fn verify_paper_passes_and_is_deterministic() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    let o = reltor(&["verify-paper", "--preset", "square_zero_2vars", "--p", "5", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = reltor(&["verify-paper", "--p", "2", "--bound", "3", "--out", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let strip = |mut v: Value| {
        for c in v["checks"].as_array_mut().unwrap() {
            c["runtime_ms"] = Value::Null;
        }
        v
    };
    let report = strip(read_json(&a));
    assert_eq!(report["bound"], 6);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let again = scratch("a2.json");
    reltor(&["verify-paper", "--out", again.to_str().unwrap()]);
    assert_eq!(strip(read_json(&again)), report);
}
