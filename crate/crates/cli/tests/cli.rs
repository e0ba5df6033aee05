use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn segbias(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segbias"))
        .current_dir(dir)
        .args(args)
        .env_remove("SEGBIAS_THREADS")
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(segbias(d, &["--help"]).status.code(), Some(0));
    assert_eq!(segbias(d, &["--version"]).status.code(), Some(0));
    assert_eq!(segbias(d, &["bogus"]).status.code(), Some(1));
    assert_eq!(segbias(d, &["train", "--method", "bpe"]).status.code(), Some(1));
    let o = segbias(d, &["apply", "--model", "missing.sbm", "--input", "x.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.sbm"));
}

#[test]
fn hypothesis_count_mismatch_names_both_counts() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h.txt"), "una frase\n").unwrap();
    let o = segbias(dir.path(), &["eval-gender", "--benchmark", &fixture("must_she_it.tsv"), "--hyp", "h.txt"]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(msg.contains('8') && msg.contains('1'), "{msg}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("t.txt"), "a a b\n").unwrap();
    fs::write(d.join("c.conf"), "# diversity\nwindow = 2\n").unwrap();
    for (args, window) in [
        (vec!["--config", "c.conf", "eval-diversity", "--input", "t.txt"], "2"),
        (vec!["eval-diversity", "--config", "c.conf", "--input", "t.txt", "--window", "3"], "3"),
    ] {
        let o = segbias(d, &args);
        assert!(o.status.success(), "{}", stderr(&o));
        let table = String::from_utf8(o.stdout).unwrap();
        let row: Vec<&str> = table.lines().last().unwrap().split_whitespace().collect();
        assert_eq!(row[3], window, "{table}");
    }
    fs::write(d.join("bad.conf"), "window 2\n").unwrap();
    let o = segbias(d, &["eval-diversity", "--config", "bad.conf", "--input", "t.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.conf:1"));
}

#[test]
fn deseg_rejects_dangling_marker() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.txt"), "ra@@ gazza\nragazz@@\n").unwrap();
    let o = segbias(dir.path(), &["deseg", "--input", "s.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(":2"), "{}", stderr(&o));
}

#[test]
fn report_rejects_duplicate_labels() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("t.txt"), "a b c\n").unwrap();
    for out in ["x.tsv", "y.tsv"] {
        let o = segbias(d, &["eval-diversity", "--input", "t.txt", "--out", out]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let o = segbias(d, &["report", "--input", "x.tsv", "--input", "y.tsv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--label"));
}
