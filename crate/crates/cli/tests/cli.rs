use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qsdesign::data;

fn qsdesign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsdesign")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn bundled(dir: &Path, id: &str) -> PathBuf {
    write(dir, &format!("{id}.inc"), data::bundled_biplane_text(id).unwrap())
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn premises_are_listed() {
    let out = qsdesign(&["premises", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for p in qsdesign::certify::premise_registry() {
        assert!(text.contains(&p.id), "{text}");
    }
}

#[test]
fn verify_reports_design_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write(dir.path(), "fano.inc", &data::serialize_incidence(&data::fano_plane()));
    let out = qsdesign(&["verify", arg(&fano)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2-(7,3,1)"), "{}", stdout(&out));

    let out = qsdesign(&["verify", arg(&fano), "--t", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_with_data_integrity_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.inc", "3 3\n110\n011\n1x1\n");
    let out = qsdesign(&["rank", arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4, column 2"));
}

#[test]
fn exhausted_memory_budget_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let b5 = bundled(dir.path(), "B5");
    let out = qsdesign(&["enum01", arg(&b5), "--weight", "12", "--memory-budget", "1024"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn rank_and_min_distance_of_a_bundled_biplane() {
    let dir = tempfile::tempdir().unwrap();
    let b2 = bundled(dir.path(), "B2");
    assert_eq!(stdout(&qsdesign(&["rank", arg(&b2)])).trim(), "22");

    let out = qsdesign(&["mindist", arg(&b2), "--claim", "11"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("confirmed: minimum distance 11"));

    let out = qsdesign(&["mindist", arg(&b2), "--claim", "12"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("refuted"));
}

#[test]
fn enumerated_words_feed_the_clique_search() {
    let dir = tempfile::tempdir().unwrap();
    let b5 = bundled(dir.path(), "B5");
    let words = dir.path().join("words.txt");
    let graph = dir.path().join("graph.txt");
    let out = qsdesign(&["enum01", arg(&b5), "--weight", "12", "--out", arg(&words)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "20");
    assert_eq!(std::fs::read_to_string(&words).unwrap().lines().count(), 20);

    let out = qsdesign(&["clique", arg(&words), "--graph-out", arg(&graph)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("20 vertices"), "{text}");
    let g = qsdesign::clique::Graph::parse_edge_list(&std::fs::read_to_string(&graph).unwrap()).unwrap();
    let omega = qsdesign::clique::max_clique(&g).size;
    assert!(text.contains(&format!("clique number {omega}")), "{text}");

    let out = qsdesign(&["clique", arg(&words), "--below", "165"]);
    assert!(stdout(&out).contains("< 165"));
}

#[test]
fn certify_biplane_writes_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let b5 = bundled(dir.path(), "B5");
    let report = dir.path().join("b5.json");
    let out = qsdesign(&["certify", "biplane", arg(&b5), "--report", arg(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("eliminated (count below 165)"));
    let cert: qsdesign::certify::BiplaneCertificate =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(cert.s_count, 20);
    qsdesign::certify::check_certificate(&cert).unwrap();

    // Certifying under the wrong identifier trips the reference check.
    let out = qsdesign(&["certify", "biplane", arg(&b5), "--id", "B3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_all_issues_every_verdict() {
    let dir = tempfile::tempdir().unwrap();
    for id in data::BIPLANE_IDS {
        bundled(dir.path(), id);
    }
    let report = dir.path().join("report.json");
    let out = qsdesign(&[
        "--threads",
        "1",
        "certify",
        "all",
        "--data-dir",
        arg(dir.path()),
        "--report",
        arg(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for s in [
        "nonexistent: QS 2-(56,12,9), x=0, y=3",
        "nonexistent: QS 2-(57,12,11), x=0, y=3",
        "nonexistent: quasi-3 2-(267,57,12), x=0, y=3",
        "nonexistent: quasi-3 2-(149,37,9), x=1, y=3",
    ] {
        assert!(text.contains(s), "{text}");
    }
    let r = qsdesign::certify::parse_report(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r.verdicts.len(), 4);
    assert!(r.gaps.is_empty());
    assert_eq!(r.timing.threads, 1);
}
