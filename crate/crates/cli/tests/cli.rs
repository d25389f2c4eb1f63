use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use ffsym_core::io::{sha256_file, write_symbol_file};
use ffsym_core::testing::RelationKernel;

fn ffsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffsym")).args(args).output().unwrap()
}

fn ffsym_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ffsym"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn count_prints_table_values() {
    assert_eq!(stdout(&ffsym(&["count", "--loop", "4"])), "32838\n");
    assert_eq!(stdout(&ffsym(&["count", "--loop", "5"])), "589254\n");
}

#[test]
fn builtin_scores_perfectly_against_itself() {
    let symbol = stdout(&ffsym(&["builtin", "--loop", "1"]));
    assert_eq!(symbol.lines().count(), 6);
    let out = stdout(&ffsym_stdin(&["score", "--truth", "-", "--pred", "-"], symbol.as_bytes()));
    let row: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(&row[..4], ["6", "1.000000", "1.000000", "1.000000"]);
}

#[test]
fn exhaustive_verification_passes() {
    let out = stdout(&ffsym(&["verify-relations", "--loop", "2", "--n", "all"]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 32);
    assert!(rows.iter().all(|r| r.split('\t').nth(1) == Some("ok")), "{out}");
}

#[test]
fn errors_are_one_line_with_a_class() {
    for (args, class) in [
        (vec!["count", "--loop", "0"], "loop-range"),
        (vec!["verify-relations", "--loop", "2", "--n", "10"], "invalid-argument"),
        (vec!["verify-relations", "--loop", "6", "--n", "all", "--symbol", "x"], "io"),
        (vec!["verify-relations", "--loop", "2", "--n", "all", "--relation", "final 99"], "unknown-relation"),
        (vec!["hist", "--in", "/nonexistent/file"], "io"),
    ] {
        let o = ffsym(&args);
        assert!(!o.status.success());
        let err = String::from_utf8(o.stderr).unwrap();
        let last = err.lines().last().unwrap();
        assert!(last.starts_with(&format!("error: {class}: ")), "{args:?}: {err}");
    }
}

#[test]
fn exhaustive_mode_refuses_large_spaces() {
    let dir = tempfile::tempdir().unwrap();
    let sym = dir.path().join("l6.txt");
    std::fs::write(&sym, "bddddddddddd\t1\n").unwrap();
    let o = ffsym(&["verify-relations", "--loop", "6", "--n", "all", "--symbol", p(&sym)]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--seed"), "{err}");
}

fn l3_file(dir: &Path) -> std::path::PathBuf {
    let s = RelationKernel::new(3).unwrap().random_symbol(12).unwrap();
    let path = dir.join("l3.txt");
    write_symbol_file(&path, &s).unwrap();
    path
}

#[test]
fn datasets_are_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let sym = l3_file(dir.path());
    let parent = dir.path().join("l2.txt");
    stdout(&ffsym(&["builtin", "--loop", "2", "--out", p(&parent)]));
    let mut outputs = Vec::new();
    for (threads, seed) in [("1", "9"), ("4", "9"), ("4", "10")] {
        let out = dir.path().join(format!("t{threads}-{seed}"));
        stdout(&ffsym(&[
            "--threads", threads, "dataset", "--task", "strikeout", "--seed", seed, "--in", p(&sym), "--parent",
            p(&parent), "--out-dir", p(&out), "--test", "20", "--variant", "shuffled",
        ]));
        outputs.push(std::fs::read(out.join("strikeout.l3.train.tsv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[1], outputs[2]);
}

#[test]
fn quad_round_trip_check() {
    let dir = tempfile::tempdir().unwrap();
    let sym = l3_file(dir.path());
    let out = dir.path().join("l3.quad");
    let o = ffsym(&["quad", "--in", p(&sym), "--out", p(&out), "--check"]);
    stdout(&o);
    assert!(String::from_utf8(o.stderr).unwrap().contains("round trip ok"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().all(|l| l.split('\t').nth(1).unwrap().starts_with("Q:")));
}

#[test]
fn curves_from_epoch_files() {
    let dir = tempfile::tempdir().unwrap();
    let truth = dir.path().join("l2.txt");
    stdout(&ffsym(&["builtin", "--loop", "2", "--out", p(&truth)]));
    let inst = dir.path().join("inst.tsv");
    stdout(&ffsym(&[
        "verify-relations", "--loop", "2", "--n", "50", "--seed", "4", "--relation", "final 16", "--instances-out",
        p(&inst),
    ]));
    let preds = dir.path().join("preds");
    std::fs::create_dir(&preds).unwrap();
    let text = std::fs::read_to_string(&truth).unwrap();
    std::fs::write(preds.join("epoch_1.tsv"), &text).unwrap();
    let flipped: String = text
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('\t').unwrap();
            format!("{k}\t{}\n", -v.parse::<i64>().unwrap())
        })
        .collect();
    std::fs::write(preds.join("epoch_3.tsv"), flipped).unwrap();
    let out = stdout(&ffsym(&["curves", "--dir", p(&preds), "--instances", p(&inst), "--truth", p(&truth)]));
    assert_eq!(
        out,
        "epoch\trelation\trate1\trate2\trate3\trate4\n\
         1\tfinal 16\t1.000000\t1.000000\t1.000000\t1.000000\n\
         3\tfinal 16\t1.000000\t1.000000\t0.000000\t0.000000\n"
    );
}

#[test]
fn ingest_local_archive() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir_all(data.join("L2")).unwrap();
    let file = data.join("L2/symbol.txt");
    stdout(&ffsym(&["builtin", "--loop", "2", "--out", p(&file)]));
    let sha = sha256_file(&file).unwrap();
    let manifest = dir.path().join("manifest.tsv");
    std::fs::write(&manifest, format!("L2/symbol.txt\t{sha}\t2\t12\n")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ffsym"))
        .args(["ingest", "--manifest", p(&manifest), "--offline"])
        .env("FFSYM_DATA_DIR", &data)
        .output()
        .unwrap();
    let out = stdout(&o);
    assert!(out.lines().nth(1).unwrap().ends_with("\t2\t12\t0\tok\tok"), "{out}");

    std::fs::write(&manifest, format!("L2/symbol.txt\t{sha}\t2\t13\n")).unwrap();
    let o = ffsym(&["ingest", "--manifest", p(&manifest), "--offline", "--data-dir", p(&data)]);
    assert!(String::from_utf8(o.stderr).unwrap().contains("error: count: "));

    std::fs::write(&file, "bd\t-2\n").unwrap();
    let o = ffsym(&["ingest", "--manifest", p(&manifest), "--offline", "--data-dir", p(&data)]);
    assert!(String::from_utf8(o.stderr).unwrap().contains("error: checksum: "));
    assert!(data.join("L2/symbol.txt.quarantine").exists());
}

#[test]
fn analysis_commands() {
    let dir = tempfile::tempdir().unwrap();
    let sym = dir.path().join("l1.txt");
    stdout(&ffsym(&["builtin", "--loop", "1", "--out", p(&sym)]));
    assert_eq!(stdout(&ffsym(&["hist", "--in", p(&sym)])), "log10_lower\tcount\n0.3000\t6\n");
    let emb = dir.path().join("emb.txt");
    std::fs::write(&emb, "1 0 0\n0 1 0\n0 0 1\n-1 0 0\n0 -1 0\n0 0 -1\n").unwrap();
    let out = stdout(&ffsym(&["angles", "--in", p(&emb)]));
    assert!(out.contains("ad\t180.0\n"));
    assert!(out.contains("abc\t60.0\t60.0\t60.0\t0.0\n"));
    std::fs::write(&emb, "0 0 0\n0 1 0\n0 0 1\n-1 0 0\n0 -1 0\n0 0 -1\n").unwrap();
    let o = ffsym(&["angles", "--in", p(&emb)]);
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("error: zero-norm: "));
}
