use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use skill::cli::report_body;

const TWO_PLAYERS: &str = "\
type(playerA, player). type(playerB, player).
type(rock, object). type(paper, object). type(scissors, object).
modeh(beats(+player,+player)).
modeb(plays(+player,#object)).
0.1::plays(playerA,rock); 0.1::plays(playerA,paper); 0.8::plays(playerA,scissors).
0.1::plays(playerB,rock); 0.3::plays(playerB,paper); 0.6::plays(playerB,scissors).
";

const RULES: &str = "\
beats(A,B) :- plays(A,rock), plays(B,scissors).
beats(A,B) :- plays(A,paper), plays(B,rock).
beats(A,B) :- plays(A,scissors), plays(B,paper).
";

fn skill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skill")).args(args).output().unwrap()
}

/// Runs a whitespace-separated command line; temp paths contain no spaces.
fn skill_line(line: &str) -> Output {
    skill(&line.split_whitespace().collect::<Vec<_>>())
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn infer_prints_the_win_probability() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, th) = (dir.path().join("two.pbk"), dir.path().join("rules.pl"));
    fs::write(&bk, TWO_PLAYERS).unwrap();
    fs::write(&th, RULES).unwrap();
    let out = skill(&["infer", "--pbk", p(&bk), "--theory", p(&th), "--query", "beats(playerA,playerB)"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert_eq!(text(&out.stdout), "beats(playerA,playerB)\t0.310000000000\n");
}

#[test]
fn score_reports_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, th, ex) = (dir.path().join("two.pbk"), dir.path().join("rules.pl"), dir.path().join("two.pex"));
    fs::write(&bk, TWO_PLAYERS).unwrap();
    fs::write(&th, RULES).unwrap();
    fs::write(&ex, "0.4::beats(playerA,playerB).\n").unwrap();
    let out = skill(&["score", "--pbk", p(&bk), "--theory", p(&th), "--pex", p(&ex)]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let s = text(&out.stdout);
    let get = |k: &str| -> f64 { s.lines().find_map(|l| l.strip_prefix(&format!("{k}\t"))).unwrap().parse().unwrap() };
    assert!((get("rmse") - 0.0081).abs() < 1e-12);
    assert!((get("pacc") - 0.91).abs() < 1e-12);
    assert!((get("tp") - 0.31).abs() < 1e-12);
    assert!((get("fn") - 0.09).abs() < 1e-12);
}

#[test]
fn generate_then_learn() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, ex) = (dir.path().join("rps.pbk"), dir.path().join("rps.pex"));
    let gen = skill_line(&format!(
        "generate-rps --players 3 --rounds-per-pair 10 --exact --seed 7 --out-pbk {} --out-pex {}",
        p(&bk),
        p(&ex)
    ));
    assert!(gen.status.success(), "{}", text(&gen.stderr));
    assert_eq!(fs::read_to_string(&ex).unwrap().lines().count(), 6);
    let report = dir.path().join("report.txt");
    let hyps = dir.path().join("hyps.pl");
    let out = skill_line(&format!(
        "learn --pbk {} --pex {} --max-theory-length 3 --psize 20 --ssize 200 --rank-metric pacc \
         --eval-metric pacc --seed 7 --report {} --dump-hyps {}",
        p(&bk),
        p(&ex),
        p(&report),
        p(&hyps)
    ));
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert_eq!(text(&out.stdout).lines().count(), 3);
    assert_eq!(fs::read_to_string(&hyps).unwrap().lines().count(), 15);
    let r = fs::read_to_string(&report).unwrap();
    assert!(r.contains("\nclauses = 3\n"));
    assert!(r.contains("\npacc = 1\n") || r.contains("\npacc = 0.9999999999"), "{r}");
    assert!(r.contains("\nseed = 7\n"));
    assert!(r.contains("\n[run]\n"));
}

#[test]
fn reports_are_identical_apart_from_the_run_section() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, ex) = (dir.path().join("rps.pbk"), dir.path().join("rps.pex"));
    skill(&["rps-datagen", "--players", "4", "--exact", "--seed", "2", "--out-pbk", p(&bk), "--out-pex", p(&ex)]);
    for rank in ["rmse", "pacc", "random"] {
        let run = |workers: &str| {
            let out = skill_line(&format!(
                "learn --pbk {} --pex {} --psize 5 --ssize 10 --rank-metric {rank} --seed 3 --workers {workers}",
                p(&bk),
                p(&ex)
            ));
            assert!(out.status.success());
            text(&out.stdout)
        };
        let (a, b) = (run("1"), run("3"));
        assert_eq!(report_body(&a), report_body(&b), "{rank}");
        assert!(report_body(&a).len() < a.len());
    }
}

#[test]
fn json_report_parses() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, ex) = (dir.path().join("rps.pbk"), dir.path().join("rps.pex"));
    skill(&["generate-rps", "--exact", "--out-pbk", p(&bk), "--out-pex", p(&ex)]);
    let out = skill(&["learn", "--pbk", p(&bk), "--pex", p(&ex), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["manifest"]["search"]["psize"], 20);
    assert_eq!(v["report"]["best"]["clauses"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bk = dir.path().join("bad.pbk");
    fs::write(&bk, "0.1::p(a); 0.95::p(b).\n").unwrap();
    let out = skill(&["infer", "--pbk", p(&bk), "--query", "p(a)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("error"));
    let missing = skill(&["learn", "--pbk", "/nonexistent.pbk", "--pex", "/nonexistent.pex"]);
    assert_eq!(missing.status.code(), Some(1));
    let flag = skill(&["learn", "--bogus"]);
    assert_eq!(flag.status.code(), Some(1));
}

#[test]
fn nothing_to_search_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, ex) = (dir.path().join("k.pbk"), dir.path().join("k.pex"));
    fs::write(&bk, "type(a,t). type(b,t).\nmodeh(h(+t)).\nmodeb(p(+t)).\n0.5::p(b).\n").unwrap();
    fs::write(&ex, "1.0::h(a).\n").unwrap();
    let out = skill(&["learn", "--pbk", p(&bk), "--pex", p(&ex)]);
    assert_eq!(out.status.code(), Some(2), "{}", text(&out.stderr));
}

#[test]
fn unprovable_and_truncated_queries() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, th) = (dir.path().join("two.pbk"), dir.path().join("rules.pl"));
    fs::write(&bk, TWO_PLAYERS).unwrap();
    fs::write(&th, RULES).unwrap();
    let out = skill(&[
        "infer",
        "--pbk",
        p(&bk),
        "--theory",
        p(&th),
        "--query",
        "beats(playerA,playerA)",
        "--query",
        "beats(x,y)",
    ]);
    assert!(out.status.success());
    let lines: Vec<String> = text(&out.stdout).lines().map(String::from).collect();
    assert!(lines[0].starts_with("beats(playerA,playerA)\t0.0"));
    assert_eq!(lines[1], "beats(x,y)\t0.0");
    let shallow = skill(&[
        "infer",
        "--pbk",
        p(&bk),
        "--theory",
        p(&th),
        "--query",
        "beats(playerA,playerB)",
        "--depth-bound",
        "2",
    ]);
    assert!(shallow.status.success());
    assert!(text(&shallow.stderr).contains("warning"));
}

#[test]
fn empty_theory_scores_zero_on_positives() {
    let dir = tempfile::tempdir().unwrap();
    let (bk, ex) = (dir.path().join("two.pbk"), dir.path().join("pos.pex"));
    fs::write(&bk, TWO_PLAYERS).unwrap();
    fs::write(&ex, "beats(playerA,playerB).\n1.0::beats(playerB,playerA).\n").unwrap();
    let out = skill(&["score", "--pbk", p(&bk), "--pex", p(&ex)]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("pacc\t0.0\n"));
}
