use std::io::Cursor;

use cl18::game::format_interpretation;
use cl18::prover::{decide_with_budget, Verdict};
use cl18::{corpus, parse_cirquent};
use cl18_cli::run_cli;
use cl18_cli::session::default_interpretation;

fn run(args: &[&str]) -> (i32, String) {
    run_stdin(args, "")
}

fn run_stdin(args: &[&str], stdin: &str) -> (i32, String) {
    let mut full = vec!["cl18".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    run_cli(&full, &mut Cursor::new(stdin.as_bytes().to_vec()))
}

fn temp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cl18-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn prove_and_check_round_trip() {
    let out = temp("blass.proof", "");
    let (code, text) = run(&["prove", corpus::BLASS, "--proof-out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let (code, text) = run(&["check", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    assert!(text.starts_with("ok:"), "{text}");
}

#[test]
fn unprovable_exits_one() {
    assert_eq!(run(&["prove", "((P@0 and P@1) or ~P@2)"]).0, 1);
    let (code, text) = run(&["prove", "P@1 and ~P@2"]);
    assert_eq!(code, 1);
    assert!(text.starts_with("unprovable"), "{text}");
}

#[test]
fn corrupted_proof_is_diagnosed() {
    let (code, text) = run(&["prove", "(P@1 and P@1) or ~P@2"]);
    assert_eq!(code, 0);
    let body = text.strip_prefix("provable\n").unwrap();
    let last = body.lines().last().unwrap().to_string();
    let broken = body.replace(&last, &last.replacen("~P@2", "~P@3", 1));
    assert_ne!(broken, body);
    let (code, text) = run(&["check", temp("broken.proof", &broken).to_str().unwrap()]);
    assert_eq!(code, 1, "{text}");
    assert!(text.starts_with("invalid: step"), "{text}");
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(run(&["parse", "P@1 or"]).0, 2);
    assert_eq!(run(&["prove", "p or ~p"]).0, 2);
    let (code, text) = run(&["check", temp("junk.proof", "not a proof\n").to_str().unwrap()]);
    assert_eq!(code, 2, "{text}");
    assert_eq!(run(&["check", "/nonexistent/file"]).0, 2);
    assert_eq!(run(&["prove", corpus::BLASS, "--budget", "1"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn mixed_prove_uses_fresh_letters() {
    let (code, text) = run(&["prove", "--mixed", "p or ~p"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.starts_with("deelementarized:"), "{text}");
}

#[test]
fn eval_and_oracle() {
    let c = parse_cirquent("P@1 or ~P@2", false).unwrap();
    let interp = temp("echo.interp", &format_interpretation(&default_interpretation(&c)));
    let i = interp.to_str().unwrap();
    let (code, text) = run(&[
        "eval",
        "--cirquent",
        "P@1 or ~P@2",
        "--interp",
        i,
        "--run",
        "B:P@1.x, T:~P@2.x",
    ]);
    assert_eq!(code, 0, "{text}");
    let (code, _) = run(&["eval", "--cirquent", "P@1 or ~P@2", "--interp", i, "--run", "B:P@1.x"]);
    assert_eq!(code, 1);
    assert_eq!(run(&["oracle", "--cirquent", "P@1 or ~P@2", "--interp", i]).0, 0);
    assert_eq!(run(&["oracle", "--cirquent", "P@1 and ~P@2", "--interp", i]).0, 1);
}

#[test]
fn play_answers_the_environment() {
    let (code, text) = run_stdin(&["play", "--cirquent", "P@1 or ~P@2"], "P@1.x\n");
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("machine: T:~P@2.x"), "{text}");
    let (code, text) = run_stdin(&["play", "--cirquent", "P@1 or ~P@2"], "B:P@1.w\nquit\n");
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("illegal move"), "{text}");
    assert_eq!(run_stdin(&["play", "--cirquent", "P@1 and ~P@2"], "").0, 2);
}

#[test]
fn verdicts_agree_with_the_library() {
    for text in corpus::PROVABLE
        .iter()
        .copied()
        .chain(["P@1 and ~P@2", "P@0 chor.1 ~P@0", "bot"])
    {
        let c = parse_cirquent(text, false).unwrap();
        let expected = match decide_with_budget(&c, 2_000_000).unwrap() {
            Verdict::Provable(_) => 0,
            Verdict::Unprovable(_) => 1,
        };
        assert_eq!(run(&["prove", text]).0, expected, "{text}");
    }
}
