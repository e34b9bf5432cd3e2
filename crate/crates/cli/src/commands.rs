use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use cl18::game::{
    first_illegal, minimax_wins, parse_interpretation, parse_labmove, parse_run, winner, GameError, Interpretation,
    Player,
};
use cl18::mixed::deelementarize;
use cl18::proof::{check_proof, format_proof, parse_proof, ProofFormatError};
use cl18::prover::{decide_with_budget, BudgetExceeded, Verdict};
use cl18::purify::{classify, purify};
use cl18::rank::{extended_rank, rank, RankOverflow};
use cl18::{parse_cirquent, Cirquent, ParseError};

use crate::session::{InterpSource, Session, SessionError, DEFAULT_INTERPRETATION_NOTE};

#[derive(Parser)]
#[command(
    name = "cl18",
    version,
    about = "Cirquent calculus CL18: proving, checking and playing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a cirquent and print its normal form
    Parse {
        cirquent: String,
        /// Accept elementary (lowercase) letters
        #[arg(long)]
        mixed: bool,
    },
    /// Print the rank and extended rank
    Rank { cirquent: String },
    /// Purify a cirquent
    Purify {
        cirquent: String,
        /// Print every rule application
        #[arg(long)]
        trace: bool,
    },
    /// Decide provability and print a proof
    Prove {
        cirquent: String,
        /// Write the proof to FILE instead of printing it
        #[arg(long, value_name = "FILE")]
        proof_out: Option<PathBuf>,
        /// Give up after N search expansions
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
        /// Accept elementary letters and prove the deelementarization
        #[arg(long)]
        mixed: bool,
    },
    /// Check a proof file
    Check { file: PathBuf },
    /// Who wins a run under an interpretation
    Eval {
        #[arg(long)]
        cirquent: String,
        #[arg(long, value_name = "FILE")]
        interp: PathBuf,
        #[arg(long)]
        run: String,
    },
    /// Whether the machine can force a win under one interpretation
    Oracle {
        #[arg(long)]
        cirquent: String,
        #[arg(long, value_name = "FILE")]
        interp: PathBuf,
    },
    /// Play the environment against the extracted strategy
    Play {
        #[arg(long)]
        cirquent: String,
        #[arg(long, value_name = "FILE")]
        interp: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
    },
    /// Replace elementary letters by fresh general ones
    Deel { cirquent: String },
    /// Run the HTTP service
    Serve {
        #[arg(long, default_value_t = 8018)]
        port: u16,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("proof file: {0}")]
    ProofFormat(#[from] ProofFormatError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Rank(#[from] RankOverflow),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_interp(path: &Path) -> Result<Interpretation, CliError> {
    Ok(parse_interpretation(&read(path)?)?)
}

fn code(p: Player) -> i32 {
    match p {
        Player::T => 0,
        Player::B => 1,
    }
}

/// Runs one command; interactive commands read `input`, and everything
/// printed goes to `out` as it happens.
pub fn run_with_io(args: &[String], input: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            2
        }
    }
}

/// Runs one command and returns its exit code and output.
pub fn run_cli(args: &[String], input: &mut dyn BufRead) -> (i32, String) {
    let mut buf = Vec::new();
    let code = run_with_io(args, input, &mut buf);
    (code, String::from_utf8_lossy(&buf).into_owned())
}

fn execute(cmd: Command, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Parse { cirquent, mixed } => {
            let c = parse_cirquent(&cirquent, mixed)?;
            writeln!(out, "{c}")?;
            Ok(0)
        }
        Command::Rank { cirquent } => {
            let c = parse_cirquent(&cirquent, false)?;
            let r = rank(&c)?;
            let er = extended_rank(&c)?;
            writeln!(out, "rank: {}", r.value())?;
            writeln!(out, "extended rank: ({}, {})", er.rank.value(), er.non_pseudo_count)?;
            Ok(0)
        }
        Command::Purify { cirquent, trace } => {
            let c = parse_cirquent(&cirquent, false)?;
            let (pure, tr) = purify(&c);
            if trace {
                for e in &tr.entries {
                    writeln!(out, "step {} [{}]: {}", e.step, e.application, e.rule)?;
                    writeln!(out, "  => {}", e.result)?;
                }
            }
            writeln!(out, "pure: {pure}")?;
            writeln!(out, "class: {}", classify(&pure))?;
            Ok(0)
        }
        Command::Prove {
            cirquent,
            proof_out,
            budget,
            mixed,
        } => {
            let source = parse_cirquent(&cirquent, mixed)?;
            let c = if mixed {
                deelementarize(&source).0
            } else {
                source.clone()
            };
            if c != source {
                writeln!(out, "deelementarized: {c}")?;
            }
            match decide_with_budget(&c, budget.unwrap_or(u64::MAX))? {
                Verdict::Provable(p) => {
                    let text = format_proof(&p);
                    match proof_out {
                        Some(path) => {
                            std::fs::write(&path, &text).map_err(|source| CliError::Io {
                                path: path.clone(),
                                source,
                            })?;
                            writeln!(out, "provable: {} steps written to {}", p.steps.len(), path.display())?;
                        }
                        None => {
                            writeln!(out, "provable")?;
                            write!(out, "{text}")?;
                        }
                    }
                    Ok(0)
                }
                Verdict::Unprovable(stats) => {
                    writeln!(
                        out,
                        "unprovable ({} candidates explored, depth {})",
                        stats.candidates_explored, stats.max_depth
                    )?;
                    Ok(1)
                }
            }
        }
        Command::Check { file } => {
            let proof = parse_proof(&read(&file)?)?;
            match check_proof(&proof) {
                Ok(()) => {
                    let conclusion = proof.conclusion().expect("checked proofs are non-empty");
                    writeln!(out, "ok: {} steps prove {conclusion}", proof.steps.len())?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "invalid: step {}: {}", e.step, e.reason)?;
                    Ok(1)
                }
            }
        }
        Command::Eval { cirquent, interp, run } => {
            let c = parse_cirquent(&cirquent, true)?;
            let interp = read_interp(&interp)?;
            let run = parse_run(&run)?;
            if let Some(k) = first_illegal(&interp, &run)? {
                writeln!(out, "illegal at move {k}: {}", run[k - 1])?;
            }
            let w = winner(&c, &interp, &run)?;
            writeln!(out, "winner: {w}")?;
            Ok(code(w))
        }
        Command::Oracle { cirquent, interp } => {
            let c = parse_cirquent(&cirquent, true)?;
            let wins = minimax_wins(&c, &read_interp(&interp)?)?;
            writeln!(out, "machine can force a win: {}", if wins { "yes" } else { "no" })?;
            Ok(if wins { 0 } else { 1 })
        }
        Command::Play {
            cirquent,
            interp,
            budget,
        } => {
            let c = parse_cirquent(&cirquent, false)?;
            let source = match interp {
                Some(path) => InterpSource::Given(read_interp(&path)?),
                None => InterpSource::Default,
            };
            play(c, source, budget.unwrap_or(u64::MAX), input, out)
        }
        Command::Deel { cirquent } => {
            let a = parse_cirquent(&cirquent, true)?;
            let (d, map) = deelementarize(&a);
            writeln!(out, "{d}")?;
            for (p, big) in &map.pairs {
                writeln!(out, "{p} -> {big}")?;
            }
            Ok(0)
        }
        Command::Serve { port } => {
            writeln!(out, "listening on port {port}")?;
            out.flush()?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::api::serve(port))?;
            Ok(0)
        }
    }
}

fn play(
    c: Cirquent,
    source: InterpSource,
    budget: u64,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let default = matches!(source, InterpSource::Default);
    let (mut s, opening) = Session::start(c, source, budget)?;
    writeln!(out, "playing {} as the environment (B)", s.cirquent)?;
    if default {
        writeln!(out, "interpretation: {DEFAULT_INTERPRETATION_NOTE}")?;
    }
    writeln!(
        out,
        "enter moves such as `P@1.x` or `chand.0.1`; `quit` or end of input stops"
    )?;
    for lm in &opening {
        writeln!(out, "machine: {lm}")?;
    }
    let mut line = String::new();
    while s.ended.is_none() {
        write!(out, "> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if text == "quit" {
            break;
        }
        let full = if text.starts_with("B:") || text.starts_with("T:") {
            text.to_string()
        } else {
            format!("B:{text}")
        };
        let lm = match parse_labmove(&full) {
            Ok(lm) => lm,
            Err(e) => {
                writeln!(out, "cannot read move: {e}")?;
                continue;
            }
        };
        match s.submit(lm) {
            Ok(outcome) if !outcome.accepted => writeln!(out, "illegal move")?,
            Ok(outcome) => {
                for r in &outcome.replies {
                    writeln!(out, "machine: {r}")?;
                }
            }
            Err(SessionError::NotEnvironment) => writeln!(out, "only environment moves can be entered")?,
            Err(e) => return Err(e.into()),
        }
    }
    let w = s.finish();
    writeln!(out, "run: {}", cl18::game::format_run(&s.run))?;
    writeln!(out, "winner: {w}")?;
    Ok(code(w))
}
