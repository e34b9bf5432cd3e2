//! Winning strategies extracted from proofs, and a match harness.
//!
//! A compiled strategy is a stack of layers, one per proof step that is not a
//! game identity, instantiated lazily while playing: the branch of a Splitting
//! step only comes to life once the environment resolves its cluster.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calculus::RuleInstance;
use crate::cirquent::{ChoiceKind, Cirquent, Cluster, Letter, Literal, Polarity};
use crate::game::{
    format_run, legal_labmoves, winner, GameError, Interpretation, Labmove, Move, Player, Position, Run,
};
use crate::proof::{check_proof, CheckError, Justification, Proof};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("invalid proof: {0}")]
    ProofInvalid(#[from] CheckError),
    #[error("interpretation does not cover letter {0}")]
    UnknownLetter(Letter),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Echo privileged moves in Trivialization layers. Turning this off
    /// yields a deliberately broken strategy.
    pub copycat: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { copycat: true }
    }
}

/// A checked proof ready to be played; [`CompiledStrategy::start`] yields a
/// fresh player state.
#[derive(Debug, Clone)]
pub struct CompiledStrategy {
    proof: Arc<Proof>,
    options: CompileOptions,
}

pub fn compile_strategy(p: &Proof, interp: &Interpretation) -> Result<CompiledStrategy, StrategyError> {
    compile_strategy_with(p, interp, CompileOptions::default())
}

pub fn compile_strategy_with(
    p: &Proof,
    interp: &Interpretation,
    options: CompileOptions,
) -> Result<CompiledStrategy, StrategyError> {
    check_proof(p)?;
    let conclusion = p.conclusion().expect("checked proofs are non-empty");
    for l in conclusion.literals() {
        if interp.get(&l.letter).is_err() {
            return Err(StrategyError::UnknownLetter(l.letter.clone()));
        }
    }
    Ok(CompiledStrategy {
        proof: Arc::new(p.clone()),
        options,
    })
}

impl CompiledStrategy {
    pub fn cirquent(&self) -> &Cirquent {
        self.proof.conclusion().expect("checked proofs are non-empty")
    }

    pub fn start(&self) -> Strategy {
        Strategy {
            root: Layer::build(&self.proof, self.proof.steps.len(), self.options),
        }
    }
}

/// The machine's side of one play.
#[derive(Debug, Clone)]
pub struct Strategy {
    root: Layer,
}

impl Strategy {
    /// Records an environment move.
    pub fn observe(&mut self, lm: &Labmove) {
        if lm.player == Player::B {
            self.root.observe(lm);
        }
    }

    /// The machine's moves to make now.
    pub fn poll(&mut self) -> Vec<Labmove> {
        self.root.poll()
    }
}

#[derive(Debug, Clone)]
enum Layer {
    Silent,
    Split {
        proof: Arc<Proof>,
        options: CompileOptions,
        cluster: Cluster,
        branches: [usize; 2],
        seen: Vec<Labmove>,
        active: Option<Box<Layer>>,
    },
    Trivial {
        pos: Literal,
        neg: Literal,
        copycat: bool,
        echoes: Vec<Labmove>,
        sub: Box<Layer>,
    },
    Quad {
        ca: Cluster,
        cb: Cluster,
        cc: Cluster,
        fed: bool,
        sub: Box<Layer>,
    },
    Choose {
        cluster: Cluster,
        bit: u8,
        done: bool,
        sub: Box<Layer>,
    },
    Rename {
        /// Pairs (conclusion literal, premise literal).
        pairs: [(Literal, Literal); 2],
        sub: Box<Layer>,
    },
}

fn chand_move(cluster: Cluster, bit: u8) -> Labmove {
    Labmove::new(Player::B, Move::Choice(ChoiceKind::Chand, cluster, bit))
}

impl Layer {
    /// The layer for step `index`, skipping game-identity steps.
    fn build(proof: &Arc<Proof>, mut index: usize, options: CompileOptions) -> Layer {
        loop {
            let step = proof.step(index).expect("premise indices are checked");
            let (rule, premises) = match &step.justification {
                Justification::Axiom => return Layer::Silent,
                Justification::Hypothesis => unreachable!("proofs have no hypotheses"),
                Justification::Apply { rule, premises } => (rule, premises),
            };
            if rule.is_game_identity() {
                index = premises[0];
                continue;
            }
            let sub = || Box::new(Layer::build(proof, premises[0], options));
            return match rule {
                RuleInstance::Splitting { cluster, .. } => Layer::Split {
                    proof: proof.clone(),
                    options,
                    cluster: *cluster,
                    branches: [premises[0], premises[1]],
                    seen: Vec::new(),
                    active: None,
                },
                RuleInstance::Trivialization { q, a, b } => Layer::Trivial {
                    pos: Literal::new(q.clone(), *a, Polarity::Positive),
                    neg: Literal::new(q.clone(), *b, Polarity::Negative),
                    copycat: options.copycat,
                    echoes: Vec::new(),
                    sub: sub(),
                },
                RuleInstance::Quadrilemma { ca, cb, cc, .. } => Layer::Quad {
                    ca: *ca,
                    cb: *cb,
                    cc: *cc,
                    fed: false,
                    sub: sub(),
                },
                RuleInstance::LeftChoosing { cluster } | RuleInstance::RightChoosing { cluster } => Layer::Choose {
                    cluster: *cluster,
                    bit: u8::from(matches!(rule, RuleInstance::RightChoosing { .. })),
                    done: false,
                    sub: sub(),
                },
                RuleInstance::Matching { p, a, b, q, c, d } => Layer::Rename {
                    pairs: [
                        (
                            Literal::new(p.clone(), *a, Polarity::Positive),
                            Literal::new(q.clone(), *c, Polarity::Positive),
                        ),
                        (
                            Literal::new(p.clone(), *b, Polarity::Negative),
                            Literal::new(q.clone(), *d, Polarity::Negative),
                        ),
                    ],
                    sub: sub(),
                },
                _ => unreachable!("{} is a game identity", rule.id()),
            };
        }
    }

    fn observe(&mut self, lm: &Labmove) {
        match self {
            Layer::Silent => {}
            Layer::Split {
                proof,
                options,
                cluster,
                branches,
                seen,
                active,
            } => match active {
                Some(sub) => sub.observe(lm),
                None => {
                    seen.push(lm.clone());
                    if let Move::Choice(ChoiceKind::Chand, c, bit) = lm.mv {
                        if c == *cluster {
                            let mut sub = Layer::build(proof, branches[usize::from(bit.min(1))], *options);
                            for m in seen.drain(..) {
                                sub.observe(&m);
                            }
                            *active = Some(Box::new(sub));
                        }
                    }
                }
            },
            Layer::Trivial {
                pos,
                neg,
                copycat,
                echoes,
                sub,
            } => match &lm.mv {
                Move::InLiteral(l, payload) if l == pos || l == neg => {
                    if *copycat {
                        let target = if l == pos { neg.clone() } else { pos.clone() };
                        echoes.push(Labmove::in_literal(Player::T, target, payload.clone()));
                    }
                }
                _ => sub.observe(lm),
            },
            Layer::Quad { ca, cb, cc, fed, sub } => {
                sub.observe(lm);
                if let Move::Choice(ChoiceKind::Chand, c, _) = lm.mv {
                    if !*fed && (c == *ca || c == *cb) {
                        *fed = true;
                        sub.observe(&chand_move(*cc, u8::from(c != *ca)));
                    }
                }
            }
            Layer::Choose { sub, .. } => sub.observe(lm),
            Layer::Rename { pairs, sub } => match &lm.mv {
                Move::InLiteral(l, payload) => {
                    let l = pairs.iter().find(|(from, _)| from == l).map_or(l, |(_, to)| to);
                    sub.observe(&Labmove::in_literal(lm.player, l.clone(), payload.clone()));
                }
                _ => sub.observe(lm),
            },
        }
    }

    fn poll(&mut self) -> Vec<Labmove> {
        match self {
            Layer::Silent => Vec::new(),
            Layer::Split { active, .. } => active.as_mut().map_or_else(Vec::new, |s| s.poll()),
            Layer::Trivial {
                pos, neg, echoes, sub, ..
            } => {
                let mut out: Vec<Labmove> = std::mem::take(echoes);
                out.extend(
                    sub.poll()
                        .into_iter()
                        .filter(|m| !matches!(&m.mv, Move::InLiteral(l, _) if l == pos || l == neg)),
                );
                out
            }
            Layer::Quad { sub, .. } => sub.poll(),
            Layer::Choose {
                cluster,
                bit,
                done,
                sub,
            } => {
                let mut out = Vec::new();
                if !*done {
                    *done = true;
                    out.push(Labmove::new(Player::T, Move::Choice(ChoiceKind::Chor, *cluster, *bit)));
                }
                out.extend(sub.poll());
                out
            }
            Layer::Rename { pairs, sub } => sub
                .poll()
                .into_iter()
                .map(|m| match &m.mv {
                    Move::InLiteral(l, payload) => {
                        let l = pairs.iter().find(|(_, to)| to == l).map_or(l, |(from, _)| from);
                        Labmove::in_literal(m.player, l.clone(), payload.clone())
                    }
                    _ => m,
                })
                .collect(),
        }
    }
}

/// How the environment plays in [`play_match`].
#[derive(Debug, Clone, PartialEq)]
pub enum EnvPolicy {
    Silent,
    /// Uniform over legal moves and passing; before each move the
    /// environment stops for good with probability `hazard`.
    Random {
        seed: u64,
        hazard: f64,
    },
    /// Plays the listed moves in order, one per round, legal or not.
    Scripted(Run),
}

enum Env {
    Silent,
    Random {
        rng: Box<ChaCha8Rng>,
        hazard: f64,
        stopped: bool,
    },
    Scripted(VecDeque<Labmove>),
}

impl Env {
    fn new(policy: &EnvPolicy) -> Env {
        match policy {
            EnvPolicy::Silent => Env::Silent,
            EnvPolicy::Random { seed, hazard } => Env::Random {
                rng: Box::new(ChaCha8Rng::seed_from_u64(*seed)),
                hazard: *hazard,
                stopped: false,
            },
            EnvPolicy::Scripted(run) => Env::Scripted(run.iter().cloned().collect()),
        }
    }

    fn poll(&mut self, c: &Cirquent, interp: &Interpretation, pos: &Position) -> Result<Vec<Labmove>, GameError> {
        Ok(match self {
            Env::Silent => Vec::new(),
            Env::Scripted(queue) => queue.pop_front().into_iter().collect(),
            Env::Random { rng, hazard, stopped } => {
                if *stopped || rng.gen_bool(hazard.clamp(0.0, 1.0)) {
                    *stopped = true;
                    return Ok(Vec::new());
                }
                let mut moves = legal_labmoves(c, interp, pos, Player::B)?;
                let k = rng.gen_range(0..=moves.len());
                if k == moves.len() {
                    Vec::new()
                } else {
                    vec![moves.swap_remove(k)]
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    pub final_run: Run,
    pub winner: Player,
    pub rounds: usize,
}

impl MatchRecord {
    /// The run followed by a `winner:` footer line.
    pub fn transcript(&self) -> String {
        format!("{}\nwinner: {}\n", format_run(&self.final_run), self.winner)
    }
}

impl fmt::Display for MatchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.transcript())
    }
}

/// Alternating rounds, environment first, until a full round is quiet, a
/// move is illegal, or `max_rounds` is reached.
pub fn play_match(
    c: &Cirquent,
    interp: &Interpretation,
    s: &mut Strategy,
    policy: &EnvPolicy,
    max_rounds: usize,
) -> Result<MatchRecord, GameError> {
    let mut env = Env::new(policy);
    let mut pos = Position::new();
    let mut run: Run = Vec::new();
    let mut rounds = 0;
    'play: while rounds < max_rounds {
        rounds += 1;
        let env_moves = env.poll(c, interp, &pos)?;
        for lm in &env_moves {
            run.push(lm.clone());
            if !pos.push(interp, lm)? {
                break 'play;
            }
            s.observe(lm);
        }
        let replies = s.poll();
        for lm in &replies {
            run.push(lm.clone());
            if !pos.push(interp, lm)? {
                break 'play;
            }
        }
        if env_moves.is_empty() && replies.is_empty() {
            break;
        }
    }
    let winner = winner(c, interp, &run)?;
    Ok(MatchRecord {
        final_run: run,
        winner,
        rounds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TournamentSummary {
    pub matches: usize,
    pub wins: usize,
    /// Every lost match, with its interpretation's position in the list.
    pub losses: Vec<(usize, MatchRecord)>,
}

pub const DEFAULT_HAZARD: f64 = 0.05;
pub const DEFAULT_MAX_ROUNDS: usize = 64;

/// `n` random-environment matches per interpretation.
pub fn tournament(
    proof: &Proof,
    interps: &[Interpretation],
    n: usize,
    seed: u64,
    options: CompileOptions,
) -> Result<TournamentSummary, StrategyError> {
    let mut summary = TournamentSummary::default();
    for (k, interp) in interps.iter().enumerate() {
        let compiled = compile_strategy_with(proof, interp, options)?;
        let c = compiled.cirquent();
        for i in 0..n {
            let policy = EnvPolicy::Random {
                seed: seed ^ ((k as u64) << 32) ^ i as u64,
                hazard: DEFAULT_HAZARD,
            };
            let record =
                play_match(c, interp, &mut compiled.start(), &policy, DEFAULT_MAX_ROUNDS).map_err(|e| match e {
                    GameError::UnknownLetter(l) => StrategyError::UnknownLetter(l),
                    other => unreachable!("coverage was checked: {other}"),
                })?;
            summary.matches += 1;
            if record.winner == Player::T {
                summary.wins += 1;
            } else {
                summary.losses.push((k, record));
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{parse_labmove, parse_raw_run, parse_run, FiniteGame};
    use crate::parse::cq;
    use crate::prover::decide;

    fn echo() -> FiniteGame {
        let mut runs = vec![(vec![], Player::T)];
        for b in ["x", "y"] {
            runs.push((parse_raw_run(&format!("B:{b}")).unwrap(), Player::B));
            for e in ["x", "y"] {
                let w = if b == e { Player::T } else { Player::B };
                runs.push((parse_raw_run(&format!("B:{b}, T:{e}")).unwrap(), w));
            }
        }
        FiniteGame::new(runs).unwrap()
    }

    fn proved(text: &str) -> (Cirquent, Proof) {
        let c = cq(text);
        let p = decide(&c).proof().expect("provable").clone();
        (c, p)
    }

    #[test]
    fn copycat_echoes() {
        let (c, p) = proved("(P@1 or ~P@2)");
        let interp = Interpretation::new().with("P", echo()).unwrap();
        let compiled = compile_strategy(&p, &interp).unwrap();
        let mut s = compiled.start();
        s.observe(&parse_labmove("B:P@1.x").unwrap());
        assert_eq!(s.poll(), vec![parse_labmove("T:~P@2.x").unwrap()]);
        assert!(s.poll().is_empty());
        let script = EnvPolicy::Scripted(parse_run("B:P@1.x").unwrap());
        let rec = play_match(&c, &interp, &mut compiled.start(), &script, 10).unwrap();
        assert!(rec.final_run.contains(&parse_labmove("T:~P@2.x").unwrap()));
        assert_eq!(rec.winner, Player::T);
        let rec = play_match(&c, &interp, &mut compiled.start(), &EnvPolicy::Silent, 10).unwrap();
        assert_eq!(rec.winner, Player::T);
        assert!(rec.transcript().ends_with("winner: T\n"));
    }

    #[test]
    fn choosing_moves_first() {
        let (_, p) = proved("(top chor.0 bot)");
        let compiled = compile_strategy(&p, &Interpretation::new()).unwrap();
        let mut s = compiled.start();
        assert_eq!(s.poll(), vec![parse_labmove("T:chor.0.0").unwrap()]);
        assert!(s.poll().is_empty());
    }

    #[test]
    fn splitting_waits() {
        let (c, p) = proved("((P@0 or ~P@2) chand.3 (P@1 or ~P@2))");
        let interp = Interpretation::new().with("P", echo()).unwrap();
        let compiled = compile_strategy(&p, &interp).unwrap();
        let mut s = compiled.start();
        s.observe(&parse_labmove("B:~P@2.x").unwrap());
        assert!(s.poll().is_empty());
        s.observe(&parse_labmove("B:chand.3.1").unwrap());
        assert_eq!(s.poll(), vec![parse_labmove("T:P@1.x").unwrap()]);
        let script = EnvPolicy::Scripted(parse_run("B:~P@2.y, B:chand.3.0").unwrap());
        let rec = play_match(&c, &interp, &mut compiled.start(), &script, 10).unwrap();
        assert_eq!(rec.winner, Player::T);
    }

    #[test]
    fn illegal_environment_loses() {
        let (c, p) = proved("(P@1 or ~P@2)");
        let interp = Interpretation::new().with("P", echo()).unwrap();
        let compiled = compile_strategy(&p, &interp).unwrap();
        let script = EnvPolicy::Scripted(parse_run("B:P@1.z").unwrap());
        let rec = play_match(&c, &interp, &mut compiled.start(), &script, 10).unwrap();
        assert_eq!(rec.winner, Player::T);
        assert_eq!(rec.final_run.len(), 1);
    }

    #[test]
    fn disabled_copycat_loses() {
        let (_, p) = proved("(P@1 or ~P@2)");
        let interp = Interpretation::new().with("P", echo()).unwrap();
        let good = tournament(&p, std::slice::from_ref(&interp), 200, 7, CompileOptions::default()).unwrap();
        assert!(good.losses.is_empty());
        let bad = tournament(&p, &[interp], 200, 7, CompileOptions { copycat: false }).unwrap();
        assert!(!bad.losses.is_empty());
    }

    #[test]
    fn uncovered_letters_are_rejected() {
        let (_, p) = proved("(P@1 or ~P@2)");
        assert_eq!(
            compile_strategy(&p, &Interpretation::new()).unwrap_err(),
            StrategyError::UnknownLetter(Letter::named("P"))
        );
    }
}
