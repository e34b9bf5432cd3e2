//! A play of the environment against a compiled strategy, shared by the
//! terminal `play` loop and the HTTP sessions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use cl18::game::{legal_labmoves, winner, Interpretation, Labmove, Player, Position, Run};
use cl18::proof::Proof;
use cl18::prover::{decide_with_budget, BudgetExceeded, Verdict};
use cl18::random::{random_interpretation, token_echo_game};
use cl18::strategy::{compile_strategy, Strategy, StrategyError};
use cl18::{Cirquent, Letter};

/// Tokens of the default game: the environment names one, the machine wins
/// iff it names the same one back.
pub const DEFAULT_TOKENS: [&str; 3] = ["x", "y", "z"];

pub const DEFAULT_INTERPRETATION_NOTE: &str =
    "every letter denotes the same game: the environment plays one of x, y, z, then the machine plays one; \
     the machine wins iff the two tokens are equal or nobody moved";

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{0} is not provable")]
    Unprovable(Cirquent),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("elementary letter {0} cannot be played")]
    Elementary(Letter),
    #[error("the session has ended")]
    Ended,
    #[error("only environment moves (`B:...`) can be submitted")]
    NotEnvironment,
}

fn letters(c: &Cirquent) -> Vec<Letter> {
    let mut ls: Vec<Letter> = c.literals().map(|l| l.letter.clone()).collect();
    ls.sort();
    ls.dedup();
    ls
}

pub fn default_interpretation(c: &Cirquent) -> Interpretation {
    Interpretation::uniform(&letters(c), &token_echo_game(&DEFAULT_TOKENS))
}

/// Where the interpretation of a session comes from.
#[derive(Debug, Clone)]
pub enum InterpSource {
    Default,
    Given(Interpretation),
    Seeded(u64),
}

#[derive(Debug)]
pub struct Session {
    pub cirquent: Cirquent,
    pub interp: Interpretation,
    pub source: InterpSource,
    pub proof: Proof,
    strategy: Strategy,
    pos: Position,
    pub run: Run,
    /// Set once the play is over.
    pub ended: Option<Player>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveOutcome {
    pub accepted: bool,
    pub replies: Vec<Labmove>,
}

impl Session {
    /// Proves `c`, compiles its strategy and lets the machine open. Returns
    /// the session and the machine's opening moves.
    pub fn start(c: Cirquent, source: InterpSource, budget: u64) -> Result<(Session, Vec<Labmove>), SessionError> {
        if let Some(l) = letters(&c).into_iter().find(|l| !l.is_general()) {
            return Err(SessionError::Elementary(l));
        }
        let interp = match &source {
            InterpSource::Default => default_interpretation(&c),
            InterpSource::Given(i) => i.clone(),
            InterpSource::Seeded(seed) => random_interpretation(&mut ChaCha8Rng::seed_from_u64(*seed), &letters(&c)),
        };
        let proof = match decide_with_budget(&c, budget)? {
            Verdict::Provable(p) => p,
            Verdict::Unprovable(_) => return Err(SessionError::Unprovable(c)),
        };
        let strategy = compile_strategy(&proof, &interp)?.start();
        let mut s = Session {
            cirquent: c,
            interp,
            source,
            proof,
            strategy,
            pos: Position::new(),
            run: Vec::new(),
            ended: None,
        };
        let opening = s.machine_turn();
        Ok((s, opening))
    }

    fn machine_turn(&mut self) -> Vec<Labmove> {
        let replies = self.strategy.poll();
        for lm in &replies {
            self.run.push(lm.clone());
            if !self.pos.push(&self.interp, lm).expect("letters are covered") {
                self.ended = Some(Player::B);
                return replies;
            }
        }
        if self.legal_moves().is_empty() {
            self.ended = Some(self.current_winner());
        }
        replies
    }

    /// Plays one environment move. An illegal move is recorded and ends the
    /// session in the machine's favour.
    pub fn submit(&mut self, lm: Labmove) -> Result<MoveOutcome, SessionError> {
        if self.ended.is_some() {
            return Err(SessionError::Ended);
        }
        if lm.player != Player::B {
            return Err(SessionError::NotEnvironment);
        }
        self.run.push(lm.clone());
        if !self.pos.push(&self.interp, &lm).expect("letters are covered") {
            self.ended = Some(Player::T);
            return Ok(MoveOutcome {
                accepted: false,
                replies: Vec::new(),
            });
        }
        self.strategy.observe(&lm);
        let replies = self.machine_turn();
        Ok(MoveOutcome {
            accepted: true,
            replies,
        })
    }

    /// Ends the play where it stands.
    pub fn finish(&mut self) -> Player {
        *self
            .ended
            .get_or_insert_with(|| winner(&self.cirquent, &self.interp, &self.run).expect("covered"))
    }

    /// Who wins if the run stops here.
    pub fn current_winner(&self) -> Player {
        winner(&self.cirquent, &self.interp, &self.run).expect("letters are covered")
    }

    /// The environment's legal moves, empty once the session has ended.
    pub fn legal_moves(&self) -> Vec<Labmove> {
        if self.ended.is_some() {
            return Vec::new();
        }
        legal_labmoves(&self.cirquent, &self.interp, &self.pos, Player::B).expect("letters are covered")
    }
}
