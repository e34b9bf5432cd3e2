//! Runs, finite games and interpretations.
//!
//! A [`FiniteGame`] is an explicit prefix-closed set of raw runs with a winner
//! for each. Compound games induced by a cirquent are never materialized; the
//! [`semantics`] module evaluates legality and winners run by run.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cirquent::{ChoiceKind, Cluster, Letter, Literal};
use crate::parse::{Cursor, ParseError};

pub mod minimax;
pub mod semantics;
pub mod statics;

pub use minimax::minimax_wins;
pub use semantics::{first_illegal, is_legal_run, legal_labmoves, project_run, winner, Position};
pub use statics::{
    check_compound_static_bounded, check_static_bounded, compound_check_size, is_delay, StaticViolation,
    DEFAULT_EXTRA_ALPHABET, DEFAULT_EXTRA_LEN,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    /// The machine.
    T,
    /// The environment.
    B,
}

impl Player {
    pub fn adversary(self) -> Player {
        match self {
            Player::T => Player::B,
            Player::B => Player::T,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Player::T => 'T',
            Player::B => 'B',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl std::str::FromStr for Player {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Player, ParseError> {
        match s.trim() {
            "T" => Ok(Player::T),
            "B" => Ok(Player::B),
            _ => Err(ParseError::Syntax {
                pos: 0,
                msg: format!("expected `T` or `B`, found {s:?}"),
            }),
        }
    }
}

/// Anything that carries the player who made it.
pub trait Labeled {
    fn label(&self) -> Player;
}

/// A move inside one literal's game, without the literal prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawMove {
    pub player: Player,
    pub payload: String,
}

impl RawMove {
    pub fn new(player: Player, payload: impl Into<String>) -> RawMove {
        RawMove {
            player,
            payload: payload.into(),
        }
    }

    pub fn flipped(&self) -> RawMove {
        RawMove::new(self.player.adversary(), self.payload.clone())
    }
}

impl Labeled for RawMove {
    fn label(&self) -> Player {
        self.player
    }
}

impl fmt::Display for RawMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.player, self.payload)
    }
}

pub type RawRun = Vec<RawMove>;

pub fn flip_raw_run(run: &[RawMove]) -> RawRun {
    run.iter().map(RawMove::flipped).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// `L.α`: the payload is played in every copy of the literal `L`.
    InLiteral(Literal, String),
    /// `⊓ᶜ.i` or `⊔ᶜ.i`.
    Choice(ChoiceKind, Cluster, u8),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::InLiteral(l, payload) => write!(f, "{l}.{payload}"),
            Move::Choice(kind, c, bit) => write!(f, "{}.{c}.{bit}", kind.keyword()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labmove {
    pub player: Player,
    pub mv: Move,
}

impl Labmove {
    pub fn new(player: Player, mv: Move) -> Labmove {
        Labmove { player, mv }
    }

    pub fn in_literal(player: Player, literal: Literal, payload: impl Into<String>) -> Labmove {
        Labmove::new(player, Move::InLiteral(literal, payload.into()))
    }

    pub fn choice(player: Player, kind: ChoiceKind, cluster: Cluster, bit: u8) -> Labmove {
        Labmove::new(player, Move::Choice(kind, cluster, bit))
    }
}

impl Labeled for Labmove {
    fn label(&self) -> Player {
        self.player
    }
}

impl fmt::Display for Labmove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.player, self.mv)
    }
}

pub type Run = Vec<Labmove>;

pub fn is_payload(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("letter `{0}` is not interpreted")]
    UnknownLetter(Letter),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("the empty run is missing from the legal runs")]
    MissingEmptyRun,
    #[error("legal run {0} has an illegal prefix")]
    NotPrefixClosed(String),
    #[error("run {0} is listed twice")]
    DuplicateRun(String),
    #[error("invalid payload {0:?}")]
    BadPayload(String),
    #[error("elementary letter `{0}` can only denote a game without moves")]
    ElementaryWithMoves(Letter),
    #[error("game is not static: {0}")]
    NotStatic(StaticViolation),
}

/// A finite-depth game given by its legal runs and their winners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGame {
    winners: BTreeMap<RawRun, Player>,
    /// Legal continuations of each legal run.
    children: HashMap<RawRun, Vec<RawMove>>,
}

impl FiniteGame {
    /// Validates the run set (empty run present, prefix-closed, payloads
    /// well-formed) and runs the bounded static check with default bounds.
    pub fn new(runs: impl IntoIterator<Item = (RawRun, Player)>) -> Result<FiniteGame, GameError> {
        let g = FiniteGame::from_runs(runs)?;
        check_static_bounded(&g, DEFAULT_EXTRA_ALPHABET, DEFAULT_EXTRA_LEN).map_err(GameError::NotStatic)?;
        Ok(g)
    }

    /// Structural validation only; the static check is skipped.
    pub fn from_runs(runs: impl IntoIterator<Item = (RawRun, Player)>) -> Result<FiniteGame, GameError> {
        let mut winners = BTreeMap::new();
        for (run, w) in runs {
            if let Some(bad) = run.iter().find(|m| !is_payload(&m.payload)) {
                return Err(GameError::BadPayload(bad.payload.clone()));
            }
            if winners.insert(run.clone(), w).is_some() {
                return Err(GameError::DuplicateRun(format_raw_run(&run)));
            }
        }
        if !winners.contains_key(&Vec::new()) {
            return Err(GameError::MissingEmptyRun);
        }
        for run in winners.keys() {
            if !run.is_empty() && !winners.contains_key(&run[..run.len() - 1]) {
                return Err(GameError::NotPrefixClosed(format_raw_run(run)));
            }
        }
        Ok(FiniteGame::build(winners))
    }

    fn build(winners: BTreeMap<RawRun, Player>) -> FiniteGame {
        let mut children: HashMap<RawRun, Vec<RawMove>> = HashMap::new();
        for run in winners.keys() {
            if let Some((last, prefix)) = run.split_last() {
                children.entry(prefix.to_vec()).or_default().push(last.clone());
            }
        }
        FiniteGame { winners, children }
    }

    /// The game with no moves, won by `w`.
    pub fn elementary(w: Player) -> FiniteGame {
        FiniteGame::build(BTreeMap::from([(Vec::new(), w)]))
    }

    pub fn is_elementary(&self) -> bool {
        self.winners.len() == 1
    }

    pub fn is_legal(&self, run: &[RawMove]) -> bool {
        self.winners.contains_key(run)
    }

    /// Winner of a legal run; `None` for illegal runs.
    pub fn winner(&self, run: &[RawMove]) -> Option<Player> {
        self.winners.get(run).copied()
    }

    /// Winner of an arbitrary run: the mover of the last labmove of the
    /// shortest illegal prefix loses.
    pub fn outcome(&self, run: &[RawMove]) -> Player {
        for k in 1..=run.len() {
            if !self.is_legal(&run[..k]) {
                return run[k - 1].player.adversary();
            }
        }
        self.winners[run]
    }

    /// Legal moves available to `player` after the legal run `run`.
    pub fn next_moves<'a>(&'a self, run: &[RawMove], player: Player) -> impl Iterator<Item = &'a str> + 'a {
        self.children
            .get(run)
            .into_iter()
            .flatten()
            .filter(move |m| m.player == player)
            .map(|m| m.payload.as_str())
    }

    pub fn runs(&self) -> impl Iterator<Item = (&RawRun, Player)> {
        self.winners.iter().map(|(r, w)| (r, *w))
    }

    pub fn depth(&self) -> usize {
        self.winners.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn payloads(&self) -> BTreeSet<&str> {
        self.winners.keys().flatten().map(|m| m.payload.as_str()).collect()
    }
}

/// Roles of the two players interchanged.
pub fn negate_game(g: &FiniteGame) -> FiniteGame {
    FiniteGame::build(
        g.winners
            .iter()
            .map(|(run, w)| (flip_raw_run(run), w.adversary()))
            .collect(),
    )
}

/// Assignment of games to the letters a cirquent uses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    games: BTreeMap<Letter, FiniteGame>,
}

impl Interpretation {
    pub fn new() -> Interpretation {
        Interpretation::default()
    }

    /// Elementary letters only accept games without moves.
    pub fn insert(&mut self, letter: Letter, game: FiniteGame) -> Result<(), GameError> {
        if !letter.is_general() && !game.is_elementary() {
            return Err(GameError::ElementaryWithMoves(letter));
        }
        self.games.insert(letter, game);
        Ok(())
    }

    pub fn with(mut self, letter: &str, game: FiniteGame) -> Result<Interpretation, GameError> {
        self.insert(Letter::named(letter), game)?;
        Ok(self)
    }

    pub fn get(&self, letter: &Letter) -> Result<&FiniteGame, GameError> {
        self.games
            .get(letter)
            .ok_or_else(|| GameError::UnknownLetter(letter.clone()))
    }

    pub fn letters(&self) -> impl Iterator<Item = &Letter> {
        self.games.keys()
    }

    pub fn games(&self) -> impl Iterator<Item = (&Letter, &FiniteGame)> {
        self.games.iter()
    }

    /// Every letter bound to the same game.
    pub fn uniform<'a>(letters: impl IntoIterator<Item = &'a Letter>, game: &FiniteGame) -> Interpretation {
        let mut interp = Interpretation::new();
        for l in letters {
            let g = if l.is_general() {
                game.clone()
            } else {
                FiniteGame::elementary(game.winner(&[]).unwrap_or(Player::T))
            };
            interp.games.insert(l.clone(), g);
        }
        interp
    }
}

// ---- text formats ----

pub fn format_raw_run(run: &[RawMove]) -> String {
    if run.is_empty() {
        return "()".to_string();
    }
    run.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn format_run(run: &[Labmove]) -> String {
    if run.is_empty() {
        return "()".to_string();
    }
    run.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn player_prefix(cur: &mut Cursor<'_>) -> Result<Player, ParseError> {
    let player = match cur.ident() {
        Some("T") => Player::T,
        Some("B") => Player::B,
        _ => return cur.error("expected `T:` or `B:`"),
    };
    cur.expect(':')?;
    Ok(player)
}

/// Runs the comma-separated item parser, accepting `()` for the empty list.
fn parse_list<T>(
    text: &str,
    mut item: impl FnMut(&mut Cursor<'_>) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    let mut cur = Cursor::new(text, true);
    let mut out = Vec::new();
    if cur.eat('(') {
        cur.expect(')')?;
    } else {
        loop {
            out.push(item(&mut cur)?);
            if !cur.eat(',') {
                break;
            }
        }
    }
    if !cur.at_end() {
        return cur.error("trailing input");
    }
    Ok(out)
}

pub fn parse_raw_run(text: &str) -> Result<RawRun, ParseError> {
    parse_list(text, |cur| {
        let player = player_prefix(cur)?;
        match cur.token() {
            Some(p) => Ok(RawMove::new(player, p)),
            None => cur.error("expected a payload"),
        }
    })
}

pub fn parse_labmove_at(cur: &mut Cursor<'_>) -> Result<Labmove, ParseError> {
    let player = player_prefix(cur)?;
    let mv = match cur.peek_ident() {
        Some(kw @ ("chand" | "chor")) => {
            cur.ident();
            let kind = if kw == "chand" {
                ChoiceKind::Chand
            } else {
                ChoiceKind::Chor
            };
            cur.expect('.')?;
            let cluster = cur.nat()?;
            cur.expect('.')?;
            let bit = cur.nat()?;
            if bit > 1 {
                return cur.error("choice bit must be 0 or 1");
            }
            Move::Choice(kind, cluster, bit as u8)
        }
        _ => {
            let lit = cur.literal()?;
            cur.expect('.')?;
            match cur.token() {
                Some(p) => Move::InLiteral(lit, p.to_string()),
                None => return cur.error("expected a payload"),
            }
        }
    };
    Ok(Labmove::new(player, mv))
}

pub fn parse_labmove(text: &str) -> Result<Labmove, ParseError> {
    let mut cur = Cursor::new(text, true);
    let lm = parse_labmove_at(&mut cur)?;
    if !cur.at_end() {
        return cur.error("trailing input");
    }
    Ok(lm)
}

pub fn parse_run(text: &str) -> Result<Run, ParseError> {
    parse_list(text, parse_labmove_at)
}

/// Reads `game <Letter>:` blocks of `<rawrun> => T|B` lines. Blank lines and
/// lines starting with `#` are ignored.
pub fn parse_interpretation(text: &str) -> Result<Interpretation, GameError> {
    let mut interp = Interpretation::new();
    let mut current: Option<(Letter, Vec<(RawRun, Player)>)> = None;
    let finish = |interp: &mut Interpretation, block: Option<(Letter, Vec<(RawRun, Player)>)>| {
        if let Some((letter, runs)) = block {
            interp.insert(letter, FiniteGame::new(runs)?)?;
        }
        Ok::<(), GameError>(())
    };
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("game ") {
            let Some(name) = rest.trim().strip_suffix(':') else {
                return Err(GameError::Format {
                    line: line_no,
                    msg: "expected `game <Letter>:`".into(),
                });
            };
            let Some(letter) = Letter::new(name.trim()) else {
                return Err(GameError::Format {
                    line: line_no,
                    msg: format!("invalid letter {name:?}"),
                });
            };
            finish(&mut interp, current.take())?;
            current = Some((letter, Vec::new()));
            continue;
        }
        let Some((_, runs)) = current.as_mut() else {
            return Err(GameError::Format {
                line: line_no,
                msg: "run line outside a game block".into(),
            });
        };
        let Some((run_text, winner_text)) = line.split_once("=>") else {
            return Err(GameError::Format {
                line: line_no,
                msg: "expected `<run> => T|B`".into(),
            });
        };
        let run = parse_raw_run(run_text).map_err(|e| GameError::Format {
            line: line_no,
            msg: e.to_string(),
        })?;
        let w: Player = winner_text.parse().map_err(|_| GameError::Format {
            line: line_no,
            msg: format!("expected `T` or `B`, found {:?}", winner_text.trim()),
        })?;
        runs.push((run, w));
    }
    finish(&mut interp, current.take())?;
    Ok(interp)
}

pub fn format_interpretation(interp: &Interpretation) -> String {
    let mut out = String::new();
    for (letter, game) in interp.games() {
        out.push_str(&format!("game {letter}:\n"));
        for (run, w) in game.runs() {
            out.push_str(&format!("{} => {w}\n", format_raw_run(run)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cirquent::Literal;

    pub(crate) fn raw(text: &str) -> RawRun {
        parse_raw_run(text).unwrap()
    }

    #[test]
    fn players() {
        assert_eq!(Player::T.adversary().adversary(), Player::T);
        assert_eq!("B".parse::<Player>().unwrap(), Player::B);
    }

    #[test]
    fn run_text_round_trip() {
        let text = "T:P@1.a, B:~Q@2.b, B:chand.3.0, T:chor.0.1, B:p.x";
        let run = parse_run(text).unwrap();
        assert_eq!(run.len(), 5);
        assert_eq!(run[0], Labmove::in_literal(Player::T, Literal::pos("P", 1), "a"));
        assert_eq!(run[2], Labmove::choice(Player::B, ChoiceKind::Chand, 3, 0));
        assert_eq!(format_run(&run), text);
        assert_eq!(parse_run("()").unwrap(), Vec::new());
        assert_eq!(format_run(&[]), "()");
        assert!(parse_run("T:chand.1.2").is_err());
        assert!(parse_run("X:P@1.a").is_err());
        assert!(parse_run("T:P@1").is_err());
    }

    #[test]
    fn game_validation() {
        assert_eq!(
            FiniteGame::new([(raw("B:m"), Player::B)]),
            Err(GameError::MissingEmptyRun)
        );
        let err = FiniteGame::new([(vec![], Player::T), (raw("B:m, T:y"), Player::T)]).unwrap_err();
        assert!(matches!(err, GameError::NotPrefixClosed(_)));
    }

    #[test]
    fn negation_of_elementary() {
        let g = FiniteGame::elementary(Player::T);
        assert_eq!(negate_game(&g), FiniteGame::elementary(Player::B));
    }

    #[test]
    fn interpretation_file() {
        let text = "\
# predicate game, p(m) true only for m = 1
game P:
() => T
B:1 => B
B:1, T:yes => T
B:1, T:no => B

game Q:
() => B
";
        let interp = parse_interpretation(text).unwrap();
        let p = interp.get(&Letter::named("P")).unwrap();
        assert_eq!(p.winner(&raw("B:1, T:no")), Some(Player::B));
        assert_eq!(
            interp.get(&Letter::named("Q")).unwrap(),
            &FiniteGame::elementary(Player::B)
        );
        assert_eq!(parse_interpretation(&format_interpretation(&interp)).unwrap(), interp);
        assert!(matches!(
            interp.get(&Letter::named("R")),
            Err(GameError::UnknownLetter(_))
        ));
        assert!(parse_interpretation("() => T").is_err());
        assert!(parse_interpretation("game P:\n() => X\n").is_err());
    }

    #[test]
    fn elementary_letters_need_elementary_games() {
        let g = FiniteGame::new([(vec![], Player::T), (raw("B:m"), Player::B)]).unwrap();
        let mut interp = Interpretation::new();
        assert!(interp.insert(Letter::named("p"), g).is_err());
        assert!(interp
            .insert(Letter::named("p"), FiniteGame::elementary(Player::B))
            .is_ok());
    }
}
