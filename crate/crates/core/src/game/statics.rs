//! Delays and a bounded check of the static property.
//!
//! The check enumerates every run up to a length bound over a finite labeled
//! alphabet, records for each run whether it is legal and who wins it, and
//! then tests both static conditions against every delay of every run.

use std::fmt;

use super::{
    format_raw_run, format_run, FiniteGame, Interpretation, Labeled, Labmove, Move, Player, Position, RawMove,
};
use crate::analysis::audit;
use crate::cirquent::{ChoiceKind, Cirquent};

pub const DEFAULT_EXTRA_ALPHABET: usize = 1;
pub const DEFAULT_EXTRA_LEN: usize = 2;

/// For each `p`-move, the number of adversary moves preceding it.
fn crossings<M: Labeled>(p: Player, run: &[M]) -> Vec<usize> {
    let mut seen = 0;
    let mut out = Vec::new();
    for m in run {
        if m.label() == p {
            out.push(seen);
        } else {
            seen += 1;
        }
    }
    out
}

fn by_player<M: Labeled>(run: &[M], p: Player) -> impl Iterator<Item = &M> {
    run.iter().filter(move |m| m.label() == p)
}

/// Whether `upsilon` is a `p`-delay of `gamma`: both players make the same
/// moves in the same order, and `p` never acts earlier relative to its
/// adversary than in `gamma`.
pub fn is_delay<M: Labeled + PartialEq>(p: Player, gamma: &[M], upsilon: &[M]) -> bool {
    for q in [Player::T, Player::B] {
        if !by_player(gamma, q).eq(by_player(upsilon, q)) {
            return false;
        }
    }
    crossings(p, gamma)
        .iter()
        .zip(crossings(p, upsilon))
        .all(|(g, u)| u >= *g)
}

/// A pair of runs breaking one of the two static conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticViolation {
    pub player: Player,
    /// 1: legality is not preserved by the delay; 2: winning is not.
    pub condition: u8,
    pub gamma: String,
    pub upsilon: String,
}

impl fmt::Display for StaticViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "condition {} fails for {}: {} is a delay of {}",
            self.condition, self.player, self.upsilon, self.gamma
        )
    }
}

/// A game presented symbol by symbol for the bounded check.
pub trait BoundedGame {
    type State: Clone;

    /// Label of every alphabet symbol; symbols are identified by index.
    fn labels(&self) -> &[Player];
    fn start(&self) -> Self::State;
    /// Next state, or `None` if the symbol is illegal here.
    fn advance(&self, state: &Self::State, symbol: usize) -> Option<Self::State>;
    fn legal_winner(&self, state: &Self::State) -> Player;
    fn describe(&self, run: &[usize]) -> String;
}

// Outcome codes: legal and won by T / B, or illegal with T / B the offender.
const LEGAL_T: u8 = 0;
const LEGAL_B: u8 = 1;
const ILLEGAL_T: u8 = 2;
const ILLEGAL_B: u8 = 3;

fn code_winner(code: u8) -> Player {
    match code {
        LEGAL_T | ILLEGAL_B => Player::T,
        _ => Player::B,
    }
}

/// `p`-legal: legal, or the first illegal move was the adversary's.
fn code_p_legal(code: u8, p: Player) -> bool {
    match code {
        LEGAL_T | LEGAL_B => true,
        ILLEGAL_T => p == Player::B,
        _ => p == Player::T,
    }
}

struct Table {
    width: usize,
    levels: Vec<Vec<u8>>,
}

impl Table {
    fn build<G: BoundedGame>(g: &G, max_len: usize) -> Table {
        let labels = g.labels();
        let width = labels.len();
        let start = g.start();
        let w0 = if g.legal_winner(&start) == Player::T {
            LEGAL_T
        } else {
            LEGAL_B
        };
        let mut levels = vec![vec![w0]];
        let mut states: Vec<(usize, G::State)> = vec![(0, start)];
        for _ in 0..max_len {
            let prev = levels.last().expect("level 0 exists");
            let mut level: Vec<u8> = Vec::with_capacity(prev.len() * width);
            for &code in prev {
                for &label in labels {
                    level.push(match code {
                        LEGAL_T | LEGAL_B => {
                            // Filled below from the parent's state.
                            if label == Player::T {
                                ILLEGAL_T
                            } else {
                                ILLEGAL_B
                            }
                        }
                        c => c,
                    });
                }
            }
            let mut next_states = Vec::new();
            for (idx, state) in &states {
                for sym in 0..width {
                    if let Some(s) = g.advance(state, sym) {
                        let i = idx * width + sym;
                        level[i] = if g.legal_winner(&s) == Player::T {
                            LEGAL_T
                        } else {
                            LEGAL_B
                        };
                        next_states.push((i, s));
                    }
                }
            }
            states = next_states;
            levels.push(level);
        }
        Table { width, levels }
    }

    fn get(&self, run: &[usize]) -> u8 {
        let idx = run.iter().fold(0, |acc, &s| acc * self.width + s);
        self.levels[run.len()][idx]
    }
}

fn decode(mut idx: usize, len: usize, width: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % width;
        idx /= width;
    }
    out
}

/// Every `p`-delay of `gamma` other than `gamma` itself.
fn delays(p: Player, gamma: &[usize], labels: &[Player], out: &mut Vec<Vec<usize>>) {
    let mine: Vec<usize> = gamma.iter().copied().filter(|&s| labels[s] == p).collect();
    let theirs: Vec<usize> = gamma.iter().copied().filter(|&s| labels[s] != p).collect();
    let need = {
        let mut seen = 0;
        let mut v = Vec::new();
        for &s in gamma {
            if labels[s] == p {
                v.push(seen);
            } else {
                seen += 1;
            }
        }
        v
    };

    fn go(
        mine: &[usize],
        theirs: &[usize],
        need: &[usize],
        i: usize,
        j: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == mine.len() && j == theirs.len() {
            out.push(cur.clone());
            return;
        }
        if i < mine.len() && j >= need[i] {
            cur.push(mine[i]);
            go(mine, theirs, need, i + 1, j, cur, out);
            cur.pop();
        }
        if j < theirs.len() {
            cur.push(theirs[j]);
            go(mine, theirs, need, i, j + 1, cur, out);
            cur.pop();
        }
    }

    let start = out.len();
    go(&mine, &theirs, &need, 0, 0, &mut Vec::with_capacity(gamma.len()), out);
    let mut k = start;
    while k < out.len() {
        if out[k] == gamma {
            out.swap_remove(k);
        } else {
            k += 1;
        }
    }
}

/// Checks both static conditions for every run of length at most `max_len`.
pub fn check_bounded<G: BoundedGame>(g: &G, max_len: usize) -> Result<(), StaticViolation> {
    let table = Table::build(g, max_len);
    let labels = g.labels();
    let width = labels.len();
    let mut buf = Vec::new();
    for len in 1..=max_len {
        let count = table.levels[len].len();
        for idx in 0..count {
            let code = table.levels[len][idx];
            let gamma = decode(idx, len, width);
            for p in [Player::T, Player::B] {
                if !code_p_legal(code, p) {
                    continue;
                }
                let won = code_winner(code) == p;
                buf.clear();
                delays(p, &gamma, labels, &mut buf);
                for upsilon in &buf {
                    let u = table.get(upsilon);
                    let condition = if !code_p_legal(u, p) {
                        1
                    } else if won && code_winner(u) != p {
                        2
                    } else {
                        continue;
                    };
                    return Err(StaticViolation {
                        player: p,
                        condition,
                        gamma: g.describe(&gamma),
                        upsilon: g.describe(upsilon),
                    });
                }
            }
        }
    }
    Ok(())
}

struct GameAlphabet<'a> {
    game: &'a FiniteGame,
    moves: Vec<RawMove>,
    labels: Vec<Player>,
}

impl BoundedGame for GameAlphabet<'_> {
    type State = Vec<RawMove>;

    fn labels(&self) -> &[Player] {
        &self.labels
    }

    fn start(&self) -> Vec<RawMove> {
        Vec::new()
    }

    fn advance(&self, state: &Vec<RawMove>, symbol: usize) -> Option<Vec<RawMove>> {
        let mut next = state.clone();
        next.push(self.moves[symbol].clone());
        self.game.is_legal(&next).then_some(next)
    }

    fn legal_winner(&self, state: &Vec<RawMove>) -> Player {
        self.game.winner(state).expect("state is legal")
    }

    fn describe(&self, run: &[usize]) -> String {
        let raw: Vec<RawMove> = run.iter().map(|&s| self.moves[s].clone()).collect();
        format_raw_run(&raw)
    }
}

fn fresh_payloads(used: &[String], n: usize) -> Vec<String> {
    (0..)
        .map(|i| format!("z{i}"))
        .filter(|p| !used.contains(p))
        .take(n)
        .collect()
}

/// Bounded static check of a finite game. Runs range over the game's own
/// payloads plus `extra_alphabet` fresh ones, with lengths up to the game's
/// depth plus `extra_len`.
pub fn check_static_bounded(g: &FiniteGame, extra_alphabet: usize, extra_len: usize) -> Result<(), StaticViolation> {
    let mut payloads: Vec<String> = g.payloads().into_iter().map(str::to_string).collect();
    payloads.extend(fresh_payloads(&payloads, extra_alphabet));
    let mut moves = Vec::new();
    for p in &payloads {
        for player in [Player::T, Player::B] {
            moves.push(RawMove::new(player, p.clone()));
        }
    }
    let labels = moves.iter().map(|m| m.player).collect();
    let alphabet = GameAlphabet { game: g, moves, labels };
    check_bounded(&alphabet, g.depth() + extra_len)
}

struct CompoundAlphabet<'a> {
    c: &'a Cirquent,
    interp: &'a Interpretation,
    moves: Vec<Labmove>,
    labels: Vec<Player>,
}

impl BoundedGame for CompoundAlphabet<'_> {
    type State = Position;

    fn labels(&self) -> &[Player] {
        &self.labels
    }

    fn start(&self) -> Position {
        Position::new()
    }

    fn advance(&self, state: &Position, symbol: usize) -> Option<Position> {
        let mut next = state.clone();
        next.push(self.interp, &self.moves[symbol])
            .expect("letters are covered")
            .then_some(next)
    }

    fn legal_winner(&self, state: &Position) -> Player {
        state.evaluate(self.c, self.interp).expect("letters are covered")
    }

    fn describe(&self, run: &[usize]) -> String {
        let r: Vec<Labmove> = run.iter().map(|&s| self.moves[s].clone()).collect();
        format_run(&r)
    }
}

fn compound_alphabet<'a>(
    c: &'a Cirquent,
    interp: &'a Interpretation,
    extra_alphabet: usize,
) -> Result<(CompoundAlphabet<'a>, usize), super::GameError> {
    let a = audit(c);
    let mut moves = Vec::new();
    let mut max_len = 0;
    let mut literals: Vec<_> = c.literals().cloned().collect();
    literals.sort();
    literals.dedup();
    for l in &literals {
        let game = interp.get(&l.letter)?;
        max_len += game.depth();
        let mut payloads: Vec<String> = game.payloads().into_iter().map(str::to_string).collect();
        payloads.extend(fresh_payloads(&payloads, extra_alphabet));
        for p in payloads {
            for player in [Player::T, Player::B] {
                moves.push(Labmove::new(player, Move::InLiteral(l.clone(), p.clone())));
            }
        }
    }
    for kind in [ChoiceKind::Chand, ChoiceKind::Chor] {
        for &cl in a.choice_clusters(kind) {
            max_len += 1;
            for bit in 0..2 {
                for player in [Player::T, Player::B] {
                    moves.push(Labmove::choice(player, kind, cl, bit));
                }
            }
        }
    }
    let labels = moves.iter().map(|m| m.player).collect();
    Ok((
        CompoundAlphabet {
            c,
            interp,
            moves,
            labels,
        },
        max_len,
    ))
}

/// Alphabet width and length bound [`check_compound_static_bounded`] would
/// use; the check visits every run over that alphabet up to that length.
pub fn compound_check_size(
    c: &Cirquent,
    interp: &Interpretation,
    extra_alphabet: usize,
    extra_len: usize,
) -> Result<(usize, usize), super::GameError> {
    let (alphabet, max_len) = compound_alphabet(c, interp, extra_alphabet)?;
    Ok((alphabet.moves.len(), max_len + extra_len))
}

/// Bounded static check of the game `c` denotes under `interp`, realized
/// through run legality and winners. The alphabet has every literal of `c`
/// with its game's payloads plus `extra_alphabet` fresh ones, and both bits
/// of every choice connective of `c`, all under both labels. Runs go up to
/// the summed depths of the literal games plus one move per choice cluster,
/// plus `extra_len`.
pub fn check_compound_static_bounded(
    c: &Cirquent,
    interp: &Interpretation,
    extra_alphabet: usize,
    extra_len: usize,
) -> Result<(), super::GameError> {
    let (alphabet, max_len) = compound_alphabet(c, interp, extra_alphabet)?;
    check_bounded(&alphabet, max_len + extra_len).map_err(super::GameError::NotStatic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{parse_raw_run, FiniteGame};

    fn raw(t: &str) -> Vec<RawMove> {
        parse_raw_run(t).unwrap()
    }

    #[test]
    fn delay_example() {
        let gamma = raw("T:a1, B:b1, B:b2, T:a2, T:a3, B:b3");
        let upsilon = raw("B:b1, T:a1, B:b2, T:a2, B:b3, T:a3");
        assert!(is_delay(Player::T, &gamma, &upsilon));
        assert!(!is_delay(Player::B, &gamma, &upsilon));
        assert!(is_delay(Player::B, &gamma, &gamma));
        let mutated = raw("B:b1, T:a1, B:b2, T:a2, B:b3, T:a4");
        assert!(!is_delay(Player::T, &gamma, &mutated));
        let swapped = raw("B:b1, T:a2, B:b2, T:a1, B:b3, T:a3");
        assert!(!is_delay(Player::T, &gamma, &swapped));
    }

    #[test]
    fn delays_enumeration_matches_definition() {
        let labels = [Player::T, Player::B];
        let gamma = [0, 1, 1, 0, 0, 1];
        let mut out = Vec::new();
        delays(Player::T, &gamma, &labels, &mut out);
        let as_moves = |r: &[usize]| -> Vec<RawMove> { r.iter().map(|&s| RawMove::new(labels[s], "x")).collect() };
        // Brute force over all interleavings of the same multiset.
        let mut brute = 0;
        for mask in 0u32..64 {
            if mask.count_ones() != 3 {
                continue;
            }
            let cand: Vec<usize> = (0..6).map(|i| if mask >> i & 1 == 1 { 0 } else { 1 }).collect();
            if cand != gamma && is_delay(Player::T, &as_moves(&gamma), &as_moves(&cand)) {
                brute += 1;
                assert!(out.contains(&cand));
            }
        }
        assert_eq!(out.len(), brute);
    }

    #[test]
    fn elementary_games_are_static() {
        assert!(check_static_bounded(&FiniteGame::elementary(Player::T), 1, 2).is_ok());
    }

    #[test]
    fn order_sensitive_game_is_caught() {
        let g = FiniteGame::from_runs([
            (vec![], Player::T),
            (raw("T:a"), Player::T),
            (raw("B:b"), Player::T),
            (raw("B:b, T:a"), Player::B),
        ])
        .unwrap();
        let v = check_static_bounded(&g, 1, 2).unwrap_err();
        assert_eq!(v.player, Player::T);
        assert!(FiniteGame::new(g.runs().map(|(r, w)| (r.clone(), w))).is_err());
    }

    #[test]
    fn compound_of_choice_is_static() {
        let interp = Interpretation::new();
        let c = crate::parse::cq("(top chand.0 bot)");
        assert!(check_compound_static_bounded(&c, &interp, 1, 2).is_ok());
    }
}
