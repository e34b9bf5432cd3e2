//! Exhaustive game-tree search deciding whether the machine can force a win
//! in the game a cirquent denotes under one fixed interpretation.
//!
//! Play alternates with the environment moving first. On each turn the mover
//! makes one legal move or passes, and two consecutive passes end the play.
//! Only literals and choice clusters occurring in the cirquent are played.

use std::collections::HashMap;

use super::{GameError, Interpretation, Labmove, Move, Player, Position};
use crate::analysis::audit;
use crate::cirquent::{ChoiceKind, Cirquent, Literal, Polarity};

struct Search<'a> {
    c: &'a Cirquent,
    interp: &'a Interpretation,
    literals: Vec<Literal>,
    chand: Vec<u32>,
    chor: Vec<u32>,
    memo: HashMap<(Position, Player, bool), bool>,
}

impl Search<'_> {
    fn moves(&self, pos: &Position, mover: Player) -> Vec<Labmove> {
        let mut out = Vec::new();
        for l in &self.literals {
            let game = self.interp.get(&l.letter).expect("coverage checked");
            let (in_game, proj) = match l.polarity {
                Polarity::Positive => (mover, pos.projection(l).to_vec()),
                Polarity::Negative => (mover.adversary(), super::flip_raw_run(pos.projection(l))),
            };
            for payload in game.next_moves(&proj, in_game) {
                out.push(Labmove::in_literal(mover, l.clone(), payload));
            }
        }
        let (kind, clusters) = match mover {
            Player::B => (ChoiceKind::Chand, &self.chand),
            Player::T => (ChoiceKind::Chor, &self.chor),
        };
        for &cl in clusters {
            if pos.resolution(kind, cl).is_none() {
                for bit in 0..2 {
                    out.push(Labmove::new(mover, Move::Choice(kind, cl, bit)));
                }
            }
        }
        out
    }

    /// Whether the machine wins from `pos` with `mover` to act.
    fn solve(&mut self, pos: &Position, mover: Player, last_passed: bool) -> bool {
        let key = (pos.clone(), mover, last_passed);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let pass_value = if last_passed {
            pos.evaluate(self.c, self.interp).expect("coverage checked") == Player::T
        } else {
            self.solve(pos, mover.adversary(), true)
        };
        let want = mover == Player::T;
        let mut value = pass_value;
        if value != want {
            for lm in self.moves(pos, mover) {
                let mut next = pos.clone();
                next.push_unchecked(&lm);
                if self.solve(&next, mover.adversary(), false) == want {
                    value = want;
                    break;
                }
            }
        }
        self.memo.insert(key, value);
        value
    }
}

/// Whether the machine has a winning strategy in the perfect-information
/// turn game for `c` under `interp`.
pub fn minimax_wins(c: &Cirquent, interp: &Interpretation) -> Result<bool, GameError> {
    let mut literals: Vec<Literal> = c.literals().cloned().collect();
    literals.sort();
    literals.dedup();
    for l in &literals {
        interp.get(&l.letter)?;
    }
    let a = audit(c);
    let mut search = Search {
        c,
        interp,
        literals,
        chand: a.chand_clusters.iter().copied().collect(),
        chor: a.chor_clusters.iter().copied().collect(),
        memo: HashMap::new(),
    };
    Ok(search.solve(&Position::new(), Player::B, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{parse_raw_run, FiniteGame};
    use crate::parse::cq;

    fn echo_game() -> FiniteGame {
        let mut runs = vec![(vec![], Player::T)];
        for b in ["0", "1"] {
            runs.push((parse_raw_run(&format!("B:{b}")).unwrap(), Player::B));
            for e in ["0", "1"] {
                let w = if b == e { Player::T } else { Player::B };
                runs.push((parse_raw_run(&format!("B:{b}, T:{e}")).unwrap(), w));
            }
        }
        FiniteGame::new(runs).unwrap()
    }

    fn interp() -> Interpretation {
        Interpretation::new().with("P", echo_game()).unwrap()
    }

    #[test]
    fn constants() {
        let i = Interpretation::new();
        assert!(minimax_wins(&Cirquent::Top, &i).unwrap());
        assert!(!minimax_wins(&Cirquent::Bot, &i).unwrap());
        assert!(minimax_wins(&cq("(bot chor.0 top)"), &i).unwrap());
        assert!(!minimax_wins(&cq("(bot chand.0 top)"), &i).unwrap());
    }

    #[test]
    fn copycat_wins() {
        assert!(minimax_wins(&cq("(P@1 or ~P@2)"), &interp()).unwrap());
    }

    #[test]
    fn single_negative_literal_is_lost() {
        // In the negation the machine opens and the environment echoes.
        assert!(!minimax_wins(&cq("~P@1"), &interp()).unwrap());
        assert!(minimax_wins(&cq("P@1"), &interp()).unwrap());
    }

    #[test]
    fn uncovered_letter_is_an_error() {
        assert!(minimax_wins(&cq("Q@0"), &interp()).is_err());
    }
}
