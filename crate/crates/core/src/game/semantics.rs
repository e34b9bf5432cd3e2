//! Legality and winners of runs of the game a cirquent denotes.

use std::collections::BTreeMap;

use super::{flip_raw_run, GameError, Interpretation, Labmove, Move, Player, RawMove, RawRun, Run};
use crate::cirquent::{ChoiceKind, Cirquent, Cluster, Literal, Polarity};

/// `r` restricted to the labmoves of literal `l`, with the prefix removed.
pub fn project_run(r: &[Labmove], l: &Literal) -> RawRun {
    r.iter()
        .filter_map(|lm| match &lm.mv {
            Move::InLiteral(m, payload) if m == l => Some(RawMove::new(lm.player, payload.clone())),
            _ => None,
        })
        .collect()
}

/// Legal position of a compound game, tracked incrementally: per-literal
/// projections and the choice resolutions made so far.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    projections: BTreeMap<Literal, RawRun>,
    resolutions: BTreeMap<(ChoiceKind, Cluster), u8>,
}

impl Position {
    pub fn new() -> Position {
        Position::default()
    }

    pub fn projection(&self, l: &Literal) -> &[RawMove] {
        self.projections.get(l).map_or(&[], Vec::as_slice)
    }

    pub fn resolution(&self, kind: ChoiceKind, cluster: Cluster) -> Option<u8> {
        self.resolutions.get(&(kind, cluster)).copied()
    }

    /// Whether `lm` may legally follow this position. Legality depends only on
    /// the interpretation, never on a cirquent.
    pub fn admits(&self, interp: &Interpretation, lm: &Labmove) -> Result<bool, GameError> {
        match &lm.mv {
            Move::Choice(kind, cluster, bit) => {
                let right_label = match kind {
                    ChoiceKind::Chand => Player::B,
                    ChoiceKind::Chor => Player::T,
                };
                Ok(lm.player == right_label && *bit <= 1 && !self.resolutions.contains_key(&(*kind, *cluster)))
            }
            Move::InLiteral(l, payload) => {
                let game = interp.get(&l.letter)?;
                let mut proj = self.projection(l).to_vec();
                proj.push(RawMove::new(lm.player, payload.clone()));
                let proj = match l.polarity {
                    Polarity::Positive => proj,
                    Polarity::Negative => flip_raw_run(&proj),
                };
                Ok(game.is_legal(&proj))
            }
        }
    }

    /// Appends `lm` without checking legality.
    pub fn push_unchecked(&mut self, lm: &Labmove) {
        match &lm.mv {
            Move::Choice(kind, cluster, bit) => {
                self.resolutions.insert((*kind, *cluster), *bit);
            }
            Move::InLiteral(l, payload) => {
                self.projections
                    .entry(l.clone())
                    .or_default()
                    .push(RawMove::new(lm.player, payload.clone()));
            }
        }
    }

    /// Appends `lm` if legal; returns whether it was.
    pub fn push(&mut self, interp: &Interpretation, lm: &Labmove) -> Result<bool, GameError> {
        let ok = self.admits(interp, lm)?;
        if ok {
            self.push_unchecked(lm);
        }
        Ok(ok)
    }

    /// Winner of the literal's game at its current projection.
    pub fn literal_winner(&self, interp: &Interpretation, l: &Literal) -> Result<Player, GameError> {
        let game = interp.get(&l.letter)?;
        let proj = self.projection(l);
        Ok(match l.polarity {
            Polarity::Positive => game.winner(proj).expect("position is legal"),
            Polarity::Negative => game.winner(&flip_raw_run(proj)).expect("position is legal").adversary(),
        })
    }

    /// Winner of `c` at this (legal) position.
    pub fn evaluate(&self, c: &Cirquent, interp: &Interpretation) -> Result<Player, GameError> {
        Ok(match c {
            Cirquent::Top => Player::T,
            Cirquent::Bot => Player::B,
            Cirquent::Lit(l) => self.literal_winner(interp, l)?,
            Cirquent::Par(kind, a, b) => {
                let (wa, wb) = (self.evaluate(a, interp)?, self.evaluate(b, interp)?);
                let top = match kind {
                    crate::cirquent::ParKind::Pand => wa == Player::T && wb == Player::T,
                    crate::cirquent::ParKind::Por => wa == Player::T || wb == Player::T,
                };
                if top {
                    Player::T
                } else {
                    Player::B
                }
            }
            Cirquent::Choice(kind, cluster, a, b) => match self.resolution(*kind, *cluster) {
                Some(0) => self.evaluate(a, interp)?,
                Some(_) => self.evaluate(b, interp)?,
                None => match kind {
                    ChoiceKind::Chand => Player::T,
                    ChoiceKind::Chor => Player::B,
                },
            },
        })
    }
}

/// Every labmove `player` may legally make next at `pos`, restricted to the
/// literals and choice clusters occurring in `c`.
pub fn legal_labmoves(
    c: &Cirquent,
    interp: &Interpretation,
    pos: &Position,
    player: Player,
) -> Result<Vec<Labmove>, GameError> {
    let mut literals: Vec<&Literal> = c.literals().collect();
    literals.sort();
    literals.dedup();
    let mut out = Vec::new();
    for l in literals {
        let game = interp.get(&l.letter)?;
        let (in_game, proj) = match l.polarity {
            Polarity::Positive => (player, pos.projection(l).to_vec()),
            Polarity::Negative => (player.adversary(), flip_raw_run(pos.projection(l))),
        };
        for payload in game.next_moves(&proj, in_game) {
            out.push(Labmove::in_literal(player, l.clone(), payload));
        }
    }
    let kind = match player {
        Player::B => ChoiceKind::Chand,
        Player::T => ChoiceKind::Chor,
    };
    let clusters: std::collections::BTreeSet<Cluster> = c
        .nodes()
        .filter_map(|n| match n {
            Cirquent::Choice(k, cl, ..) if *k == kind => Some(*cl),
            _ => None,
        })
        .collect();
    for cl in clusters {
        if pos.resolution(kind, cl).is_none() {
            for bit in 0..2 {
                out.push(Labmove::new(player, Move::Choice(kind, cl, bit)));
            }
        }
    }
    Ok(out)
}

/// Length of the shortest illegal prefix, if any.
pub fn first_illegal(interp: &Interpretation, r: &[Labmove]) -> Result<Option<usize>, GameError> {
    let mut pos = Position::new();
    for (i, lm) in r.iter().enumerate() {
        if !pos.push(interp, lm)? {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

pub fn is_legal_run(interp: &Interpretation, r: &[Labmove]) -> Result<bool, GameError> {
    Ok(first_illegal(interp, r)?.is_none())
}

fn check_coverage(c: &Cirquent, interp: &Interpretation) -> Result<(), GameError> {
    for l in c.literals() {
        interp.get(&l.letter)?;
    }
    Ok(())
}

/// Who wins `r` in the game `c` denotes under `interp`. On an illegal run the
/// player who made the first illegal move loses.
pub fn winner(c: &Cirquent, interp: &Interpretation, r: &Run) -> Result<Player, GameError> {
    check_coverage(c, interp)?;
    let mut pos = Position::new();
    for lm in r {
        if !pos.push(interp, lm)? {
            return Ok(lm.player.adversary());
        }
    }
    pos.evaluate(c, interp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{parse_raw_run, parse_run, FiniteGame};
    use crate::parse::cq;

    fn predicate_game() -> FiniteGame {
        // p(m) holds for m = 1 only.
        let mut runs = vec![(vec![], Player::T)];
        for m in ["0", "1"] {
            runs.push((parse_raw_run(&format!("B:{m}")).unwrap(), Player::B));
            for ans in ["yes", "no"] {
                let w = if (m == "1") == (ans == "yes") {
                    Player::T
                } else {
                    Player::B
                };
                runs.push((parse_raw_run(&format!("B:{m}, T:{ans}")).unwrap(), w));
            }
        }
        FiniteGame::new(runs).unwrap()
    }

    fn interp_pq() -> Interpretation {
        Interpretation::new()
            .with("P", predicate_game())
            .unwrap()
            .with("Q", predicate_game())
            .unwrap()
    }

    #[test]
    fn projections() {
        let r = parse_run("T:P@1.a, B:Q@2.b, T:P@1.c").unwrap();
        assert_eq!(
            project_run(&r, &Literal::pos("P", 1)),
            parse_raw_run("T:a, T:c").unwrap()
        );
        assert!(project_run(&r, &Literal::pos("R", 1)).is_empty());
        let r = parse_run("T:P@1.a, B:~P@1.b").unwrap();
        assert_eq!(project_run(&r, &Literal::pos("P", 1)), parse_raw_run("T:a").unwrap());
        assert_eq!(project_run(&r, &Literal::neg("P", 1)), parse_raw_run("B:b").unwrap());
    }

    #[test]
    fn choice_legality() {
        let interp = Interpretation::new();
        assert!(is_legal_run(&interp, &[]).unwrap());
        assert!(!is_legal_run(&interp, &parse_run("B:chand.1.0, B:chand.1.1").unwrap()).unwrap());
        assert!(!is_legal_run(&interp, &parse_run("T:chand.1.0").unwrap()).unwrap());
        assert!(is_legal_run(&interp, &parse_run("B:chand.1.0, T:chor.1.1").unwrap()).unwrap());
    }

    #[test]
    fn literal_legality_uses_negation() {
        let interp = interp_pq();
        assert!(is_legal_run(&interp, &parse_run("B:P@1.1, T:P@1.yes").unwrap()).unwrap());
        assert!(!is_legal_run(&interp, &parse_run("B:~P@1.1").unwrap()).unwrap());
        assert!(is_legal_run(&interp, &parse_run("T:~P@1.1, B:~P@1.no").unwrap()).unwrap());
        assert_eq!(
            is_legal_run(&interp, &parse_run("B:R@1.1").unwrap()),
            Err(GameError::UnknownLetter(crate::Letter::named("R")))
        );
    }

    #[test]
    fn unresolved_choices() {
        let interp = interp_pq();
        assert_eq!(winner(&cq("(P@1 chand.5 Q@1)"), &interp, &vec![]).unwrap(), Player::T);
        assert_eq!(winner(&cq("(P@1 chor.5 Q@1)"), &interp, &vec![]).unwrap(), Player::B);
        let r = parse_run("T:chor.5.1").unwrap();
        assert_eq!(winner(&cq("(bot chor.5 top)"), &interp, &r).unwrap(), Player::T);
        // Nested same-cluster choices follow the one resolution.
        let r = parse_run("B:chand.2.1").unwrap();
        assert_eq!(
            winner(&cq("(top chand.2 (top chand.2 bot))"), &interp, &r).unwrap(),
            Player::B
        );
    }

    #[test]
    fn literal_winners() {
        let interp = interp_pq();
        let p1 = cq("P@1");
        assert_eq!(winner(&p1, &interp, &parse_run("B:P@1.1").unwrap()).unwrap(), Player::B);
        assert_eq!(
            winner(&p1, &interp, &parse_run("B:P@1.1, T:P@1.yes").unwrap()).unwrap(),
            Player::T
        );
        assert_eq!(winner(&cq("~P@1"), &interp, &vec![]).unwrap(), Player::B);
        assert_eq!(winner(&cq("(P@1 or ~P@2)"), &interp, &vec![]).unwrap(), Player::T);
        assert_eq!(
            winner(&cq("(P@1 or ~P@2)"), &interp, &parse_run("B:P@1.1").unwrap()).unwrap(),
            Player::B
        );
        assert_eq!(
            winner(&cq("(P@1 and ~P@2)"), &interp, &parse_run("B:P@1.1, T:P@1.no").unwrap()).unwrap(),
            Player::B
        );
    }

    #[test]
    fn illegal_runs_are_lost_by_the_offender() {
        let interp = interp_pq();
        // The environment answers in its own game: illegal, so the machine wins.
        let r = parse_run("B:P@1.1, B:P@1.yes").unwrap();
        assert_eq!(winner(&cq("bot"), &interp, &r).unwrap(), Player::T);
        let r = parse_run("T:chand.0.0, B:P@1.1").unwrap();
        assert_eq!(winner(&cq("top"), &interp, &r).unwrap(), Player::B);
        assert_eq!(first_illegal(&interp, &r).unwrap(), Some(1));
        assert!(winner(&cq("R@0"), &interp, &vec![]).is_err());
    }
}
