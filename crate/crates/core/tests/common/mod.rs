#![allow(dead_code)]

use std::collections::HashSet;
use std::io::Write;

use cl18::game::{legal_labmoves, Interpretation, Player, Position};
use cl18::{Cirquent, Literal};
use rand::Rng;

/// Prints a verdict line past the test harness's output capture, then fails
/// the test if `ok` is false.
pub fn report(criterion: &str, ok: bool, detail: impl AsRef<str>) {
    let line = format!(
        "{} [{criterion}] {}\n",
        if ok { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(ok, "{}", line.trim_end());
}

/// Every position reachable by legal play in the literals and choice
/// clusters of `c`. Winners depend on positions only, so these cover the
/// outcomes of all legal runs.
pub fn reachable_positions(c: &Cirquent, interp: &Interpretation) -> Vec<Position> {
    let start = Position::new();
    let mut seen = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    let mut out = Vec::new();
    while let Some(pos) = stack.pop() {
        for player in [Player::T, Player::B] {
            for lm in legal_labmoves(c, interp, &pos, player).expect("covered") {
                let mut next = pos.clone();
                next.push_unchecked(&lm);
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        out.push(pos);
    }
    out
}

/// `c` with one literal occurrence, chosen at random, changed in cluster or
/// polarity. Returns `None` if `c` has no literals.
pub fn perturb_literal(c: &Cirquent, rng: &mut impl Rng) -> Option<Cirquent> {
    let count = c.literals().count();
    if count == 0 {
        return None;
    }
    let target = rng.gen_range(0..count);
    let flip = rng.gen_bool(0.5);
    let mut seen = 0;
    Some(c.map_top_down(&mut |node| match node {
        Cirquent::Lit(l) => {
            let here = seen == target;
            seen += 1;
            here.then(|| {
                let changed = if flip || !l.letter.is_general() {
                    l.opposite_polarity()
                } else {
                    Literal::new(l.letter.clone(), l.cluster + 1, l.polarity)
                };
                changed.into()
            })
        }
        _ => None,
    }))
}

pub fn letters_of(c: &Cirquent) -> Vec<cl18::Letter> {
    let mut ls: Vec<_> = c.literals().map(|l| l.letter.clone()).collect();
    ls.sort();
    ls.dedup();
    ls
}
