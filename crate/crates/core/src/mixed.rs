//! Mixed-base cirquents, where lowercase letters stand for elementary games,
//! and their reduction to the general base.

use thiserror::Error;

use crate::analysis::fresh_letter;
use crate::cirquent::{Cirquent, Letter, Literal};
use crate::prover::{decide, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MixedError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Elementary letters and the fresh general letters that replaced them, in
/// replacement order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeelementarizationMap {
    pub pairs: Vec<(Letter, Letter)>,
}

impl DeelementarizationMap {
    pub fn get(&self, elementary: &Letter) -> Option<&Letter> {
        self.pairs.iter().find(|(e, _)| e == elementary).map(|(_, g)| g)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn letters(c: &Cirquent) -> Vec<Letter> {
    let mut out: Vec<Letter> = c.literals().map(|l| l.letter.clone()).collect();
    out.sort();
    out.dedup();
    out
}

/// Replaces every `p` by `P@0` and every `~p` by `~P@0`.
pub fn deelementarize_step(a: &Cirquent, p: &Letter, big: &Letter) -> Result<Cirquent, MixedError> {
    if p.is_general() {
        return Err(MixedError::PreconditionViolated(format!("{p} is not elementary")));
    }
    if !big.is_general() {
        return Err(MixedError::PreconditionViolated(format!("{big} is not general")));
    }
    if !a.mentions_letter(p) {
        return Err(MixedError::PreconditionViolated(format!("{p} does not occur")));
    }
    if a.mentions_letter(big) {
        return Err(MixedError::PreconditionViolated(format!("{big} already occurs")));
    }
    Ok(a.map_top_down(&mut |node| match node {
        Cirquent::Lit(l) if &l.letter == p => Some(Literal::new(big.clone(), 0, l.polarity).into()),
        _ => None,
    }))
}

/// Full deelementarization: elementary letters in lexicographic order, each
/// replaced by the least unused general letter.
pub fn deelementarize(a: &Cirquent) -> (Cirquent, DeelementarizationMap) {
    let mut current = a.clone();
    let mut map = DeelementarizationMap::default();
    let source = letters(a);
    for p in source.iter().filter(|l| !l.is_general()) {
        let used: Vec<Letter> = source
            .iter()
            .cloned()
            .chain(map.pairs.iter().map(|(_, g)| g.clone()))
            .collect();
        let big = fresh_letter(&used);
        current = deelementarize_step(&current, p, &big).expect("fresh letter for an occurring elementary letter");
        map.pairs.push((p.clone(), big));
    }
    (current, map)
}

/// Provability of the full deelementarization; a proof, if any, ends with
/// that general-base cirquent.
pub fn decide_mixed(a: &Cirquent) -> Verdict {
    decide(&deelementarize(a).0)
}
