//! Decision procedure for provability with proof reconstruction.
//!
//! A cirquent is purified; a pure `top` is an axiom, a pure `bot` fails, a
//! pure `A chand.c B` is split, and a conjunctively normal form is attacked
//! through every Choosing and Matching candidate in canonical order.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::calculus::{enumerate_candidates, RuleInstance};
use crate::cirquent::Cirquent;
use crate::proof::{Proof, ProofBuilder};
use crate::purify::{classify, purify, PurityClass};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Choosing and Matching premises tried.
    pub candidates_explored: usize,
    pub max_depth: usize,
    /// Calls of the recursive search, memo hits included.
    pub expansions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Provable(Proof),
    Unprovable(SearchStats),
}

impl Verdict {
    pub fn is_provable(&self) -> bool {
        matches!(self, Verdict::Provable(_))
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Verdict::Provable(p) => Some(p),
            Verdict::Unprovable(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search budget of {budget} expansions exceeded")]
pub struct BudgetExceeded {
    pub budget: u64,
}

struct Search {
    builder: ProofBuilder,
    proved: HashMap<Cirquent, usize>,
    failed: HashSet<Cirquent>,
    stats: SearchStats,
    budget: u64,
}

impl Search {
    /// Index of a builder step holding `c`, if `c` is provable.
    fn prove(&mut self, c: &Cirquent, depth: usize) -> Result<Option<usize>, BudgetExceeded> {
        self.stats.expansions += 1;
        if self.stats.expansions > self.budget {
            return Err(BudgetExceeded { budget: self.budget });
        }
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if let Some(&i) = self.proved.get(c) {
            return Ok(Some(i));
        }
        if self.failed.contains(c) {
            return Ok(None);
        }
        let mark = self.builder.len();
        let found = self.prove_fresh(c, depth)?;
        match found {
            Some(i) => {
                self.proved.insert(c.clone(), i);
            }
            None => {
                self.builder.truncate(mark);
                self.proved.retain(|_, i| *i <= mark);
                self.failed.insert(c.clone());
            }
        }
        Ok(found)
    }

    fn prove_fresh(&mut self, c: &Cirquent, depth: usize) -> Result<Option<usize>, BudgetExceeded> {
        let (pure, trace) = purify(c);
        let pure_index = match classify(&pure) {
            PurityClass::PureTop => self.builder.axiom(),
            PurityClass::PureBot => return Ok(None),
            PurityClass::PureChand(cluster) => {
                let Cirquent::Choice(_, _, a, b) = &pure else {
                    unreachable!()
                };
                let Some(i) = self.prove(a, depth + 1)? else {
                    return Ok(None);
                };
                let Some(j) = self.prove(b, depth + 1)? else {
                    return Ok(None);
                };
                let rule = RuleInstance::Splitting {
                    a: (**a).clone(),
                    b: (**b).clone(),
                    cluster,
                };
                self.builder.apply(pure.clone(), rule, vec![i, j])
            }
            PurityClass::ConjunctivelyNormal => {
                let mut hit = None;
                for (inst, premise) in enumerate_candidates(&pure) {
                    self.stats.candidates_explored += 1;
                    if let Some(i) = self.prove(&premise, depth + 1)? {
                        hit = Some(self.builder.apply(pure.clone(), inst, vec![i]));
                        break;
                    }
                }
                match hit {
                    Some(i) => i,
                    None => return Ok(None),
                }
            }
            PurityClass::Impure(why) => unreachable!("purification left {pure} impure: {why}"),
        };
        Ok(Some(trace.extend_builder(&mut self.builder, pure_index)))
    }
}

/// Decides provability within `budget` search expansions.
pub fn decide_with_budget(c: &Cirquent, budget: u64) -> Result<Verdict, BudgetExceeded> {
    let mut s = Search {
        builder: ProofBuilder::new(),
        proved: HashMap::new(),
        failed: HashSet::new(),
        stats: SearchStats::default(),
        budget,
    };
    Ok(match s.prove(c, 0)? {
        Some(i) => {
            debug_assert_eq!(i, s.builder.len());
            Verdict::Provable(Proof {
                steps: s.builder.into_steps(),
            })
        }
        None => Verdict::Unprovable(s.stats),
    })
}

pub fn decide(c: &Cirquent) -> Verdict {
    decide_with_budget(c, u64::MAX).expect("unbounded search")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::cq;
    use crate::proof::check_proof;

    fn provable(text: &str) -> bool {
        let c = cq(text);
        match decide(&c) {
            Verdict::Provable(p) => {
                check_proof(&p).unwrap();
                assert_eq!(p.conclusion(), Some(&c));
                true
            }
            Verdict::Unprovable(_) => false,
        }
    }

    #[test]
    fn small_verdicts() {
        assert!(provable("top"));
        assert!(!provable("bot"));
        assert!(provable("(top chor.0 bot)"));
        assert!(!provable("(top chand.0 bot)"));
        assert!(provable("((P@1 and P@1) or ~P@2)"));
        assert!(!provable("((P@0 and P@1) or ~P@2)"));
        assert!(provable("((P@0 chand.3 P@1) or ~P@2)"));
        assert!(!provable("P@0"));
        assert!(provable("(P@0 or ~P@0)"));
        assert!(provable("((P@0 chor.1 Q@0) or ~P@0)"));
        assert!(!provable("(P@0 or ~Q@0)"));
    }

    #[test]
    fn blass() {
        assert!(provable(
            "(((~P@1 or ~P@2) and (~P@3 or ~P@4)) or ((P@5 or P@6) and (P@7 or P@8)))"
        ));
    }

    #[test]
    fn budget() {
        let c = cq("(((~P@1 or ~P@2) and (~P@3 or ~P@4)) or ((P@5 or P@6) and (P@7 or P@8)))");
        assert_eq!(decide_with_budget(&c, 1), Err(BudgetExceeded { budget: 1 }));
        assert!(decide_with_budget(&c, 1_000_000).unwrap().is_provable());
        assert!(decide_with_budget(&Cirquent::Top, 1).unwrap().is_provable());
    }
}
