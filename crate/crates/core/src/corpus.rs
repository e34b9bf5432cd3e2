//! Worked proofs and a list of provable cirquents used by tests, the CLI and
//! the HTTP service.
//!
//! Proofs are written bottom-up as chains of rule instances. Blocks of
//! commutativity and associativity steps are produced by [`Chain::reshape`],
//! a small breadth-first search confined to one position.

use std::collections::{HashMap, VecDeque};

use crate::calculus::{apply_rule, RuleInstance};
use crate::cirquent::{Cirquent, Letter, ParKind};
use crate::parse::cq;
use crate::proof::{Proof, ProofBuilder};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub cirquent: Cirquent,
    pub proof: Proof,
}

/// A proof under construction, from the conclusion towards the axiom.
struct Chain {
    cirquents: Vec<Cirquent>,
    rules: Vec<RuleInstance>,
}

fn shuffles_below(c: &Cirquent, path: &[u8], out: &mut Vec<RuleInstance>) {
    let node = c.at_path(path).expect("path exists");
    fn go(node: &Cirquent, out: &mut Vec<RuleInstance>) {
        if let Cirquent::Par(kind, a, b) = node {
            let (a, b) = (&**a, &**b);
            out.push(match kind {
                ParKind::Por => RuleInstance::PorComm {
                    a: a.clone(),
                    b: b.clone(),
                },
                ParKind::Pand => RuleInstance::PandComm {
                    a: a.clone(),
                    b: b.clone(),
                },
            });
            if let Cirquent::Par(k, a1, a2) = a {
                if k == kind {
                    let (a, b, c) = ((**a1).clone(), (**a2).clone(), b.clone());
                    out.push(match kind {
                        ParKind::Por => RuleInstance::PorAssoc { a, b, c },
                        ParKind::Pand => RuleInstance::PandAssoc { a, b, c },
                    });
                }
            }
            go(a, out);
            go(b, out);
        }
    }
    go(node, out);
}

fn replace_at(c: &Cirquent, path: &[u8], with: &Cirquent) -> Cirquent {
    match path.split_first() {
        None => with.clone(),
        Some((&side, rest)) => match c {
            Cirquent::Par(k, a, b) if side == 0 => Cirquent::par(*k, replace_at(a, rest, with), (**b).clone()),
            Cirquent::Par(k, a, b) => Cirquent::par(*k, (**a).clone(), replace_at(b, rest, with)),
            Cirquent::Choice(k, cl, a, b) if side == 0 => {
                Cirquent::choice(*k, *cl, replace_at(a, rest, with), (**b).clone())
            }
            Cirquent::Choice(k, cl, a, b) => Cirquent::choice(*k, *cl, (**a).clone(), replace_at(b, rest, with)),
            _ => panic!("path leaves the cirquent"),
        },
    }
}

impl Chain {
    fn new(conclusion: &str) -> Chain {
        Chain {
            cirquents: vec![cq(conclusion)],
            rules: Vec::new(),
        }
    }

    fn current(&self) -> &Cirquent {
        self.cirquents.last().expect("non-empty")
    }

    fn rule(mut self, inst: RuleInstance) -> Chain {
        let premise = apply_rule(self.current(), &inst)
            .unwrap_or_else(|e| panic!("{inst} does not apply to {}: {e}", self.current()))
            .remove(0);
        self.cirquents.push(premise);
        self.rules.push(inst);
        self
    }

    /// Asserts that the chain has reached `text`.
    fn at(self, text: &str) -> Chain {
        assert_eq!(self.current(), &cq(text), "transcription diverged");
        self
    }

    /// Commutes and reassociates below `path` until the subtree there is
    /// `target`, leaving everything else unchanged.
    fn reshape(mut self, path: &[u8], target: &str) -> Chain {
        let start = self.current().clone();
        let goal = replace_at(&start, path, &cq(target));
        let mut parent: HashMap<Cirquent, (Cirquent, RuleInstance)> = HashMap::new();
        let mut queue = VecDeque::from([start.clone()]);
        let mut seen = std::collections::HashSet::from([start.clone()]);
        while let Some(c) = queue.pop_front() {
            if c == goal {
                break;
            }
            let mut ops = Vec::new();
            shuffles_below(&c, path, &mut ops);
            for op in ops {
                let next = apply_rule(&c, &op).expect("shuffle applies").remove(0);
                if next.at_path(path).is_some() && seen.insert(next.clone()) {
                    parent.insert(next.clone(), (c.clone(), op));
                    queue.push_back(next);
                }
            }
            assert!(seen.len() < 200_000, "reshape search exploded");
        }
        assert!(seen.contains(&goal), "{target} is not reachable at {path:?}");
        let mut ops = Vec::new();
        let mut c = goal;
        while c != start {
            let (prev, op) = parent.remove(&c).expect("search tree");
            ops.push(op);
            c = prev;
        }
        for op in ops.into_iter().rev() {
            self = self.rule(op);
        }
        self
    }

    /// The finished proof; the chain must have reached `top`.
    fn finish(self) -> Proof {
        assert_eq!(self.current(), &Cirquent::Top, "chain does not reach the axiom");
        let mut b = ProofBuilder::new();
        let mut idx = b.axiom();
        for k in (0..self.rules.len()).rev() {
            idx = b.apply(self.cirquents[k].clone(), self.rules[k].clone(), vec![idx]);
        }
        Proof { steps: b.into_steps() }
    }
}

fn l(name: &str) -> Letter {
    Letter::named(name)
}

fn por_comm(a: &str, b: &str) -> RuleInstance {
    RuleInstance::PorComm { a: cq(a), b: cq(b) }
}

fn pand_comm(a: &str, b: &str) -> RuleInstance {
    RuleInstance::PandComm { a: cq(a), b: cq(b) }
}

fn pand_distr(a: &str, b: &str, c: &str) -> RuleInstance {
    RuleInstance::PandDistr {
        a: cq(a),
        b: cq(b),
        c: cq(c),
    }
}

fn trivialize(q: &str, a: u32, b: u32) -> RuleInstance {
    RuleInstance::Trivialization { q: l(q), a, b }
}

/// `(P@1 and P@1) or ~P@2`: the pseudoelementary variant of an unprovable
/// cirquent.
pub fn pseudoelementary_proof() -> Proof {
    Chain::new("((P@1 and P@1) or ~P@2)")
        .rule(pand_distr("P@1", "P@1", "~P@2"))
        .at("((P@1 or ~P@2) and (P@1 or ~P@2))")
        .rule(trivialize("P", 1, 2))
        .at("(top and top)")
        .rule(RuleInstance::PandIdent { a: Cirquent::Top })
        .finish()
}

/// `(P@0 chand.3 P@1) or ~P@2`, proved by splitting.
pub fn splitting_proof() -> Proof {
    let mut b = ProofBuilder::new();
    let ax0 = b.axiom();
    let left = b.apply(cq("(P@0 or ~P@2)"), trivialize("P", 0, 2), vec![ax0]);
    let ax1 = b.axiom();
    let right = b.apply(cq("(P@1 or ~P@2)"), trivialize("P", 1, 2), vec![ax1]);
    let split = b.apply(
        cq("((P@0 or ~P@2) chand.3 (P@1 or ~P@2))"),
        RuleInstance::Splitting {
            a: cq("(P@0 or ~P@2)"),
            b: cq("(P@1 or ~P@2)"),
            cluster: 3,
        },
        vec![left, right],
    );
    b.apply(
        cq("((P@0 chand.3 P@1) or ~P@2)"),
        RuleInstance::ChandDistr {
            a: cq("P@0"),
            b: cq("P@1"),
            c: cq("~P@2"),
            cluster: 3,
        },
        vec![split],
    );
    Proof { steps: b.into_steps() }
}

pub const BLASS: &str = "(((~P@1 or ~P@2) and (~P@3 or ~P@4)) or ((P@5 or P@6) and (P@7 or P@8)))";

/// The cirquentized Blass principle, through three Matchings.
pub fn blass_proof() -> Proof {
    let x = "(~P@1 or ~Q@2)";
    let y = "(~R@3 or ~S@4)";
    let a = "(P@5 or R@6)";
    let bb = "(Q@7 or S@8)";
    let z = format!("({a} and {bb})");
    let matching = |pa, nb, q: &str| RuleInstance::Matching {
        p: l("P"),
        a: pa,
        b: nb,
        q: l(q),
        c: pa,
        d: nb,
    };
    Chain::new(BLASS)
        .rule(matching(6, 3, "R"))
        .rule(matching(7, 2, "Q"))
        .rule(matching(8, 4, "S"))
        .at(&format!("(({x} and {y}) or {z})"))
        .rule(pand_distr(x, y, &z))
        .at(&format!("(({x} or {z}) and ({y} or {z}))"))
        .rule(por_comm(x, &z))
        .rule(pand_distr(a, bb, x))
        .rule(por_comm(a, x))
        .rule(por_comm(bb, x))
        .at(&format!("((({x} or {a}) and ({x} or {bb})) and ({y} or {z}))"))
        .reshape(&[0, 0], "((P@5 or ~P@1) or (~Q@2 or R@6))")
        .rule(trivialize("P", 5, 1))
        .at(&format!(
            "(((top or (~Q@2 or R@6)) and ({x} or {bb})) and ({y} or {z}))"
        ))
        .rule(por_comm("top", "(~Q@2 or R@6)"))
        .rule(RuleInstance::PorDom { a: cq("(~Q@2 or R@6)") })
        .at(&format!("((top and ({x} or {bb})) and ({y} or {z}))"))
        .rule(pand_comm("top", &format!("({x} or {bb})")))
        .rule(RuleInstance::PandIdent {
            a: cq(&format!("({x} or {bb})")),
        })
        .at(&format!("(({x} or {bb}) and ({y} or {z}))"))
        .reshape(&[0], "((~P@1 or S@8) or (Q@7 or ~Q@2))")
        .rule(trivialize("Q", 7, 2))
        .at(&format!("(((~P@1 or S@8) or top) and ({y} or {z}))"))
        .rule(RuleInstance::PorDom { a: cq("(~P@1 or S@8)") })
        .rule(pand_comm("top", &format!("({y} or {z})")))
        .rule(RuleInstance::PandIdent {
            a: cq(&format!("({y} or {z})")),
        })
        .at(&format!("({y} or {z})"))
        .rule(por_comm(y, &z))
        .rule(pand_distr(a, bb, y))
        .rule(por_comm(a, y))
        .rule(por_comm(bb, y))
        .at(&format!("(({y} or {a}) and ({y} or {bb}))"))
        .reshape(&[0], "((P@5 or ~S@4) or (R@6 or ~R@3))")
        .rule(trivialize("R", 6, 3))
        .at(&format!("(((P@5 or ~S@4) or top) and ({y} or {bb}))"))
        .rule(RuleInstance::PorDom { a: cq("(P@5 or ~S@4)") })
        .rule(pand_comm("top", &format!("({y} or {bb})")))
        .rule(RuleInstance::PandIdent {
            a: cq(&format!("({y} or {bb})")),
        })
        .at(&format!("({y} or {bb})"))
        .reshape(&[], "((S@8 or ~S@4) or (Q@7 or ~R@3))")
        .rule(trivialize("S", 8, 4))
        .at("(top or (Q@7 or ~R@3))")
        .rule(por_comm("top", "(Q@7 or ~R@3)"))
        .rule(RuleInstance::PorDom { a: cq("(Q@7 or ~R@3)") })
        .finish()
}

pub fn examples() -> Vec<CorpusEntry> {
    let entry = |name, description, proof: Proof| CorpusEntry {
        name,
        description,
        cirquent: proof.conclusion().expect("non-empty").clone(),
        proof,
    };
    vec![
        entry(
            "pseudoelementary",
            "a disjunction over a conjunction of one repeated literal, settled by distribution and trivialization",
            pseudoelementary_proof(),
        ),
        entry(
            "splitting",
            "a choice conjunction distributed and split into two trivializable branches",
            splitting_proof(),
        ),
        entry(
            "blass",
            "a cirquent form of Blass's principle, settled after three matchings",
            blass_proof(),
        ),
    ]
}

/// Cirquents with known proofs, for soundness tournaments.
pub const PROVABLE: &[&str] = &[
    "top",
    "(top chor.0 bot)",
    "(bot chor.2 top)",
    "(P@0 or ~P@0)",
    "(P@1 or ~P@2)",
    "(~P@2 or P@1)",
    "((P@1 and P@1) or ~P@2)",
    "((P@0 chand.3 P@1) or ~P@2)",
    BLASS,
    "((P@0 chor.1 Q@0) or ~P@0)",
    "((Q@0 chor.1 P@0) or ~P@0)",
    "(~P@0 or (P@0 chor.1 Q@0))",
    "((P@0 or ~P@1) and (Q@0 or ~Q@1))",
    "((P@0 and Q@0) or (~P@1 or ~Q@1))",
    "((P@0 or Q@0) or (~P@1 and ~Q@1))",
    "((P@0 chand.1 Q@0) or (~P@0 chor.2 ~Q@0))",
    "(((P@0 chand.1 Q@0) and R@0) or (~R@1 or (~P@2 chor.2 ~Q@3)))",
    "((P@0 or ~P@1) chand.0 (Q@0 or ~Q@1))",
    "(P@1 or (~P@2 or Q@0))",
    "((P@0 and ~P@1) or (P@2 or ~P@3))",
    "((~P@1 or ~P@2) or (P@3 and P@4))",
    "((P@0 or ~P@1) chor.2 bot)",
];
