//! The Purification rewriter and the pure-form classifier.
//!
//! Purification repeatedly applies the first applicable of eight steps, each
//! at the leftmost surface position where it applies, until none does. Every
//! step is realized by rule applications read from conclusion to premise, and
//! the full sequence is kept as a [`PurifyTrace`].

use std::fmt;

use crate::analysis::{audit, fresh_cluster, surface_walk, LetterAudit};
use crate::calculus::{apply_rule, RuleInstance};
use crate::cirquent::{ChoiceKind, Cirquent, Cluster, Literal, ParKind, Polarity};
use crate::proof::{Derivation, ProofBuilder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PurityClass {
    PureTop,
    PureBot,
    /// `A chand.c B` where neither side contains `chand.c`.
    PureChand(Cluster),
    ConjunctivelyNormal,
    Impure(String),
}

impl PurityClass {
    pub fn is_pure(&self) -> bool {
        !matches!(self, PurityClass::Impure(_))
    }
}

impl fmt::Display for PurityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PurityClass::PureTop => f.write_str("pure (top)"),
            PurityClass::PureBot => f.write_str("pure (bot)"),
            PurityClass::PureChand(c) => write!(f, "pure (chand.{c})"),
            PurityClass::ConjunctivelyNormal => f.write_str("pure (conjunctively normal)"),
            PurityClass::Impure(why) => write!(f, "impure: {why}"),
        }
    }
}

/// Leaves of the maximal `kind`-tree rooted at `c`, with paths relative to `c`.
fn par_leaves(c: &Cirquent, kind: ParKind) -> Vec<(Vec<u8>, &Cirquent)> {
    fn go<'a>(c: &'a Cirquent, kind: ParKind, path: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, &'a Cirquent)>) {
        match c {
            Cirquent::Par(k, a, b) if *k == kind => {
                path.push(0);
                go(a, kind, path, out);
                path.pop();
                path.push(1);
                go(b, kind, path, out);
                path.pop();
            }
            leaf => out.push((path.clone(), leaf)),
        }
    }
    let mut out = Vec::new();
    go(c, kind, &mut Vec::new(), &mut out);
    out
}

/// First pair (by leaf order) of opposite literals over a letter that is
/// pseudoelementary in the whole cirquent.
fn opposite_pseudo_pair(leaves: &[(Vec<u8>, &Cirquent)], au: &LetterAudit) -> Option<(usize, usize)> {
    for i in 0..leaves.len() {
        let Cirquent::Lit(x) = leaves[i].1 else { continue };
        if !au.is_pseudoelementary(&x.letter) {
            continue;
        }
        for (j, (_, leaf)) in leaves.iter().enumerate().skip(i + 1) {
            if let Cirquent::Lit(y) = leaf {
                if y.letter == x.letter && y.polarity != x.polarity {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

pub fn classify(c: &Cirquent) -> PurityClass {
    match c {
        Cirquent::Top => return PurityClass::PureTop,
        Cirquent::Bot => return PurityClass::PureBot,
        Cirquent::Choice(ChoiceKind::Chand, k, a, b) => {
            if !a.contains_choice(ChoiceKind::Chand, *k) && !b.contains_choice(ChoiceKind::Chand, *k) {
                return PurityClass::PureChand(*k);
            }
            return PurityClass::Impure(format!("chand.{k} recurs below the root"));
        }
        _ => {}
    }
    let au = audit(c);
    let conjuncts = par_leaves(c, ParKind::Pand);
    let mut some_not_chand = false;
    for (_, conj) in &conjuncts {
        if conj.is_choice_rooted(ChoiceKind::Chand) {
            continue;
        }
        some_not_chand = true;
        let disjuncts = par_leaves(conj, ParKind::Por);
        if let Some((_, bad)) = disjuncts
            .iter()
            .find(|(_, d)| !matches!(d, Cirquent::Lit(_)) && !d.is_choice_rooted(ChoiceKind::Chor))
        {
            return PurityClass::Impure(format!("disjunct {bad} is neither a literal nor chor-rooted"));
        }
        if let Some((i, j)) = opposite_pseudo_pair(&disjuncts, &au) {
            return PurityClass::Impure(format!(
                "opposite pseudoelementary literals {} and {} in one disjunction",
                disjuncts[i].1, disjuncts[j].1
            ));
        }
    }
    if !some_not_chand {
        return PurityClass::Impure("every conjunct is chand-rooted".into());
    }
    PurityClass::ConjunctivelyNormal
}

/// One rule application made while purifying.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// Which of the eight steps this application belongs to.
    pub step: u8,
    /// Index of the step application (0-based) the entry is part of.
    pub application: usize,
    pub rule: RuleInstance,
    /// The premise, which becomes the next conclusion.
    pub result: Cirquent,
}

/// Rule applications oriented conclusion to premise, starting at `input`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurifyTrace {
    pub input: Cirquent,
    pub entries: Vec<TraceEntry>,
}

/// One application of a purification step, before and after.
#[derive(Debug, Clone, Copy)]
pub struct StepApplication<'a> {
    pub step: u8,
    pub before: &'a Cirquent,
    pub after: &'a Cirquent,
}

impl PurifyTrace {
    pub fn output(&self) -> &Cirquent {
        self.entries.last().map_or(&self.input, |e| &e.result)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn conclusion_of(&self, k: usize) -> &Cirquent {
        if k == 0 {
            &self.input
        } else {
            &self.entries[k - 1].result
        }
    }

    pub fn applications(&self) -> Vec<StepApplication<'_>> {
        let mut out: Vec<StepApplication<'_>> = Vec::new();
        let mut current = None;
        for (k, e) in self.entries.iter().enumerate() {
            if current == Some(e.application) {
                out.last_mut().expect("open application").after = &e.result;
            } else {
                current = Some(e.application);
                out.push(StepApplication {
                    step: e.step,
                    before: self.conclusion_of(k),
                    after: &e.result,
                });
            }
        }
        out
    }

    /// Appends the trace read premise to conclusion, starting from step
    /// `pure_index` that holds the output. Returns the index of the input.
    pub fn extend_builder(&self, b: &mut ProofBuilder, pure_index: usize) -> usize {
        let mut idx = pure_index;
        for k in (0..self.entries.len()).rev() {
            idx = b.apply(self.conclusion_of(k).clone(), self.entries[k].rule.clone(), vec![idx]);
        }
        idx
    }

    /// Derivation of the input from the output as its only hypothesis.
    pub fn derivation(&self) -> Derivation {
        let mut b = ProofBuilder::new();
        let h = b.hypothesis(self.output().clone());
        self.extend_builder(&mut b, h);
        Derivation {
            steps: b.into_steps(),
            hypotheses: [self.output().clone()].into_iter().collect(),
        }
    }
}

type StepCheck<'a> = (u8, &'a dyn Fn(&Cirquent) -> bool);

struct Purifier {
    current: Cirquent,
    trace: PurifyTrace,
    application: usize,
    step: u8,
}

fn child(path: &[u8], side: u8) -> Vec<u8> {
    let mut p = path.to_vec();
    p.push(side);
    p
}

impl Purifier {
    fn at(&self, path: &[u8]) -> Cirquent {
        self.current.at_path(path).expect("tracked path exists").clone()
    }

    fn emit(&mut self, rule: RuleInstance) {
        let premises = apply_rule(&self.current, &rule)
            .unwrap_or_else(|e| panic!("purification emitted an inapplicable {rule}: {e}"));
        let next = premises.into_iter().next().expect("one premise");
        self.current = next.clone();
        self.trace.entries.push(TraceEntry {
            step: self.step,
            application: self.application,
            rule,
            result: next,
        });
    }

    fn first_surface(&self, mut applies: impl FnMut(&Cirquent) -> bool) -> Option<Vec<u8>> {
        let mut found = None;
        surface_walk(&self.current, &mut |node, path| {
            if applies(node) {
                found = Some(path.to_vec());
                false
            } else {
                true
            }
        });
        found
    }

    fn run(&mut self) {
        loop {
            let Some((step, path)) = self.find() else { return };
            self.step = step;
            match step {
                1 => self.step1(&path),
                2 => self.step2(&path),
                3 => self.step3(&path),
                4 => self.step45(&path, ParKind::Por),
                5 => self.step45(&path, ParKind::Pand),
                6 => self.step6(&path),
                7 => self.step7(&path),
                _ => self.step8(),
            }
            self.application += 1;
        }
    }

    fn find(&self) -> Option<(u8, Vec<u8>)> {
        let au = audit(&self.current);
        let checks: [StepCheck<'_>; 7] = [
            (
                1,
                &|n| matches!(n, Cirquent::Par(ParKind::Por, a, b) if a.is_pand() || b.is_pand()),
            ),
            (2, &|n| {
                matches!(n, Cirquent::Par(ParKind::Por, a, b)
                    if a.is_choice_rooted(ChoiceKind::Chand) || b.is_choice_rooted(ChoiceKind::Chand))
            }),
            (3, &|n| {
                n.is_por() && opposite_pseudo_pair(&par_leaves(n, ParKind::Por), &au).is_some()
            }),
            (4, &|n| {
                n.is_por() && par_leaves(n, ParKind::Por).iter().any(|(_, l)| **l == Cirquent::Top)
            }),
            (5, &|n| {
                n.is_pand() && par_leaves(n, ParKind::Pand).iter().any(|(_, l)| **l == Cirquent::Bot)
            }),
            (6, &|n| match n {
                Cirquent::Par(ParKind::Pand, a, b) => **a == Cirquent::Top || **b == Cirquent::Top,
                Cirquent::Par(ParKind::Por, a, b) => **a == Cirquent::Bot || **b == Cirquent::Bot,
                _ => false,
            }),
            (7, &|n| {
                matches!(n, Cirquent::Par(ParKind::Pand, a, b)
                    if a.is_choice_rooted(ChoiceKind::Chand) && b.is_choice_rooted(ChoiceKind::Chand))
            }),
        ];
        for (step, check) in checks {
            if let Some(path) = self.first_surface(check) {
                return Some((step, path));
            }
        }
        if let Cirquent::Choice(ChoiceKind::Chand, k, a, b) = &self.current {
            if a.contains_choice(ChoiceKind::Chand, *k) || b.contains_choice(ChoiceKind::Chand, *k) {
                return Some((8, Vec::new()));
            }
        }
        None
    }

    /// Turns `C or X` at `path` into `X or C`.
    fn commute_por(&mut self, path: &[u8]) {
        if let Cirquent::Par(ParKind::Por, a, b) = self.at(path) {
            self.emit(RuleInstance::PorComm { a: *a, b: *b });
        }
    }

    fn step1(&mut self, path: &[u8]) {
        let Cirquent::Par(_, a, _) = self.at(path) else {
            unreachable!()
        };
        if !a.is_pand() {
            self.commute_por(path);
        }
        let Cirquent::Par(_, ab, c) = self.at(path) else {
            unreachable!()
        };
        let Cirquent::Par(_, a, b) = *ab else { unreachable!() };
        self.emit(RuleInstance::PandDistr { a: *a, b: *b, c: *c });
    }

    fn step2(&mut self, path: &[u8]) {
        let Cirquent::Par(_, a, _) = self.at(path) else {
            unreachable!()
        };
        if !a.is_choice_rooted(ChoiceKind::Chand) {
            self.commute_por(path);
        }
        let Cirquent::Par(_, ab, c) = self.at(path) else {
            unreachable!()
        };
        let Cirquent::Choice(_, cluster, a, b) = *ab else {
            unreachable!()
        };
        self.emit(RuleInstance::ChandDistr {
            a: *a,
            b: *b,
            c: *c,
            cluster,
        });
    }

    /// Brings the two literals next to each other by commuting and
    /// reassociating at their lowest common ancestor, trivializes them and
    /// absorbs the resulting `top` up to `path`.
    fn step3(&mut self, path: &[u8]) {
        let au = audit(&self.current);
        let x = self.at(path);
        let leaves = par_leaves(&x, ParKind::Por);
        let (i, j) = opposite_pseudo_pair(&leaves, &au).expect("step 3 applies");
        let lca = leaves[i].0.iter().zip(&leaves[j].0).take_while(|(p, q)| p == q).count();
        let mut n_path = [path, &leaves[i].0[..lca]].concat();
        let (Cirquent::Lit(mut t1), Cirquent::Lit(mut t2)) = (leaves[i].1.clone(), leaves[j].1.clone()) else {
            unreachable!()
        };
        let holds = |c: &Cirquent, t: &Literal| {
            par_leaves(c, ParKind::Por)
                .iter()
                .any(|(_, l)| matches!(l, Cirquent::Lit(m) if m == t))
        };
        // Invariant: the node at n_path is `L or R` with t1 among L's
        // disjuncts and t2 among R's.
        loop {
            let Cirquent::Par(ParKind::Por, l, r) = self.at(&n_path) else {
                unreachable!()
            };
            match (*l, *r) {
                (Cirquent::Par(ParKind::Por, l1, l2), _) => {
                    if !holds(&l2, &t1) {
                        self.emit(RuleInstance::PorComm { a: *l1, b: *l2 });
                    }
                    let Cirquent::Par(_, l, r) = self.at(&n_path) else {
                        unreachable!()
                    };
                    let Cirquent::Par(_, l1, l2) = *l else { unreachable!() };
                    self.emit(RuleInstance::PorAssoc { a: *l1, b: *l2, c: *r });
                    n_path = child(&n_path, 1);
                }
                (l, r @ Cirquent::Par(ParKind::Por, ..)) => {
                    self.emit(RuleInstance::PorComm { a: l, b: r });
                    std::mem::swap(&mut t1, &mut t2);
                }
                (l, r) => {
                    if t1.polarity == Polarity::Negative {
                        self.emit(RuleInstance::PorComm { a: l, b: r });
                        std::mem::swap(&mut t1, &mut t2);
                    }
                    self.emit(RuleInstance::Trivialization {
                        q: t1.letter.clone(),
                        a: t1.cluster,
                        b: t2.cluster,
                    });
                    break;
                }
            }
        }
        self.absorb(n_path, path, ParKind::Por);
    }

    /// Propagates the dominating constant at `from` up to `to` inside a
    /// `kind`-tree.
    fn absorb(&mut self, mut from: Vec<u8>, to: &[u8], kind: ParKind) {
        let dominant = match kind {
            ParKind::Por => Cirquent::Top,
            ParKind::Pand => Cirquent::Bot,
        };
        while from.len() > to.len() {
            from.pop();
            let Cirquent::Par(_, a, b) = self.at(&from) else {
                unreachable!()
            };
            let other = if *b == dominant {
                *a
            } else {
                self.emit(match kind {
                    ParKind::Por => RuleInstance::PorComm { a: *a, b: *b.clone() },
                    ParKind::Pand => RuleInstance::PandComm { a: *a, b: *b.clone() },
                });
                *b
            };
            self.emit(match kind {
                ParKind::Por => RuleInstance::PorDom { a: other },
                ParKind::Pand => RuleInstance::PandDom { a: other },
            });
        }
    }

    fn step45(&mut self, path: &[u8], kind: ParKind) {
        let dominant = match kind {
            ParKind::Por => Cirquent::Top,
            ParKind::Pand => Cirquent::Bot,
        };
        let x = self.at(path);
        let leaves = par_leaves(&x, kind);
        let (rel, _) = leaves.iter().find(|(_, l)| **l == dominant).expect("step applies");
        self.absorb([path, rel].concat(), path, kind);
    }

    fn step6(&mut self, path: &[u8]) {
        let Cirquent::Par(kind, a, b) = self.at(path) else {
            unreachable!()
        };
        let unit = match kind {
            ParKind::Pand => Cirquent::Top,
            ParKind::Por => Cirquent::Bot,
        };
        let rest = if *b == unit {
            *a
        } else {
            self.emit(match kind {
                ParKind::Pand => RuleInstance::PandComm { a: *a, b: *b.clone() },
                ParKind::Por => RuleInstance::PorComm { a: *a, b: *b.clone() },
            });
            *b
        };
        self.emit(match kind {
            ParKind::Pand => RuleInstance::PandIdent { a: rest },
            ParKind::Por => RuleInstance::PorIdent { a: rest },
        });
    }

    fn step7(&mut self, path: &[u8]) {
        let Cirquent::Par(_, l, r) = self.at(path) else {
            unreachable!()
        };
        let (Cirquent::Choice(_, ca, a, b), Cirquent::Choice(_, cb, c, d)) = (*l, *r) else {
            unreachable!()
        };
        let cc = fresh_cluster(&self.current);
        self.emit(RuleInstance::Quadrilemma {
            a: *a,
            b: *b,
            c: *c,
            d: *d,
            ca,
            cb,
            cc,
        });
    }

    fn step8(&mut self) {
        let Cirquent::Choice(_, k, a, b) = self.current.clone() else {
            unreachable!()
        };
        let first_inner = |side: &Cirquent| {
            side.nodes()
                .find(|n| matches!(n, Cirquent::Choice(ChoiceKind::Chand, m, ..) if *m == k))
                .cloned()
        };
        if let Some(Cirquent::Choice(_, _, e, f)) = first_inner(&a) {
            self.emit(RuleInstance::LeftCleansing {
                y0: *a,
                c: *b,
                a: *e,
                b: *f,
                cluster: k,
            });
        } else if let Some(Cirquent::Choice(_, _, e, f)) = first_inner(&b) {
            self.emit(RuleInstance::RightCleansing {
                c: *a,
                y0: *b,
                a: *e,
                b: *f,
                cluster: k,
            });
        }
    }
}

/// The purification of `c` and the rule applications leading to it.
pub fn purify(c: &Cirquent) -> (Cirquent, PurifyTrace) {
    let mut p = Purifier {
        current: c.clone(),
        trace: PurifyTrace {
            input: c.clone(),
            entries: Vec::new(),
        },
        application: 0,
        step: 0,
    };
    p.run();
    (p.current, p.trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::cq;
    use crate::proof::check_derivation;

    #[test]
    fn classification() {
        assert_eq!(classify(&cq("top")), PurityClass::PureTop);
        assert_eq!(classify(&cq("bot")), PurityClass::PureBot);
        assert_eq!(
            classify(&cq("((P@0 or ~P@2) chand.3 (P@1 or ~P@2))")),
            PurityClass::PureChand(3)
        );
        assert!(!classify(&cq("((P@1 or ~P@2) and (P@1 or ~P@2))")).is_pure());
        assert_eq!(
            classify(&cq("((P@0 or ~P@2) and (P@1 or ~P@2))")),
            PurityClass::ConjunctivelyNormal
        );
        assert_eq!(classify(&cq("P@0")), PurityClass::ConjunctivelyNormal);
        assert_eq!(classify(&cq("(P@0 chor.1 Q@0)")), PurityClass::ConjunctivelyNormal);
        assert!(!classify(&cq("((P@0 chand.1 Q@0) and (P@0 chand.2 Q@0))")).is_pure());
        assert_eq!(
            classify(&cq("((P@0 chand.1 Q@0) and ((P@0 chand.2 Q@0) and ~R@0))")),
            PurityClass::ConjunctivelyNormal
        );
        assert!(!classify(&cq("(P@0 chand.1 (Q@0 chand.1 R@0))")).is_pure());
        assert!(!classify(&cq("(P@0 or top)")).is_pure());
        assert!(!classify(&cq("((P@0 chor.1 Q@0) or (R@1 and R@2))")).is_pure());
    }

    fn check_trace(c: &Cirquent) -> (Cirquent, PurifyTrace) {
        let (pure, trace) = purify(c);
        assert_eq!(trace.output(), &pure);
        check_derivation(&trace.derivation()).unwrap();
        assert!(classify(&pure).is_pure(), "{pure} is {}", classify(&pure));
        (pure, trace)
    }

    #[test]
    fn distribution_steps() {
        let (pure, trace) = check_trace(&cq("((P@0 and P@1) or ~P@2)"));
        assert_eq!(pure, cq("((P@0 or ~P@2) and (P@1 or ~P@2))"));
        assert_eq!(trace.applications().len(), 1);
        assert_eq!(trace.applications()[0].step, 1);
        let (pure, _) = check_trace(&cq("((P@0 chand.3 P@1) or ~P@2)"));
        assert_eq!(pure, cq("((P@0 or ~P@2) chand.3 (P@1 or ~P@2))"));
        let (pure, _) = check_trace(&cq("(~P@2 or (P@0 and P@1))"));
        assert_eq!(pure, cq("((P@0 or ~P@2) and (P@1 or ~P@2))"));
    }

    #[test]
    fn trivializing_to_top() {
        let (pure, trace) = check_trace(&cq("((P@1 and P@1) or ~P@2)"));
        assert_eq!(pure, Cirquent::Top);
        let steps: Vec<u8> = trace.applications().iter().map(|a| a.step).collect();
        assert_eq!(steps, vec![1, 3, 6]);
    }

    #[test]
    fn deep_pair_is_brought_together() {
        let (pure, _) = check_trace(&cq("((~Q@4 or (P@1 or R@0)) or (S@0 or (R@0 or Q@3)))"));
        assert_eq!(pure, Cirquent::Top);
        let (pure, _) = check_trace(&cq("(((P@0 or ~R@0) or Q@1) and ~Q@2)"));
        assert_eq!(pure, cq("(((P@0 or ~R@0) or Q@1) and ~Q@2)"));
    }

    #[test]
    fn constants() {
        assert_eq!(
            check_trace(&cq("((P@0 and (Q@0 and bot)) or R@0)")).0,
            cq("((P@0 or R@0) and ((Q@0 or R@0) and R@0))")
        );
        assert_eq!(check_trace(&cq("(R@0 and (Q@0 and bot))")).0, Cirquent::Bot);
        assert_eq!(check_trace(&cq("(top and (P@0 or bot))")).0, cq("P@0"));
        assert_eq!(check_trace(&cq("(P@0 or (Q@0 or top))")).0, Cirquent::Top);
    }

    #[test]
    fn quadrilemma_and_cleansing() {
        let (pure, trace) = check_trace(&cq("((P@0 chand.1 Q@0) and (R@0 chand.2 S@0))"));
        assert!(matches!(classify(&pure), PurityClass::PureChand(3)));
        assert_eq!(trace.applications()[0].step, 7);
        let (pure, trace) = check_trace(&cq("((P@0 chand.1 Q@0) chand.1 R@0)"));
        assert_eq!(pure, cq("(P@0 chand.1 R@0)"));
        assert_eq!(trace.applications()[0].step, 8);
    }

    #[test]
    fn pure_input_is_fixed() {
        let c = cq("((P@0 or ~P@2) and (P@1 or ~P@2))");
        let (pure, trace) = purify(&c);
        assert_eq!(pure, c);
        assert!(trace.is_empty());
        assert!(trace.applications().is_empty());
    }
}
