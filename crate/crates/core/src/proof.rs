//! Derivations, proofs, the checker and the line-oriented proof file format.
//!
//! ```text
//! cl18-proof v1
//! 1: top ; axiom
//! 2: (top and top) ; pand-ident from 1 with A=top
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::calculus::{apply_rule, rule_params, Param, ParamKind, RuleInstance};
use crate::cirquent::{Cirquent, Letter};
use crate::parse::parse_cirquent;

pub const PROOF_HEADER: &str = "cl18-proof v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom,
    /// An unjustified leaf; only admitted in derivations that list it.
    Hypothesis,
    Apply {
        rule: RuleInstance,
        premises: Vec<usize>,
    },
}

/// One line of a derivation. Indices are 1-based and sequential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub index: usize,
    pub cirquent: Cirquent,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<ProofStep>,
    pub hypotheses: BTreeSet<Cirquent>,
}

/// A derivation from the axiom alone; the last step is the proven cirquent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Cirquent> {
        self.steps.last().map(|s| &s.cirquent)
    }

    pub fn step(&self, index: usize) -> Option<&ProofStep> {
        index.checked_sub(1).and_then(|i| self.steps.get(i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct CheckError {
    pub step: usize,
    pub reason: String,
}

fn fail<T>(step: usize, reason: impl Into<String>) -> Result<T, CheckError> {
    Err(CheckError {
        step,
        reason: reason.into(),
    })
}

/// Recomputes every rule application and compares it with the referenced
/// premise steps.
pub fn check_derivation(d: &Derivation) -> Result<(), CheckError> {
    for (pos, step) in d.steps.iter().enumerate() {
        let n = pos + 1;
        if step.index != n {
            return fail(n, format!("expected index {n}, found {}", step.index));
        }
        match &step.justification {
            Justification::Axiom => {
                if step.cirquent != Cirquent::Top {
                    return fail(n, "an axiom must be `top`");
                }
            }
            Justification::Hypothesis => {
                if !d.hypotheses.contains(&step.cirquent) {
                    return fail(n, format!("{} is not a hypothesis", step.cirquent));
                }
            }
            Justification::Apply { rule, premises } => {
                if premises.len() != rule.premise_count() {
                    return fail(
                        n,
                        format!(
                            "{} takes {} premise(s), found {}",
                            rule.id(),
                            rule.premise_count(),
                            premises.len()
                        ),
                    );
                }
                if let Some(&bad) = premises.iter().find(|&&i| i == 0 || i >= n) {
                    return fail(n, format!("premise {bad} is not an earlier step"));
                }
                let expected = apply_rule(&step.cirquent, rule).or_else(|e| fail(n, e.to_string()))?;
                for (k, (&i, want)) in premises.iter().zip(&expected).enumerate() {
                    let got = &d.steps[i - 1].cirquent;
                    if got != want {
                        return fail(n, format!("premise {} should be {want}, but step {i} is {got}", k + 1));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn check_proof(p: &Proof) -> Result<(), CheckError> {
    if p.steps.is_empty() {
        return fail(0, "a proof needs at least one step");
    }
    check_derivation(&Derivation {
        steps: p.steps.clone(),
        hypotheses: BTreeSet::new(),
    })
}

/// Accumulates steps with sequential indices.
#[derive(Debug, Clone, Default)]
pub struct ProofBuilder {
    steps: Vec<ProofStep>,
}

impl ProofBuilder {
    pub fn new() -> ProofBuilder {
        ProofBuilder::default()
    }

    fn push(&mut self, cirquent: Cirquent, justification: Justification) -> usize {
        let index = self.steps.len() + 1;
        self.steps.push(ProofStep {
            index,
            cirquent,
            justification,
        });
        index
    }

    pub fn axiom(&mut self) -> usize {
        self.push(Cirquent::Top, Justification::Axiom)
    }

    pub fn hypothesis(&mut self, c: Cirquent) -> usize {
        self.push(c, Justification::Hypothesis)
    }

    pub fn apply(&mut self, conclusion: Cirquent, rule: RuleInstance, premises: Vec<usize>) -> usize {
        self.push(conclusion, Justification::Apply { rule, premises })
    }

    pub fn cirquent(&self, index: usize) -> &Cirquent {
        &self.steps[index - 1].cirquent
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.steps.truncate(len);
    }

    pub fn into_steps(self) -> Vec<ProofStep> {
        self.steps
    }
}

// ---- file format ----

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ProofFormatError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ; ", self.index, self.cirquent)?;
        match &self.justification {
            Justification::Axiom => write!(f, "axiom"),
            Justification::Hypothesis => write!(f, "hypothesis"),
            Justification::Apply { rule, premises } => {
                let from: Vec<String> = premises.iter().map(ToString::to_string).collect();
                let params: Vec<String> = rule.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "{} from {} with {}", rule.id(), from.join(","), params.join("; "))
            }
        }
    }
}

pub fn format_steps(steps: &[ProofStep]) -> String {
    let mut out = String::from(PROOF_HEADER);
    out.push('\n');
    for s in steps {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

pub fn format_proof(p: &Proof) -> String {
    format_steps(&p.steps)
}

fn parse_param(kind: ParamKind, text: &str) -> Option<Param> {
    let text = text.trim();
    match kind {
        ParamKind::Cirquent => parse_cirquent(text, true).ok().map(Param::Cirquent),
        ParamKind::Cluster => text.parse().ok().map(Param::Cluster),
        ParamKind::Letter => Letter::new(text).map(Param::Letter),
    }
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let text = text.trim();
    match text {
        "axiom" => return Ok(Justification::Axiom),
        "hypothesis" => return Ok(Justification::Hypothesis),
        _ => {}
    }
    let (head, params_text) = match text.split_once(" with ") {
        Some((h, p)) => (h.trim(), p),
        None => (text, ""),
    };
    let Some((id, from)) = head.split_once(" from ") else {
        return Err(format!("expected `<rule> from <i>[,<j>] with ...`, found {head:?}"));
    };
    let id = id.trim();
    let keys = rule_params(id).ok_or_else(|| format!("unknown rule `{id}`"))?;
    let premises = from
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad premise index {s:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut values: Vec<(&str, Param)> = Vec::new();
    for item in params_text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((k, v)) = item.split_once('=') else {
            return Err(format!("expected `key=value`, found {item:?}"));
        };
        let k = k.trim();
        let Some(&(key, kind)) = keys.iter().find(|(name, _)| *name == k) else {
            return Err(format!("`{id}` has no parameter `{k}`"));
        };
        if values.iter().any(|(seen, _)| *seen == key) {
            return Err(format!("parameter `{k}` given twice"));
        }
        let value = parse_param(kind, v).ok_or_else(|| format!("bad value for `{k}`: {v:?}"))?;
        values.push((key, value));
    }
    if let Some((missing, _)) = keys.iter().find(|(k, _)| !values.iter().any(|(seen, _)| seen == k)) {
        return Err(format!("missing parameter `{missing}`"));
    }
    let get = |k: &str| values.iter().find(|(key, _)| *key == k).map(|(_, v)| v.clone());
    let rule = RuleInstance::from_params(id, &get).ok_or_else(|| format!("bad parameters for `{id}`"))?;
    Ok(Justification::Apply { rule, premises })
}

/// Parses proof-file text into steps. Indices are read as written; the
/// checker validates them.
pub fn parse_steps(text: &str) -> Result<Vec<ProofStep>, ProofFormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, PROOF_HEADER)) => {}
        Some((line, other)) => {
            return Err(ProofFormatError {
                line,
                msg: format!("expected header `{PROOF_HEADER}`, found {other:?}"),
            })
        }
        None => {
            return Err(ProofFormatError {
                line: 1,
                msg: "empty proof file".into(),
            })
        }
    }
    let mut steps = Vec::new();
    for (line, l) in lines {
        let err = |msg: String| ProofFormatError { line, msg };
        let (num, rest) = l.split_once(':').ok_or_else(|| err("expected `<n>: ...`".into()))?;
        let index = num
            .trim()
            .parse()
            .map_err(|_| err(format!("bad step number {num:?}")))?;
        let (cq_text, just) = rest
            .split_once(';')
            .ok_or_else(|| err("expected `; <justification>`".into()))?;
        let cirquent = parse_cirquent(cq_text, true).map_err(|e| err(e.to_string()))?;
        let justification = parse_justification(just).map_err(err)?;
        steps.push(ProofStep {
            index,
            cirquent,
            justification,
        });
    }
    Ok(steps)
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofFormatError> {
    parse_steps(text).map(|steps| Proof { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::cq;

    fn example_52() -> Proof {
        let mut b = ProofBuilder::new();
        let ax = b.axiom();
        let s2 = b.apply(
            cq("(top and top)"),
            RuleInstance::PandIdent { a: Cirquent::Top },
            vec![ax],
        );
        let s3 = b.apply(
            cq("((P@1 or ~P@2) and (P@1 or ~P@2))"),
            RuleInstance::Trivialization {
                q: Letter::named("P"),
                a: 1,
                b: 2,
            },
            vec![s2],
        );
        b.apply(
            cq("((P@1 and P@1) or ~P@2)"),
            RuleInstance::PandDistr {
                a: cq("P@1"),
                b: cq("P@1"),
                c: cq("~P@2"),
            },
            vec![s3],
        );
        Proof { steps: b.into_steps() }
    }

    #[test]
    fn checks_small_proof() {
        let p = example_52();
        assert_eq!(check_proof(&p), Ok(()));
        assert_eq!(p.conclusion(), Some(&cq("((P@1 and P@1) or ~P@2)")));
    }

    #[test]
    fn single_axiom_is_a_proof() {
        let mut b = ProofBuilder::new();
        b.axiom();
        assert!(check_proof(&Proof { steps: b.into_steps() }).is_ok());
        assert!(check_proof(&Proof { steps: vec![] }).is_err());
    }

    #[test]
    fn dangling_premise() {
        let mut p = example_52();
        if let Justification::Apply { premises, .. } = &mut p.steps[1].justification {
            premises[0] = 7;
        }
        assert_eq!(check_proof(&p).unwrap_err().step, 2);
    }

    #[test]
    fn swapped_clusters_are_rejected() {
        let mut p = example_52();
        p.steps[2].cirquent = cq("((P@1 or ~P@2) and (P@0 or ~P@2))");
        if let Justification::Apply { rule, .. } = &mut p.steps[2].justification {
            *rule = RuleInstance::Trivialization {
                q: Letter::named("P"),
                a: 0,
                b: 2,
            };
        }
        let err = check_proof(&p).unwrap_err();
        assert_eq!(err.step, 3);
    }

    #[test]
    fn bad_axiom_and_hypotheses() {
        let mut b = ProofBuilder::new();
        b.hypothesis(cq("P@1"));
        let steps = b.into_steps();
        assert!(check_proof(&Proof { steps: steps.clone() }).is_err());
        let d = Derivation {
            steps,
            hypotheses: BTreeSet::from([cq("P@1")]),
        };
        assert!(check_derivation(&d).is_ok());
        let fake_axiom = ProofStep {
            index: 1,
            cirquent: cq("bot"),
            justification: Justification::Axiom,
        };
        assert!(check_proof(&Proof {
            steps: vec![fake_axiom]
        })
        .is_err());
    }

    #[test]
    fn file_round_trip() {
        let p = example_52();
        let text = format_proof(&p);
        assert!(text.starts_with("cl18-proof v1\n1: top ; axiom\n"));
        assert!(text.contains("3: ((P@1 or ~P@2) and (P@1 or ~P@2)) ; trivialization from 2 with Q=P; a=1; b=2"));
        assert_eq!(parse_proof(&text).unwrap(), p);
    }

    #[test]
    fn file_errors() {
        assert!(parse_proof("").is_err());
        assert!(parse_proof("cl18-proof v2\n").is_err());
        assert!(parse_proof("cl18-proof v1\n1: top ; frobnicate from 1 with A=top\n").is_err());
        assert!(parse_proof("cl18-proof v1\n1: top ; por-ident from 1\n").is_err());
        assert!(parse_proof("cl18-proof v1\n1: top ; por-ident from 1 with A=top; Z=top\n").is_err());
        let e = parse_proof("cl18-proof v1\n1: top ; axiom\n2: (top and ; axiom\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
