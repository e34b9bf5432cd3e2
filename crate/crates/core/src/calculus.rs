//! The inference rules, applied in the conclusion-to-premise direction.
//!
//! Every rule instance carries all of its parameters, so the premises are a
//! function of the conclusion and the instance. Each schema rewrites every
//! occurrence of its pattern and requires at least one to exist.

use std::fmt;

use thiserror::Error;

use crate::analysis::{audit, fresh_letter};
use crate::cirquent::{ChoiceKind, Cirquent, Cluster, Letter, Literal, Polarity};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleInstance {
    PorComm {
        a: Cirquent,
        b: Cirquent,
    },
    PandComm {
        a: Cirquent,
        b: Cirquent,
    },
    PorAssoc {
        a: Cirquent,
        b: Cirquent,
        c: Cirquent,
    },
    PandAssoc {
        a: Cirquent,
        b: Cirquent,
        c: Cirquent,
    },
    PorIdent {
        a: Cirquent,
    },
    PandIdent {
        a: Cirquent,
    },
    PorDom {
        a: Cirquent,
    },
    PandDom {
        a: Cirquent,
    },
    PandDistr {
        a: Cirquent,
        b: Cirquent,
        c: Cirquent,
    },
    ChandDistr {
        a: Cirquent,
        b: Cirquent,
        c: Cirquent,
        cluster: Cluster,
    },
    LeftCleansing {
        y0: Cirquent,
        c: Cirquent,
        a: Cirquent,
        b: Cirquent,
        cluster: Cluster,
    },
    RightCleansing {
        c: Cirquent,
        y0: Cirquent,
        a: Cirquent,
        b: Cirquent,
        cluster: Cluster,
    },
    Splitting {
        a: Cirquent,
        b: Cirquent,
        cluster: Cluster,
    },
    Trivialization {
        q: Letter,
        a: Cluster,
        b: Cluster,
    },
    Quadrilemma {
        a: Cirquent,
        b: Cirquent,
        c: Cirquent,
        d: Cirquent,
        ca: Cluster,
        cb: Cluster,
        cc: Cluster,
    },
    LeftChoosing {
        cluster: Cluster,
    },
    RightChoosing {
        cluster: Cluster,
    },
    Matching {
        p: Letter,
        a: Cluster,
        b: Cluster,
        q: Letter,
        c: Cluster,
        d: Cluster,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("pattern {0} does not occur in the conclusion")]
    PatternAbsent(String),
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
}

/// A parameter value as written in proof files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Cirquent(Cirquent),
    Cluster(Cluster),
    Letter(Letter),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Cirquent(c) => write!(f, "{c}"),
            Param::Cluster(n) => write!(f, "{n}"),
            Param::Letter(l) => write!(f, "{l}"),
        }
    }
}

/// Kind of value each parameter key takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Cirquent,
    Cluster,
    Letter,
}

pub const RULE_IDS: [&str; 18] = [
    "por-comm",
    "pand-comm",
    "por-assoc",
    "pand-assoc",
    "por-ident",
    "pand-ident",
    "por-dom",
    "pand-dom",
    "pand-distr",
    "chand-distr",
    "left-cleansing",
    "right-cleansing",
    "splitting",
    "trivialization",
    "quadrilemma",
    "left-choosing",
    "right-choosing",
    "matching",
];

/// Parameter keys of a rule, in the order they are printed.
pub fn rule_params(id: &str) -> Option<&'static [(&'static str, ParamKind)]> {
    use ParamKind::*;
    Some(match id {
        "por-comm" | "pand-comm" => &[("A", Cirquent), ("B", Cirquent)],
        "por-assoc" | "pand-assoc" | "pand-distr" => &[("A", Cirquent), ("B", Cirquent), ("C", Cirquent)],
        "por-ident" | "pand-ident" | "por-dom" | "pand-dom" => &[("A", Cirquent)],
        "chand-distr" => &[("A", Cirquent), ("B", Cirquent), ("C", Cirquent), ("c", Cluster)],
        "left-cleansing" => &[
            ("Y0", Cirquent),
            ("C", Cirquent),
            ("A", Cirquent),
            ("B", Cirquent),
            ("c", Cluster),
        ],
        "right-cleansing" => &[
            ("C", Cirquent),
            ("Y0", Cirquent),
            ("A", Cirquent),
            ("B", Cirquent),
            ("c", Cluster),
        ],
        "splitting" => &[("A", Cirquent), ("B", Cirquent), ("c", Cluster)],
        "trivialization" => &[("Q", Letter), ("a", Cluster), ("b", Cluster)],
        "quadrilemma" => &[
            ("A", Cirquent),
            ("B", Cirquent),
            ("C", Cirquent),
            ("D", Cirquent),
            ("a", Cluster),
            ("b", Cluster),
            ("c", Cluster),
        ],
        "left-choosing" | "right-choosing" => &[("c", Cluster)],
        "matching" => &[
            ("P", Letter),
            ("a", Cluster),
            ("b", Cluster),
            ("Q", Letter),
            ("c", Cluster),
            ("d", Cluster),
        ],
        _ => return None,
    })
}

impl RuleInstance {
    pub fn id(&self) -> &'static str {
        use RuleInstance::*;
        match self {
            PorComm { .. } => "por-comm",
            PandComm { .. } => "pand-comm",
            PorAssoc { .. } => "por-assoc",
            PandAssoc { .. } => "pand-assoc",
            PorIdent { .. } => "por-ident",
            PandIdent { .. } => "pand-ident",
            PorDom { .. } => "por-dom",
            PandDom { .. } => "pand-dom",
            PandDistr { .. } => "pand-distr",
            ChandDistr { .. } => "chand-distr",
            LeftCleansing { .. } => "left-cleansing",
            RightCleansing { .. } => "right-cleansing",
            Splitting { .. } => "splitting",
            Trivialization { .. } => "trivialization",
            Quadrilemma { .. } => "quadrilemma",
            LeftChoosing { .. } => "left-choosing",
            RightChoosing { .. } => "right-choosing",
            Matching { .. } => "matching",
        }
    }

    pub fn premise_count(&self) -> usize {
        if matches!(self, RuleInstance::Splitting { .. }) {
            2
        } else {
            1
        }
    }

    /// Whether premise and conclusion denote the same game under every
    /// interpretation.
    pub fn is_game_identity(&self) -> bool {
        use RuleInstance::*;
        matches!(
            self,
            PorComm { .. }
                | PandComm { .. }
                | PorAssoc { .. }
                | PandAssoc { .. }
                | PorIdent { .. }
                | PandIdent { .. }
                | PorDom { .. }
                | PandDom { .. }
                | PandDistr { .. }
                | ChandDistr { .. }
                | LeftCleansing { .. }
                | RightCleansing { .. }
        )
    }

    /// Parameters keyed as in proof files, in printing order.
    pub fn params(&self) -> Vec<(&'static str, Param)> {
        use Param as V;
        use RuleInstance::*;
        let c = |x: &Cirquent| V::Cirquent(x.clone());
        match self {
            PorComm { a, b } | PandComm { a, b } => vec![("A", c(a)), ("B", c(b))],
            PorAssoc { a, b, c: cc } | PandAssoc { a, b, c: cc } | PandDistr { a, b, c: cc } => {
                vec![("A", c(a)), ("B", c(b)), ("C", c(cc))]
            }
            PorIdent { a } | PandIdent { a } | PorDom { a } | PandDom { a } => vec![("A", c(a))],
            ChandDistr { a, b, c: cc, cluster } => {
                vec![("A", c(a)), ("B", c(b)), ("C", c(cc)), ("c", V::Cluster(*cluster))]
            }
            LeftCleansing {
                y0,
                c: cc,
                a,
                b,
                cluster,
            } => vec![
                ("Y0", c(y0)),
                ("C", c(cc)),
                ("A", c(a)),
                ("B", c(b)),
                ("c", V::Cluster(*cluster)),
            ],
            RightCleansing {
                c: cc,
                y0,
                a,
                b,
                cluster,
            } => vec![
                ("C", c(cc)),
                ("Y0", c(y0)),
                ("A", c(a)),
                ("B", c(b)),
                ("c", V::Cluster(*cluster)),
            ],
            Splitting { a, b, cluster } => vec![("A", c(a)), ("B", c(b)), ("c", V::Cluster(*cluster))],
            Trivialization { q, a, b } => vec![
                ("Q", V::Letter(q.clone())),
                ("a", V::Cluster(*a)),
                ("b", V::Cluster(*b)),
            ],
            Quadrilemma {
                a,
                b,
                c: cc,
                d,
                ca,
                cb,
                cc: ccl,
            } => vec![
                ("A", c(a)),
                ("B", c(b)),
                ("C", c(cc)),
                ("D", c(d)),
                ("a", V::Cluster(*ca)),
                ("b", V::Cluster(*cb)),
                ("c", V::Cluster(*ccl)),
            ],
            LeftChoosing { cluster } | RightChoosing { cluster } => vec![("c", V::Cluster(*cluster))],
            Matching { p, a, b, q, c: cl, d } => vec![
                ("P", V::Letter(p.clone())),
                ("a", V::Cluster(*a)),
                ("b", V::Cluster(*b)),
                ("Q", V::Letter(q.clone())),
                ("c", V::Cluster(*cl)),
                ("d", V::Cluster(*d)),
            ],
        }
    }

    /// Inverse of [`params`](Self::params). Keys are looked up by name; the
    /// caller has already checked the key set against [`rule_params`].
    pub fn from_params(id: &str, get: &dyn Fn(&str) -> Option<Param>) -> Option<RuleInstance> {
        let cq = |k: &str| match get(k)? {
            Param::Cirquent(c) => Some(c),
            _ => None,
        };
        let cl = |k: &str| match get(k)? {
            Param::Cluster(n) => Some(n),
            _ => None,
        };
        let le = |k: &str| match get(k)? {
            Param::Letter(l) => Some(l),
            _ => None,
        };
        use RuleInstance::*;
        Some(match id {
            "por-comm" => PorComm {
                a: cq("A")?,
                b: cq("B")?,
            },
            "pand-comm" => PandComm {
                a: cq("A")?,
                b: cq("B")?,
            },
            "por-assoc" => PorAssoc {
                a: cq("A")?,
                b: cq("B")?,
                c: cq("C")?,
            },
            "pand-assoc" => PandAssoc {
                a: cq("A")?,
                b: cq("B")?,
                c: cq("C")?,
            },
            "por-ident" => PorIdent { a: cq("A")? },
            "pand-ident" => PandIdent { a: cq("A")? },
            "por-dom" => PorDom { a: cq("A")? },
            "pand-dom" => PandDom { a: cq("A")? },
            "pand-distr" => PandDistr {
                a: cq("A")?,
                b: cq("B")?,
                c: cq("C")?,
            },
            "chand-distr" => ChandDistr {
                a: cq("A")?,
                b: cq("B")?,
                c: cq("C")?,
                cluster: cl("c")?,
            },
            "left-cleansing" => LeftCleansing {
                y0: cq("Y0")?,
                c: cq("C")?,
                a: cq("A")?,
                b: cq("B")?,
                cluster: cl("c")?,
            },
            "right-cleansing" => RightCleansing {
                c: cq("C")?,
                y0: cq("Y0")?,
                a: cq("A")?,
                b: cq("B")?,
                cluster: cl("c")?,
            },
            "splitting" => Splitting {
                a: cq("A")?,
                b: cq("B")?,
                cluster: cl("c")?,
            },
            "trivialization" => Trivialization {
                q: le("Q")?,
                a: cl("a")?,
                b: cl("b")?,
            },
            "quadrilemma" => Quadrilemma {
                a: cq("A")?,
                b: cq("B")?,
                c: cq("C")?,
                d: cq("D")?,
                ca: cl("a")?,
                cb: cl("b")?,
                cc: cl("c")?,
            },
            "left-choosing" => LeftChoosing { cluster: cl("c")? },
            "right-choosing" => RightChoosing { cluster: cl("c")? },
            "matching" => Matching {
                p: le("P")?,
                a: cl("a")?,
                b: cl("b")?,
                q: le("Q")?,
                c: cl("c")?,
                d: cl("d")?,
            },
            _ => return None,
        })
    }
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{} with {}", self.id(), params.join("; "))
    }
}

/// Replaces every `⊔ᶜ` node by its chosen side, recursing into the choice so
/// that nested `⊔ᶜ` nodes are resolved too.
pub fn choose(c: &Cirquent, cluster: Cluster, side: u8) -> Cirquent {
    c.map_top_down(&mut |node| match node {
        Cirquent::Choice(ChoiceKind::Chor, k, a, b) if *k == cluster => {
            Some(choose(if side == 0 { a } else { b }, cluster, side))
        }
        _ => None,
    })
}

fn rewrite(conclusion: &Cirquent, from: Cirquent, to: Cirquent) -> Result<Vec<Cirquent>, RuleError> {
    if !conclusion.contains(&from) {
        return Err(RuleError::PatternAbsent(from.to_string()));
    }
    Ok(vec![conclusion.replace_all(&from, &to)])
}

fn side(ok: bool, msg: impl FnOnce() -> String) -> Result<(), RuleError> {
    if ok {
        Ok(())
    } else {
        Err(RuleError::SideConditionViolated(msg()))
    }
}

/// Premises of `conclusion` under `inst`.
pub fn apply_rule(conclusion: &Cirquent, inst: &RuleInstance) -> Result<Vec<Cirquent>, RuleError> {
    use Cirquent as C;
    use RuleInstance::*;
    match inst {
        PorComm { a, b } => rewrite(conclusion, C::por(a.clone(), b.clone()), C::por(b.clone(), a.clone())),
        PandComm { a, b } => rewrite(conclusion, C::pand(a.clone(), b.clone()), C::pand(b.clone(), a.clone())),
        PorAssoc { a, b, c } => rewrite(
            conclusion,
            C::por(C::por(a.clone(), b.clone()), c.clone()),
            C::por(a.clone(), C::por(b.clone(), c.clone())),
        ),
        PandAssoc { a, b, c } => rewrite(
            conclusion,
            C::pand(C::pand(a.clone(), b.clone()), c.clone()),
            C::pand(a.clone(), C::pand(b.clone(), c.clone())),
        ),
        PorIdent { a } => rewrite(conclusion, C::por(a.clone(), C::Bot), a.clone()),
        PandIdent { a } => rewrite(conclusion, C::pand(a.clone(), C::Top), a.clone()),
        PorDom { a } => rewrite(conclusion, C::por(a.clone(), C::Top), C::Top),
        PandDom { a } => rewrite(conclusion, C::pand(a.clone(), C::Bot), C::Bot),
        PandDistr { a, b, c } => rewrite(
            conclusion,
            C::por(C::pand(a.clone(), b.clone()), c.clone()),
            C::pand(C::por(a.clone(), c.clone()), C::por(b.clone(), c.clone())),
        ),
        ChandDistr { a, b, c, cluster } => rewrite(
            conclusion,
            C::por(C::chand(*cluster, a.clone(), b.clone()), c.clone()),
            C::chand(*cluster, C::por(a.clone(), c.clone()), C::por(b.clone(), c.clone())),
        ),
        LeftCleansing { y0, c, a, b, cluster } => {
            let inner = C::chand(*cluster, a.clone(), b.clone());
            let pattern = C::chand(*cluster, y0.clone(), c.clone());
            if !conclusion.contains(&pattern) {
                return Err(RuleError::PatternAbsent(pattern.to_string()));
            }
            side(y0.contains(&inner), || format!("{inner} does not occur in {y0}"))?;
            let cleaned = y0.replace_all(&inner, a);
            Ok(vec![
                conclusion.replace_all(&pattern, &C::chand(*cluster, cleaned, c.clone()))
            ])
        }
        RightCleansing { c, y0, a, b, cluster } => {
            let inner = C::chand(*cluster, a.clone(), b.clone());
            let pattern = C::chand(*cluster, c.clone(), y0.clone());
            if !conclusion.contains(&pattern) {
                return Err(RuleError::PatternAbsent(pattern.to_string()));
            }
            side(y0.contains(&inner), || format!("{inner} does not occur in {y0}"))?;
            let cleaned = y0.replace_all(&inner, b);
            Ok(vec![
                conclusion.replace_all(&pattern, &C::chand(*cluster, c.clone(), cleaned))
            ])
        }
        Splitting { a, b, cluster } => {
            let whole = C::chand(*cluster, a.clone(), b.clone());
            if conclusion != &whole {
                return Err(RuleError::PatternAbsent(format!("{whole} as the whole conclusion")));
            }
            side(
                !a.contains_choice(ChoiceKind::Chand, *cluster) && !b.contains_choice(ChoiceKind::Chand, *cluster),
                || format!("chand.{cluster} occurs in a premise"),
            )?;
            Ok(vec![a.clone(), b.clone()])
        }
        Trivialization { q, a, b } => {
            let pattern = C::por(
                Literal::new(q.clone(), *a, Polarity::Positive).into(),
                Literal::new(q.clone(), *b, Polarity::Negative).into(),
            );
            if !conclusion.contains(&pattern) {
                return Err(RuleError::PatternAbsent(pattern.to_string()));
            }
            side(audit(conclusion).is_pseudoelementary(q), || {
                format!("{q} is not pseudoelementary in the conclusion")
            })?;
            Ok(vec![conclusion.replace_all(&pattern, &C::Top)])
        }
        Quadrilemma { a, b, c, d, ca, cb, cc } => {
            let left = C::chand(*ca, a.clone(), b.clone());
            let right = C::chand(*cb, c.clone(), d.clone());
            let pattern = C::pand(left.clone(), right.clone());
            if !conclusion.contains(&pattern) {
                return Err(RuleError::PatternAbsent(pattern.to_string()));
            }
            side(!conclusion.contains_choice(ChoiceKind::Chand, *cc), || {
                format!("chand.{cc} occurs in the conclusion")
            })?;
            let by_a = C::chand(
                *ca,
                C::pand(a.clone(), right.clone()),
                C::pand(b.clone(), right.clone()),
            );
            let by_b = C::chand(*cb, C::pand(left.clone(), c.clone()), C::pand(left, d.clone()));
            Ok(vec![conclusion.replace_all(&pattern, &C::chand(*cc, by_a, by_b))])
        }
        LeftChoosing { cluster } | RightChoosing { cluster } => {
            if !conclusion.contains_choice(ChoiceKind::Chor, *cluster) {
                return Err(RuleError::PatternAbsent(format!("chor.{cluster}")));
            }
            let bit = u8::from(matches!(inst, RightChoosing { .. }));
            Ok(vec![choose(conclusion, *cluster, bit)])
        }
        Matching { p, a, b, q, c, d } => {
            let pa = Literal::new(p.clone(), *a, Polarity::Positive);
            let npb = Literal::new(p.clone(), *b, Polarity::Negative);
            let au = audit(conclusion);
            for l in [&pa, &npb] {
                if !au.occurs(l) {
                    return Err(RuleError::PatternAbsent(l.to_string()));
                }
            }
            side(au.is_non_pseudoelementary(p), || {
                format!("{p} is pseudoelementary in the conclusion")
            })?;
            side(q.is_general(), || format!("{q} is not a general letter"))?;
            side(!conclusion.mentions_letter(q), || {
                format!("{q} occurs in the conclusion")
            })?;
            let qc = Cirquent::from(Literal::new(q.clone(), *c, Polarity::Positive));
            let nqd = Cirquent::from(Literal::new(q.clone(), *d, Polarity::Negative));
            Ok(vec![conclusion.map_top_down(&mut |node| match node {
                Cirquent::Lit(l) if *l == pa => Some(qc.clone()),
                Cirquent::Lit(l) if *l == npb => Some(nqd.clone()),
                _ => None,
            })])
        }
    }
}

/// Choosing and Matching instances applicable to `c`, each with its premise,
/// in canonical order: Choosing by cluster then side, Matching by letter then
/// by cluster pair. Matching uses one fresh letter and clusters `0`, `0`.
pub fn enumerate_candidates(c: &Cirquent) -> Vec<(RuleInstance, Cirquent)> {
    let au = audit(c);
    let mut out = Vec::new();
    for &cluster in &au.chor_clusters {
        for inst in [
            RuleInstance::LeftChoosing { cluster },
            RuleInstance::RightChoosing { cluster },
        ] {
            let premise = apply_rule(c, &inst).expect("chor cluster occurs").remove(0);
            out.push((inst, premise));
        }
    }
    let q = fresh_letter(au.letters.keys());
    for (p, usage) in &au.letters {
        if usage.is_pseudoelementary() {
            continue;
        }
        for &a in &usage.positive {
            for &b in &usage.negative {
                let inst = RuleInstance::Matching {
                    p: p.clone(),
                    a,
                    b,
                    q: q.clone(),
                    c: 0,
                    d: 0,
                };
                let premise = apply_rule(c, &inst).expect("matching side conditions hold").remove(0);
                out.push((inst, premise));
            }
        }
    }
    out
}
