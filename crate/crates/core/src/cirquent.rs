//! Cirquent syntax: letters, literals, and the cirquent tree itself.

use std::fmt;
use std::sync::Arc;

/// Clusters tag literals (shared runs) and choice connectives (shared choices).
pub type Cluster = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    General,
    Elementary,
}

/// A game letter. The case of the first character fixes the kind: uppercase
/// letters are general, lowercase letters are elementary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<str>);

impl Letter {
    /// Builds a letter, returning `None` if `name` is not an identifier
    /// (`[A-Za-z][A-Za-z0-9_]*`).
    pub fn new(name: &str) -> Option<Letter> {
        let mut chars = name.chars();
        let first = chars.next()?;
        if !first.is_ascii_alphabetic() {
            return None;
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        Some(Letter(Arc::from(name)))
    }

    /// Panicking constructor for names known to be valid.
    pub fn named(name: &str) -> Letter {
        Letter::new(name).unwrap_or_else(|| panic!("invalid letter name {name:?}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> LetterKind {
        if self.0.starts_with(|c: char| c.is_ascii_uppercase()) {
            LetterKind::General
        } else {
            LetterKind::Elementary
        }
    }

    pub fn is_general(&self) -> bool {
        self.kind() == LetterKind::General
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// `P^a` or `¬P^a`. Elementary literals always carry cluster 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub letter: Letter,
    pub cluster: Cluster,
    pub polarity: Polarity,
}

impl Literal {
    pub fn new(letter: Letter, cluster: Cluster, polarity: Polarity) -> Literal {
        let cluster = if letter.is_general() { cluster } else { 0 };
        Literal {
            letter,
            cluster,
            polarity,
        }
    }

    pub fn pos(letter: &str, cluster: Cluster) -> Literal {
        Literal::new(Letter::named(letter), cluster, Polarity::Positive)
    }

    pub fn neg(letter: &str, cluster: Cluster) -> Literal {
        Literal::new(Letter::named(letter), cluster, Polarity::Negative)
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    /// Same letter and cluster, other polarity.
    pub fn opposite_polarity(&self) -> Literal {
        Literal {
            letter: self.letter.clone(),
            cluster: self.cluster,
            polarity: self.polarity.flip(),
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polarity == Polarity::Negative {
            f.write_str("~")?;
        }
        if self.letter.is_general() {
            write!(f, "{}@{}", self.letter, self.cluster)
        } else {
            write!(f, "{}", self.letter)
        }
    }
}

/// Parallel connectives: `∧` and `∨`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParKind {
    Pand,
    Por,
}

/// Choice connectives: `⊓` (environment chooses) and `⊔` (machine chooses).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChoiceKind {
    Chand,
    Chor,
}

impl ChoiceKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ChoiceKind::Chand => "chand",
            ChoiceKind::Chor => "chor",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cirquent {
    Top,
    Bot,
    Lit(Literal),
    Par(ParKind, Box<Cirquent>, Box<Cirquent>),
    Choice(ChoiceKind, Cluster, Box<Cirquent>, Box<Cirquent>),
}

impl Cirquent {
    pub fn lit(literal: Literal) -> Cirquent {
        Cirquent::Lit(literal)
    }

    pub fn pand(a: Cirquent, b: Cirquent) -> Cirquent {
        Cirquent::Par(ParKind::Pand, Box::new(a), Box::new(b))
    }

    pub fn por(a: Cirquent, b: Cirquent) -> Cirquent {
        Cirquent::Par(ParKind::Por, Box::new(a), Box::new(b))
    }

    pub fn chand(cluster: Cluster, a: Cirquent, b: Cirquent) -> Cirquent {
        Cirquent::Choice(ChoiceKind::Chand, cluster, Box::new(a), Box::new(b))
    }

    pub fn chor(cluster: Cluster, a: Cirquent, b: Cirquent) -> Cirquent {
        Cirquent::Choice(ChoiceKind::Chor, cluster, Box::new(a), Box::new(b))
    }

    pub fn par(kind: ParKind, a: Cirquent, b: Cirquent) -> Cirquent {
        Cirquent::Par(kind, Box::new(a), Box::new(b))
    }

    pub fn choice(kind: ChoiceKind, cluster: Cluster, a: Cirquent, b: Cirquent) -> Cirquent {
        Cirquent::Choice(kind, cluster, Box::new(a), Box::new(b))
    }

    /// Immediate subtrees, left to right.
    pub fn children(&self) -> Option<(&Cirquent, &Cirquent)> {
        match self {
            Cirquent::Par(_, a, b) | Cirquent::Choice(_, _, a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.node_count() + b.node_count(),
            None => 1,
        }
    }

    pub fn is_por(&self) -> bool {
        matches!(self, Cirquent::Par(ParKind::Por, _, _))
    }

    pub fn is_pand(&self) -> bool {
        matches!(self, Cirquent::Par(ParKind::Pand, _, _))
    }

    pub fn is_choice_rooted(&self, kind: ChoiceKind) -> bool {
        matches!(self, Cirquent::Choice(k, _, _, _) if *k == kind)
    }

    /// Pre-order iterator over all nodes, including `self`.
    pub fn nodes(&self) -> Nodes<'_> {
        Nodes { stack: vec![self] }
    }

    /// All literal occurrences in left-to-right order.
    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.nodes().filter_map(|n| match n {
            Cirquent::Lit(l) => Some(l),
            _ => None,
        })
    }

    pub fn contains(&self, sub: &Cirquent) -> bool {
        self.nodes().any(|n| n == sub)
    }

    /// Whether a choice connective of this kind and cluster occurs anywhere.
    pub fn contains_choice(&self, kind: ChoiceKind, cluster: Cluster) -> bool {
        self.nodes()
            .any(|n| matches!(n, Cirquent::Choice(k, c, _, _) if *k == kind && *c == cluster))
    }

    pub fn mentions_letter(&self, letter: &Letter) -> bool {
        self.literals().any(|l| &l.letter == letter)
    }

    /// Whether any elementary letter occurs.
    pub fn has_elementary(&self) -> bool {
        self.literals().any(|l| !l.letter.is_general())
    }

    /// Replaces every occurrence of `from` by `to`, top-down. Occurrences of a
    /// subtree never overlap, so the result does not depend on traversal order.
    pub fn replace_all(&self, from: &Cirquent, to: &Cirquent) -> Cirquent {
        self.map_top_down(&mut |node| (node == from).then(|| to.clone()))
    }

    /// Top-down rewrite: where `f` returns `Some`, the node is replaced and its
    /// replacement is not visited further.
    pub fn map_top_down(&self, f: &mut impl FnMut(&Cirquent) -> Option<Cirquent>) -> Cirquent {
        if let Some(replacement) = f(self) {
            return replacement;
        }
        match self {
            Cirquent::Par(k, a, b) => Cirquent::par(*k, a.map_top_down(f), b.map_top_down(f)),
            Cirquent::Choice(k, c, a, b) => Cirquent::choice(*k, *c, a.map_top_down(f), b.map_top_down(f)),
            leaf => leaf.clone(),
        }
    }

    /// The subtree at a path of child indices (0 = left, 1 = right).
    pub fn at_path(&self, path: &[u8]) -> Option<&Cirquent> {
        let mut node = self;
        for &step in path {
            let (a, b) = node.children()?;
            node = if step == 0 { a } else { b };
        }
        Some(node)
    }
}

pub struct Nodes<'a> {
    stack: Vec<&'a Cirquent>,
}

impl<'a> Iterator for Nodes<'a> {
    type Item = &'a Cirquent;

    fn next(&mut self) -> Option<&'a Cirquent> {
        let node = self.stack.pop()?;
        if let Some((a, b)) = node.children() {
            self.stack.push(b);
            self.stack.push(a);
        }
        Some(node)
    }
}

impl From<Literal> for Cirquent {
    fn from(l: Literal) -> Cirquent {
        Cirquent::Lit(l)
    }
}

impl fmt::Display for Cirquent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cirquent::Top => f.write_str("top"),
            Cirquent::Bot => f.write_str("bot"),
            Cirquent::Lit(l) => write!(f, "{l}"),
            Cirquent::Par(kind, a, b) => {
                let op = match kind {
                    ParKind::Pand => "and",
                    ParKind::Por => "or",
                };
                write!(f, "({a} {op} {b})")
            }
            Cirquent::Choice(kind, c, a, b) => write!(f, "({a} {}.{c} {b})", kind.keyword()),
        }
    }
}

impl fmt::Debug for Cirquent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical fully parenthesized text.
pub fn print_cirquent(c: &Cirquent) -> String {
    c.to_string()
}
