//! Structural queries: subcirquent occurrences, surface subcirquents and the
//! per-letter cluster audit that decides pseudoelementarity.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use crate::cirquent::{ChoiceKind, Cirquent, Cluster, Letter, Literal, Polarity};

/// Every distinct subtree of `c` with its number of occurrences, in order of
/// first pre-order occurrence. `c` itself is included.
pub fn subcirquents(c: &Cirquent) -> IndexMap<&Cirquent, usize> {
    let mut out: IndexMap<&Cirquent, usize> = IndexMap::new();
    for node in c.nodes() {
        *out.entry(node).or_insert(0) += 1;
    }
    out
}

/// Subtrees with at least one occurrence not strictly below a choice
/// connective, deduplicated, in pre-order.
pub fn surface_subcirquents(c: &Cirquent) -> Vec<&Cirquent> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    surface_walk(c, &mut |node, _| {
        if seen.insert(node) {
            out.push(node);
        }
        true
    });
    out
}

/// Pre-order walk over surface positions, with each node's path. The visitor
/// returns `false` to stop the walk.
pub(crate) fn surface_walk<'a>(c: &'a Cirquent, visit: &mut impl FnMut(&'a Cirquent, &[u8]) -> bool) {
    fn go<'a>(node: &'a Cirquent, path: &mut Vec<u8>, visit: &mut impl FnMut(&'a Cirquent, &[u8]) -> bool) -> bool {
        if !visit(node, path) {
            return false;
        }
        if let Cirquent::Par(_, a, b) = node {
            path.push(0);
            let cont = go(a, path, visit);
            path.pop();
            if !cont {
                return false;
            }
            path.push(1);
            let cont = go(b, path, visit);
            path.pop();
            return cont;
        }
        true
    }
    go(c, &mut Vec::new(), visit);
}

/// Clusters in which a letter occurs, split by polarity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LetterUsage {
    pub positive: BTreeSet<Cluster>,
    pub negative: BTreeSet<Cluster>,
}

impl LetterUsage {
    /// At most one positive and at most one negative cluster.
    pub fn is_pseudoelementary(&self) -> bool {
        self.positive.len() <= 1 && self.negative.len() <= 1
    }

    fn clusters(&self, polarity: Polarity) -> &BTreeSet<Cluster> {
        match polarity {
            Polarity::Positive => &self.positive,
            Polarity::Negative => &self.negative,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LetterAudit {
    pub letters: BTreeMap<Letter, LetterUsage>,
    pub chand_clusters: BTreeSet<Cluster>,
    pub chor_clusters: BTreeSet<Cluster>,
}

impl LetterAudit {
    pub fn usage(&self, letter: &Letter) -> Option<&LetterUsage> {
        self.letters.get(letter)
    }

    /// `false` for letters that do not occur.
    pub fn is_pseudoelementary(&self, letter: &Letter) -> bool {
        self.letters.get(letter).is_some_and(LetterUsage::is_pseudoelementary)
    }

    pub fn is_non_pseudoelementary(&self, letter: &Letter) -> bool {
        self.letters.get(letter).is_some_and(|u| !u.is_pseudoelementary())
    }

    pub fn occurs(&self, literal: &Literal) -> bool {
        self.letters
            .get(&literal.letter)
            .is_some_and(|u| u.clusters(literal.polarity).contains(&literal.cluster))
    }

    pub fn choice_clusters(&self, kind: ChoiceKind) -> &BTreeSet<Cluster> {
        match kind {
            ChoiceKind::Chand => &self.chand_clusters,
            ChoiceKind::Chor => &self.chor_clusters,
        }
    }

    /// Number of distinct literals whose letter is not pseudoelementary.
    pub fn non_pseudoelementary_literal_count(&self) -> usize {
        self.letters
            .values()
            .filter(|u| !u.is_pseudoelementary())
            .map(|u| u.positive.len() + u.negative.len())
            .sum()
    }

    /// Every cluster number used by a literal or a connective.
    pub fn all_clusters(&self) -> BTreeSet<Cluster> {
        let mut all: BTreeSet<Cluster> = self.chand_clusters.union(&self.chor_clusters).copied().collect();
        for u in self.letters.values() {
            all.extend(&u.positive);
            all.extend(&u.negative);
        }
        all
    }
}

pub fn audit(c: &Cirquent) -> LetterAudit {
    let mut audit = LetterAudit::default();
    for node in c.nodes() {
        match node {
            Cirquent::Lit(l) => {
                let usage = audit.letters.entry(l.letter.clone()).or_default();
                match l.polarity {
                    Polarity::Positive => usage.positive.insert(l.cluster),
                    Polarity::Negative => usage.negative.insert(l.cluster),
                };
            }
            Cirquent::Choice(ChoiceKind::Chand, cl, _, _) => {
                audit.chand_clusters.insert(*cl);
            }
            Cirquent::Choice(ChoiceKind::Chor, cl, _, _) => {
                audit.chor_clusters.insert(*cl);
            }
            _ => {}
        }
    }
    audit
}

/// Least natural number not used as any cluster in `c`.
pub fn fresh_cluster(c: &Cirquent) -> Cluster {
    let used = audit(c).all_clusters();
    (0..).find(|n| !used.contains(n)).expect("clusters are unbounded")
}

/// Fresh general letter: the first of `A`..`Z` not in `used`, then `Q0`, `Q1`, ...
pub fn fresh_letter<'a>(used: impl IntoIterator<Item = &'a Letter>) -> Letter {
    let used: BTreeSet<&str> = used.into_iter().map(Letter::name).collect();
    for c in 'A'..='Z' {
        let name = c.to_string();
        if !used.contains(name.as_str()) {
            return Letter::named(&name);
        }
    }
    (0..)
        .map(|i| format!("Q{i}"))
        .find(|n| !used.contains(n.as_str()))
        .map(|n| Letter::named(&n))
        .expect("letters are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::cq;

    #[test]
    fn single_literal_subcirquents() {
        let c = cq("P@1");
        let subs = subcirquents(&c);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[&c], 1);
    }

    #[test]
    fn duplicate_occurrences_are_counted() {
        let c = cq("((P@1 and P@1) or ~P@2)");
        assert_eq!(subcirquents(&c)[&cq("P@1")], 2);
        let c = cq("(bot or bot)");
        let subs = subcirquents(&c);
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[&Cirquent::Bot], 2);
        assert_eq!(subs[&c], 1);
    }

    #[test]
    fn surface_excludes_choice_scopes() {
        let c = cq("((P@1 chand.3 P@2) or Q@1)");
        let surface = surface_subcirquents(&c);
        assert!(surface.contains(&&c));
        assert!(surface.contains(&&cq("(P@1 chand.3 P@2)")));
        assert!(surface.contains(&&cq("Q@1")));
        assert!(!surface.contains(&&cq("P@1")));

        let c = cq("(P@1 chor.2 P@1)");
        assert!(!surface_subcirquents(&c).contains(&&cq("P@1")));
    }

    #[test]
    fn surface_of_choice_free_is_everything() {
        let c = cq("((P@1 and ~P@2) or (top and P@1))");
        let subs = subcirquents(&c);
        let surface = surface_subcirquents(&c);
        assert_eq!(surface.len(), subs.len());
    }

    #[test]
    fn audit_pseudoelementary() {
        let a = audit(&cq("((P@1 and P@1) or ~P@2)"));
        let p = Letter::named("P");
        let u = a.usage(&p).unwrap();
        assert_eq!(u.positive, BTreeSet::from([1]));
        assert_eq!(u.negative, BTreeSet::from([2]));
        assert!(a.is_pseudoelementary(&p));

        let a = audit(&cq("((P@0 and P@1) or ~P@2)"));
        assert_eq!(a.usage(&p).unwrap().positive, BTreeSet::from([0, 1]));
        assert!(a.is_non_pseudoelementary(&p));
        assert_eq!(a.non_pseudoelementary_literal_count(), 3);

        assert_eq!(audit(&Cirquent::Top), LetterAudit::default());
    }

    #[test]
    fn choice_cluster_sets() {
        let a = audit(&cq("((P@1 chand.3 P@2) chor.1 (top chand.0 bot))"));
        assert_eq!(a.chand_clusters, BTreeSet::from([0, 3]));
        assert_eq!(a.chor_clusters, BTreeSet::from([1]));
        assert_eq!(a.all_clusters(), BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn fresh_names() {
        assert_eq!(fresh_cluster(&cq("(P@0 chand.1 P@3)")), 2);
        let used: Vec<Letter> = ('A'..='Z').map(|c| Letter::named(&c.to_string())).collect();
        assert_eq!(fresh_letter(&used).name(), "Q0");
        assert_eq!(fresh_letter(&[Letter::named("A")]).name(), "B");
    }
}
