use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use super::FinSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
struct Node {
    children: BTreeMap<u64, usize>,
    terminal: bool,
}

/// A finite collection of finite sets inside `[1, universe_bound]`, stored as a
/// trie keyed by element value with children in ascending order.
#[derive(Clone)]
pub struct SetFamily {
    nodes: Vec<Node>,
    len: usize,
    universe_bound: u64,
}

impl SetFamily {
    pub fn new(universe_bound: u64) -> Self {
        SetFamily {
            nodes: vec![Node::default()],
            len: 0,
            universe_bound,
        }
    }

    pub fn from_sets<I: IntoIterator<Item = FinSet>>(universe_bound: u64, sets: I) -> Result<Self> {
        let mut fam = SetFamily::new(universe_bound);
        for s in sets {
            fam.insert(&s)?;
        }
        Ok(fam)
    }

    pub fn universe_bound(&self) -> u64 {
        self.universe_bound
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns `true` if the set was not already present.
    pub fn insert(&mut self, set: &FinSet) -> Result<bool> {
        if set.max_elem().map_or(false, |m| m > self.universe_bound) {
            return Err(Error::Precondition(format!(
                "{set} lies outside the universe [1, {}]",
                self.universe_bound
            )));
        }
        let mut at = 0;
        for e in set.iter() {
            at = match self.nodes[at].children.get(&e) {
                Some(&next) => next,
                None => {
                    self.nodes.push(Node::default());
                    let id = self.nodes.len() - 1;
                    self.nodes[at].children.insert(e, id);
                    id
                }
            };
        }
        let fresh = !self.nodes[at].terminal;
        self.nodes[at].terminal = true;
        if fresh {
            self.len += 1;
        }
        Ok(fresh)
    }

    pub fn contains(&self, set: &FinSet) -> bool {
        let mut at = 0;
        for e in set.iter() {
            match self.nodes[at].children.get(&e) {
                Some(&next) => at = next,
                None => return false,
            }
        }
        self.nodes[at].terminal
    }

    /// All members in lexicographic order of their element lists.
    pub fn iter(&self) -> impl Iterator<Item = FinSet> + '_ {
        let mut out = Vec::with_capacity(self.len);
        let mut path = Vec::new();
        self.collect(0, &mut path, &mut |p| out.push(FinSet(p.to_vec())));
        out.into_iter()
    }

    fn collect(&self, at: usize, path: &mut Vec<u64>, sink: &mut dyn FnMut(&[u64])) {
        if self.nodes[at].terminal {
            sink(path);
        }
        for (&e, &child) in &self.nodes[at].children {
            path.push(e);
            self.collect(child, path, sink);
            path.pop();
        }
    }

    /// Members contained in `set`.
    pub fn subsets_of(&self, set: &FinSet) -> Vec<FinSet> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.subsets_rec(0, set.as_slice(), &mut path, &mut out);
        out
    }

    fn subsets_rec(&self, at: usize, rest: &[u64], path: &mut Vec<u64>, out: &mut Vec<FinSet>) {
        if self.nodes[at].terminal {
            out.push(FinSet(path.clone()));
        }
        for (i, &e) in rest.iter().enumerate() {
            if let Some(&child) = self.nodes[at].children.get(&e) {
                path.push(e);
                self.subsets_rec(child, &rest[i + 1..], path, out);
                path.pop();
            }
        }
    }

    /// Members containing `set`.
    pub fn supersets_of(&self, set: &FinSet) -> Vec<FinSet> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.supersets_rec(0, set.as_slice(), &mut path, &mut out);
        out
    }

    fn supersets_rec(&self, at: usize, need: &[u64], path: &mut Vec<u64>, out: &mut Vec<FinSet>) {
        if need.is_empty() {
            self.collect(at, path, &mut |p| out.push(FinSet(p.to_vec())));
            return;
        }
        for (&e, &child) in self.nodes[at].children.range(..=need[0]) {
            path.push(e);
            let rest = if e == need[0] { &need[1..] } else { need };
            self.supersets_rec(child, rest, path, out);
            path.pop();
        }
    }

    /// Largest member size, or `None` for the empty family.
    pub fn max_member_len(&self) -> Option<usize> {
        self.iter().map(|s| s.len()).max()
    }

    pub fn is_hereditary(&self) -> bool {
        self.first_hereditary_gap().is_none()
    }

    /// A missing subset of some member, if any. Checking one-element deletions
    /// suffices.
    pub fn first_hereditary_gap(&self) -> Option<FinSet> {
        for member in self.iter() {
            for i in 0..member.len() {
                let mut v = member.as_slice().to_vec();
                v.remove(i);
                let sub = FinSet(v);
                if !self.contains(&sub) {
                    return Some(sub);
                }
            }
        }
        None
    }

    /// All subsets of all members.
    pub fn hereditary_closure(&self) -> SetFamily {
        let mut out = SetFamily::new(self.universe_bound);
        let mut stack: Vec<FinSet> = self.iter().collect();
        while let Some(s) = stack.pop() {
            if out.insert(&s).expect("subsets stay in the universe") {
                for i in 0..s.len() {
                    let mut v = s.as_slice().to_vec();
                    v.remove(i);
                    stack.push(FinSet(v));
                }
            }
        }
        out
    }

    /// Members that are maximal under inclusion.
    pub fn maximal_members(&self) -> Vec<FinSet> {
        self.iter()
            .filter(|m| self.supersets_of(m).len() == 1)
            .collect()
    }

    /// Stable content hash (hex) of the member list.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.universe_bound.to_le_bytes());
        for m in self.iter() {
            h.update(m.to_string().as_bytes());
            h.update(b";");
        }
        let digest = h.finalize();
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl PartialEq for SetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.iter().eq(other.iter())
    }
}

impl Eq for SetFamily {}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    fn fam(b: u64, sets: &[&str]) -> SetFamily {
        SetFamily::from_sets(b, sets.iter().map(|t| s(t))).unwrap()
    }

    #[test]
    fn closure_of_pair() {
        let f = fam(5, &["1,3"]);
        assert_eq!(f.hereditary_closure(), fam(5, &["{}", "1", "3", "1,3"]));
        assert!(!fam(5, &["{}", "2", "2,5"]).is_hereditary());
        assert!(f.hereditary_closure().is_hereditary());
    }

    #[test]
    fn subset_and_superset_queries() {
        let f = fam(9, &["{}", "1", "1,4", "2,4", "1,4,7", "3"]);
        let mut subs = f.subsets_of(&s("1,4,7"));
        subs.sort();
        assert_eq!(subs, vec![s("{}"), s("1"), s("1,4"), s("1,4,7")]);
        let mut sups = f.supersets_of(&s("4"));
        sups.sort();
        assert_eq!(sups, vec![s("1,4"), s("1,4,7"), s("2,4")]);
        assert_eq!(f.supersets_of(&s("{}")).len(), f.len());
        assert_eq!(f.maximal_members(), vec![s("1,4,7"), s("2,4"), s("3")]);
    }

    #[test]
    fn insert_is_idempotent_and_bounded() {
        let mut f = SetFamily::new(4);
        assert!(f.insert(&s("1,2")).unwrap());
        assert!(!f.insert(&s("1,2")).unwrap());
        assert_eq!(f.len(), 1);
        assert!(f.insert(&s("5")).is_err());
        assert!(!f.contains(&s("1")));
    }
}
