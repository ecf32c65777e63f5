//! Finite sets of naturals, set families and membership oracles.

mod oracle;
mod trie;

pub use oracle::{is_spreading_pred, is_spreading_within, restrict, FamilyOracle};
pub use trie::SetFamily;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of positive integers, stored as a strictly increasing list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct FinSet(Vec<u64>);

impl FinSet {
    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::Parse {
                what: "set",
                input: format!("{elements:?}"),
                reason: "elements must be at least 1".into(),
            });
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse {
                what: "set",
                input: format!("{elements:?}"),
                reason: "elements must be strictly increasing".into(),
            });
        }
        Ok(FinSet(elements))
    }

    /// Sorts and deduplicates. Panics on a zero element.
    pub fn from_unsorted(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        assert!(elements.first() != Some(&0), "sets of naturals start at 1");
        FinSet(elements)
    }

    pub fn singleton(n: u64) -> Self {
        assert!(n >= 1);
        FinSet(vec![n])
    }

    /// `{lo, lo+1, …, hi}`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        assert!(lo >= 1);
        FinSet((lo..=hi).collect())
    }

    /// Members of `[1, 64]` encoded as a bitmask (bit `i-1` for element `i`).
    pub fn from_mask(mask: u64) -> Self {
        FinSet((0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
    }

    pub fn to_mask(&self) -> Option<u64> {
        let mut m = 0u64;
        for &e in &self.0 {
            if e > 64 {
                return None;
            }
            m |= 1 << (e - 1);
        }
        Some(m)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_elem(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max_elem(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.0.iter().all(|&e| other.contains(e))
    }

    /// `self ∪ {n}` where `n` exceeds every element.
    pub fn push_above(&self, n: u64) -> FinSet {
        debug_assert!(self.max_elem().map_or(true, |m| m < n));
        let mut v = self.0.clone();
        v.push(n);
        FinSet(v)
    }

    pub fn union(&self, other: &FinSet) -> FinSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FinSet::from_unsorted(v)
    }

    /// `E < F`: either is empty or `max E < min F`.
    pub fn precedes(&self, other: &FinSet) -> bool {
        match (self.max_elem(), other.min_elem()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    /// Contiguous slice `e_i..e_j` (0-based, end exclusive).
    pub fn slice(&self, from: usize, to: usize) -> FinSet {
        FinSet(self.0[from..to].to_vec())
    }

    /// Image under an increasing map given as a lookup.
    pub fn map_through<F: Fn(u64) -> Option<u64>>(&self, f: F) -> Option<FinSet> {
        let v: Option<Vec<u64>> = self.0.iter().map(|&e| f(e)).collect();
        v.map(FinSet)
    }

    /// All subsets, in no particular order. Only sensible for small sets.
    pub fn subsets(&self) -> Vec<FinSet> {
        let n = self.0.len();
        assert!(n < 31, "too many subsets");
        (0u32..1 << n)
            .map(|mask| {
                FinSet(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `3,4,5`, `{3,4,5}`, `{}` and the empty string.
impl FromStr for FinSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if inner.is_empty() {
            return Ok(FinSet::empty());
        }
        let elements = inner
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| Error::Parse {
                    what: "set",
                    input: s.to_string(),
                    reason: format!("`{}` is not a positive integer", t.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FinSet::new(elements).map_err(|_| Error::Parse {
            what: "set",
            input: s.to_string(),
            reason: "elements must be positive and strictly increasing".into(),
        })
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u64>::deserialize(d)?;
        FinSet::new(v).map_err(serde::de::Error::custom)
    }
}

/// A finite prefix of an infinite increasing sequence `M = (m_i)`, inside an
/// explicit universe `[1, universe_bound]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeqView {
    prefix: Vec<u64>,
    universe_bound: u64,
}

impl SeqView {
    pub fn new(prefix: Vec<u64>, universe_bound: u64) -> Result<Self> {
        let ok = prefix.first().map_or(true, |&p| p >= 1)
            && prefix.windows(2).all(|w| w[0] < w[1])
            && prefix.last().map_or(true, |&p| p <= universe_bound);
        if !ok {
            return Err(Error::Parse {
                what: "sequence",
                input: format!("{prefix:?}"),
                reason: format!(
                    "must be strictly increasing within [1, {universe_bound}]"
                ),
            });
        }
        Ok(SeqView {
            prefix,
            universe_bound,
        })
    }

    /// `(1, 2, …, n)`.
    pub fn identity(n: u64) -> Self {
        SeqView {
            prefix: (1..=n).collect(),
            universe_bound: n,
        }
    }

    /// The `len` first terms of `start, start+step, …`.
    pub fn progression(start: u64, step: u64, len: usize) -> Self {
        let prefix: Vec<u64> = (0..len as u64).map(|i| start + i * step).collect();
        let bound = prefix.last().copied().unwrap_or(start);
        SeqView {
            prefix,
            universe_bound: bound,
        }
    }

    /// `(1, 4, 9, …)`.
    pub fn squares(len: usize) -> Self {
        let prefix: Vec<u64> = (1..=len as u64).map(|i| i * i).collect();
        let bound = prefix.last().copied().unwrap_or(1);
        SeqView {
            prefix,
            universe_bound: bound,
        }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn universe_bound(&self) -> u64 {
        self.universe_bound
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    /// `m_i`, 1-based.
    pub fn at(&self, i: u64) -> Option<u64> {
        if i == 0 {
            return None;
        }
        self.prefix.get(i as usize - 1).copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.prefix.binary_search(&n).is_ok()
    }

    /// 1-based position of `n` in the prefix.
    pub fn position(&self, n: u64) -> Option<u64> {
        self.prefix.binary_search(&n).ok().map(|i| i as u64 + 1)
    }

    /// `m_E = {m_i : i ∈ E}`, or `None` if `E` indexes past the prefix.
    pub fn image(&self, e: &FinSet) -> Option<FinSet> {
        e.map_through(|i| self.at(i))
    }

    /// Elements of the prefix strictly above `n`.
    pub fn after(&self, n: u64) -> impl Iterator<Item = u64> + '_ {
        let start = self.prefix.partition_point(|&p| p <= n);
        self.prefix[start..].iter().copied()
    }
}

impl fmt::Display for SeqView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.prefix.iter().map(u64::to_string).collect();
        write!(f, "({},…)", body.join(","))
    }
}

/// `F(N) = {n_F : F ∈ 𝓕}` with 1-based positions.
pub fn pushforward(fam: &SetFamily, seq: &SeqView) -> Result<SetFamily> {
    let mut out = SetFamily::new(seq.universe_bound());
    for member in fam.iter() {
        let image = seq.image(&member).ok_or_else(|| Error::PrefixTooShort {
            member: member.to_string(),
            position: member.max_elem().unwrap_or(0),
            len: seq.len(),
        })?;
        out.insert(&image)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    #[test]
    fn finset_parsing_and_order() {
        assert_eq!(s("3,4,5").as_slice(), &[3, 4, 5]);
        assert!(s("{}").is_empty());
        assert!("4,3".parse::<FinSet>().is_err());
        assert!("0,3".parse::<FinSet>().is_err());
        assert!(s("1,2").precedes(&s("3")));
        assert!(!s("1,3").precedes(&s("3")));
        assert!(FinSet::empty().precedes(&s("1")));
        assert_eq!(FinSet::from_mask(0b101), s("1,3"));
        assert_eq!(s("1,3").to_mask(), Some(0b101));
    }

    #[test]
    fn pushforward_examples() {
        let fam = SetFamily::from_sets(6, [s("{}"), s("1"), s("2"), s("1,2")]).unwrap();
        let evens = SeqView::new(vec![2, 4, 6], 6).unwrap();
        let got = pushforward(&fam, &evens).unwrap();
        let want = SetFamily::from_sets(6, [s("{}"), s("2"), s("4"), s("2,4")]).unwrap();
        assert_eq!(got, want);

        let bad = SetFamily::from_sets(6, [s("3")]).unwrap();
        let short = SeqView::new(vec![2, 4], 6).unwrap();
        assert!(matches!(
            pushforward(&bad, &short),
            Err(Error::PrefixTooShort { .. })
        ));

        assert_eq!(pushforward(&fam, &SeqView::identity(6)).unwrap(), fam);
    }

    #[test]
    fn seqview_rejects_bad_prefix() {
        assert!(SeqView::new(vec![3, 2], 5).is_err());
        assert!(SeqView::new(vec![1, 9], 5).is_err());
        let m = SeqView::new(vec![2, 5, 7], 9).unwrap();
        assert_eq!(m.after(5).collect::<Vec<_>>(), vec![7]);
        assert_eq!(m.position(5), Some(2));
    }
}
