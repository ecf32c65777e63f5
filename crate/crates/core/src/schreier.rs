//! Membership, enumeration and maximality for the Schreier families `S_α`
//! and their tuple families `(S_α₁, …, S_αᵣ)`.
//!
//! `S_0` holds `∅` and the singletons. `S_{β+1}` holds `∅` and every union
//! `F_1 ∪ … ∪ F_k` of nonempty consecutive blocks `F_1 < … < F_k` from `S_β`
//! with `k ≤ min F_1`. For a limit `λ`, `S_λ` is the union over `n` of the
//! members of `S_{λ[n]}` whose minimum is at least `n`, using the fundamental
//! sequences of [`Ordinal::fundamental`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::{FamilyOracle, FinSet, SetFamily};
use crate::ordinal::{Kind, Ordinal};

/// A nonempty, non-decreasing list of ordinals `α₁ ≤ … ≤ αᵣ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TupleSpec(Vec<Ordinal>);

impl TupleSpec {
    pub fn new(ordinals: Vec<Ordinal>) -> Result<Self> {
        if ordinals.is_empty() {
            return Err(Error::Parse {
                what: "tuple",
                input: String::new(),
                reason: "a tuple needs at least one ordinal".into(),
            });
        }
        if ordinals.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parse {
                what: "tuple",
                input: TupleSpec(ordinals).to_string(),
                reason: "ordinals must be non-decreasing".into(),
            });
        }
        Ok(TupleSpec(ordinals))
    }

    pub fn single(alpha: Ordinal) -> Self {
        TupleSpec(vec![alpha])
    }

    pub fn ordinals(&self) -> &[Ordinal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for TupleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Ordinal::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for TupleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // Commas inside parentheses belong to exponents, not to the tuple.
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        for c in s.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(std::mem::take(&mut cur));
                    continue;
                }
                _ => {}
            }
            cur.push(c);
        }
        parts.push(cur);
        let ords = parts
            .iter()
            .map(|p| p.trim().parse::<Ordinal>())
            .collect::<Result<Vec<_>>>()?;
        TupleSpec::new(ords)
    }
}

impl Serialize for TupleSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TupleSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Memoized membership over contiguous slices of one fixed set.
///
/// Every block in a decomposition of `E` is a contiguous run of `E`, so the
/// cache key is `(ordinal, start, end)`.
struct SliceMemo<'a> {
    e: &'a [u64],
    cache: HashMap<(Ordinal, usize, usize), bool>,
}

impl<'a> SliceMemo<'a> {
    fn new(e: &'a [u64]) -> Self {
        SliceMemo {
            e,
            cache: HashMap::new(),
        }
    }

    fn member(&mut self, alpha: &Ordinal, from: usize, to: usize) -> bool {
        if from >= to {
            return true;
        }
        let len = (to - from) as u64;
        let min = self.e[from];
        if alpha.is_zero() {
            return len <= 1;
        }
        // S_1 ⊆ S_α for every α ≥ 1, because every fundamental sequence
        // starts at an ordinal ≥ 1.
        if len <= min {
            return true;
        }
        let key = (alpha.clone(), from, to);
        if let Some(&hit) = self.cache.get(&key) {
            return hit;
        }
        let result = match alpha.classify() {
            Kind::Successor(beta) => self.greedy_blocks(&beta, from, to, min),
            Kind::Limit => (1..=min).any(|n| {
                let an = alpha
                    .fundamental(n)
                    .expect("fundamental sequences of small ordinals do not overflow");
                self.member(&an, from, to)
            }),
            Kind::Zero => unreachable!(),
        };
        self.cache.insert(key, result);
        result
    }

    /// Longest prefix of `e[from..to]` lying in `S_β`; membership is monotone
    /// in the prefix length because `S_β` is hereditary.
    fn longest_block(&mut self, beta: &Ordinal, from: usize, to: usize) -> usize {
        let (mut lo, mut hi) = (from, to);
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if self.member(beta, from, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    /// Greedy maximal blocks use the fewest blocks among all decompositions
    /// into consecutive `S_β` blocks.
    fn greedy_blocks(&mut self, beta: &Ordinal, from: usize, to: usize, budget: u64) -> bool {
        let mut pos = from;
        let mut blocks = 0u64;
        while pos < to {
            blocks += 1;
            if blocks > budget {
                return false;
            }
            pos = self.longest_block(beta, pos, to).max(pos + 1);
        }
        true
    }
}

/// `E ∈ S_α`.
pub fn member(alpha: &Ordinal, e: &FinSet) -> bool {
    SliceMemo::new(e.as_slice()).member(alpha, 0, e.len())
}

/// `E ∈ (S_α₁, …, S_αᵣ)`: `E` splits into `r` consecutive, possibly empty,
/// blocks with block `i` in `S_αᵢ`.
pub fn tuple_member(spec: &TupleSpec, e: &FinSet) -> bool {
    let mut memo = SliceMemo::new(e.as_slice());
    let mut pos = 0;
    for alpha in spec.ordinals() {
        if pos == e.len() {
            return true;
        }
        if memo.member(alpha, pos, pos + 1) {
            pos = memo.longest_block(alpha, pos, e.len()).max(pos + 1);
        }
    }
    pos == e.len()
}

/// Number of greedy `S_β` blocks of `E` for `α = β + 1`; `None` otherwise.
pub fn greedy_block_count(alpha: &Ordinal, e: &FinSet) -> Option<u64> {
    let Kind::Successor(beta) = alpha.classify() else {
        return None;
    };
    let mut memo = SliceMemo::new(e.as_slice());
    let mut pos = 0;
    let mut blocks = 0;
    while pos < e.len() {
        blocks += 1;
        pos = memo.longest_block(&beta, pos, e.len()).max(pos + 1);
    }
    Some(blocks)
}

/// What to enumerate: a single `S_α` or a tuple family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Schreier(Ordinal),
    Tuple(TupleSpec),
}

impl Target {
    pub fn contains(&self, e: &FinSet) -> bool {
        match self {
            Target::Schreier(a) => member(a, e),
            Target::Tuple(t) => tuple_member(t, e),
        }
    }

    pub fn oracle(&self) -> FamilyOracle {
        match self {
            Target::Schreier(a) => FamilyOracle::Schreier(a.clone()),
            Target::Tuple(t) => FamilyOracle::Tuple(t.clone()),
        }
    }
}

impl From<TupleSpec> for Target {
    fn from(t: TupleSpec) -> Self {
        match t.ordinals() {
            [a] => Target::Schreier(a.clone()),
            _ => Target::Tuple(t),
        }
    }
}

pub const DEFAULT_ENUM_CAP: usize = 1 << 20;

/// Every member inside `[1, universe_bound]`.
pub fn enumerate(target: &Target, universe_bound: u64, cap: usize) -> Result<SetFamily> {
    if universe_bound == 0 {
        return Err(Error::Precondition("universe bound must be at least 1".into()));
    }
    let members = target.oracle().members_within(universe_bound, cap)?;
    SetFamily::from_sets(universe_bound, members)
}

/// No strict superset of `E` inside `[1, universe_bound]` stays in `S_α`.
/// One-element extensions suffice since `S_α` is hereditary.
pub fn is_maximal(alpha: &Ordinal, e: &FinSet, universe_bound: u64) -> Result<bool> {
    if !member(alpha, e) {
        return Err(Error::NotMember(format!("{e} (in S_{alpha})")));
    }
    Ok((1..=universe_bound)
        .filter(|x| !e.contains(*x))
        .all(|x| !member(alpha, &e.union(&FinSet::singleton(x)))))
}
