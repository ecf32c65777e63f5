//! The family `𝓕 = ⋃_k { {1} ∪ E, E : E ⊆ F_k }` with `F_k = {2^k+1, …, 2^k+k}`.
//!
//! `𝓕` is hereditary. For every `M` both `S_1(M) ⊄ 𝓕` and `𝓕(M) ⊄ S_1`,
//! so neither side of the naive inclusion dichotomy holds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FinSet, SeqView, SetFamily};
use crate::ordinal::Ordinal;
use crate::schreier;

/// `F_k`, or `None` when `2^k + k` overflows.
pub fn block(k: u32) -> Option<FinSet> {
    let base = 1u64.checked_shl(k).filter(|_| k < 63)?;
    base.checked_add(k as u64)?;
    Some(FinSet::interval(base + 1, base + k as u64))
}

/// The `k` with `x ∈ F_k`.
fn block_index(x: u64) -> Option<u32> {
    if x < 3 {
        return None;
    }
    let k = 63 - (x - 1).leading_zeros();
    let base = 1u64 << k;
    (x > base && x - base <= k as u64).then_some(k)
}

/// Membership on all of ℕ.
pub fn contains(e: &FinSet) -> bool {
    let rest = match e.min_elem() {
        Some(1) => &e.as_slice()[1..],
        _ => e.as_slice(),
    };
    match rest.first() {
        None => true,
        Some(&x) => match block_index(x) {
            Some(k) => rest.iter().all(|&y| block_index(y) == Some(k)),
            None => false,
        },
    }
}

pub fn universe_for(k_max: u32) -> u64 {
    (1u64 << k_max) + k_max as u64
}

/// `𝓕` truncated to the blocks `F_1, …, F_{k_max}`.
pub fn example_family(k_max: u32) -> Result<SetFamily> {
    if k_max == 0 || k_max > 20 {
        return Err(Error::Precondition(format!(
            "k_max must lie in [1, 20], got {k_max}"
        )));
    }
    let mut fam = SetFamily::new(universe_for(k_max));
    fam.insert(&FinSet::empty())?;
    fam.insert(&FinSet::singleton(1))?;
    for k in 1..=k_max {
        let fk = block(k).expect("k_max ≤ 20");
        for sub in fk.subsets() {
            fam.insert(&sub.union(&FinSet::singleton(1)))?;
            fam.insert(&sub)?;
        }
    }
    Ok(fam)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleWitnesses {
    /// `m_G` for some `G ∈ S_1`, outside `𝓕`.
    pub s1_not_in_f: FinSet,
    /// The `G ∈ S_1` behind `s1_not_in_f`.
    pub s1_preimage: FinSet,
    /// `{m_1} ∪ m_{F_l}` with `l = m_1`; lies in `𝓕(M)` but has `|F| = l + 1 > min F`.
    pub f_not_in_s1: FinSet,
    pub l: u64,
}

/// Both non-inclusion witnesses for the prefix `m`.
///
/// The `𝓕(M)` witness needs `m` to reach position `2^l + l` with `l = m_1`;
/// a shorter prefix yields `PrefixTooShort` with that position.
pub fn check_example_noninclusions(k_max: u32, m: &SeqView) -> Result<ExampleWitnesses> {
    let m1 = m
        .at(1)
        .ok_or_else(|| Error::Precondition("M must be nonempty".into()))?;
    if m1 > k_max as u64 {
        return Err(Error::Precondition(format!(
            "l = m_1 = {m1} exceeds k_max = {k_max}"
        )));
    }
    let l = m1;
    let fl = block(l as u32).expect("l ≤ k_max");
    let index_set = fl.union(&FinSet::singleton(1));
    let f_witness = m.image(&index_set).ok_or_else(|| Error::PrefixTooShort {
        member: index_set.to_string(),
        position: index_set.max_elem().unwrap_or(0),
        len: m.len(),
    })?;
    debug_assert!(contains(&index_set));
    if schreier::member(&Ordinal::one(), &f_witness) {
        return Err(Error::Precondition(format!(
            "{f_witness} unexpectedly lies in S_1"
        )));
    }

    let (g, s1_witness) = s1_witness(m).ok_or_else(|| {
        Error::Precondition(format!("no set of S_1({m}) outside the family within the prefix"))
    })?;
    Ok(ExampleWitnesses {
        s1_not_in_f: s1_witness,
        s1_preimage: g,
        f_not_in_s1: f_witness,
        l,
    })
}

/// Least `G ∈ S_1`, by size and then lexicographically, with `m_G ∉ 𝓕`.
fn s1_witness(m: &SeqView) -> Option<(FinSet, FinSet)> {
    let n = m.len() as u64;
    let s1 = Ordinal::one();
    for size in 1..=n.min(4) {
        let mut found = None;
        for_each_subset(n, size as usize, &mut |g: &[u64]| {
            if found.is_some() {
                return;
            }
            let g = FinSet::new(g.to_vec()).expect("ascending");
            if !schreier::member(&s1, &g) {
                return;
            }
            let img = m.image(&g).expect("indices within prefix");
            if !contains(&img) {
                found = Some((g, img));
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn for_each_subset(n: u64, size: usize, f: &mut dyn FnMut(&[u64])) {
    fn rec(start: u64, n: u64, size: usize, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, size, cur, f);
            cur.pop();
        }
    }
    rec(1, n, size, &mut Vec::new(), f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    #[test]
    fn small_truncations() {
        let f1 = example_family(1).unwrap();
        assert_eq!(
            f1,
            SetFamily::from_sets(3, [s("{}"), s("1"), s("3"), s("1,3")]).unwrap()
        );
        let f2 = example_family(2).unwrap();
        assert_eq!(f2.len(), 4 + 4 + 2);
        assert!(f2.contains(&s("1,5,6")));
        assert!(!contains(&s("1,3,5")));
        assert!(f2.is_hereditary());
        for m in f2.iter() {
            assert!(contains(&m));
        }
    }

    #[test]
    fn identity_prefix_witnesses() {
        let w = check_example_noninclusions(3, &SeqView::identity(11)).unwrap();
        assert_eq!(w.f_not_in_s1, s("1,3"));
        assert!(!contains(&w.s1_not_in_f));
        let evens = SeqView::progression(2, 2, 10);
        let w = check_example_noninclusions(3, &evens).unwrap();
        assert_eq!(w.f_not_in_s1, s("2,10,12"));
    }

    #[test]
    fn short_prefix_is_reported() {
        let m = SeqView::progression(3, 1, 10);
        assert!(matches!(
            check_example_noninclusions(4, &m),
            Err(Error::PrefixTooShort { position: 11, .. })
        ));
    }
}
