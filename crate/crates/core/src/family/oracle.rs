use std::fmt;
use std::sync::Arc;

use super::{FinSet, SeqView, SetFamily};
use crate::dichotomy::example;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::schreier::{self, TupleSpec};

/// A decidable membership rule on all finite subsets of ℕ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyOracle {
    /// `S_α`.
    Schreier(Ordinal),
    /// `(S_α₁, …, S_αᵣ)`.
    Tuple(TupleSpec),
    Explicit(Arc<SetFamily>),
    /// Hereditary spreading closure of a finite generator list: `E` belongs
    /// iff some generator `G` has `|G| ≥ |E|` and `g_i ≤ e_i` for `i ≤ |E|`.
    SpreadClosure(Arc<SetFamily>),
    /// `{ {n} ∪ F : F ∈ 𝓕, n < F } ∪ 𝓕`.
    Bar(Box<FamilyOracle>),
    /// `𝓕[N]`: members whose elements all lie in the prefix of `N`.
    Restricted(Box<FamilyOracle>, SeqView),
    /// `𝓕(N)`: images `n_F` of members `F` whose indices fit in the prefix.
    Pushforward(Box<FamilyOracle>, SeqView),
    /// The hereditary family built from the blocks `{2^k+1, …, 2^k+k}`.
    Example,
}

impl FamilyOracle {
    pub fn schreier(alpha: Ordinal) -> Self {
        FamilyOracle::Schreier(alpha)
    }

    pub fn explicit(fam: SetFamily) -> Self {
        FamilyOracle::Explicit(Arc::new(fam))
    }

    pub fn spread_closure(generators: SetFamily) -> Self {
        FamilyOracle::SpreadClosure(Arc::new(generators))
    }

    pub fn bar(inner: FamilyOracle) -> Self {
        FamilyOracle::Bar(Box::new(inner))
    }

    pub fn contains(&self, e: &FinSet) -> bool {
        match self {
            FamilyOracle::Schreier(a) => schreier::member(a, e),
            FamilyOracle::Tuple(t) => schreier::tuple_member(t, e),
            FamilyOracle::Explicit(f) => f.contains(e),
            FamilyOracle::SpreadClosure(gens) => {
                let k = e.len();
                gens.iter().any(|g| {
                    g.len() >= k && g.iter().zip(e.iter()).all(|(gi, ei)| gi <= ei)
                })
            }
            FamilyOracle::Bar(inner) => {
                inner.contains(e) || (!e.is_empty() && inner.contains(&e.slice(1, e.len())))
            }
            FamilyOracle::Restricted(inner, seq) => {
                e.iter().all(|x| seq.contains(x)) && inner.contains(e)
            }
            FamilyOracle::Pushforward(inner, seq) => {
                match e.map_through(|x| seq.position(x)) {
                    Some(pre) => inner.contains(&pre),
                    None => false,
                }
            }
            FamilyOracle::Example => example::contains(e),
        }
    }

    /// Whether every kind is guaranteed spreading on ℕ (so the single-probe
    /// derivative rule applies without a spot check).
    pub fn known_spreading(&self) -> bool {
        match self {
            FamilyOracle::Schreier(_) | FamilyOracle::Tuple(_) | FamilyOracle::SpreadClosure(_) => {
                true
            }
            FamilyOracle::Bar(inner) => inner.known_spreading(),
            _ => false,
        }
    }

    /// Whether membership is closed under subsets. Explicit families are
    /// checked directly.
    pub fn known_hereditary(&self) -> bool {
        match self {
            FamilyOracle::Schreier(_)
            | FamilyOracle::Tuple(_)
            | FamilyOracle::SpreadClosure(_)
            | FamilyOracle::Example => true,
            FamilyOracle::Explicit(f) => f.is_hereditary(),
            FamilyOracle::Bar(inner)
            | FamilyOracle::Restricted(inner, _)
            | FamilyOracle::Pushforward(inner, _) => inner.known_hereditary(),
        }
    }

    /// All members inside `[1, bound]`, assuming the family is hereditary
    /// (extensions of non-members are pruned).
    pub fn members_within(&self, bound: u64, cap: usize) -> Result<Vec<FinSet>> {
        let mut out = Vec::new();
        if !self.contains(&FinSet::empty()) {
            return Ok(out);
        }
        let mut stack = vec![FinSet::empty()];
        while let Some(s) = stack.pop() {
            out.push(s.clone());
            if out.len() > cap {
                return Err(Error::CapExceeded {
                    what: format!("enumeration of {self} within [1, {bound}]"),
                    cap,
                });
            }
            let lo = s.max_elem().unwrap_or(0) + 1;
            for x in (lo..=bound).rev() {
                let t = s.push_above(x);
                if self.contains(&t) {
                    stack.push(t);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Exhaustive hereditary check on all subsets of `[1, bound]`.
    pub fn is_hereditary_within(&self, bound: u64) -> bool {
        assert!(bound <= 24, "exhaustive check limited to 24 elements");
        (0u64..1 << bound).all(|mask| {
            let e = FinSet::from_mask(mask);
            !self.contains(&e)
                || (0..e.len()).all(|i| {
                    let mut v = e.as_slice().to_vec();
                    v.remove(i);
                    self.contains(&FinSet(v))
                })
        })
    }

    pub fn fingerprint(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FamilyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyOracle::Schreier(a) => write!(f, "s:{a}"),
            FamilyOracle::Tuple(t) => write!(f, "tuple:{t}"),
            FamilyOracle::Explicit(fam) => write!(f, "explicit:{}", fam.fingerprint()),
            FamilyOracle::SpreadClosure(fam) => write!(f, "spread:{}", fam.fingerprint()),
            FamilyOracle::Bar(inner) => write!(f, "bar:{inner}"),
            FamilyOracle::Restricted(inner, seq) => write!(f, "restrict[{seq}]:{inner}"),
            FamilyOracle::Pushforward(inner, seq) => write!(f, "push[{seq}]:{inner}"),
            FamilyOracle::Example => f.write_str("example"),
        }
    }
}

/// `𝓕[N]`.
pub fn restrict(fam: &FamilyOracle, seq: &SeqView) -> FamilyOracle {
    FamilyOracle::Restricted(Box::new(fam.clone()), seq.clone())
}

/// Spreading check within `[1, bound]` for an arbitrary membership predicate.
/// Returns the first member together with a spread of it that is missing.
///
/// Every spread inside the bound is reachable by raising one coordinate by one
/// at a time, so only those elementary shifts are tested.
pub fn is_spreading_pred<P: Fn(&FinSet) -> bool>(pred: P, bound: u64) -> Option<(FinSet, FinSet)> {
    assert!(bound <= 24, "exhaustive check limited to 24 elements");
    for mask in 0u64..1 << bound {
        let e = FinSet::from_mask(mask);
        if !pred(&e) {
            continue;
        }
        let v = e.as_slice();
        for i in 0..v.len() {
            let next_limit = if i + 1 < v.len() { v[i + 1] } else { bound + 1 };
            if v[i] + 1 < next_limit {
                let mut w = v.to_vec();
                w[i] += 1;
                let shifted = FinSet(w);
                if !pred(&shifted) {
                    return Some((e, shifted));
                }
            }
        }
    }
    None
}

pub fn is_spreading_within(fam: &FamilyOracle, bound: u64) -> bool {
    is_spreading_pred(|e| fam.contains(e), bound).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    #[test]
    fn spreading_examples() {
        assert!(is_spreading_within(&FamilyOracle::schreier(Ordinal::one()), 10));
        let f = FamilyOracle::explicit(
            SetFamily::from_sets(3, [s("{}"), s("1")]).unwrap(),
        );
        assert!(!is_spreading_within(&f, 3));
        let g = FamilyOracle::spread_closure(
            SetFamily::from_sets(8, [s("2,5"), s("1,6,7")]).unwrap(),
        );
        assert!(is_spreading_within(&g, 10));
        assert!(g.is_hereditary_within(10));
    }

    #[test]
    fn restriction() {
        let f = FamilyOracle::explicit(
            SetFamily::from_sets(6, [s("{}"), s("1"), s("2"), s("1,2")]).unwrap(),
        );
        let evens = SeqView::new(vec![2, 4, 6], 6).unwrap();
        let r = restrict(&f, &evens);
        let members = r.members_within(6, 100).unwrap();
        assert_eq!(members, vec![s("{}"), s("2")]);
        let s1 = restrict(&FamilyOracle::schreier(Ordinal::one()), &evens);
        assert!(s1.is_hereditary_within(8));
    }

    #[test]
    fn bar_examples() {
        let b0 = FamilyOracle::bar(FamilyOracle::schreier(Ordinal::zero()));
        assert!(b0.contains(&s("1,5")));
        assert!(!b0.contains(&s("1,5,6")));
        let empty_only = FamilyOracle::explicit(SetFamily::from_sets(5, [s("{}")]).unwrap());
        let b = FamilyOracle::bar(empty_only);
        assert_eq!(
            b.members_within(4, 100).unwrap(),
            vec![s("{}"), s("1"), s("2"), s("3"), s("4")]
        );
    }
}
