mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{brute_member, brute_tuple, iterated_ranks, Level};
use schreier::cbindex::{detect_sup, in_derivative, index, index_along, rank, Ranker};
use schreier::family::{is_spreading_pred, restrict};
use schreier::games::{GameSpec, Machine, Move, Policy, Turn};
use schreier::spreadmap::{build, prefix_stable};
use schreier::{FamilyOracle, FinSet, Ordinal, SeqView, SetFamily, TupleSpec};

fn finset(max: u64, len: usize) -> impl Strategy<Value = FinSet> {
    proptest::collection::btree_set(1..=max, 0..=len)
        .prop_map(|s| FinSet::new(s.into_iter().collect()).unwrap())
}

fn small_ordinal() -> impl Strategy<Value = Ordinal> {
    (0u64..3, 0u64..3, 0u64..4).prop_map(|(a, b, c)| {
        let mut terms = Vec::new();
        if a > 0 {
            terms.push((Ordinal::nat(2), a));
        }
        if b > 0 {
            terms.push((Ordinal::one(), b));
        }
        if c > 0 {
            terms.push((Ordinal::zero(), c));
        }
        Ordinal::from_terms(terms).unwrap()
    })
}

fn level() -> impl Strategy<Value = (Ordinal, Level)> {
    prop_oneof![
        (0u32..4).prop_map(|k| (Ordinal::nat(k as u64), Level::Fin(k))),
        Just((Ordinal::omega(), Level::Omega)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ordinal_text_round_trips(a in small_ordinal()) {
        let back: Ordinal = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn ordinal_addition_is_associative_and_monotone(
        a in small_ordinal(), b in small_ordinal(), c in small_ordinal()
    ) {
        let left = a.add(&b).unwrap().add(&c).unwrap();
        let right = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(a.add(&b).unwrap() >= a);
    }

    #[test]
    fn fundamental_sequences_increase_below_the_limit(a in small_ordinal(), n in 1u64..6) {
        prop_assume!(a.is_limit());
        let x = a.fundamental(n).unwrap();
        let y = a.fundamental(n + 1).unwrap();
        prop_assert!(x < y && y < a);
    }

    #[test]
    fn finset_text_round_trips(e in finset(40, 8)) {
        let back: FinSet = e.to_string().parse().unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn membership_matches_partition_oracle((alpha, lvl) in level(), e in finset(24, 7)) {
        prop_assert_eq!(
            schreier::schreier::member(&alpha, &e),
            brute_member(lvl, e.as_slice())
        );
    }

    #[test]
    fn tuple_membership_matches_oracle(
        a in 0u32..3, b in 0u32..3, e in finset(20, 7)
    ) {
        let (lo, hi) = (a.min(b), a.max(b));
        let spec = TupleSpec::new(vec![Ordinal::nat(lo as u64), Ordinal::nat(hi as u64)]).unwrap();
        prop_assert_eq!(
            schreier::schreier::tuple_member(&spec, &e),
            brute_tuple(&[Level::Fin(lo), Level::Fin(hi)], e.as_slice())
        );
    }

    /// Members stay members after removing an element or raising one.
    #[test]
    fn schreier_families_are_hereditary_and_spreading(
        (alpha, _) in level(), e in finset(20, 6), i in 0usize..6
    ) {
        prop_assume!(schreier::schreier::member(&alpha, &e));
        prop_assume!(i < e.len());
        let mut smaller = e.as_slice().to_vec();
        smaller.remove(i);
        prop_assert!(schreier::schreier::member(&alpha, &FinSet::new(smaller).unwrap()));
        let mut spread = e.as_slice().to_vec();
        for x in spread.iter_mut().skip(i) {
            *x += 1;
        }
        prop_assert!(schreier::schreier::member(&alpha, &FinSet::new(spread).unwrap()));
    }

    #[test]
    fn trie_behaves_like_a_set_of_sets(sets in proptest::collection::vec(finset(10, 4), 0..20),
                                       probe in finset(10, 4)) {
        let fam = SetFamily::from_sets(10, sets.clone()).unwrap();
        let model: BTreeSet<FinSet> = sets.iter().cloned().collect();
        prop_assert_eq!(fam.len(), model.len());
        prop_assert_eq!(fam.contains(&probe), model.contains(&probe));
        prop_assert_eq!(fam.iter().collect::<Vec<_>>(), model.iter().cloned().collect::<Vec<_>>());
        let mut reversed = sets.clone();
        reversed.reverse();
        prop_assert_eq!(fam.fingerprint(), SetFamily::from_sets(10, reversed).unwrap().fingerprint());
    }

    #[test]
    fn hereditary_closure_is_least(sets in proptest::collection::vec(finset(8, 4), 1..6)) {
        let fam = SetFamily::from_sets(8, sets.clone()).unwrap();
        let closure = fam.hereditary_closure();
        prop_assert!(closure.is_hereditary());
        for s in &sets {
            prop_assert!(closure.contains(s));
        }
        for member in closure.iter() {
            prop_assert!(sets.iter().any(|s| member.is_subset(s)));
        }
    }

    /// Random legal plays: the completion estimate never increases by more
    /// than S's freedom allows, and the game ends within it.
    #[test]
    fn machine_plays_stay_legal(choices in proptest::collection::vec(1u64..4, 12), extra in proptest::collection::vec(0u64..2, 12)) {
        let spec: TupleSpec = "1,2".parse().unwrap();
        let mut m = Machine::new(&spec);
        let mut next = 1;
        let mut steps = 0;
        while !m.is_done() && steps < 12 {
            let before = m.min_completion();
            prop_assert!(before >= 1);
            let mv = match m.turn() {
                Turn::NPicks => Move::N(choices[steps]),
                Turn::SPicks { min_size, .. } => {
                    let size = min_size + extra[steps];
                    let b = FinSet::interval(next, next + size - 1);
                    next += size;
                    Move::S(b)
                }
                Turn::Done => unreachable!(),
            };
            prop_assert!(m.apply(&mv).is_ok());
            steps += 1;
        }
    }

    #[test]
    fn spreading_maps_increase_and_extend(l in 1u64..4) {
        let spec = GameSpec::bound("1".parse().unwrap(), Policy::Constant { l });
        let map = build(&spec, 7).unwrap();
        prop_assert!(map.is_strictly_increasing());
        prop_assert!(prefix_stable(&spec, 6).unwrap());
    }

    #[test]
    fn constant_probe_tails_give_successors(c in 0u64..50, lead in 0usize..4) {
        let mut ranks = vec![None; lead];
        ranks.extend(std::iter::repeat(Some(Ordinal::nat(c))).take(8 - lead));
        prop_assert_eq!(detect_sup(&ranks), Some(Ordinal::nat(c + 1)));
    }

    /// In S_1 a nonempty member can take `min A - |A|` more elements.
    #[test]
    fn s1_ranks_count_free_slots(a in finset(14, 5)) {
        prop_assume!(!a.is_empty() && schreier::schreier::member(&Ordinal::one(), &a));
        let r = rank(&FamilyOracle::schreier(Ordinal::one()), &a, 8).unwrap();
        let want = a.min_elem().unwrap() - a.len() as u64;
        prop_assert_eq!(r.rank().cloned(), Some(Ordinal::nat(want)));
    }
}

fn closure(gens: &[&str]) -> FamilyOracle {
    let sets: Vec<FinSet> = gens.iter().map(|s| s.parse().unwrap()).collect();
    FamilyOracle::spread_closure(SetFamily::from_sets(8, sets).unwrap())
}

#[test]
fn closure_ranks_match_iterated_derivatives() {
    for gens in [vec!["1,2"], vec!["1", "2,3"], vec!["2,5,6", "1,4"], vec!["3,4,7"]] {
        let fam = closure(&gens);
        let oracle = iterated_ranks(|e| fam.contains(&FinSet::new(e.to_vec()).unwrap()), 14);
        let mut ranker = Ranker::new(&fam, None, 16).unwrap();
        for (a, r) in &oracle {
            if a.last().copied().unwrap_or(0) > 6 {
                continue;
            }
            let got = ranker.rank(&FinSet::new(a.clone()).unwrap()).unwrap();
            assert_eq!(got.rank(), Some(&Ordinal::nat(*r)), "{gens:?} {a:?}");
        }
    }
}

#[test]
fn spread_closure_index_examples() {
    assert_eq!(index(&closure(&["1,2"]), 8).unwrap().rank(), Some(&Ordinal::nat(3)));
    assert_eq!(index(&closure(&["1", "2,3"]), 8).unwrap().rank(), Some(&Ordinal::nat(3)));
}

#[test]
fn larger_windows_agree() {
    let fams = [
        FamilyOracle::schreier(Ordinal::one()),
        FamilyOracle::schreier(Ordinal::nat(2)),
        FamilyOracle::Tuple("1,1".parse().unwrap()),
        closure(&["1,2", "4"]),
    ];
    for fam in &fams {
        for a in ["{}", "3", "4,6"] {
            let a: FinSet = a.parse().unwrap();
            if !fam.contains(&a) {
                continue;
            }
            let r8 = rank(fam, &a, 8).unwrap();
            let r12 = rank(fam, &a, 12).unwrap();
            assert_eq!(r8.outcome, r12.outcome, "{fam} {a}");
        }
    }
}

#[test]
fn derivatives_stay_spreading() {
    let fams = [
        FamilyOracle::schreier(Ordinal::zero()),
        FamilyOracle::schreier(Ordinal::one()),
        FamilyOracle::schreier(Ordinal::nat(2)),
        closure(&["1,3"]),
        closure(&["2,3,4", "1"]),
    ];
    for fam in &fams {
        let in_d = |e: &FinSet| fam.contains(e) && in_derivative(fam, e, 12).unwrap();
        assert_eq!(is_spreading_pred(in_d, 10), None, "{fam}");
    }
}

#[test]
fn restriction_never_raises_the_index() {
    for gens in [vec!["1,2"], vec!["1", "2,3"], vec!["3,4,7"]] {
        let fam = closure(&gens);
        let full = index(&fam, 16).unwrap().rank().cloned().unwrap();
        for (start, step) in [(1, 2), (2, 3), (5, 1)] {
            let l = SeqView::progression(start, step, 80);
            let r = index_along(&restrict(&fam, &l), &l, 16).unwrap();
            let r = r.rank().cloned().unwrap();
            assert!(r <= full, "{gens:?} along {l}");
            // Spreading families keep their index on every subsequence.
            assert_eq!(r, full, "{gens:?} along {l}");
        }
    }
}

#[test]
fn bar_preserves_hereditary() {
    for fam in [
        FamilyOracle::schreier(Ordinal::one()),
        closure(&["1,2", "4"]),
        FamilyOracle::explicit(SetFamily::from_sets(10, [FinSet::empty()]).unwrap()),
    ] {
        assert!(FamilyOracle::bar(fam.clone()).is_hereditary_within(10), "{fam}");
    }
}
