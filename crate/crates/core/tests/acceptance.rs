//! One test per acceptance criterion. Each prints a PASS or FAIL line and
//! builds its certificates through a producer so determinism can be checked
//! by running the producers twice.

mod common;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{brute_member, brute_tuple, mask_elements, one_one_plays, Level};
use schreier::cbindex::{index, rank_transfer_check, Ranker};
use schreier::dichotomy::{
    check_example_noninclusions, dichotomy_search, random_hereditary_family, verify_dichotomy,
    Outcome, SearchParams,
};
use schreier::embed::{build_embedding, verify_certificate};
use schreier::family::is_spreading_within;
use schreier::games::{solve_n, verify_strategy, GameSpec, Policy, SolveOptions};
use schreier::spreadmap::{build, verify};
use schreier::{FamilyOracle, FinSet, Ordinal, SeqView, SetFamily, TupleSpec};

struct Check {
    ok: bool,
    detail: String,
    artifact: String,
}

fn report(n: u32, o: &Check) {
    let tag = if o.ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {n}: {}", o.detail);
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

const ALPHAS: [&str; 5] = ["0", "1", "2", "3", "w"];

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for a in ALPHAS {
        let alpha: Ordinal = a.parse().unwrap();
        let level = Level::parse(a);
        for mask in 0u64..1 << 12 {
            let e = mask_elements(mask);
            let lazy = schreier::schreier::member(&alpha, &FinSet::new(e.clone()).unwrap());
            if lazy != brute_member(level, &e) {
                mismatches.push(format!("S_{a} {e:?}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Check {
        ok: mismatches.is_empty() && secs <= 60.0,
        detail: format!("{} mismatches over 5 x 4096 sets in {secs:.1}s; first mismatch: {:?}", mismatches.len(), mismatches.first()),
        artifact: String::new(),
    }
}

fn criterion_2() -> Check {
    let mut bad = Vec::new();
    for a in ALPHAS {
        let fam = FamilyOracle::schreier(a.parse().unwrap());
        if !fam.is_hereditary_within(12) {
            bad.push(format!("S_{a} not hereditary"));
        }
        if !is_spreading_within(&fam, 12) {
            bad.push(format!("S_{a} not spreading"));
        }
    }
    Check {
        ok: bad.is_empty(),
        detail: format!("hereditary and spreading on [1,12]: {bad:?}"),
        artifact: String::new(),
    }
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let spec: TupleSpec = "1,1".parse().unwrap();
    let s1 = FamilyOracle::schreier(Ordinal::one());
    let v = verify_strategy(&spec, &Policy::PreviousMin { first: vec![1] }, &s1, 9).unwrap();
    let plays = one_one_plays(9);
    let oracle_wins = plays.iter().all(|(_, _, in_s1)| !in_s1);
    let secs = start.elapsed().as_secs_f64();
    Check {
        ok: v.wins && !v.truncation_win && oracle_wins && secs <= 30.0,
        detail: format!(
            "wins {}, truncation flag {}, {} plays checked; independent enumeration of {} plays agrees: {oracle_wins}; {secs:.1}s",
            v.wins, v.truncation_win, v.plays_checked, plays.len()
        ),
        artifact: json(&v),
    }
}

fn criterion_4() -> Check {
    let s1 = FamilyOracle::schreier(Ordinal::one());
    let pair: TupleSpec = "1,1".parse().unwrap();
    let found = solve_n(&pair, &s1, 8, SolveOptions::flag_free(8)).unwrap();
    let replay = found
        .as_ref()
        .map(|s| verify_strategy(&pair, &s.as_policy(), &s1, 8).unwrap());
    let single: TupleSpec = "1".parse().unwrap();
    let none = solve_n(&single, &s1, 12, SolveOptions::flag_free(6)).unwrap();
    let ok = found.as_ref().map_or(false, |s| !s.truncation_win)
        && replay.as_ref().map_or(false, |v| v.wins && !v.truncation_win)
        && none.is_none();
    Check {
        ok,
        detail: format!(
            "(1,1) on S_1 over [1,8]: {} decisions, replay wins {:?}; 1-game over [1,12] with budget 6: {}",
            found.as_ref().map_or(0, |s| s.decisions.len()),
            replay.as_ref().map(|v| v.wins),
            if none.is_none() { "no strategy" } else { "strategy found" }
        ),
        artifact: json(&(found, replay, none)),
    }
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let games = [
        ("0", Policy::Constant { l: 1 }),
        ("1", Policy::Constant { l: 3 }),
        ("2", Policy::Sequence { values: vec![2, 1] }),
        ("w", Policy::Constant { l: 2 }),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut artifacts = Vec::new();
    for (tuple, policy) in games {
        let spec = GameSpec::bound(tuple.parse().unwrap(), policy);
        let map = build(&spec, 8).unwrap();
        let v = verify(&map, &spec, 8).unwrap();
        // Re-check every image with the partition oracle.
        let mut oracle_ok = true;
        schreier::games::for_each_minimal_play(&spec, 8, &mut |t| {
            let e = schreier::games::result_set(t).unwrap();
            let img = map.image(&e).unwrap();
            if !brute_tuple(&[Level::parse(tuple)], img.as_slice()) {
                oracle_ok = false;
            }
        })
        .unwrap();
        ok &= v.ok && oracle_ok;
        parts.push(format!("{tuple}-game {} plays ok {} oracle {oracle_ok}", v.plays_checked, v.ok));
        artifacts.push((map, v));
    }
    let secs = start.elapsed().as_secs_f64();
    Check {
        ok: ok && secs <= 300.0,
        detail: format!("{}; {secs:.1}s", parts.join(", ")),
        artifact: json(&artifacts),
    }
}

fn criterion_6() -> Check {
    let gens: Vec<FinSet> = vec!["1,2".parse().unwrap(), "3,4".parse().unwrap()];
    let fam = SetFamily::from_sets(12, gens).unwrap().hereditary_closure();
    let spec: TupleSpec = "1".parse().unwrap();
    let oracle = FamilyOracle::explicit(fam.clone());
    let strategy = solve_n(&spec, &oracle, 12, SolveOptions::flag_free(12))
        .unwrap()
        .expect("N wins on a family of pairs");
    let cert = build_embedding(&fam, &spec, &strategy.as_policy(), 12).unwrap();
    let check = verify_certificate(&cert);
    let in_s1 = cert.failures.is_empty()
        && fam.iter().all(|e| {
            let img: Vec<u64> = e.iter().map(|i| cert.sequence[i as usize - 1]).collect();
            brute_member(Level::Fin(1), &img)
        });
    Check {
        ok: cert.accepted() && check.ok && in_s1 && cert.verified_members == fam.len(),
        detail: format!(
            "{} of {} members embedded, {} failures, independent check {}, images in S_1 by oracle {in_s1}",
            cert.verified_members,
            fam.len(),
            cert.failures.len(),
            check.ok
        ),
        artifact: json(&(strategy, cert)),
    }
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let spec: TupleSpec = "1".parse().unwrap();
    let runs: Vec<(u64, Outcome, bool, String)> = (0..50u64)
        .into_par_iter()
        .map(|seed| {
            let fam = random_hereditary_family(12, seed, 5, 5);
            let params = SearchParams { seed, ..SearchParams::default() };
            let cert = dichotomy_search(&fam, &spec, 12, None, params).unwrap();
            let re = verify_dichotomy(&cert, &fam).unwrap();
            (seed, cert.outcome, re.ok, json(&cert))
        })
        .collect();
    let undecided = runs.iter().filter(|r| r.1 == Outcome::UndecidedAtTruncation).count();
    let inclusion = runs.iter().filter(|r| r.1 == Outcome::Inclusion).count();
    let failed: Vec<u64> = runs.iter().filter(|r| !r.2).map(|r| r.0).collect();
    let secs = start.elapsed().as_secs_f64();
    Check {
        ok: failed.is_empty() && secs <= 600.0,
        detail: format!(
            "50 families: {inclusion} inclusion, {} embedding, {undecided} undecided (rate {:.2}); re-verification failures {failed:?}; {secs:.1}s",
            50 - inclusion - undecided,
            undecided as f64 / 50.0
        ),
        artifact: runs.into_iter().map(|r| r.3).collect::<Vec<_>>().join("\n"),
    }
}

/// `{1} ∪ E` or `E` with `E` inside one block `{2^k+1, …, 2^k+k}`.
fn in_example(e: &[u64]) -> bool {
    let rest: Vec<u64> = e.iter().copied().filter(|&x| x != 1).collect();
    rest.is_empty()
        || (1..40u32).any(|k| {
            let lo = (1u64 << k.min(62)) + 1;
            rest.iter().all(|&x| x >= lo && x < lo + k as u64)
        })
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut produced = [0usize; 5];
    let mut failed = [0usize; 5];
    let mut first_error = None;
    let mut artifact = String::new();
    for _ in 0..10_000 {
        let m1 = rng.gen_range(1..=4u64);
        let pool: Vec<u64> = (m1 + 1..=40).collect();
        let mut rest: Vec<u64> = pool.choose_multiple(&mut rng, 9).copied().collect();
        rest.sort_unstable();
        let mut prefix = vec![m1];
        prefix.extend(rest);
        let m = SeqView::new(prefix, 40).unwrap();
        match check_example_noninclusions(4, &m) {
            Ok(w) => {
                let g = w.s1_preimage.as_slice();
                let f = w.f_not_in_s1.as_slice();
                let ok = brute_member(Level::Fin(1), g)
                    && m.image(&w.s1_preimage).as_ref() == Some(&w.s1_not_in_f)
                    && !in_example(w.s1_not_in_f.as_slice())
                    && f.len() as u64 == w.l + 1
                    && f.len() as u64 > f[0]
                    && !brute_member(Level::Fin(1), f);
                if ok {
                    produced[m1 as usize] += 1;
                } else {
                    failed[m1 as usize] += 1;
                }
                artifact.push_str(&json(&w));
            }
            Err(e) => {
                failed[m1 as usize] += 1;
                first_error.get_or_insert(format!("M = {m}: {e}"));
                artifact.push_str(&e.to_string());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Check {
        ok: failed.iter().sum::<usize>() == 0 && secs <= 300.0,
        detail: format!(
            "witnesses produced by m_1 = 1..4: {:?}, failed: {:?}; first failure: {}; {secs:.1}s",
            &produced[1..],
            &failed[1..],
            first_error.unwrap_or_else(|| "none".into())
        ),
        artifact,
    }
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let expected = ["2", "w+1", "w^2+1"];
    let mut ok = true;
    let mut got = Vec::new();
    let mut artifacts = Vec::new();
    for (a, want) in expected.iter().enumerate() {
        let r = index(&FamilyOracle::schreier(Ordinal::nat(a as u64)), 8).unwrap();
        let s = r.rank().cloned();
        let want: Ordinal = want.parse().unwrap();
        let successor = s
            .as_ref()
            .map_or(false, |s| matches!(s.classify(), schreier::ordinal::Kind::Successor(_)));
        ok &= s.as_ref() == Some(&want) && successor;
        got.push(format!("s(S_{a}) = {}", s.map_or("undetected".into(), |s| s.to_string())));
        artifacts.push(r);
    }
    let secs = start.elapsed().as_secs_f64();
    Check {
        ok: ok && secs <= 60.0,
        detail: format!("{}; {secs:.2}s", got.join(", ")),
        artifact: json(&artifacts),
    }
}

fn small_sets(bound: u64, max_len: usize) -> Vec<FinSet> {
    (1u64..1 << bound)
        .map(mask_elements)
        .filter(|e| e.len() <= max_len)
        .map(|e| FinSet::new(e).unwrap())
        .collect()
}

fn criterion_10() -> Check {
    const WINDOW: usize = 16;
    let sets = small_sets(8, 3);
    let mut lists: Vec<Vec<FinSet>> = sets.iter().map(|s| vec![s.clone()]).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            lists.push(vec![sets[i].clone(), sets[j].clone()]);
        }
    }
    let sequences = [
        SeqView::identity(64),
        SeqView::progression(2, 2, 64),
        SeqView::squares(64),
    ];
    let results: Vec<(usize, usize, bool, String)> = lists
        .par_iter()
        .map(|gens| {
            let g = SetFamily::from_sets(8, gens.clone()).unwrap();
            let fam = FamilyOracle::spread_closure(g.clone());
            let barred = FamilyOracle::bar(fam.clone());
            let mut rf = Ranker::new(&fam, None, WINDOW).unwrap();
            let mut rb = Ranker::new(&barred, None, WINDOW).unwrap();
            let mut pairs = 0;
            let mut violations = 0;
            for a in fam.members_within(8, 1 << 16).unwrap() {
                let Some(lo) = a.min_elem() else { continue };
                let ra = rf.rank(&a).unwrap().rank().cloned().expect("finite rank");
                for l in 1..lo {
                    let la = FinSet::singleton(l).union(&a);
                    let rl = rb.rank(&la).unwrap().rank().cloned().expect("finite rank");
                    pairs += 1;
                    if rl < ra {
                        violations += 1;
                    }
                }
            }
            let transfer = sequences
                .iter()
                .all(|n| rank_transfer_check(&g, n, 8, WINDOW).unwrap());
            (pairs, violations, transfer, format!("{g:?}"))
        })
        .collect();
    let pairs: usize = results.iter().map(|r| r.0).sum();
    let violations: usize = results.iter().map(|r| r.1).sum();
    let transfer_fail: Vec<&String> = results.iter().filter(|r| !r.2).map(|r| &r.3).collect();
    Check {
        ok: violations == 0 && transfer_fail.is_empty(),
        detail: format!(
            "{} generator lists, {pairs} (l, A) pairs, {violations} bar-lift violations, {} transfer failures; first: {:?}",
            lists.len(),
            transfer_fail.len(),
            transfer_fail.first()
        ),
        artifact: json(&results.iter().map(|r| (r.0, r.1, r.2)).collect::<Vec<_>>()),
    }
}

macro_rules! criterion_test {
    ($name:ident, $n:expr, $f:ident) => {
        #[test]
        fn $name() {
            let o = $f();
            report($n, &o);
            assert!(o.ok, "criterion {} failed: {}", $n, o.detail);
        }
    };
}

criterion_test!(criterion_01_membership_matches_definition, 1, criterion_1);
criterion_test!(criterion_02_family_axioms, 2, criterion_2);
criterion_test!(criterion_03_worked_strategy_wins, 3, criterion_3);
criterion_test!(criterion_04_solver_sound_and_nontrivial, 4, criterion_4);
criterion_test!(criterion_05_spreading_maps_verify, 5, criterion_5);
criterion_test!(criterion_06_embedding_pipeline, 6, criterion_6);
criterion_test!(criterion_07_random_dichotomy_runs, 7, criterion_7);
criterion_test!(criterion_08_example_family_witnesses, 8, criterion_8);
criterion_test!(criterion_09_schreier_indices, 9, criterion_9);
criterion_test!(criterion_10_bar_lift_and_transfer, 10, criterion_10);

#[test]
fn criterion_11_determinism() {
    let producers: [(u32, fn() -> Check); 8] = [
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let differing: Vec<u32> = producers
        .iter()
        .filter(|(_, f)| f().artifact != f().artifact)
        .map(|(n, _)| *n)
        .collect();
    let o = Check {
        ok: differing.is_empty(),
        detail: format!("criteria 3-10 rerun twice; differing artifacts: {differing:?}"),
        artifact: String::new(),
    };
    report(11, &o);
    assert!(o.ok, "{}", o.detail);
}
