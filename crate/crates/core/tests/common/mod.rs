//! Oracles computed straight from the definitions, sharing no code with the
//! library beyond its plain set type.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use schreier::FinSet;

/// Finite levels and `ω` with `ω_n = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Fin(u32),
    Omega,
}

impl Level {
    pub fn parse(s: &str) -> Level {
        match s {
            "w" => Level::Omega,
            n => Level::Fin(n.parse().expect("finite level")),
        }
    }
}

/// Membership by minimising the number of consecutive blocks over every
/// partition, never greedily.
pub fn brute_member(level: Level, e: &[u64]) -> bool {
    fn go(level: Level, e: &[u64], memo: &mut HashMap<(Level, Vec<u64>), bool>) -> bool {
        if e.is_empty() {
            return true;
        }
        if let Some(&v) = memo.get(&(level, e.to_vec())) {
            return v;
        }
        let v = match level {
            Level::Fin(0) => e.len() == 1,
            Level::Fin(k) => {
                let m = e.len();
                let mut best = vec![usize::MAX; m + 1];
                best[0] = 0;
                for i in 1..=m {
                    for t in 0..i {
                        if best[t] != usize::MAX && go(Level::Fin(k - 1), &e[t..i], memo) {
                            best[i] = best[i].min(best[t] + 1);
                        }
                    }
                }
                best[m] as u64 <= e[0]
            }
            Level::Omega => (1..=e[0]).any(|n| go(Level::Fin(n as u32), e, memo)),
        };
        memo.insert((level, e.to_vec()), v);
        v
    }
    go(level, e, &mut HashMap::new())
}

/// Some split into consecutive, possibly empty, pieces with piece `i` in
/// level `levels[i]`.
pub fn brute_tuple(levels: &[Level], e: &[u64]) -> bool {
    match levels.split_first() {
        None => e.is_empty(),
        Some((first, rest)) => {
            (0..=e.len()).any(|cut| brute_member(*first, &e[..cut]) && brute_tuple(rest, &e[cut..]))
        }
    }
}

pub fn mask_elements(mask: u64) -> Vec<u64> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn set(v: &[u64]) -> FinSet {
    FinSet::new(v.to_vec()).expect("increasing")
}

/// Ranks by iterating the derivative on every member inside `[1, bound]`:
/// `A` survives a step iff some `l ∈ (max A, bound]` has `A ∪ {l}` alive.
/// Exact for sets whose extension chains fit below `bound`.
pub fn iterated_ranks<P: Fn(&[u64]) -> bool>(pred: P, bound: u64) -> HashMap<Vec<u64>, u64> {
    let mut alive: HashSet<Vec<u64>> = (0u64..1 << bound)
        .map(mask_elements)
        .filter(|e| pred(e))
        .collect();
    let mut rank: HashMap<Vec<u64>, u64> = alive.iter().map(|e| (e.clone(), 0)).collect();
    let mut level = 0;
    while !alive.is_empty() {
        let next: HashSet<Vec<u64>> = alive
            .iter()
            .filter(|a| {
                let top = a.last().copied().unwrap_or(0);
                (top + 1..=bound).any(|l| {
                    let mut b = a.to_vec();
                    b.push(l);
                    alive.contains(&b)
                })
            })
            .cloned()
            .collect();
        level += 1;
        for a in &next {
            rank.insert(a.clone(), level);
        }
        alive = next;
    }
    rank
}

/// Every `𝒮` play of the (1,1)-game inside `[1, bound]` against
/// "l = 1, then l = min E₁": `(E₁, E₂, result in S_1)`.
pub fn one_one_plays(bound: u64) -> Vec<(Vec<u64>, Vec<u64>, bool)> {
    let mut out = Vec::new();
    for m1 in 1u64..1 << bound {
        let e1 = mask_elements(m1);
        let top = *e1.last().unwrap();
        let need = e1[0] as usize;
        let room = bound - top;
        for m2 in 1u64..1 << room {
            let e2: Vec<u64> = mask_elements(m2).iter().map(|x| x + top).collect();
            if e2.len() < need {
                continue;
            }
            let mut u = e1.clone();
            u.extend(&e2);
            out.push((e1.clone(), e2, u.len() as u64 <= u[0]));
        }
    }
    out
}
