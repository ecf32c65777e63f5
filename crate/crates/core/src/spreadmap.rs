//! Spreading maps for bound games.
//!
//! For a bound game, [`build`] tabulates an increasing `f` such that every
//! minimal play `E` (each block exactly the demanded size) has
//! `f(E) = {f(t) : t ∈ E}` in the game's tuple family. The recursion:
//!
//! * 0-game: `f(t) = t`;
//! * `(β+1)`-game with choice `k`: `f(t) = k + Σ_{i≤k} fⁱ(t)`, where `fⁱ` sums
//!   the distinct tables of the bound `β`-games that can follow a minimal
//!   play of the first `i−1` sub-games finishing below `t`, or is `t` if no
//!   such play exists;
//! * limit game with choice `l`: `f(t) = f'(t) + l`, with `f'` for the
//!   `α[l]`-game;
//! * tuple game: `Σ_{i≤r} fⁱ(t)` with the same `fⁱ`, and no leading `k`.
//!
//! A 1-game is `k` copies of the 0-game, so its map is `f(t) = k + k·t`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FinSet;
use crate::games::{
    for_each_minimal_play, render_moves, result_set, GameSpec, Machine, Move, Policy, Task,
    Transcript, Turn,
};
use crate::ordinal::Kind;
use crate::schreier::Target;

pub const DEFAULT_PLAY_CAP: usize = 1_000_000;
const TRACE_LINES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadingMap {
    pub spec: GameSpec,
    pub budget: u64,
    /// `table[t-1] = f(t)`.
    pub table: Vec<u64>,
    pub trace: Vec<String>,
}

impl SpreadingMap {
    pub fn at(&self, t: u64) -> Option<u64> {
        if t == 0 {
            return None;
        }
        self.table.get(t as usize - 1).copied()
    }

    /// `f(E)`; `None` past the budget.
    pub fn image(&self, e: &FinSet) -> Option<FinSet> {
        e.map_through(|t| self.at(t))
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.table.windows(2).all(|w| w[0] < w[1])
            && self.table.iter().enumerate().all(|(i, &v)| v > i as u64)
    }
}

struct Builder<'a> {
    policy: &'a Policy,
    budget: u64,
    cap: usize,
    memo: HashMap<String, Vec<u64>>,
    trace: Vec<String>,
}

impl Builder<'_> {
    fn identity(&self) -> Vec<u64> {
        (1..=self.budget).collect()
    }

    fn note(&mut self, line: String) {
        if self.trace.len() < TRACE_LINES {
            self.trace.push(line);
        }
    }

    /// Table for the game on top of `m`'s stack, played after `moves`.
    fn game_table(&mut self, m: &Machine, moves: &mut Vec<Move>) -> Result<Vec<u64>> {
        let top = m.stack().last().cloned().expect("a pending game");
        let key = format!("{top}@{}", render_moves(moves));
        if let Some(t) = self.memo.get(&key) {
            return Ok(t.clone());
        }
        let table = match &top {
            Task::Block { .. } => self.identity(),
            Task::Game(alpha) => {
                let k = self
                    .policy
                    .decide(moves)
                    .ok_or_else(|| Error::StrategyUndefined(render_moves(moves)))?;
                let mut c = m.clone();
                c.apply_n(k).map_err(|reason| Error::IllegalMove {
                    index: moves.len(),
                    reason,
                })?;
                moves.push(Move::N(k));
                let out = match alpha.classify() {
                    Kind::Zero => unreachable!("Game(0) is normalized away"),
                    Kind::Successor(b) if b.is_zero() => {
                        self.note(format!("[{key}] 1-game, k={k}: f(t) = k + k*t"));
                        (1..=self.budget)
                            .map(|t| k.checked_mul(t + 1))
                            .collect::<Option<Vec<u64>>>()
                            .ok_or_else(|| Error::Overflow("spreading map value".into()))
                    }
                    Kind::Successor(b) => {
                        self.note(format!("[{key}] successor, k={k} copies of game({b})"));
                        let mut f = self.components_sum(&c, moves, k as usize)?;
                        for v in &mut f {
                            *v = v
                                .checked_add(k)
                                .ok_or_else(|| Error::Overflow("spreading map value".into()))?;
                        }
                        Ok(f)
                    }
                    Kind::Limit => {
                        self.note(format!("[{key}] limit, l={k}: f(t) = f'(t) + l"));
                        let mut f = self.game_table(&c, moves)?;
                        for v in &mut f {
                            *v = v
                                .checked_add(k)
                                .ok_or_else(|| Error::Overflow("spreading map value".into()))?;
                        }
                        Ok(f)
                    }
                };
                moves.pop();
                out?
            }
        };
        self.memo.insert(key, table.clone());
        Ok(table)
    }

    /// `Σ_{i≤r} fⁱ` for the `r` games on top of `m`'s stack.
    fn components_sum(&mut self, m: &Machine, moves: &[Move], r: usize) -> Result<Vec<u64>> {
        let mut total = vec![0u64; self.budget as usize];
        // Minimal plays of the first i-1 games: (moves, machine, finish).
        let mut states = vec![(moves.to_vec(), m.clone(), 0u64)];
        for i in 1..=r {
            let mut distinct: Vec<(Vec<u64>, u64)> = Vec::new();
            for (mv, st, finish) in &states {
                let mut mv = mv.clone();
                let g = self.game_table(st, &mut mv)?;
                match distinct.iter_mut().find(|(t, _)| *t == g) {
                    Some(entry) => entry.1 = entry.1.min(*finish),
                    None => distinct.push((g, *finish)),
                }
            }
            if i > 1 {
                self.note(format!(
                    "  component {i}: {} distinct tables from {} prior plays",
                    distinct.len(),
                    states.len()
                ));
            }
            for t in 1..=self.budget {
                let idx = t as usize - 1;
                let live: Vec<&(Vec<u64>, u64)> =
                    distinct.iter().filter(|(_, fin)| *fin < t).collect();
                let fi = if live.is_empty() {
                    t
                } else {
                    live.iter().try_fold(0u64, |acc, (g, _)| acc.checked_add(g[idx]))
                        .ok_or_else(|| Error::Overflow("spreading map value".into()))?
                };
                total[idx] = total[idx]
                    .checked_add(fi)
                    .ok_or_else(|| Error::Overflow("spreading map value".into()))?;
            }
            if i < r {
                let mut next = Vec::new();
                for (mv, st, _) in &states {
                    let mut mv = mv.clone();
                    self.finish_top(st, &mut mv, st.stack().len() - 1, &mut next)?;
                }
                states = next;
            }
        }
        Ok(total)
    }

    /// Every minimal completion of the top game with elements below the budget.
    fn finish_top(
        &self,
        m: &Machine,
        moves: &mut Vec<Move>,
        depth: usize,
        out: &mut Vec<(Vec<Move>, Machine, u64)>,
    ) -> Result<()> {
        if m.stack().len() == depth {
            out.push((moves.clone(), m.clone(), m.last_max()));
            if out.len() > self.cap {
                return Err(Error::CapExceeded {
                    what: format!("bound sub-games finishing before t = {}", self.budget),
                    cap: self.cap,
                });
            }
            return Ok(());
        }
        match m.turn() {
            Turn::NPicks => {
                let l = self
                    .policy
                    .decide(moves)
                    .ok_or_else(|| Error::StrategyUndefined(render_moves(moves)))?;
                let mut c = m.clone();
                c.apply_n(l).map_err(|reason| Error::IllegalMove {
                    index: moves.len(),
                    reason,
                })?;
                moves.push(Move::N(l));
                self.finish_top(&c, moves, depth, out)?;
                moves.pop();
            }
            Turn::SPicks {
                min_size,
                min_element,
                ..
            } => {
                let hi = self.budget.saturating_sub(1);
                for b in crate::games::blocks_exact(min_element, hi, min_size) {
                    let mut c = m.clone();
                    c.apply_s(&b).expect("enumerated blocks are legal");
                    moves.push(Move::S(b));
                    self.finish_top(&c, moves, depth, out)?;
                    moves.pop();
                }
            }
            Turn::Done => unreachable!("depth is reached before the game ends"),
        }
        Ok(())
    }
}

/// Tabulates `f(1..=budget)` for a bound game.
pub fn build(spec: &GameSpec, budget: u64) -> Result<SpreadingMap> {
    build_with_cap(spec, budget, DEFAULT_PLAY_CAP)
}

pub fn build_with_cap(spec: &GameSpec, budget: u64, cap: usize) -> Result<SpreadingMap> {
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    let policy = spec.policy()?;
    let mut b = Builder {
        policy,
        budget,
        cap,
        memo: HashMap::new(),
        trace: Vec::new(),
    };
    let root = Machine::new(&spec.tuple);
    let r = spec.tuple.len();
    let table = if r == 1 {
        b.game_table(&root, &mut Vec::new())?
    } else {
        b.note(format!("tuple of {r} games: f(t) = sum of component maps"));
        b.components_sum(&root, &[], r)?
    };
    Ok(SpreadingMap {
        spec: spec.clone(),
        budget,
        table,
        trace: b.trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapVerdict {
    pub ok: bool,
    pub counterexample: Option<(Transcript, FinSet)>,
    pub plays_checked: usize,
}

/// Checks `f(E)` against the tuple family for every minimal play inside
/// `[1, budget]`.
pub fn verify(map: &SpreadingMap, spec: &GameSpec, budget: u64) -> Result<MapVerdict> {
    if budget > map.budget {
        return Err(Error::Precondition(format!(
            "map covers [1, {}], asked to verify up to {budget}",
            map.budget
        )));
    }
    let mut plays = Vec::new();
    for_each_minimal_play(spec, budget, &mut |t| plays.push(t.clone()))?;
    let target = Target::from(spec.tuple.clone());
    let bad = plays.par_iter().find_first(|t| {
        let e = result_set(t).expect("minimal plays are complete");
        let img = map.image(&e).expect("budget within the table");
        !target.contains(&img)
    });
    let counterexample = bad.map(|t| {
        let e = result_set(t).expect("complete");
        let img = map.image(&e).expect("within table");
        (t.clone(), img)
    });
    Ok(MapVerdict {
        ok: counterexample.is_none(),
        counterexample,
        plays_checked: plays.len(),
    })
}

/// `f(t) ≥ g(t)` for every `t`.
pub fn image_is_spreading_dominated(f: &SpreadingMap, g: &SpreadingMap) -> Result<bool> {
    if f.budget != g.budget {
        return Err(Error::Precondition(format!(
            "budgets differ: {} vs {}",
            f.budget, g.budget
        )));
    }
    Ok(f.table.iter().zip(&g.table).all(|(a, b)| a >= b))
}

/// Whether the table for `budget` is a prefix of the table for `budget + 1`.
pub fn prefix_stable(spec: &GameSpec, budget: u64) -> Result<bool> {
    let a = build(spec, budget)?;
    let b = build(spec, budget + 1)?;
    Ok(b.table.starts_with(&a.table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schreier::TupleSpec;

    fn g(t: &str, p: &str) -> GameSpec {
        GameSpec::bound(t.parse::<TupleSpec>().unwrap(), Policy::parse_inline(p).unwrap())
    }

    fn identity_map(spec: &GameSpec, budget: u64) -> SpreadingMap {
        SpreadingMap {
            spec: spec.clone(),
            budget,
            table: (1..=budget).collect(),
            trace: vec![],
        }
    }

    #[test]
    fn zero_game_is_identity() {
        let spec = g("0", "const:1");
        let f = build(&spec, 8).unwrap();
        assert_eq!(f.table, (1..=8).collect::<Vec<_>>());
        assert!(verify(&f, &spec, 8).unwrap().ok);
    }

    #[test]
    fn identity_fails_for_demanding_one_game() {
        let spec = g("1", "const:3");
        let v = verify(&identity_map(&spec, 4), &spec, 4).unwrap();
        assert!(!v.ok);
        let (t, img) = v.counterexample.unwrap();
        assert_eq!(result_set(&t).unwrap().to_string(), "{1,2,3}");
        assert_eq!(img.to_string(), "{1,2,3}");
        let f = build(&spec, 8).unwrap();
        assert_eq!(f.at(1), Some(6));
        assert!(verify(&f, &spec, 8).unwrap().ok);
    }

    #[test]
    fn larger_games_verify() {
        for (t, p) in [("2", "seq:2,1"), ("w", "const:2"), ("1,1", "prevmin:1"), ("2", "seq:2,2,1")] {
            let spec = g(t, p);
            let f = build(&spec, 8).unwrap();
            assert!(f.is_strictly_increasing());
            let v = verify(&f, &spec, 8).unwrap();
            assert!(v.ok, "{t} {p}: {v:?}");
            assert!(prefix_stable(&spec, 8).unwrap());
            eprintln!("{t} {p}: {:?} ({} plays)", f.table, v.plays_checked);
        }
    }

    #[test]
    fn limit_game_adds_its_choice() {
        let spec = g("w", "const:2");
        let inner = g("2", "const:2");
        let f = build(&spec, 6).unwrap();
        let f2 = build(&inner, 6).unwrap();
        for t in 1..=6 {
            assert_eq!(f.at(t).unwrap(), f2.at(t).unwrap() + 2);
        }
        assert!(image_is_spreading_dominated(&f, &f2).unwrap());
        assert!(!image_is_spreading_dominated(&f2, &f).unwrap());
    }
}
