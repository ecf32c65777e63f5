use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::solve::{blocks, s_blocks};
use super::{
    result_set, solve_n, GameSpec, Machine, Move, Policy, SolveOptions, Status, Transcript, Turn,
};
use crate::error::{Error, Result};
use crate::family::{FamilyOracle, FinSet};
use crate::schreier::TupleSpec;

/// Calls `f` on every complete play of a bound game in which `𝒮` always
/// picks a block of exactly the demanded size inside `[1, budget]`.
pub fn for_each_minimal_play(
    spec: &GameSpec,
    budget: u64,
    f: &mut dyn FnMut(&Transcript),
) -> Result<()> {
    let policy = spec.policy()?;
    let root = Machine::new(&spec.tuple);
    let mut moves = Vec::new();
    let mut turns = vec![root.turn()];
    walk(&spec.tuple, policy, &root, budget, &mut moves, &mut turns, f)
}

fn walk(
    tuple: &TupleSpec,
    policy: &Policy,
    m: &Machine,
    budget: u64,
    moves: &mut Vec<Move>,
    turns: &mut Vec<Turn>,
    f: &mut dyn FnMut(&Transcript),
) -> Result<()> {
    let mut step = |mv: Move, moves: &mut Vec<Move>, turns: &mut Vec<Turn>| -> Result<()> {
        let mut c = m.clone();
        c.apply(&mv).map_err(|reason| Error::IllegalMove {
            index: moves.len(),
            reason,
        })?;
        moves.push(mv);
        turns.push(c.turn());
        walk(tuple, policy, &c, budget, moves, turns, f)?;
        moves.pop();
        turns.pop();
        Ok(())
    };
    match m.turn() {
        Turn::Done => {
            f(&Transcript {
                spec: tuple.clone(),
                moves: moves.clone(),
                obligations: turns.clone(),
                status: Status::Complete,
            });
            Ok(())
        }
        Turn::NPicks => {
            let l = policy
                .decide(moves)
                .ok_or_else(|| Error::StrategyUndefined(super::render_moves(moves)))?;
            step(Move::N(l), moves, turns)
        }
        Turn::SPicks {
            min_size,
            min_element,
            ..
        } => {
            for b in blocks(min_element, budget, min_size, true) {
                step(Move::S(b), moves, turns)?;
            }
            Ok(())
        }
    }
}

/// All minimal plays inside `[1, budget]`, in lexicographic order of blocks.
pub fn minimal_plays(spec: &GameSpec, budget: u64, cap: usize) -> Result<Vec<Transcript>> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_minimal_play(spec, budget, &mut |t| {
        if out.len() < cap {
            out.push(t.clone());
        } else {
            over = true;
        }
    })?;
    if over {
        return Err(Error::CapExceeded {
            what: format!("minimal plays within [1, {budget}]"),
            cap,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    N,
    S,
}

/// `𝒮`'s machine move: the lexicographically first block after which the
/// game can still finish, preferring blocks that keep the union in `fam`.
fn machine_block(m: &Machine, fam: &FamilyOracle, universe: u64) -> Option<FinSet> {
    let admissible: Vec<FinSet> = s_blocks(m, universe)
        .into_iter()
        .filter(|b| {
            let mut c = m.clone();
            c.apply_s(b).is_ok() && c.completable_within(universe)
        })
        .collect();
    admissible
        .iter()
        .find(|b| fam.contains(&m.union().union(b)))
        .or(admissible.first())
        .cloned()
}

/// A terminal session. The human plays `machine_side`'s opponent; `quit` or
/// end of input stops with an in-progress transcript.
pub fn interactive_play<R: BufRead, W: Write>(
    spec: &TupleSpec,
    fam: &FamilyOracle,
    machine_side: Side,
    universe_bound: u64,
    mut input: R,
    mut out: W,
) -> Result<Transcript> {
    let mut t = Transcript::new(spec);
    let policy = if machine_side == Side::N {
        let opts = SolveOptions {
            n_budget: universe_bound,
            allow_truncation: true,
            cap: 2_000_000,
        };
        match solve_n(spec, fam, universe_bound, opts)? {
            Some(s) => {
                writeln!(out, "machine N plays a solved strategy")?;
                s.as_policy()
            }
            None => {
                writeln!(out, "N has no winning strategy here; machine N plays l = 1")?;
                Policy::Constant { l: 1 }
            }
        }
    } else {
        Policy::Constant { l: 1 }
    };
    loop {
        let m = t.machine()?;
        let turn = m.turn();
        if turn == Turn::Done {
            break;
        }
        let machine_moves = matches!(
            (&turn, machine_side),
            (Turn::NPicks, Side::N) | (Turn::SPicks { .. }, Side::S)
        );
        if machine_moves {
            let mv = match turn {
                Turn::NPicks => Move::N(policy.decide(&t.moves).unwrap_or(1)),
                _ => match machine_block(&m, fam, universe_bound) {
                    Some(b) => Move::S(b),
                    None => {
                        writeln!(out, "S has no admissible block inside [1, {universe_bound}]")?;
                        return Ok(t);
                    }
                },
            };
            writeln!(out, "machine: {mv}")?;
            t.push(mv)?;
            continue;
        }
        write!(out, "{turn}> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 || line.trim() == "quit" {
            writeln!(out, "stopped")?;
            return Ok(t);
        }
        let parsed = match turn {
            Turn::NPicks => line
                .trim()
                .parse::<u64>()
                .map(Move::N)
                .map_err(|_| "enter a positive integer".to_string()),
            _ => line
                .trim()
                .parse::<FinSet>()
                .map(Move::S)
                .map_err(|e| e.to_string()),
        };
        let mv = match parsed {
            Ok(mv) => mv,
            Err(reason) => {
                writeln!(out, "rejected: {reason}")?;
                continue;
            }
        };
        if let Move::S(b) = &mv {
            if b.max_elem().map_or(false, |x| x > universe_bound) {
                writeln!(out, "rejected: elements must be at most {universe_bound}")?;
                continue;
            }
        }
        if let Err(e) = t.push(mv) {
            writeln!(out, "rejected: {e}")?;
        }
    }
    let e = result_set(&t)?;
    let verdict = if fam.contains(&e) { "in" } else { "not in" };
    writeln!(out, "result {e} is {verdict} {fam}")?;
    Ok(t)
}
