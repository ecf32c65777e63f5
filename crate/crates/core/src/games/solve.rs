//! Backward induction for `𝒩` inside a finite universe, and exhaustive
//! verification of a fixed policy.
//!
//! Inside `[1, B]` the set-picker can get stuck. A block after which `𝒮`
//! cannot finish the game is inadmissible: `𝒮` never plays it. A position
//! where `𝒮` has no admissible block is a truncation win for `𝒩`, which is
//! reported separately from a genuine win.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{prefix_key, render_moves, Machine, Move, Policy, Transcript, Turn};
use crate::error::{Error, Result};
use crate::family::{FamilyOracle, FinSet};
use crate::schreier::TupleSpec;

/// Game value from `𝒩`'s side. `𝒩` ranks `NWin > Trunc > SWin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    NWin,
    Trunc,
    SWin,
}

impl Value {
    fn n_rank(self) -> u8 {
        match self {
            Value::NWin => 2,
            Value::Trunc => 1,
            Value::SWin => 0,
        }
    }
}

/// Every block inside `[lo, hi]` meeting the size constraint, lexicographic.
pub(crate) fn blocks(lo: u64, hi: u64, min_size: u64, exact: bool) -> Vec<FinSet> {
    let mut out = Vec::new();
    if lo > hi || hi - lo + 1 < min_size {
        return out;
    }
    let max_size = if exact { min_size } else { hi - lo + 1 };
    let mut cur = Vec::new();
    fn rec(x: u64, hi: u64, min: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<FinSet>) {
        let len = cur.len() as u64;
        if len >= min {
            out.push(FinSet::new(cur.clone()).expect("ascending"));
        }
        if len == max {
            return;
        }
        for y in x..=hi {
            if len + 1 + (hi - y) < min {
                break;
            }
            cur.push(y);
            rec(y + 1, hi, min, max, cur, out);
            cur.pop();
        }
    }
    rec(lo, hi, min_size.max(1), max_size, &mut cur, &mut out);
    out
}

pub(crate) fn s_blocks(m: &Machine, universe_bound: u64) -> Vec<FinSet> {
    match m.turn() {
        Turn::SPicks {
            min_size,
            exact,
            min_element,
        } => blocks(min_element, universe_bound, min_size, exact),
        _ => Vec::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// `𝒩` picks from `1..=n_budget`.
    pub n_budget: u64,
    /// Accept a win that relies on `𝒮` being stuck.
    pub allow_truncation: bool,
    /// Largest number of memoized positions or strategy entries.
    pub cap: usize,
}

impl SolveOptions {
    pub fn flag_free(n_budget: u64) -> Self {
        SolveOptions {
            n_budget,
            allow_truncation: false,
            cap: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub prefix: String,
    pub choice: u64,
}

/// `𝒩`'s choices at every decision point reachable under them, keyed by
/// [`prefix_key`] of the moves so far.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    pub spec: TupleSpec,
    pub family: String,
    pub universe_bound: u64,
    pub n_budget: u64,
    pub truncation_win: bool,
    pub decisions: BTreeMap<String, u64>,
    pub trace: Vec<TraceEntry>,
}

impl Strategy {
    pub fn choice(&self, moves: &[Move]) -> Option<u64> {
        self.decisions.get(&prefix_key(moves)).copied()
    }

    pub fn as_policy(&self) -> Policy {
        Policy::Strategy(Box::new(self.clone()))
    }
}

struct Solver<'a> {
    fam: &'a FamilyOracle,
    hereditary: bool,
    universe: u64,
    opts: SolveOptions,
    memo: HashMap<Machine, Value>,
}

impl Solver<'_> {
    fn value(&mut self, m: &Machine) -> Result<Value> {
        if let Some(&v) = self.memo.get(m) {
            return Ok(v);
        }
        let v = match m.turn() {
            Turn::Done => {
                if self.fam.contains(m.union()) {
                    Value::SWin
                } else {
                    Value::NWin
                }
            }
            // Past a non-member every completion is a non-member.
            _ if self.hereditary && !self.fam.contains(m.union()) => {
                if m.completable_within(self.universe) {
                    Value::NWin
                } else {
                    Value::Trunc
                }
            }
            Turn::NPicks => {
                let mut best = Value::SWin;
                for l in 1..=self.opts.n_budget {
                    let v = self.value(&self.child_n(m, l))?;
                    if v.n_rank() > best.n_rank() {
                        best = v;
                    }
                    if best == Value::NWin {
                        break;
                    }
                }
                best
            }
            Turn::SPicks { .. } => {
                let mut seen_nwin = false;
                let mut result = None;
                for b in s_blocks(m, self.universe) {
                    let mut c = m.clone();
                    c.apply_s(&b).expect("enumerated blocks are legal");
                    match self.value(&c)? {
                        Value::SWin => {
                            result = Some(Value::SWin);
                            break;
                        }
                        Value::NWin => seen_nwin = true,
                        Value::Trunc => {}
                    }
                }
                result.unwrap_or(if seen_nwin { Value::NWin } else { Value::Trunc })
            }
        };
        if self.memo.len() >= self.opts.cap {
            return Err(Error::CapExceeded {
                what: "game positions".into(),
                cap: self.opts.cap,
            });
        }
        self.memo.insert(m.clone(), v);
        Ok(v)
    }

    fn child_n(&self, m: &Machine, l: u64) -> Machine {
        let mut c = m.clone();
        c.apply_n(l).expect("choices within budget are legal");
        c
    }

    /// Least choice achieving the position's value, at every reachable point.
    fn extract(
        &mut self,
        m: &Machine,
        moves: &mut Vec<Move>,
        out: &mut BTreeMap<String, u64>,
        trace: &mut Vec<TraceEntry>,
    ) -> Result<()> {
        match m.turn() {
            Turn::Done => Ok(()),
            Turn::NPicks => {
                let target = self.value(m)?;
                let mut chosen = None;
                for l in 1..=self.opts.n_budget {
                    if self.value(&self.child_n(m, l))? == target {
                        chosen = Some(l);
                        break;
                    }
                }
                let l = chosen.expect("the value is attained by some choice");
                out.insert(prefix_key(moves), l);
                trace.push(TraceEntry {
                    prefix: render_moves(moves),
                    choice: l,
                });
                if out.len() > self.opts.cap {
                    return Err(Error::CapExceeded {
                        what: "strategy entries".into(),
                        cap: self.opts.cap,
                    });
                }
                let c = self.child_n(m, l);
                moves.push(Move::N(l));
                self.extract(&c, moves, out, trace)?;
                moves.pop();
                Ok(())
            }
            Turn::SPicks { .. } => {
                for b in s_blocks(m, self.universe) {
                    let mut c = m.clone();
                    c.apply_s(&b).expect("enumerated blocks are legal");
                    moves.push(Move::S(b));
                    self.extract(&c, moves, out, trace)?;
                    moves.pop();
                }
                Ok(())
            }
        }
    }
}

/// A strategy for `𝒩` making every play end outside `fam`, or `None` when
/// `𝒮` can force membership (or only a truncation win exists and
/// `opts.allow_truncation` is off).
pub fn solve_n(
    spec: &TupleSpec,
    fam: &FamilyOracle,
    universe_bound: u64,
    opts: SolveOptions,
) -> Result<Option<Strategy>> {
    if opts.n_budget == 0 {
        return Err(Error::Precondition("n_budget must be at least 1".into()));
    }
    let mut solver = Solver {
        fam,
        hereditary: fam.known_hereditary(),
        universe: universe_bound,
        opts,
        memo: HashMap::new(),
    };
    let root = Machine::new(spec);
    let v = solver.value(&root)?;
    let accept = v == Value::NWin || (v == Value::Trunc && opts.allow_truncation);
    if !accept {
        return Ok(None);
    }
    let mut decisions = BTreeMap::new();
    let mut trace = Vec::new();
    solver.extract(&root, &mut Vec::new(), &mut decisions, &mut trace)?;
    Ok(Some(Strategy {
        spec: spec.clone(),
        family: fam.to_string(),
        universe_bound,
        n_budget: opts.n_budget,
        truncation_win: v == Value::Trunc,
        decisions,
        trace,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub wins: bool,
    pub truncation_win: bool,
    /// A complete admissible play ending inside the family.
    pub counterexample: Option<Transcript>,
    pub plays_checked: u64,
}

struct Verifier<'a> {
    spec: &'a TupleSpec,
    policy: &'a Policy,
    fam: &'a FamilyOracle,
    universe: u64,
    plays: u64,
    nodes: usize,
    cap: usize,
}

impl Verifier<'_> {
    fn explore(&mut self, m: &Machine, moves: &mut Vec<Move>) -> Result<(Value, Option<Vec<Move>>)> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::CapExceeded {
                what: "verification nodes".into(),
                cap: self.cap,
            });
        }
        match m.turn() {
            Turn::Done => {
                self.plays += 1;
                if self.fam.contains(m.union()) {
                    Ok((Value::SWin, Some(moves.clone())))
                } else {
                    Ok((Value::NWin, None))
                }
            }
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
                let r = self.explore(&c, moves);
                moves.pop();
                r
            }
            Turn::SPicks { .. } => {
                let mut seen_nwin = false;
                for b in s_blocks(m, self.universe) {
                    let mut c = m.clone();
                    c.apply_s(&b).expect("enumerated blocks are legal");
                    moves.push(Move::S(b));
                    let (v, cex) = self.explore(&c, moves)?;
                    moves.pop();
                    match v {
                        Value::SWin => return Ok((Value::SWin, cex)),
                        Value::NWin => seen_nwin = true,
                        Value::Trunc => {}
                    }
                }
                Ok((if seen_nwin { Value::NWin } else { Value::Trunc }, None))
            }
        }
    }
}

pub const DEFAULT_VERIFY_CAP: usize = 50_000_000;

/// Exhaustive check of `policy` against every admissible `𝒮` play inside
/// `[1, universe_bound]`.
pub fn verify_strategy(
    spec: &TupleSpec,
    policy: &Policy,
    fam: &FamilyOracle,
    universe_bound: u64,
) -> Result<Verdict> {
    let mut v = Verifier {
        spec,
        policy,
        fam,
        universe: universe_bound,
        plays: 0,
        nodes: 0,
        cap: DEFAULT_VERIFY_CAP,
    };
    let (value, cex) = v.explore(&Machine::new(spec), &mut Vec::new())?;
    let counterexample = match cex {
        Some(moves) => Some(Transcript::from_moves(v.spec, moves)?),
        None => None,
    };
    Ok(Verdict {
        wins: value != Value::SWin,
        truncation_win: value == Value::Trunc,
        counterexample,
        plays_checked: v.plays,
    })
}
