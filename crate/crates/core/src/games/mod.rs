//! Schreier games as an obligation automaton.
//!
//! A game is a stack of pending tasks. `Game(α)` with `α ≥ 1` waits for `𝒩`
//! to pick `l ≥ 1`; `Block` waits for `𝒮` to pick a block above everything
//! chosen so far. Unfolding after `𝒩` picks `l`:
//!
//! * `Game(1)` becomes one block of size at least `l`;
//! * `Game(β+1)` with `β ≥ 1` becomes `l` copies of `Game(β)`;
//! * `Game(λ)` for a limit becomes `Game(λ[l])`.
//!
//! `Game(0)` is always replaced at once by a block of size exactly one.
//! A tuple game pushes its components so that `α₁` is played first.

mod play;
mod solve;

pub use play::{for_each_minimal_play, interactive_play, minimal_plays, Side};
pub use solve::{solve_n, verify_strategy, SolveOptions, Strategy, TraceEntry, Value, Verdict};

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::family::FinSet;
use crate::ordinal::{Kind, Ordinal};
use crate::schreier::TupleSpec;

/// Largest `l` the machine will unfold; keeps stacks bounded.
pub const MAX_CHOICE: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Task {
    Game(Ordinal),
    Block { min_size: u64, exact: bool },
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Game(a) => write!(f, "game({a})"),
            Task::Block { min_size, exact: true } => write!(f, "block(={min_size})"),
            Task::Block { min_size, .. } => write!(f, "block(>={min_size})"),
        }
    }
}

/// Whose move it is and under which constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "turn", rename_all = "snake_case")]
pub enum Turn {
    NPicks,
    SPicks {
        min_size: u64,
        exact: bool,
        min_element: u64,
    },
    Done,
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Turn::NPicks => f.write_str("N picks l >= 1"),
            Turn::SPicks {
                min_size,
                exact,
                min_element,
            } => write!(
                f,
                "S picks a block of size {}{} with every element >= {}",
                if *exact { "exactly " } else { "at least " },
                min_size,
                min_element
            ),
            Turn::Done => f.write_str("done"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obligation {
    pub turn: Turn,
    /// Pending tasks, next one first.
    pub frames: Vec<String>,
}

/// Game state: pending tasks (top = last) and the union of `𝒮`'s blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Machine {
    stack: Vec<Task>,
    union: FinSet,
}

impl Machine {
    pub fn new(spec: &TupleSpec) -> Self {
        let mut m = Machine {
            stack: spec.ordinals().iter().rev().cloned().map(Task::Game).collect(),
            union: FinSet::empty(),
        };
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        if let Some(Task::Game(a)) = self.stack.last() {
            if a.is_zero() {
                self.stack.pop();
                self.stack.push(Task::Block {
                    min_size: 1,
                    exact: true,
                });
            }
        }
    }

    pub fn union(&self) -> &FinSet {
        &self.union
    }

    pub fn stack(&self) -> &[Task] {
        &self.stack
    }

    pub fn last_max(&self) -> u64 {
        self.union.max_elem().unwrap_or(0)
    }

    pub fn turn(&self) -> Turn {
        match self.stack.last() {
            None => Turn::Done,
            Some(Task::Game(_)) => Turn::NPicks,
            Some(Task::Block { min_size, exact }) => Turn::SPicks {
                min_size: *min_size,
                exact: *exact,
                min_element: self.last_max() + 1,
            },
        }
    }

    pub fn obligation(&self) -> Obligation {
        Obligation {
            turn: self.turn(),
            frames: self.stack.iter().rev().map(Task::to_string).collect(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.stack.is_empty()
    }

    /// Fewest further elements `𝒮` needs if `𝒩` answers 1 everywhere; every
    /// pending game then costs exactly one element.
    pub fn min_completion(&self) -> u64 {
        self.stack
            .iter()
            .map(|t| match t {
                Task::Game(_) => 1,
                Task::Block { min_size, .. } => *min_size,
            })
            .sum()
    }

    /// Whether some continuation fits inside `[1, universe_bound]`.
    pub fn completable_within(&self, universe_bound: u64) -> bool {
        self.last_max().saturating_add(self.min_completion()) <= universe_bound
    }

    pub fn apply_n(&mut self, l: u64) -> std::result::Result<(), String> {
        let Some(Task::Game(a)) = self.stack.last().cloned() else {
            return Err(format!("not N's turn ({})", self.turn()));
        };
        if l == 0 {
            return Err("N must pick l >= 1".into());
        }
        if l > MAX_CHOICE {
            return Err(format!("l = {l} exceeds the supported maximum {MAX_CHOICE}"));
        }
        self.stack.pop();
        match a.classify() {
            Kind::Zero => unreachable!("Game(0) is normalized away"),
            Kind::Successor(b) if b.is_zero() => self.stack.push(Task::Block {
                min_size: l,
                exact: false,
            }),
            Kind::Successor(b) => {
                for _ in 0..l {
                    self.stack.push(Task::Game(b.clone()));
                }
            }
            Kind::Limit => {
                let an = a.fundamental(l).map_err(|e| e.to_string())?;
                self.stack.push(Task::Game(an));
            }
        }
        self.normalize();
        Ok(())
    }

    pub fn apply_s(&mut self, block: &FinSet) -> std::result::Result<(), String> {
        let Some(Task::Block { min_size, exact }) = self.stack.last().cloned() else {
            return Err(format!("not S's turn ({})", self.turn()));
        };
        if block.is_empty() {
            return Err("S must pick a nonempty block".into());
        }
        if !self.union.precedes(block) {
            return Err(format!(
                "block {block} must lie strictly above {}",
                self.last_max()
            ));
        }
        let size = block.len() as u64;
        if size < min_size || (exact && size != min_size) {
            return Err(format!(
                "block {block} has size {size}, obligation is {}",
                self.turn()
            ));
        }
        self.stack.pop();
        self.union = self.union.union(block);
        self.normalize();
        Ok(())
    }

    pub fn apply(&mut self, mv: &Move) -> std::result::Result<(), String> {
        match mv {
            Move::N(l) => self.apply_n(*l),
            Move::S(b) => self.apply_s(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    N(u64),
    S(FinSet),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::N(l) => write!(f, "N{l}"),
            Move::S(b) => {
                let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                write!(f, "S{}", parts.join(","))
            }
        }
    }
}

/// Every block of exactly `size` elements inside `[lo, hi]`, lexicographic.
pub fn blocks_exact(lo: u64, hi: u64, size: u64) -> Vec<FinSet> {
    solve::blocks(lo, hi, size, true)
}

/// `N1|S4|N2|S5,6`.
pub fn render_moves(moves: &[Move]) -> String {
    moves
        .iter()
        .map(Move::to_string)
        .collect::<Vec<_>>()
        .join("|")
}

/// Stable key of a move prefix: first 16 hex digits of its SHA-256.
pub fn prefix_key(moves: &[Move]) -> String {
    let digest = Sha256::digest(render_moves(moves).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InProgress,
    Complete,
}

/// A legal play record. `obligations[i]` is the turn before `moves[i]`;
/// the final entry is the current turn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub spec: TupleSpec,
    pub moves: Vec<Move>,
    pub obligations: Vec<Turn>,
    pub status: Status,
}

impl Transcript {
    pub fn new(spec: &TupleSpec) -> Self {
        let m = Machine::new(spec);
        Transcript {
            spec: spec.clone(),
            moves: Vec::new(),
            status: if m.is_done() {
                Status::Complete
            } else {
                Status::InProgress
            },
            obligations: vec![m.turn()],
        }
    }

    /// Validates every move in order.
    pub fn from_moves(spec: &TupleSpec, moves: Vec<Move>) -> Result<Self> {
        let mut t = Transcript::new(spec);
        for mv in moves {
            t.push(mv)?;
        }
        Ok(t)
    }

    pub fn machine(&self) -> Result<Machine> {
        let mut m = Machine::new(&self.spec);
        for (index, mv) in self.moves.iter().enumerate() {
            m.apply(mv)
                .map_err(|reason| Error::IllegalMove { index, reason })?;
        }
        Ok(m)
    }

    pub fn push(&mut self, mv: Move) -> Result<()> {
        let mut m = self.machine()?;
        m.apply(&mv).map_err(|reason| Error::IllegalMove {
            index: self.moves.len(),
            reason,
        })?;
        self.moves.push(mv);
        self.obligations.push(m.turn());
        self.status = if m.is_done() {
            Status::Complete
        } else {
            Status::InProgress
        };
        Ok(())
    }

    /// Re-derives the stored obligations and status.
    pub fn validate(&self) -> Result<()> {
        let fresh = Transcript::from_moves(&self.spec, self.moves.clone())?;
        if fresh.obligations != self.obligations || fresh.status != self.status {
            return Err(Error::Precondition(
                "stored obligations disagree with the replayed game".into(),
            ));
        }
        Ok(())
    }

    pub fn blocks(&self) -> impl Iterator<Item = &FinSet> {
        self.moves.iter().filter_map(|m| match m {
            Move::S(b) => Some(b),
            Move::N(_) => None,
        })
    }

    pub fn n_choices(&self) -> impl Iterator<Item = u64> + '_ {
        self.moves.iter().filter_map(|m| match m {
            Move::N(l) => Some(*l),
            Move::S(_) => None,
        })
    }

    pub fn render(&self) -> String {
        render_moves(&self.moves)
    }
}

/// The obligation after `t`, replaying from scratch.
pub fn next_obligation(spec: &TupleSpec, t: &[Move]) -> Result<Obligation> {
    let mut m = Machine::new(spec);
    for (index, mv) in t.iter().enumerate() {
        m.apply(mv)
            .map_err(|reason| Error::IllegalMove { index, reason })?;
    }
    Ok(m.obligation())
}

/// Union of all `𝒮` blocks of a complete play.
pub fn result_set(t: &Transcript) -> Result<FinSet> {
    if t.status != Status::Complete {
        return Err(Error::Incomplete);
    }
    Ok(t.blocks().fold(FinSet::empty(), |acc, b| acc.union(b)))
}

/// A deterministic rule for `𝒩`'s choices, as a function of the moves so far.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Policy {
    Constant { l: u64 },
    /// The `i`-th choice of `𝒩` is `values[i]`; the last value repeats.
    Sequence { values: Vec<u64> },
    /// The listed values first, then the minimum of `𝒮`'s latest block.
    PreviousMin { first: Vec<u64> },
    Strategy(Box<Strategy>),
    /// `primary` where it is defined, `otherwise` elsewhere.
    Fallback { primary: Box<Policy>, otherwise: u64 },
}

impl Policy {
    pub fn decide(&self, moves: &[Move]) -> Option<u64> {
        let n_so_far = moves.iter().filter(|m| matches!(m, Move::N(_))).count();
        match self {
            Policy::Constant { l } => Some(*l),
            Policy::Sequence { values } => values
                .get(n_so_far)
                .or_else(|| values.last())
                .copied(),
            Policy::PreviousMin { first } => {
                if let Some(&v) = first.get(n_so_far) {
                    return Some(v);
                }
                moves.iter().rev().find_map(|m| match m {
                    Move::S(b) => b.min_elem(),
                    Move::N(_) => None,
                })
            }
            Policy::Strategy(s) => s.choice(moves),
            Policy::Fallback { primary, otherwise } => {
                Some(primary.decide(moves).unwrap_or(*otherwise))
            }
        }
    }

    pub fn or_else(self, otherwise: u64) -> Policy {
        Policy::Fallback {
            primary: Box::new(self),
            otherwise,
        }
    }

    /// Stable short hash of the JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("policies serialize");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// `const:3`, `seq:2,1,1` or `prevmin:1`.
    pub fn parse_inline(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            what: "policy",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("expected const:<l>, seq:<l,..> or prevmin:<l,..>"))?;
        let nums = || -> Result<Vec<u64>> {
            rest.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse::<u64>().map_err(|_| bad("not an integer")))
                .collect()
        };
        let policy = match kind.trim() {
            "const" => Policy::Constant {
                l: rest.trim().parse().map_err(|_| bad("not an integer"))?,
            },
            "seq" => Policy::Sequence { values: nums()? },
            "prevmin" => Policy::PreviousMin { first: nums()? },
            _ => return Err(bad("unknown policy kind")),
        };
        if let Policy::Sequence { values } = &policy {
            if values.is_empty() {
                return Err(bad("a sequence needs at least one value"));
            }
        }
        Ok(policy)
    }
}

/// A tuple game, optionally bound by a policy for `𝒩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    pub tuple: TupleSpec,
    pub policy: Option<Policy>,
}

impl GameSpec {
    pub fn free(tuple: TupleSpec) -> Self {
        GameSpec {
            tuple,
            policy: None,
        }
    }

    pub fn bound(tuple: TupleSpec, policy: Policy) -> Self {
        GameSpec {
            tuple,
            policy: Some(policy),
        }
    }

    pub fn policy(&self) -> Result<&Policy> {
        self.policy
            .as_ref()
            .ok_or_else(|| Error::Precondition("the game needs a bound policy for N".into()))
    }
}
