//! Strong Cantor-Bendixson rank and index for spreading families.
//!
//! For spreading `𝓕`, `A ∈ 𝓕'` iff some `l > max A` has `A ∪ {l} ∈ 𝓕`, and
//! `l ↦ rank(A ∪ {l})` is non-decreasing. So `rank(A)` is the limit of
//! `rank(A ∪ {l}) + 1`, read off a window of probes: a constant tail gives
//! a successor, a tail whose Cantor normal form coefficients are affine in
//! the probe index gives a limit. Anything else is reported, not guessed.

pub mod residual;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{is_spreading_within, FamilyOracle, FinSet, SeqView, SetFamily};
use crate::ordinal::Ordinal;
use residual::Residual;

pub const DEFAULT_WINDOW: usize = 8;
/// Distinct states or sets ranked in one call.
pub const DEFAULT_STATE_CAP: usize = 200_000;
const SPREAD_CHECK_BOUND: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub element: u64,
    /// `None` when `A ∪ {element}` is not a member.
    pub rank: Option<Ordinal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RankOutcome {
    Rank { rank: Ordinal },
    NotInFamily,
    PatternUndetected { probes: Vec<Probe> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub family: String,
    pub set: FinSet,
    pub outcome: RankOutcome,
    pub probe_window: usize,
    /// Ranks of the top-level extensions examined.
    pub trace: Vec<Probe>,
}

impl RankResult {
    pub fn rank(&self) -> Option<&Ordinal> {
        match &self.outcome {
            RankOutcome::Rank { rank } => Some(rank),
            _ => None,
        }
    }
}

/// Internal result: `Err(probes)` when the pattern is undetected somewhere.
type Ranked = std::result::Result<Ordinal, Vec<Probe>>;

fn coefficients(o: &Ordinal) -> BTreeMap<Ordinal, u64> {
    o.terms()
        .iter()
        .map(|t| (t.exponent.clone(), t.coefficient))
        .collect()
}

/// `sup_l (r_l + 1)` from the probe ranks, or `None` when the tail fits no
/// supported pattern. Leading non-members are ignored; the tail must have
/// at least three members and cover the second half of the window.
pub fn detect_sup(ranks: &[Option<Ordinal>]) -> Option<Ordinal> {
    let first = ranks.iter().position(Option::is_some)?;
    let present: Vec<&Ordinal> = ranks[first..].iter().map(|r| r.as_ref()).collect::<Option<_>>()?;
    let take = (ranks.len() / 2).max(3);
    if present.len() < take {
        return None;
    }
    let tail = &present[present.len() - take..];
    if tail.windows(2).any(|w| w[0] > w[1]) {
        return None;
    }
    if tail.iter().all(|r| *r == tail[0]) {
        return tail[0].succ().ok();
    }
    let maps: Vec<BTreeMap<Ordinal, u64>> = tail.iter().map(|r| coefficients(r)).collect();
    let mut exponents: Vec<Ordinal> = maps.iter().flat_map(|m| m.keys().cloned()).collect();
    exponents.sort();
    exponents.dedup();
    let mut growing: Option<Ordinal> = None;
    let mut constant_above: Vec<(Ordinal, u64)> = Vec::new();
    for e in exponents.iter().rev() {
        let c: Vec<i128> = maps.iter().map(|m| *m.get(e).unwrap_or(&0) as i128).collect();
        let d = c[1] - c[0];
        if c.windows(2).any(|w| w[1] - w[0] != d) || d < 0 {
            return None;
        }
        if growing.is_none() {
            if d > 0 {
                growing = Some(e.clone());
            } else if c[0] > 0 {
                constant_above.push((e.clone(), c[0] as u64));
            }
        }
    }
    let e = growing?;
    let base = Ordinal::from_terms(constant_above).ok()?;
    base.add(&Ordinal::omega_power(&e.succ().ok()?)).ok()
}

/// Rank memo over floor-free residual states.
struct SymbolicEngine {
    window: usize,
    cap: usize,
    memo: HashMap<Residual, Ranked>,
}

impl SymbolicEngine {
    fn rank_alts(&mut self, alts: &[Residual]) -> Result<Option<Ranked>> {
        let mut best: Option<Ordinal> = None;
        for s in alts {
            match self.rank_state(s)? {
                Ok(r) => best = Some(best.map_or(r.clone(), |b| b.max(r))),
                Err(p) => return Ok(Some(Err(p))),
            }
        }
        Ok(best.map(Ok))
    }

    fn rank_state(&mut self, s: &Residual) -> Result<Ranked> {
        if let Some(r) = self.memo.get(s) {
            return Ok(r.clone());
        }
        if self.memo.len() >= self.cap {
            return Err(Error::CapExceeded {
                what: "residual states ranked".into(),
                cap: self.cap,
            });
        }
        let mut probes = Vec::with_capacity(self.window);
        for x in 1..=self.window as u64 {
            let alts = s.step(x)?;
            match self.rank_alts(&alts)? {
                Some(Err(p)) => {
                    self.memo.insert(s.clone(), Err(p.clone()));
                    return Ok(Err(p));
                }
                r => probes.push(Probe {
                    element: x,
                    rank: r.map(|r| r.expect("errors returned above")),
                }),
            }
        }
        let r = finish(probes);
        self.memo.insert(s.clone(), r.clone());
        Ok(r)
    }
}

fn finish(probes: Vec<Probe>) -> Ranked {
    if probes.iter().all(|p| p.rank.is_none()) {
        return Ok(Ordinal::zero());
    }
    let ranks: Vec<Option<Ordinal>> = probes.iter().map(|p| p.rank.clone()).collect();
    detect_sup(&ranks).ok_or(probes)
}

/// Rank memo over explicit sets, probing along `ground` (ℕ when `None`).
struct SetEngine<'a> {
    fam: &'a FamilyOracle,
    ground: Option<&'a SeqView>,
    window: usize,
    cap: usize,
    memo: HashMap<FinSet, Ranked>,
}

impl SetEngine<'_> {
    fn next_elements(&self, a: &FinSet) -> Result<Vec<u64>> {
        let top = a.max_elem().unwrap_or(0);
        match self.ground {
            None => Ok((top + 1..=top + self.window as u64).collect()),
            Some(seq) => {
                let v: Vec<u64> = seq.after(top).take(self.window).collect();
                if v.len() < self.window {
                    return Err(Error::PrefixTooShort {
                        member: a.to_string(),
                        position: seq.len() as u64 + (self.window - v.len()) as u64,
                        len: seq.len(),
                    });
                }
                Ok(v)
            }
        }
    }

    fn probes(&mut self, a: &FinSet) -> Result<std::result::Result<Vec<Probe>, Vec<Probe>>> {
        let mut probes = Vec::with_capacity(self.window);
        for x in self.next_elements(a)? {
            let b = a.push_above(x);
            let rank = if self.fam.contains(&b) {
                match self.rank_set(&b)? {
                    Ok(r) => Some(r),
                    Err(p) => return Ok(Err(p)),
                }
            } else {
                None
            };
            probes.push(Probe { element: x, rank });
        }
        Ok(Ok(probes))
    }

    fn rank_set(&mut self, a: &FinSet) -> Result<Ranked> {
        let key = memo_key(self.fam, a);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        if self.memo.len() >= self.cap {
            return Err(Error::CapExceeded {
                what: "sets ranked".into(),
                cap: self.cap,
            });
        }
        let r = match self.probes(a)? {
            Ok(p) => finish(p),
            Err(p) => Err(p),
        };
        self.memo.insert(key, r.clone());
        Ok(r)
    }
}

/// Above the largest generator element every coordinate constraint of a
/// spreading closure holds, so such elements are interchangeable.
fn threshold(fam: &FamilyOracle) -> Option<u64> {
    match fam {
        FamilyOracle::SpreadClosure(g) => Some(g.iter().filter_map(|e| e.max_elem()).max().unwrap_or(0)),
        FamilyOracle::Bar(inner) => threshold(inner),
        _ => None,
    }
}

/// Sets with equal keys have equal residual families up to relabelling,
/// hence equal ranks.
fn memo_key(fam: &FamilyOracle, a: &FinSet) -> FinSet {
    if let FamilyOracle::Pushforward(inner, seq) = fam {
        if let Some(pos) = a.map_through(|x| seq.position(x)) {
            return memo_key(inner, &pos);
        }
    }
    match threshold(fam) {
        Some(t) => {
            let mut next = t;
            FinSet::new(
                a.iter()
                    .map(|x| {
                        if x <= t {
                            x
                        } else {
                            next += 1;
                            next
                        }
                    })
                    .collect(),
            )
            .expect("relabelling keeps order")
        }
        None => a.clone(),
    }
}

/// Spreading relative to `ground`; fails closed for kinds it cannot vouch for.
fn require_spreading(fam: &FamilyOracle, ground: Option<&SeqView>) -> Result<()> {
    let ok = match (fam, ground) {
        (f, _) if f.known_spreading() => true,
        (FamilyOracle::Restricted(inner, _) | FamilyOracle::Pushforward(inner, _), Some(_)) => {
            inner.known_spreading()
        }
        (f, None) => is_spreading_within(f, SPREAD_CHECK_BOUND),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotSpreading(format!(
            "{fam} (the rank engine needs a spreading family)"
        )))
    }
}

/// `A ∈ 𝓕'`: some extension beyond `max A` within the window is a member.
/// Membership must then persist one step further, as spreading demands.
pub fn in_derivative(fam: &FamilyOracle, a: &FinSet, window: usize) -> Result<bool> {
    require_spreading(fam, None)?;
    if !fam.contains(a) {
        return Err(Error::NotMember(a.to_string()));
    }
    let top = a.max_elem().unwrap_or(0);
    for l in top + 1..=top + window.max(1) as u64 {
        if fam.contains(&a.push_above(l)) {
            if !fam.contains(&a.push_above(l + 1)) {
                return Err(Error::NotSpreading(format!(
                    "{} is a member but {} is not",
                    a.push_above(l),
                    a.push_above(l + 1)
                )));
            }
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn rank(fam: &FamilyOracle, a: &FinSet, window: usize) -> Result<RankResult> {
    Ranker::new(fam, None, window)?.rank(a)
}

/// Rank in `𝓕[L]` with extensions drawn from `ground`.
pub fn rank_along(fam: &FamilyOracle, ground: &SeqView, a: &FinSet, window: usize) -> Result<RankResult> {
    Ranker::new(fam, Some(ground), window)?.rank(a)
}

enum Memo {
    Symbolic(Residual, SymbolicEngine),
    Sets(HashMap<FinSet, Ranked>),
}

/// Ranks many sets of one family with a shared memo.
pub struct Ranker<'a> {
    fam: &'a FamilyOracle,
    ground: Option<&'a SeqView>,
    window: usize,
    cap: usize,
    memo: Memo,
}

impl<'a> Ranker<'a> {
    pub fn new(fam: &'a FamilyOracle, ground: Option<&'a SeqView>, window: usize) -> Result<Self> {
        Self::with_cap(fam, ground, window, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(
        fam: &'a FamilyOracle,
        ground: Option<&'a SeqView>,
        window: usize,
        cap: usize,
    ) -> Result<Self> {
        if window < 3 {
            return Err(Error::Precondition("probe window must be at least 3".into()));
        }
        require_spreading(fam, ground)?;
        let memo = match (ground, Residual::start(fam)) {
            (None, Some(start)) => Memo::Symbolic(
                start,
                SymbolicEngine {
                    window,
                    cap,
                    memo: HashMap::new(),
                },
            ),
            _ => Memo::Sets(HashMap::new()),
        };
        Ok(Ranker {
            fam,
            ground,
            window,
            cap,
            memo,
        })
    }

    pub fn rank(&mut self, a: &FinSet) -> Result<RankResult> {
        let mut result = RankResult {
            family: self.fam.fingerprint(),
            set: a.clone(),
            outcome: RankOutcome::NotInFamily,
            probe_window: self.window,
            trace: Vec::new(),
        };
        let off_ground = self.ground.map_or(false, |g| !a.iter().all(|x| g.contains(x)));
        if !self.fam.contains(a) || off_ground {
            return Ok(result);
        }
        let ranked = match &mut self.memo {
            Memo::Symbolic(start, engine) => {
                let top = a.max_elem().unwrap_or(0);
                let mut undetected = None;
                for x in top + 1..=top + self.window as u64 {
                    let alts = Residual::after(start, &a.push_above(x))?;
                    let rank = match engine.rank_alts(&alts)? {
                        None => None,
                        Some(Ok(r)) => Some(r),
                        Some(Err(p)) => {
                            undetected.get_or_insert(p);
                            None
                        }
                    };
                    result.trace.push(Probe { element: x, rank });
                }
                match undetected {
                    Some(p) => Err(p),
                    None => finish(result.trace.clone()),
                }
            }
            Memo::Sets(memo) => {
                let mut engine = SetEngine {
                    fam: self.fam,
                    ground: self.ground,
                    window: self.window,
                    cap: self.cap,
                    memo: std::mem::take(memo),
                };
                let probes = engine.probes(a);
                *memo = engine.memo;
                match probes? {
                    Ok(p) => {
                        result.trace = p.clone();
                        finish(p)
                    }
                    Err(p) => Err(p),
                }
            }
        };
        result.outcome = match ranked {
            Ok(rank) => RankOutcome::Rank { rank },
            Err(probes) => RankOutcome::PatternUndetected { probes },
        };
        Ok(result)
    }
}

/// `s(𝓕) = rank(∅) + 1`, always a successor.
pub fn index(fam: &FamilyOracle, window: usize) -> Result<RankResult> {
    index_impl(fam, None, window)
}

pub fn index_along(fam: &FamilyOracle, ground: &SeqView, window: usize) -> Result<RankResult> {
    index_impl(fam, Some(ground), window)
}

fn index_impl(fam: &FamilyOracle, ground: Option<&SeqView>, window: usize) -> Result<RankResult> {
    if !fam.contains(&FinSet::empty()) {
        return Err(Error::NotMember("∅".into()));
    }
    let mut r = Ranker::new(fam, ground, window)?.rank(&FinSet::empty())?;
    if let RankOutcome::Rank { rank } = &r.outcome {
        let s = rank.succ()?;
        assert!(
            matches!(s.classify(), crate::ordinal::Kind::Successor(_)),
            "an index is a successor"
        );
        r.outcome = RankOutcome::Rank { rank: s };
    }
    Ok(r)
}

/// `F̄ = { {n} ∪ F : F ∈ 𝓕, n < F } ∪ 𝓕`.
pub fn bar(fam: &FamilyOracle) -> FamilyOracle {
    FamilyOracle::bar(fam.clone())
}

/// Ranks in the spreading closure of `generators` agree with ranks of the
/// relabelled sets in its pushforward along `n`, for `∅` and every member
/// inside `[1, member_bound]`.
pub fn rank_transfer_check(
    generators: &SetFamily,
    n: &SeqView,
    member_bound: u64,
    window: usize,
) -> Result<bool> {
    let fam = FamilyOracle::spread_closure(generators.clone());
    let pushed = FamilyOracle::Pushforward(Box::new(fam.clone()), n.clone());
    let mut left_ranker = Ranker::new(&fam, None, window)?;
    let mut right_ranker = Ranker::new(&pushed, Some(n), window)?;
    for a in fam.members_within(member_bound, 1 << 16)? {
        let Some(image) = n.image(&a) else {
            return Err(Error::PrefixTooShort {
                member: a.to_string(),
                position: a.max_elem().unwrap_or(0),
                len: n.len(),
            });
        };
        let left = left_ranker.rank(&a)?;
        let right = right_ranker.rank(&image)?;
        if left.outcome != right.outcome {
            return Ok(false);
        }
    }
    Ok(true)
}
