//! From a winning strategy for `𝒩` on a hereditary `𝓕` to a sequence
//! `N = (n_i)` with `𝓕(N)` inside the tuple family.
//!
//! Each `E ∈ 𝓕` is cut into consecutive chunks of exactly the sizes the
//! strategy demands. Because the strategy wins and `𝓕` is hereditary, the
//! game cannot end before `E` runs out. `𝒮` then finishes the game with the
//! smallest possible blocks, giving a minimal play `Ē ⊇ E`, and the spreading
//! map of the bound game sends `Ē`, hence `E`, into the tuple family.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FinSet, SetFamily};
use crate::games::{render_moves, GameSpec, Machine, Move, Policy, Turn};
use crate::schreier::{Target, TupleSpec};
use crate::spreadmap::{self, SpreadingMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub source: FinSet,
    /// Complete chunks `E_1 < … < E_p`, with `|E_q| = l_q`.
    pub blocks: Vec<FinSet>,
    /// `l_1, …, l_p`, plus the demand of the partial chunk if there is one.
    pub demanded_sizes: Vec<u64>,
    /// Tail of `E` shorter than the next demand.
    pub partial: Option<FinSet>,
    /// Elements left over after the game ended. Nonempty only when the
    /// strategy does not win on a family containing `E`.
    pub leftover: FinSet,
    /// The complete chunks concatenate to exactly `E`.
    pub exhausted: bool,
    /// The game moves consumed by the complete chunks.
    pub moves: Vec<Move>,
}

fn illegal(moves: &[Move], reason: String) -> Error {
    Error::IllegalMove {
        index: moves.len(),
        reason,
    }
}

/// Greedy chunking of `E` along the bound game.
pub fn decompose(e: &FinSet, spec: &TupleSpec, policy: &Policy) -> Result<Decomposition> {
    let mut m = Machine::new(spec);
    let mut moves = Vec::new();
    let mut blocks = Vec::new();
    let mut demanded = Vec::new();
    let mut partial = None;
    let elems = e.as_slice();
    let mut idx = 0;
    loop {
        match m.turn() {
            Turn::Done => break,
            Turn::NPicks => {
                let l = policy
                    .decide(&moves)
                    .ok_or_else(|| Error::StrategyUndefined(render_moves(&moves)))?;
                m.apply_n(l).map_err(|r| illegal(&moves, r))?;
                moves.push(Move::N(l));
            }
            Turn::SPicks { min_size, .. } => {
                if idx == elems.len() {
                    break;
                }
                demanded.push(min_size);
                let take = min_size as usize;
                if idx + take > elems.len() {
                    partial = Some(FinSet::new(elems[idx..].to_vec())?);
                    idx = elems.len();
                    break;
                }
                let b = FinSet::new(elems[idx..idx + take].to_vec())?;
                m.apply_s(&b).map_err(|r| illegal(&moves, r))?;
                moves.push(Move::S(b.clone()));
                blocks.push(b);
                idx += take;
            }
        }
    }
    let leftover = FinSet::new(elems[idx..].to_vec())?;
    Ok(Decomposition {
        source: e.clone(),
        exhausted: partial.is_none() && leftover.is_empty(),
        blocks,
        demanded_sizes: demanded,
        partial,
        leftover,
        moves,
    })
}

/// `Ē`: pads the partial chunk, then lets `𝒮` finish with the smallest
/// blocks. Errors when `Ē` leaves `[1, universe_bound]`.
pub fn complete_to_ebar(
    d: &Decomposition,
    spec: &TupleSpec,
    policy: &Policy,
    universe_bound: u64,
) -> Result<(FinSet, Vec<Move>)> {
    if !d.leftover.is_empty() {
        return Err(Error::Precondition(format!(
            "{} is not exhausted: the game ended with {} unused",
            d.source, d.leftover
        )));
    }
    let mut m = Machine::new(spec);
    let mut moves = d.moves.clone();
    for (i, mv) in moves.iter().enumerate() {
        m.apply(mv).map_err(|reason| Error::IllegalMove { index: i, reason })?;
    }
    let mut pending = d.partial.clone();
    loop {
        match m.turn() {
            Turn::Done => break,
            Turn::NPicks => {
                let l = policy
                    .decide(&moves)
                    .ok_or_else(|| Error::StrategyUndefined(render_moves(&moves)))?;
                m.apply_n(l).map_err(|r| illegal(&moves, r))?;
                moves.push(Move::N(l));
            }
            Turn::SPicks {
                min_size,
                min_element,
                ..
            } => {
                let mut v = pending.take().map(FinSet::into_vec).unwrap_or_default();
                let mut next = v.last().map_or(min_element, |&x| x + 1);
                while (v.len() as u64) < min_size {
                    v.push(next);
                    next += 1;
                }
                let b = FinSet::new(v)?;
                m.apply_s(&b).map_err(|r| illegal(&moves, r))?;
                moves.push(Move::S(b));
            }
        }
    }
    let ebar = m.union().clone();
    let needed = ebar.max_elem().unwrap_or(0);
    if needed > universe_bound {
        return Err(Error::UniverseTooSmall {
            bound: universe_bound,
            needed,
        });
    }
    Ok((ebar, moves))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedFailure {
    pub member: FinSet,
    pub ebar: Option<FinSet>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub family: String,
    pub members: Vec<FinSet>,
    pub spec: TupleSpec,
    pub strategy: String,
    pub universe_bound: u64,
    pub map: SpreadingMap,
    /// `N`, equal to the map's table.
    pub sequence: Vec<u64>,
    pub verified_members: usize,
    pub failures: Vec<EmbedFailure>,
}

impl EmbeddingCertificate {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the pipeline over every member of `fam`.
///
/// `𝒩` answers 1 wherever `policy` is silent; any choice there keeps the
/// spreading map valid, since it only has to handle minimal plays.
pub fn build_embedding(
    fam: &SetFamily,
    spec: &TupleSpec,
    policy: &Policy,
    universe_bound: u64,
) -> Result<EmbeddingCertificate> {
    if let Some(gap) = fam.first_hereditary_gap() {
        return Err(Error::NotHereditary(format!("{gap} is missing")));
    }
    let bound_policy = policy.clone().or_else(1);
    let members: Vec<FinSet> = fam.iter().collect();
    let mut failures = Vec::new();
    let mut completed = Vec::new();
    for e in &members {
        let d = decompose(e, spec, &bound_policy)?;
        if !d.leftover.is_empty() {
            failures.push(EmbedFailure {
                member: e.clone(),
                ebar: None,
                reason: format!(
                    "game ended before {e} was used up; {} left over",
                    d.leftover
                ),
            });
            continue;
        }
        let (ebar, _) = complete_to_ebar(&d, spec, &bound_policy, u64::MAX)?;
        completed.push((e.clone(), ebar));
    }
    let budget = completed
        .iter()
        .filter_map(|(_, eb)| eb.max_elem())
        .max()
        .unwrap_or(1)
        .max(universe_bound);
    let game = GameSpec::bound(spec.clone(), bound_policy);
    let map = spreadmap::build(&game, budget)?;
    let target = Target::from(spec.clone());
    let checked: Vec<Option<EmbedFailure>> = completed
        .par_iter()
        .map(|(e, ebar)| {
            let ne = map.image(e).expect("members lie below the budget");
            let nebar = map.image(ebar).expect("budget covers every completion");
            if target.contains(&nebar) && target.contains(&ne) {
                None
            } else {
                Some(EmbedFailure {
                    member: e.clone(),
                    ebar: Some(ebar.clone()),
                    reason: format!("n_E = {ne} or n_Ebar = {nebar} is outside the tuple family"),
                })
            }
        })
        .collect();
    let verified = checked.iter().filter(|c| c.is_none()).count();
    failures.extend(checked.into_iter().flatten());
    Ok(EmbeddingCertificate {
        family: fam.fingerprint(),
        members,
        spec: spec.clone(),
        strategy: policy.fingerprint(),
        universe_bound,
        sequence: map.table.clone(),
        map,
        verified_members: verified,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub ok: bool,
    pub checked: usize,
    pub problems: Vec<String>,
}

/// Re-checks a certificate from its stored members and sequence alone.
pub fn verify_certificate(cert: &EmbeddingCertificate) -> CertificateCheck {
    let mut problems = Vec::new();
    if cert.sequence != cert.map.table {
        problems.push("sequence differs from the map table".to_string());
    }
    if !cert.sequence.windows(2).all(|w| w[0] < w[1]) {
        problems.push("sequence is not strictly increasing".to_string());
    }
    let target = Target::from(cert.spec.clone());
    let mut checked = 0;
    for e in &cert.members {
        let image = e.map_through(|i| {
            if i == 0 {
                None
            } else {
                cert.sequence.get(i as usize - 1).copied()
            }
        });
        match image {
            None => problems.push(format!("{e} indexes past the sequence")),
            Some(ne) if !target.contains(&ne) => {
                problems.push(format!("n_E = {ne} for E = {e} is outside the tuple family"))
            }
            Some(_) => checked += 1,
        }
    }
    if !cert.failures.is_empty() {
        problems.push(format!("{} recorded failures", cert.failures.len()));
    }
    CertificateCheck {
        ok: problems.is_empty(),
        checked,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> FinSet {
        x.parse().unwrap()
    }

    fn t(x: &str) -> TupleSpec {
        x.parse().unwrap()
    }

    #[test]
    fn chunking_examples() {
        let seq = Policy::Sequence { values: vec![1, 2] };
        let d = decompose(&s("2,5,9"), &t("1,1"), &seq).unwrap();
        assert_eq!(d.blocks, vec![s("2"), s("5,9")]);
        assert!(d.exhausted);
        let three = Policy::Constant { l: 3 };
        let d = decompose(&s("2,5,9"), &t("1"), &three).unwrap();
        assert_eq!(d.blocks, vec![s("2,5,9")]);
        assert!(d.exhausted);
        let d = decompose(&s("2,5"), &t("1"), &three).unwrap();
        assert!(!d.exhausted);
        assert_eq!(d.partial, Some(s("2,5")));
        assert_eq!(complete_to_ebar(&d, &t("1"), &three, 10).unwrap().0, s("2,5,6"));
    }

    #[test]
    fn completion_examples() {
        let prevmin = Policy::PreviousMin { first: vec![1] };
        let d = decompose(&s("2"), &t("1,1"), &prevmin).unwrap();
        assert_eq!(complete_to_ebar(&d, &t("1,1"), &prevmin, 9).unwrap().0, s("2,3,4"));
        let d = decompose(&FinSet::empty(), &t("1,1"), &prevmin).unwrap();
        assert_eq!(complete_to_ebar(&d, &t("1,1"), &prevmin, 9).unwrap().0, s("1,2"));
        let d = decompose(&s("2,3,4"), &t("1,1"), &prevmin).unwrap();
        assert_eq!(complete_to_ebar(&d, &t("1,1"), &prevmin, 9).unwrap().0, s("2,3,4"));
        let d = decompose(&s("8"), &t("1,1"), &prevmin).unwrap();
        assert!(matches!(
            complete_to_ebar(&d, &t("1,1"), &prevmin, 9),
            Err(Error::UniverseTooSmall { needed: 16, .. })
        ));
    }

    #[test]
    fn pairs_family_embeds() {
        let fam = SetFamily::from_sets(4, [s("1,2"), s("3,4")])
            .unwrap()
            .hereditary_closure();
        let cert = build_embedding(&fam, &t("1"), &Policy::Constant { l: 3 }, 4).unwrap();
        assert!(cert.accepted(), "{:?}", cert.failures);
        assert_eq!(cert.verified_members, 7);
        assert!(verify_certificate(&cert).ok);
        let empty = SetFamily::from_sets(1, [FinSet::empty()]).unwrap();
        assert!(build_embedding(&empty, &t("2"), &Policy::Constant { l: 1 }, 1)
            .unwrap()
            .accepted());
    }
}
