//! Bounded search for either side of the dichotomy: a sequence `M` with
//! `(S_α₁, …, S_αᵣ)(M) ⊆ 𝓕`, or a sequence `M` on which `𝒩` wins the
//! Schreier game for `𝓕[M]` together with an embedding of `𝓕[M]`.
//!
//! Inside a finite universe both sides can fail. That outcome is reported
//! as `undecided_at_truncation` with the budgets used, never as a negative.

pub mod example;
pub mod lemma;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embed::{build_embedding, verify_certificate, EmbeddingCertificate};
use crate::error::{Error, Result};
use crate::family::{FamilyOracle, FinSet, SeqView, SetFamily};
use crate::games::{solve_n, verify_strategy, SolveOptions, Strategy};
use crate::schreier::{enumerate, Target, TupleSpec};

pub use example::{check_example_noninclusions, example_family, ExampleWitnesses};
pub use lemma::{diagonalize_first_lemma, Color, ColorEntry, Coloring, LemmaOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Both sides need `|M|` at least this long.
    pub inclusion_len: usize,
    /// `𝒩` picks from `1..=n_budget`; 0 means the universe bound.
    pub n_budget: u64,
    /// Sequences tried on the embedding side.
    pub max_candidates: usize,
    pub solve_cap: usize,
    /// Recorded for reproducibility of seeded inputs.
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            inclusion_len: 6,
            n_budget: 0,
            max_candidates: 64,
            solve_cap: 2_000_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Inclusion,
    Embedding,
    UndecidedAtTruncation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionWitness {
    pub m: SeqView,
    /// Members `G` of the tuple family with `m_G` checked in `𝓕`.
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub m: SeqView,
    pub strategy: Strategy,
    pub certificate: EmbeddingCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyCertificate {
    pub outcome: Outcome,
    pub family: String,
    pub spec: TupleSpec,
    pub universe_bound: u64,
    pub ground: SeqView,
    pub params: SearchParams,
    pub inclusion: Option<InclusionWitness>,
    pub embedding: Option<EmbeddingWitness>,
    pub search_trace: Vec<String>,
}

/// Tuple-family members with indices in `[1, len]`, grouped by maximum.
fn members_by_max(spec: &TupleSpec, len: usize) -> Result<Vec<Vec<FinSet>>> {
    let mut by_max = vec![Vec::new(); len + 1];
    if len == 0 {
        return Ok(by_max);
    }
    let all = enumerate(&Target::from(spec.clone()), len as u64, 4_000_000)?;
    for g in all.iter() {
        by_max[g.max_elem().unwrap_or(0) as usize].push(g);
    }
    Ok(by_max)
}

/// First `M ⊆ ground` of length `target` (lexicographic) with every
/// `m_G ∈ 𝓕`, then extended greedily as far as `ground` allows.
fn inclusion_search(
    fam: &SetFamily,
    by_max: &[Vec<FinSet>],
    ground: &[u64],
    target: usize,
) -> Option<Vec<u64>> {
    fn ok_at(fam: &SetFamily, by_max: &[Vec<FinSet>], m: &[u64]) -> bool {
        by_max[m.len()].iter().all(|g| {
            let img = g.map_through(|i| m.get(i as usize - 1).copied()).expect("indices fit");
            fam.contains(&img)
        })
    }
    fn dfs(
        fam: &SetFamily,
        by_max: &[Vec<FinSet>],
        ground: &[u64],
        start: usize,
        m: &mut Vec<u64>,
        target: usize,
    ) -> bool {
        if m.len() == target {
            return true;
        }
        if ground.len() - start < target - m.len() {
            return false;
        }
        for i in start..ground.len() {
            m.push(ground[i]);
            if ok_at(fam, by_max, m) && dfs(fam, by_max, ground, i + 1, m, target) {
                return true;
            }
            m.pop();
        }
        false
    }
    let mut m = Vec::new();
    if target > ground.len() || !ok_at(fam, by_max, &m) {
        return None;
    }
    if !dfs(fam, by_max, ground, 0, &mut m, target) {
        return None;
    }
    let last = *m.last()?;
    let mut next = ground.iter().position(|&x| x == last).map_or(ground.len(), |p| p + 1);
    while next < ground.len() && m.len() + 1 < by_max.len() {
        m.push(ground[next]);
        if !ok_at(fam, by_max, &m) {
            m.pop();
        }
        next += 1;
    }
    Some(m)
}

/// `𝓕[M]` as an explicit family.
pub fn restrict_explicit(fam: &SetFamily, m: &SeqView) -> SetFamily {
    let ms = FinSet::new(m.prefix().to_vec()).expect("sequence is increasing");
    SetFamily::from_sets(fam.universe_bound(), fam.iter().filter(|e| e.is_subset(&ms)))
        .expect("subsets stay in the universe")
}

fn candidates(ground: &[u64], len: usize, max: usize) -> Vec<Vec<u64>> {
    let mut out = vec![ground.to_vec()];
    let mut cur = Vec::new();
    fn rec(ground: &[u64], start: usize, len: usize, max: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if out.len() >= max {
            return;
        }
        if cur.len() == len {
            if cur.as_slice() != ground {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..ground.len() {
            cur.push(ground[i]);
            rec(ground, i + 1, len, max, cur, out);
            cur.pop();
        }
    }
    if len < ground.len() {
        rec(ground, 0, len, max, &mut cur, &mut out);
    }
    out
}

/// Searches inside `ground` (the identity on `[1, universe_bound]` when
/// `None`). Inclusion is tried first.
pub fn dichotomy_search(
    fam: &SetFamily,
    spec: &TupleSpec,
    universe_bound: u64,
    ground: Option<&SeqView>,
    params: SearchParams,
) -> Result<DichotomyCertificate> {
    if let Some(gap) = fam.first_hereditary_gap() {
        return Err(Error::NotHereditary(format!("{gap} is missing")));
    }
    let ground = ground.cloned().unwrap_or_else(|| SeqView::identity(universe_bound));
    let g = ground.prefix();
    let mut trace = Vec::new();
    let mut cert = DichotomyCertificate {
        outcome: Outcome::UndecidedAtTruncation,
        family: fam.fingerprint(),
        spec: spec.clone(),
        universe_bound,
        ground: ground.clone(),
        params,
        inclusion: None,
        embedding: None,
        search_trace: Vec::new(),
    };

    let by_max = members_by_max(spec, g.len())?;
    match inclusion_search(fam, &by_max, g, params.inclusion_len) {
        Some(m) => {
            let checked = by_max[..=m.len()].iter().map(Vec::len).sum();
            trace.push(format!("inclusion: M = {m:?} ({checked} tuple members checked)"));
            cert.outcome = Outcome::Inclusion;
            cert.inclusion = Some(InclusionWitness {
                m: SeqView::new(m, universe_bound)?,
                checked,
            });
            cert.search_trace = trace;
            return Ok(cert);
        }
        None => trace.push(format!(
            "inclusion: no M of length {} inside {ground}",
            params.inclusion_len
        )),
    }

    let n_budget = if params.n_budget == 0 {
        universe_bound
    } else {
        params.n_budget
    };
    let opts = SolveOptions {
        n_budget,
        allow_truncation: false,
        cap: params.solve_cap,
    };
    let base = FamilyOracle::explicit(fam.clone());
    if g.len() >= params.inclusion_len {
        for cand in candidates(g, params.inclusion_len, params.max_candidates) {
            let m = SeqView::new(cand, universe_bound)?;
            let restricted = crate::family::restrict(&base, &m);
            let Some(strategy) = solve_n(spec, &restricted, universe_bound, opts)? else {
                trace.push(format!("embedding: S survives on F[{m}]"));
                continue;
            };
            let fam_m = restrict_explicit(fam, &m);
            let certificate =
                build_embedding(&fam_m, spec, &strategy.as_policy(), universe_bound)?;
            if !certificate.accepted() {
                trace.push(format!(
                    "embedding: {} failures on F[{m}]",
                    certificate.failures.len()
                ));
                continue;
            }
            trace.push(format!(
                "embedding: N wins on F[{m}] ({} decisions), {} members embedded",
                strategy.decisions.len(),
                certificate.verified_members
            ));
            cert.outcome = Outcome::Embedding;
            cert.embedding = Some(EmbeddingWitness {
                m,
                strategy,
                certificate,
            });
            cert.search_trace = trace;
            return Ok(cert);
        }
    }
    trace.push("undecided at truncation".into());
    cert.search_trace = trace;
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reverification {
    pub ok: bool,
    pub problems: Vec<String>,
}

/// Re-checks the populated side from scratch.
pub fn verify_dichotomy(cert: &DichotomyCertificate, fam: &SetFamily) -> Result<Reverification> {
    let mut problems = Vec::new();
    if fam.fingerprint() != cert.family {
        problems.push("family fingerprint differs".into());
    }
    match (cert.outcome, &cert.inclusion, &cert.embedding) {
        (Outcome::Inclusion, Some(w), None) => {
            let m = w.m.prefix();
            if m.len() < cert.params.inclusion_len {
                problems.push(format!("M has length {} only", m.len()));
            }
            let members = enumerate(&Target::from(cert.spec.clone()), m.len() as u64, 4_000_000)?;
            for gset in members.iter() {
                let img = w.m.image(&gset).expect("indices fit");
                if !fam.contains(&img) {
                    problems.push(format!("m_G = {img} for G = {gset} is not in the family"));
                    break;
                }
            }
            if members.len() != w.checked {
                problems.push(format!(
                    "recorded {} checks, recomputed {}",
                    w.checked,
                    members.len()
                ));
            }
        }
        (Outcome::Embedding, None, Some(w)) => {
            if w.m.len() < cert.params.inclusion_len {
                problems.push(format!("M has length {} only", w.m.len()));
            }
            let restricted =
                crate::family::restrict(&FamilyOracle::explicit(fam.clone()), &w.m);
            let v = verify_strategy(&cert.spec, &w.strategy.as_policy(), &restricted, cert.universe_bound)?;
            if !v.wins || v.truncation_win {
                problems.push(format!("strategy does not win cleanly: {v:?}"));
            }
            let fam_m = restrict_explicit(fam, &w.m);
            if fam_m.iter().collect::<Vec<_>>() != w.certificate.members {
                problems.push("certificate members differ from F[M]".into());
            }
            let check = verify_certificate(&w.certificate);
            problems.extend(check.problems);
        }
        (Outcome::UndecidedAtTruncation, None, None) => {}
        _ => problems.push("populated sides disagree with the outcome".into()),
    }
    Ok(Reverification {
        ok: problems.is_empty(),
        problems,
    })
}

/// Hereditary closure of a random antichain-like family inside `[1, bound]`:
/// one to `max_sets` generators of size one to `max_size`.
pub fn random_hereditary_family(bound: u64, seed: u64, max_sets: usize, max_size: usize) -> SetFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe: Vec<u64> = (1..=bound).collect();
    let count = rng.gen_range(1..=max_sets.max(1));
    let gens = (0..count).map(|_| {
        let size = rng.gen_range(1..=max_size.min(bound as usize).max(1));
        FinSet::from_unsorted(universe.choose_multiple(&mut rng, size).copied().collect())
    });
    SetFamily::from_sets(bound, gens)
        .expect("generators lie in the universe")
        .hereditary_closure()
}
