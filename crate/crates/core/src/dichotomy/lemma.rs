//! Prepending a `0` to a tuple: the nested-subsequence diagonalization.
//!
//! Stage `l` tests `𝓕_l = {F : {m^{l-1}_l} ∪ F ∈ 𝓕[M_{l-1}]}` against the
//! inner dichotomy on the tail of `M_{l-1}` and keeps the first `l`
//! elements fixed, so `m_k = m^k_k` is stable once stage `k` has run.

use serde::{Deserialize, Serialize};

use super::{dichotomy_search, Outcome, SearchParams};
use crate::error::{Error, Result};
use crate::family::{FinSet, SeqView, SetFamily};
use crate::schreier::TupleSpec;

pub const MAX_LEMMA_DEPTH: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    /// `{m_l} ∪ F ∈ 𝓕` for every tuple-family `F` above `m_l`.
    Red,
    /// `𝒩` wins the inner game after `𝒮` opens with `{m_l}`.
    Blue,
    /// The inner search hit its budgets.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorEntry {
    pub position: usize,
    pub element: u64,
    pub color: Color,
    pub provenance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub entries: Vec<ColorEntry>,
}

impl Coloring {
    pub fn color_of(&self, position: usize) -> Option<Color> {
        self.entries.iter().find(|e| e.position == position).map(|e| e.color)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaOutcome {
    /// `(m^k_k)` for the examined stages, then the untouched tail of the last `M_l`.
    pub diagonal: SeqView,
    pub l: SeqView,
    pub side: Color,
    pub coloring: Coloring,
    pub stages: Vec<String>,
}

/// `{F ⊆ tail : {pivot} ∪ F ∈ fam}`.
fn shifted(fam: &SetFamily, pivot: u64, tail: &[u64]) -> SetFamily {
    let tail_set = FinSet::new(tail.to_vec()).expect("tail is increasing");
    let sets = fam
        .iter()
        .filter(|e| e.contains(pivot) && e.min_elem() == Some(pivot))
        .map(|e| FinSet::new(e.as_slice()[1..].to_vec()).expect("suffix stays increasing"))
        .filter(|f| f.is_subset(&tail_set));
    SetFamily::from_sets(fam.universe_bound(), sets).expect("subsets stay in the universe")
}

/// Runs `depth` stages. `L` is the red positions when the last examined
/// position is red, otherwise the maximal blue run ending there.
pub fn diagonalize_first_lemma(
    fam: &SetFamily,
    spec: &TupleSpec,
    universe_bound: u64,
    depth: usize,
    params: SearchParams,
) -> Result<LemmaOutcome> {
    if depth == 0 || depth > MAX_LEMMA_DEPTH {
        return Err(Error::Precondition(format!(
            "depth must lie in 1..={MAX_LEMMA_DEPTH}"
        )));
    }
    if let Some(gap) = fam.first_hereditary_gap() {
        return Err(Error::NotHereditary(format!("{gap} is missing")));
    }
    let mut m: Vec<u64> = (1..=universe_bound).collect();
    let mut coloring = Coloring::default();
    let mut stages = Vec::new();
    for l in 1..=depth {
        if m.len() < l {
            stages.push(format!("stage {l}: M has only {} elements", m.len()));
            break;
        }
        let pivot = m[l - 1];
        let tail = m[l..].to_vec();
        let inner_len = params.inclusion_len.min(tail.len());
        let (color, next_tail, provenance) = if inner_len == 0 {
            (Color::Undecided, tail.clone(), "empty tail".to_string())
        } else {
            let fam_l = shifted(fam, pivot, &tail);
            let ground = SeqView::new(tail.clone(), universe_bound)?;
            let inner = SearchParams {
                inclusion_len: inner_len,
                ..params
            };
            let cert = dichotomy_search(&fam_l, spec, universe_bound, Some(&ground), inner)?;
            match cert.outcome {
                Outcome::Inclusion => {
                    let w = cert.inclusion.expect("inclusion side populated");
                    let p = format!("inclusion on {} ({} checks)", w.m, w.checked);
                    (Color::Red, w.m.prefix().to_vec(), p)
                }
                Outcome::Embedding => {
                    let w = cert.embedding.expect("embedding side populated");
                    let p = format!(
                        "N wins on {} with {} decisions",
                        w.m,
                        w.strategy.decisions.len()
                    );
                    (Color::Blue, w.m.prefix().to_vec(), p)
                }
                Outcome::UndecidedAtTruncation => (
                    Color::Undecided,
                    tail.clone(),
                    cert.search_trace.join("; "),
                ),
            }
        };
        stages.push(format!("stage {l}: m = {pivot}, {color:?}, {provenance}"));
        coloring.entries.push(ColorEntry {
            position: l,
            element: pivot,
            color,
            provenance,
        });
        m.truncate(l);
        m.extend(next_tail);
    }

    let colored: Vec<&ColorEntry> = coloring.entries.iter().collect();
    let last = colored.last().map(|e| e.color).unwrap_or(Color::Undecided);
    let l_elems: Vec<u64> = match last {
        Color::Red => colored
            .iter()
            .filter(|e| e.color == Color::Red)
            .map(|e| e.element)
            .collect(),
        Color::Blue => {
            let run = colored.iter().rev().take_while(|e| e.color == Color::Blue).count();
            colored[colored.len() - run..].iter().map(|e| e.element).collect()
        }
        Color::Undecided => Vec::new(),
    };
    Ok(LemmaOutcome {
        diagonal: SeqView::new(m, universe_bound)?,
        l: SeqView::new(l_elems, universe_bound)?,
        side: last,
        coloring,
        stages,
    })
}
