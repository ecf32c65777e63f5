//! Floor-free residual states for Schreier, tuple and bar families.
//!
//! The state after reading `A` determines `{F > A : A ∪ F ∈ 𝓕}`. Transitions
//! depend on the new element `x` only through its value (new blocks get
//! `x - 1` further slots, limits branch over `n ≤ x`), never on `max A`, so
//! two sets with equal states have equal ranks. A set of alternatives is a
//! finite union of residual families; the strong derivative commutes with
//! finite unions, so the rank of a union is the maximum rank.

use crate::error::Result;
use crate::family::{FamilyOracle, FinSet};
use crate::ordinal::{Kind, Ordinal};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Residual {
    /// An `S_α` block with nothing read yet.
    Start(Ordinal),
    /// An `S_0` block holding its one element.
    Full,
    /// An `S_{β+1}` set: the current `S_β` block and `left` more blocks.
    Succ {
        beta: Ordinal,
        left: u64,
        inner: Box<Residual>,
    },
    /// A tuple member: the current component and the ordinals still unused.
    Tuple {
        rest: Vec<Ordinal>,
        current: Box<Residual>,
    },
    /// `F̄` before anything is read; holds the start state of `𝓕`.
    BarStart(Box<Residual>),
}

impl Residual {
    /// The state of `∅`, for oracles the symbolic engine understands.
    pub fn start(fam: &FamilyOracle) -> Option<Residual> {
        match fam {
            FamilyOracle::Schreier(a) => Some(Residual::Start(a.clone())),
            FamilyOracle::Tuple(t) => {
                let ords = t.ordinals();
                Some(Residual::Tuple {
                    rest: ords[1..].to_vec(),
                    current: Box::new(Residual::Start(ords[0].clone())),
                })
            }
            FamilyOracle::Bar(inner) => Some(Residual::BarStart(Box::new(Residual::start(inner)?))),
            _ => None,
        }
    }

    /// Alternatives after reading `x`; empty when no member extends.
    /// Blocks are extended greedily, which loses no members.
    pub fn step(&self, x: u64) -> Result<Vec<Residual>> {
        let mut out = match self {
            Residual::Full => Vec::new(),
            Residual::Start(alpha) => match alpha.classify() {
                Kind::Zero => vec![Residual::Full],
                Kind::Successor(beta) => Residual::Start(beta.clone())
                    .step(x)?
                    .into_iter()
                    .map(|inner| Residual::Succ {
                        beta: beta.clone(),
                        left: x - 1,
                        inner: Box::new(inner),
                    })
                    .collect(),
                Kind::Limit => {
                    let mut v = Vec::new();
                    for n in 1..=x {
                        v.extend(Residual::Start(alpha.fundamental(n)?).step(x)?);
                    }
                    v
                }
            },
            Residual::Succ { beta, left, inner } => {
                let cont = inner.step(x)?;
                if !cont.is_empty() {
                    cont.into_iter()
                        .map(|i| Residual::Succ {
                            beta: beta.clone(),
                            left: *left,
                            inner: Box::new(i),
                        })
                        .collect()
                } else if *left > 0 {
                    Residual::Start(beta.clone())
                        .step(x)?
                        .into_iter()
                        .map(|i| Residual::Succ {
                            beta: beta.clone(),
                            left: left - 1,
                            inner: Box::new(i),
                        })
                        .collect()
                } else {
                    Vec::new()
                }
            }
            Residual::Tuple { rest, current } => {
                let cont = current.step(x)?;
                if !cont.is_empty() {
                    cont.into_iter()
                        .map(|c| Residual::Tuple {
                            rest: rest.clone(),
                            current: Box::new(c),
                        })
                        .collect()
                } else if let Some((next, tail)) = rest.split_first() {
                    Residual::Start(next.clone())
                        .step(x)?
                        .into_iter()
                        .map(|c| Residual::Tuple {
                            rest: tail.to_vec(),
                            current: Box::new(c),
                        })
                        .collect()
                } else {
                    Vec::new()
                }
            }
            Residual::BarStart(inner) => {
                let mut v = vec![(**inner).clone()];
                v.extend(inner.step(x)?);
                v
            }
        };
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Alternatives after reading all of `a` from `start`.
    pub fn after(start: &Residual, a: &FinSet) -> Result<Vec<Residual>> {
        let mut alts = vec![start.clone()];
        for x in a.iter() {
            let mut next = Vec::new();
            for s in &alts {
                next.extend(s.step(x)?);
            }
            next.sort();
            next.dedup();
            alts = next;
        }
        Ok(alts)
    }
}
