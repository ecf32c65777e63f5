//! Schreier families `S_α` for ordinals below ε₀, the Schreier games between
//! a number-picker `𝒩` and a set-picker `𝒮`, spreading maps built from bound
//! games, a bounded-universe dichotomy search with verifiable certificates,
//! and a strong Cantor-Bendixson rank engine.
//!
//! Everything infinite is replaced by an explicit finite surrogate: sequences
//! are [`family::SeqView`] prefixes, games run inside `[1, universe_bound]`,
//! and every certificate carries the budgets it was checked under.

pub mod cbindex;
pub mod cli;
pub mod dichotomy;
pub mod embed;
pub mod error;
pub mod family;
pub mod games;
pub mod io;
pub mod ordinal;
pub mod schreier;
pub mod spreadmap;

pub use error::{Error, Result};
pub use family::{FamilyOracle, FinSet, SeqView, SetFamily};
pub use ordinal::Ordinal;
pub use schreier::TupleSpec;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
