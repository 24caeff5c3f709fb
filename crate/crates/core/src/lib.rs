//! Torsion in tensor products of monomial ideals over numerical semigroup rings.
//!
//! The ring `R = k[[t^S]]` of a numerical semigroup `S` is a one-dimensional
//! local domain; rank-one torsion-free monomial modules are S-ideals. This
//! crate computes `E = End(𝔪)`, the graded pieces of `M ⊗ N` over `R` or
//! over `E`, torsion lengths, and searches the monomial universe for pairs of
//! non-free ideals whose tensor product is torsion-free. A fixed conductor
//! square is analysed separately in [`pullback`].
//!
//! The residue field is never represented. Every count here is independent
//! of the base field.

pub mod error;
pub mod fiber;
pub mod ideal;
pub mod oracle;
pub mod pullback;
pub mod search;
pub mod semigroup;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use fiber::{EngineRegistry, FiberCounter, UnionFindCounter, DEFAULT_ENGINE};
pub use ideal::{end_ring, enumerate_ideals, lemma21_report, ERing, Lemma21Report, SIdeal};
pub use oracle::{fiber_rank_oracle, torsion_length_oracle, FiberRank, RankCounter};
pub use semigroup::{enumerate_semigroups, Semigroup};
pub use tensor::{
    graded_fiber_classes, is_torsion_free, lemma22_compare, torsion_profile, torsion_profile_with, Base,
    Lemma22Report,
    TorsionProfile,
};
