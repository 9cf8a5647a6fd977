//! Exact computations on group shifts: closed shift-invariant subgroups of
//! `F^Z` for a finite group `F`, presented by allowed blocks.
//!
//! The modules build on each other in order: [`algebra`] supplies finite
//! groups and Laurent polynomials, [`shift`] the words, shifts and sliding
//! block maps, [`structure`] the contraction groups, nub and depth,
//! [`abelian`] the linear shifts over `C_p`, [`series`] composition series,
//! [`limits`] finite truncations of inverse systems, and [`restricted`] the
//! restricted shift on finitely supported words.

pub mod abelian;
pub mod algebra;
pub mod ctx;
pub mod error;
pub mod limits;
pub mod restricted;
pub mod series;
pub mod shift;
pub mod structure;

pub use algebra::{FiniteGroup, FpLaurent, Group};
pub use ctx::Ctx;
pub use error::{Error, Result};
pub use shift::{EPWord, GroupShiftSFT, SlidingBlockHom};
