//! Eventually periodic words, group shifts presented by allowed blocks, and
//! sliding block homomorphisms between them.
//!
//! Blocks of length `l` are stored as base-`|F|` codes with position 0 as the
//! least significant digit.

mod hom;
mod sft;
mod word;

pub use hom::{
    apply_hom, graph_subgroup, image_sft, image_sft_with, kernel_sft, preimage_sft, ImageCertificate,
    SlidingBlockHom,
};
pub use sft::GroupShiftSFT;
pub(crate) use sft::{block_generators, close_blocks, DeBruijn};
pub use word::{same_group, EPWord};
