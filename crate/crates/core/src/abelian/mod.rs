//! Group shifts over `C_p`: these are linear, cut out by a single Laurent
//! polynomial recurrence. Covers annihilators, recurrence solution groups,
//! the classification of invariant subgroups of `C_p^Z`, and kernels of
//! sliding block maps on full shifts.

mod classify;
mod linear;

pub use classify::{
    classify_invariant, classify_shift, descriptor_of, kernel_lemma_check, CaseTag, InvariantSubgroupDescriptor,
    KernelLemmaReport, Mode,
};
pub use linear::{
    annihilator, linear_sft, prime_field, psi_equivalence, solve_recurrence, LinearShiftPresentation,
    RecurrenceSolutions,
};
