//! Composition series of finite-depth transitive group shifts: the
//! opennormal construction, irreducibility, Jordan-Hölder comparison and the
//! Zassenhaus quadruple with its co-commensurability witness.
//!
//! Quotients are presented as images of sliding block maps whose local rule
//! is a homomorphism, found by a bounded search over spans up to 4.

mod opennormal;
mod subnormal;
mod zassenhaus;

pub use opennormal::{
    cocommensurable_irreducible, cocommensurable_irreducible_with, composition_factors, composition_factors_with,
    find_quotient, first_stage, is_irreducible, is_irreducible_with, opennormal_series, opennormal_series_with,
    quotient_witness, FactorDescriptor, FactorSummary, IrreducibilityReport, OpennormalSeries, Presentation, Stage,
};
pub use subnormal::{
    equivalent_series, equivalent_series_with, EntryReport, SeriesReport, SeriesStep, StepReport, SubnormalSeries,
};
pub use zassenhaus::{
    fibre_product, irreducible_witness, product_sft, product_sft_with, zassenhaus, zassenhaus_with, CoCommWitness,
    WitnessCheck, ZassenhausResult,
};
