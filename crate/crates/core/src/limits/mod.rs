//! Finite truncations of inverse systems of group shifts and the three
//! counterexample constructions built from difference rules: the `C_p`
//! system without homoclinic points, the `C_4` system that does not split,
//! and the semidirect products `G_n` whose limit has a finite centre.
//!
//! Limits are never materialized; every claim is checked at a stated
//! truncation depth and width.

mod centre;
mod system;

pub use centre::{
    build_finite_centre, centre_connector, centre_on_periodic_points, connector_check, support_set, truncated_bcg,
    BcgReport, CentreReport, ConnectorReport, FiniteCentreLevel, MAX_CENTRE_LEVEL,
};
pub use system::{
    build_example_5_6, build_example_5_6_with, build_example_c4, difference_rule, homoclinic_trivial_certificate,
    homoclinic_trivial_certificate_with, no_sliding_right_inverse, right_inverse_search, support_growth_check, support_growth_exhaustive, ConnectorCheck,
    HomoclinicCertificate, InverseSystem, LevelExponents, RightInverseSearch, SupportGrowthReport, TruncatedElement,
};
