//! Finite groups given by tables, their subgroups and composition series, and
//! Laurent polynomials over prime fields.

mod group;
mod hom;
mod laurent;
mod subgroup;

pub use group::{
    alternating_group, code_space, decode, direct_product, encode, generating_set, group_by_name,
    make_cyclic, symmetric_group, FiniteGroup, Group,
};
pub(crate) use group::{decode_into, gcd, lcm};
pub use hom::{all_homs, semidirect_product, FiniteHom, SemidirectProduct};
pub use laurent::{laurent_gcd, laurent_gcd_all, FpLaurent};
pub(crate) use laurent::is_prime;
pub use subgroup::{
    are_isomorphic, composition_series_finite, find_isomorphism, is_simple, normal_closure,
    normal_subgroups, CompositionSeries, FactorClass, SubgroupF,
};
