//! Contraction closures, the nub, the homoclinic group, depth and tidiness
//! for compact shift pairs `(H, σ)`, and the `η_k` equation.
//!
//! Open subgroups are the window subgroups `V_m`, which pin coordinates
//! `0..m` to the identity. `V_+` is the part that is the identity on
//! `(-∞, m-1]` and `V_-` the part that is the identity on `[0, ∞)`.

mod closure;
mod eta;
mod tidy;

pub use closure::{
    boundary_group, contraction_closure, depth, homoclinic_closure, homoclinic_points, is_topologically_transitive,
    nub, nub_meet, DepthReport, Direction, NubResult,
};
pub use eta::{eta, eta_solve, invariant_representative};
pub use tidy::{
    central_check_finite_stable, check_ta, check_ta_with, prodeq_k, prodeq_k_with, tidy_above_exponent,
    tidy_above_exponent_with, WidthCertificate, WindowSubgroup,
};
