//! Force terms of the approximate momentum equation, the density-weighted
//! mass operator, and the implicit time step.

mod forces;
mod mass;
mod params;
mod quantum;
mod step;
mod strain;

pub use forces::{convection_z_expanded, momentum_rhs, ForceBreakdown, FORCE_NAMES};
pub use mass::{apply_mass_operator, solve_mass_operator, DEFAULT_CG_MAX};
pub use params::{ParamError, Params, PARAM_NAMES};
pub use quantum::{log_hessian, quantum_force, quantum_force_direct};
pub use step::{
    check_step, galerkin_step, galerkin_step_with, stiff_step_limit, Sources, StepOptions,
    StepReport,
};
pub use strain::{split_gradient, strain, velocity_gradient, Tensor3};
