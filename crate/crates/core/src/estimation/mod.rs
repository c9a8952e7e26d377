//! Parameter estimation: closed-form removal rate and swarm-based fit of the
//! remaining parameters.

mod fit;
mod pso;
mod rho;

pub use fit::{fit_cost, fit_model, EstimationConfig, FitResult, FitSetup, ParameterVector};
pub use pso::{pso_step, run_pso, Particle, PsoConfig, PsoResult, PsoState};
pub use rho::estimate_rho;
