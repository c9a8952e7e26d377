//! SIDUR compartments, parameters, testing input and forward simulation.

mod dynamics;
mod integrate;
mod invariants;
mod params;
mod schedule;
mod state;
mod supply;
mod trajectory;

pub use dynamics::{basic_reproduction, effective_reproduction, rhs};
pub use integrate::{integrate, Integrator, DEFAULT_STEP};
pub use invariants::{check_trajectory, Violation, CONSERVATION_TOL};
pub use params::{testable_population, ModelParams, TestablePopulation};
pub use schedule::Schedule;
pub use state::{State, StateDerivative};
pub use supply::{testing_rate, TestSupply};
pub use trajectory::Trajectory;
