//! SIDUR: a five-compartment epidemic model in which the testing rate is the
//! control input.
//!
//! The crate covers the full workflow: simulation of the model, imputation of
//! the daily public-health series, estimation of the parameters, regression of
//! ICU occupancy and deaths on model states, and the two constant-rate testing
//! policies (BEST suppression and COST stockpile mitigation).

// Input checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calendar;
pub mod data;
pub mod error;
pub mod estimation;
pub mod france;
pub mod model;
pub mod outcomes;
pub mod policies;
pub mod quadrature;

pub use error::{Result, SidurError};
