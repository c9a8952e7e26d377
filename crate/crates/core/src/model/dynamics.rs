//! Right-hand side of the SIDUR equations and reproduction numbers.

use super::params::ModelParams;
use super::state::{State, StateDerivative};
use crate::error::{Result, SidurError};

/// Derivatives of the five compartments under testing rate `u`.
///
/// The detection flow `u·x_I/x_T` is exactly zero when `x_I = 0`. The
/// returned derivatives sum to zero up to round-off.
pub fn rhs(state: &State, params: &ModelParams, u: f64) -> Result<StateDerivative> {
    let x_t = params.testable_of(state);
    rhs_with(state, params, u, x_t)
}

#[inline]
pub(crate) fn rhs_with(
    state: &State,
    params: &ModelParams,
    u: f64,
    x_t: f64,
) -> Result<StateDerivative> {
    let beta = params.beta_at(state.t);
    let n = params.population;
    let infection = beta * state.x_s * state.x_i / n;
    let detection = if u > 0.0 && state.x_i != 0.0 {
        if x_t <= 0.0 {
            return Err(SidurError::DegenerateDetection { t: state.t, u, x_t });
        }
        u * state.x_i / x_t
    } else {
        0.0
    };
    let recovery = params.gamma * state.x_i;
    let removal = params.rho * state.x_d;
    Ok(StateDerivative {
        x_s: -infection,
        x_i: infection - detection - recovery,
        x_d: detection - removal,
        x_u: recovery,
        x_r: removal,
    })
}

/// `R_t = β/(u/x_T + γ)·x_S/N`.
pub fn effective_reproduction(state: &State, params: &ModelParams, u: f64) -> Result<f64> {
    let x_t = params.testable_of(state);
    if x_t <= 0.0 {
        return Err(SidurError::DegenerateDetection { t: state.t, u, x_t });
    }
    let beta = params.beta_at(state.t);
    Ok(beta / (u / x_t + params.gamma) * state.x_s / params.population)
}

/// `R_0 = β(0)/(u0/((1−θ(0))·N) + γ)`.
pub fn basic_reproduction(params: &ModelParams, u0: f64) -> Result<f64> {
    if u0 < 0.0 {
        return Err(SidurError::InvalidInput("u0 must be nonnegative".into()));
    }
    let beta = params.beta_at(0.0);
    let theta = params.theta_at(0.0);
    if u0 == 0.0 {
        return Ok(beta / params.gamma);
    }
    if theta >= 1.0 {
        return Err(SidurError::ThetaOne);
    }
    Ok(beta / (u0 / ((1.0 - theta) * params.population) + params.gamma))
}
