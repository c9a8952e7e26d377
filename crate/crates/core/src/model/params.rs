use serde::{Deserialize, Serialize};

use super::schedule::Schedule;
use super::state::State;
use crate::error::{Result, SidurError};

/// How the testable population `x_T` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TestablePopulation {
    /// `θ·x_I + (1−θ)·(N − x_D − x_R)`.
    #[default]
    Exact,
    /// `(1−θ)·N`, valid while few people have been diagnosed and `θ` is
    /// close to one.
    Approximate,
}

/// SIDUR parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Infection rate (1/day).
    pub beta: Schedule,
    /// Testing specificity, in `[0, 1]`.
    pub theta: Schedule,
    /// Recovery rate of undiagnosed infected people (1/day).
    pub gamma: f64,
    /// Removal rate of diagnosed people (1/day).
    pub rho: f64,
    /// Total population (persons).
    pub population: f64,
    #[serde(default)]
    pub testable: TestablePopulation,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SidurError::InvalidInput(m.to_string()));
        if !(self.population > 0.0 && self.population.is_finite()) {
            return bad("population must be positive");
        }
        if self.beta.values().any(|b| b <= 0.0) {
            return bad("beta values must be positive");
        }
        if self.theta.values().any(|th| !(0.0..=1.0).contains(&th)) {
            return bad("theta values must lie in [0, 1]");
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad("gamma must be positive");
        }
        if !(self.rho > 0.0 && self.rho <= self.gamma) {
            return bad("rho must satisfy 0 < rho <= gamma");
        }
        Ok(())
    }

    pub fn beta_at(&self, t: f64) -> f64 {
        self.beta.value_at(t)
    }

    pub fn theta_at(&self, t: f64) -> f64 {
        self.theta.value_at(t)
    }

    /// Testable population of `state` at its own time, honouring the
    /// configured evaluation mode.
    pub fn testable_of(&self, state: &State) -> f64 {
        let theta = self.theta_at(state.t);
        match self.testable {
            TestablePopulation::Exact => testable_population(state, theta),
            TestablePopulation::Approximate => (1.0 - theta) * self.population,
        }
    }

    /// Same parameters with the other testable-population mode.
    pub fn with_testable(mut self, mode: TestablePopulation) -> Self {
        self.testable = mode;
        self
    }
}

/// `x_T = θ·x_I + (1−θ)·(N − x_D − x_R)` with `N` taken from the state.
pub fn testable_population(state: &State, theta: f64) -> f64 {
    let n = state.total();
    let x_t = theta * state.x_i + (1.0 - theta) * (n - state.x_d - state.x_r);
    x_t.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(x_s: f64, x_i: f64, x_d: f64, x_u: f64, x_r: f64) -> State {
        State {
            t: 0.0,
            x_s,
            x_i,
            x_d,
            x_u,
            x_r,
        }
    }

    #[test]
    fn testable_population_hand_values() {
        let s = state(850.0, 100.0, 30.0, 0.0, 20.0);
        assert_eq!(testable_population(&s, 1.0), 100.0);
        assert_eq!(testable_population(&s, 0.0), 950.0);
        assert!((testable_population(&s, 0.5) - 525.0).abs() < 1e-12);
    }

    #[test]
    fn approximate_mode_ignores_state() {
        let p = ModelParams {
            beta: Schedule::constant(0.3),
            theta: Schedule::constant(0.99),
            gamma: 0.1,
            rho: 0.05,
            population: 1000.0,
            testable: TestablePopulation::Approximate,
        };
        let s = state(500.0, 400.0, 50.0, 0.0, 50.0);
        assert!((p.testable_of(&s) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_rho_above_gamma() {
        let p = ModelParams {
            beta: Schedule::constant(0.3),
            theta: Schedule::constant(0.5),
            gamma: 0.05,
            rho: 0.1,
            population: 1000.0,
            testable: TestablePopulation::Exact,
        };
        assert!(p.validate().is_err());
    }
}
