//! Simulation-based least-squares fit of the infection, specificity and
//! recovery parameters.

use serde::{Deserialize, Serialize};

use super::pso::{run_pso, PsoConfig};
use super::rho::estimate_rho;
use crate::data::{build_signals, ImputedDataset};
use crate::error::{Result, SidurError};
use crate::france;
use crate::model::{
    integrate, ModelParams, Schedule, State, TestSupply, TestablePopulation, Trajectory,
};

/// Estimated coordinates. `kappa` scales the first observed diagnosed count
/// into the initial undiagnosed infected population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

impl ParameterVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![
            self.beta1,
            self.beta2,
            self.beta3,
            self.theta1,
            self.theta2,
            self.gamma,
        ];
        if let Some(k) = self.kappa {
            v.push(k);
        }
        v
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != 6 && v.len() != 7 {
            return Err(SidurError::InvalidInput(format!(
                "parameter vector must have 6 or 7 entries, got {}",
                v.len()
            )));
        }
        Ok(Self {
            beta1: v[0],
            beta2: v[1],
            beta3: v[2],
            theta1: v[3],
            theta2: v[4],
            gamma: v[5],
            kappa: v.get(6).copied(),
        })
    }
}

/// Fixed ingredients of the fit besides the estimated coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSetup {
    pub population: f64,
    /// Days at which β switches to its second and third value.
    pub beta_switches: [f64; 2],
    /// Day at which θ switches to its second value.
    pub theta_switch: f64,
    pub testable: TestablePopulation,
    /// Initial infected multiplier used when κ is not estimated.
    pub kappa: f64,
}

impl Default for FitSetup {
    fn default() -> Self {
        Self {
            population: france::POPULATION,
            beta_switches: [france::LOCKDOWN_DAY, france::UNLOCK_DAY],
            theta_switch: france::UNLOCK_DAY,
            testable: TestablePopulation::Exact,
            kappa: 10.0,
        }
    }
}

impl FitSetup {
    pub fn model_params(&self, p: &ParameterVector, rho: f64) -> Result<ModelParams> {
        let params = ModelParams {
            beta: Schedule::new(vec![
                (0.0, p.beta1),
                (self.beta_switches[0], p.beta2),
                (self.beta_switches[1], p.beta3),
            ])?,
            theta: Schedule::new(vec![(0.0, p.theta1), (self.theta_switch, p.theta2)])?,
            gamma: p.gamma,
            rho,
            population: self.population,
            testable: self.testable,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn initial_state(&self, dataset: &ImputedDataset, kappa: Option<f64>) -> Result<State> {
        if dataset.is_empty() {
            return Err(SidurError::InvalidInput("empty dataset".into()));
        }
        let kappa = kappa.unwrap_or(self.kappa);
        let s = State::from_first_observation(self.population, dataset.y1[0], dataset.y2[0], kappa);
        if s.x_s < 0.0 {
            return Err(SidurError::InvalidInput(
                "initial infected exceed the population".into(),
            ));
        }
        Ok(s)
    }

    /// Model run driven by the dataset's daily tests over its whole length.
    pub fn simulate(
        &self,
        p: &ParameterVector,
        dataset: &ImputedDataset,
        rho: f64,
    ) -> Result<Trajectory> {
        let params = self.model_params(p, rho)?;
        let initial = self.initial_state(dataset, p.kappa)?;
        let (u, _) = build_signals(dataset)?;
        let horizon = (dataset.len() - 1).max(1) as f64;
        integrate(&initial, &params, &TestSupply::unlimited(u), horizon)
    }

    pub fn default_box(&self, fit_kappa: bool) -> (Vec<f64>, Vec<f64>) {
        let mut lower = vec![0.001, 0.001, 0.001, 0.0, 0.0, 0.01];
        let mut upper = vec![1.5, 1.5, 1.5, 0.99999, 0.99999, 1.0];
        if fit_kappa {
            lower.push(1.0);
            upper.push(100.0);
        }
        (lower, upper)
    }
}

/// Sum of squared deviations of the three model outputs from the data.
/// Failed simulations cost `+∞`.
pub fn fit_cost(p: &ParameterVector, dataset: &ImputedDataset, rho: f64, setup: &FitSetup) -> f64 {
    match setup.simulate(p, dataset, rho) {
        Ok(traj) => {
            let mut cost = 0.0;
            for k in 0..dataset.len().min(traj.len()) {
                let e1 = traj.y1[k] - dataset.y1[k];
                let e2 = traj.y2[k] - dataset.y2[k];
                let e3 = traj.y3[k] - dataset.y3[k];
                cost += e1 * e1 + e2 * e2 + e3 * e3;
            }
            if cost.is_finite() {
                cost
            } else {
                f64::INFINITY
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Estimation run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationConfig {
    /// Swarm settings. The box is given in parameter coordinates.
    pub pso: PsoConfig,
    pub setup: FitSetup,
    pub fit_kappa: bool,
    /// Search the specificities as `s = −ln(1 − θ)` instead of `θ`. The box
    /// is mapped accordingly, so the admissible set is unchanged.
    #[serde(default = "default_log_specificity")]
    pub log_specificity: bool,
}

fn default_log_specificity() -> bool {
    true
}

const THETA_COORDS: [usize; 2] = [3, 4];

fn to_search(theta: f64) -> f64 {
    -(-theta).ln_1p()
}

fn from_search(s: f64) -> f64 {
    -(-s).exp_m1()
}

impl Default for EstimationConfig {
    fn default() -> Self {
        let setup = FitSetup::default();
        let (lower, upper) = setup.default_box(true);
        Self {
            pso: PsoConfig::with_box(lower, upper),
            setup,
            fit_kappa: true,
            log_specificity: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: ParameterVector,
    pub rho: f64,
    pub cost: f64,
    /// Best cost after initialization and each iteration.
    pub trace: Vec<f64>,
}

/// Estimates ρ by regression, then the remaining parameters by PSO.
pub fn fit_model(dataset: &ImputedDataset, config: &EstimationConfig) -> Result<FitResult> {
    let rho = estimate_rho(&dataset.y1, &dataset.y2)?;
    let dim = if config.fit_kappa { 7 } else { 6 };
    if config.pso.dimension() != dim {
        return Err(SidurError::InvalidInput(format!(
            "search box has {} dimensions, expected {dim}",
            config.pso.dimension()
        )));
    }
    let mut pso = config.pso.clone();
    let to_params = |x: &[f64]| -> Vec<f64> {
        let mut v = x.to_vec();
        if config.log_specificity {
            for i in THETA_COORDS {
                v[i] = from_search(v[i]);
            }
        }
        v
    };
    if config.log_specificity {
        for i in THETA_COORDS {
            if !(pso.upper[i] < 1.0) {
                return Err(SidurError::InvalidInput(
                    "specificity upper bound must be below one".into(),
                ));
            }
            pso.lower[i] = to_search(pso.lower[i]);
            pso.upper[i] = to_search(pso.upper[i]);
        }
    }
    let objective = |x: &[f64]| match ParameterVector::from_slice(&to_params(x)) {
        Ok(p) => fit_cost(&p, dataset, rho, &config.setup),
        Err(_) => f64::INFINITY,
    };
    let result = run_pso(&pso, &objective)?;
    let mut params = ParameterVector::from_slice(&to_params(&result.position))?;
    if !config.fit_kappa {
        params.kappa = Some(config.setup.kappa);
    }
    Ok(FitResult {
        params,
        rho,
        cost: result.cost,
        trace: result.trace,
    })
}
