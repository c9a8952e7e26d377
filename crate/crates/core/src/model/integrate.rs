//! Fixed-step RK4 integration with a daily zero-order hold on the input.

use super::params::{ModelParams, TestablePopulation};
use super::state::State;
use super::supply::TestSupply;
use super::trajectory::Trajectory;
use crate::error::{Result, SidurError};

/// Default integration step (days).
pub const DEFAULT_STEP: f64 = 0.05;

/// Fixed-step integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub step: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Self { step: DEFAULT_STEP }
    }
}

/// Integrates from `initial` for `horizon_days` days with the default step.
pub fn integrate(
    initial: &State,
    params: &ModelParams,
    supply: &TestSupply,
    horizon_days: f64,
) -> Result<Trajectory> {
    Integrator::default().run(initial, params, supply, horizon_days)
}

/// Parameter values frozen over one integration step.
#[derive(Clone, Copy)]
struct StepCoefficients {
    beta: f64,
    theta: f64,
    gamma: f64,
    rho: f64,
    n: f64,
    mode: TestablePopulation,
}

impl StepCoefficients {
    #[inline]
    fn testable(&self, x: &[f64; 5]) -> f64 {
        match self.mode {
            TestablePopulation::Exact => {
                let total = x[0] + x[1] + x[2] + x[3] + x[4];
                (self.theta * x[1] + (1.0 - self.theta) * (total - x[2] - x[4])).max(0.0)
            }
            TestablePopulation::Approximate => (1.0 - self.theta) * self.n,
        }
    }

    /// Flows with the instantaneous cap `u ≤ x_T`.
    #[inline]
    fn flows(&self, x: &[f64; 5], u: f64) -> [f64; 5] {
        let infection = self.beta * x[0] * x[1] / self.n;
        let x_t = self.testable(x);
        let detection = if u > 0.0 && x_t > 0.0 && x[1] != 0.0 {
            u.min(x_t) * x[1] / x_t
        } else {
            0.0
        };
        let recovery = self.gamma * x[1];
        let removal = self.rho * x[2];
        [
            -infection,
            infection - detection - recovery,
            detection - removal,
            recovery,
            removal,
        ]
    }
}

#[inline]
fn axpy(x: &[f64; 5], a: f64, k: &[f64; 5]) -> [f64; 5] {
    [
        x[0] + a * k[0],
        x[1] + a * k[1],
        x[2] + a * k[2],
        x[3] + a * k[3],
        x[4] + a * k[4],
    ]
}

impl Integrator {
    pub fn new(step: f64) -> Result<Self> {
        let per_day = (1.0 / step).round();
        if !(step > 0.0) || per_day < 1.0 || ((per_day * step) - 1.0).abs() > 1e-12 {
            return Err(SidurError::InvalidInput(format!(
                "step {step} must divide one day"
            )));
        }
        Ok(Self { step })
    }

    /// Integrates over `floor(horizon_days)` whole days, sampling at each
    /// day boundary. The capacity and testable-population limits on `u` are
    /// sampled once per day; the stockpile limit is enforced per step.
    pub fn run(
        &self,
        initial: &State,
        params: &ModelParams,
        supply: &TestSupply,
        horizon_days: f64,
    ) -> Result<Trajectory> {
        if !(horizon_days > 0.0) {
            return Err(SidurError::InvalidInput("horizon must be positive".into()));
        }
        params.validate()?;
        supply.validate()?;
        if !initial.is_finite() || !initial.is_nonnegative() {
            return Err(SidurError::InvalidInput("initial state invalid".into()));
        }
        let days = horizon_days.floor() as usize;
        let steps_per_day = (1.0 / self.step).round() as usize;
        let h = 1.0 / steps_per_day as f64;

        let mut traj = Trajectory::with_capacity(params.population, days + 1);
        let mut x = initial.as_array();
        let mut consumed = supply.consumed;
        let t0 = initial.t;

        for day in 0..=days {
            let t_day = t0 + day as f64;
            let state = State::from_array(t_day, x);
            if !state.is_finite() {
                return Err(SidurError::NonFiniteState { t: t_day });
            }
            let x_t = params.testable_of(&state);
            let remaining = supply
                .stockpile
                .map_or(f64::INFINITY, |r| (r - consumed).max(0.0));
            let u_day = supply.capacity.value_at(t_day).min(x_t).max(0.0);
            let u_now = u_day.min(remaining);
            traj.push_sample(&state, params, u_now, x_t, consumed);
            if day == days {
                break;
            }
            for j in 0..steps_per_day {
                let t = t_day + j as f64 * h;
                let mid = t + 0.5 * h;
                let coeff = StepCoefficients {
                    beta: params.beta_at(mid),
                    theta: params.theta_at(mid),
                    gamma: params.gamma,
                    rho: params.rho,
                    n: params.population,
                    mode: params.testable,
                };
                let u = match supply.stockpile {
                    Some(r) => u_day.min(((r - consumed) / h).max(0.0)),
                    None => u_day,
                };
                let k1 = coeff.flows(&x, u);
                let k2 = coeff.flows(&axpy(&x, 0.5 * h, &k1), u);
                let k3 = coeff.flows(&axpy(&x, 0.5 * h, &k2), u);
                let k4 = coeff.flows(&axpy(&x, h, &k3), u);
                for i in 0..5 {
                    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                consumed += u * h;
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(SidurError::NonFiniteState { t: t + h });
                }
            }
        }
        Ok(traj)
    }
}
