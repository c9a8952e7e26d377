//! Delayed regressions of ICU occupancy on active infections and of
//! cumulative deaths on cumulative infections.
//!
//! Regressors are per-capita (`A/N`, `I/N`), which keeps the tenth power of
//! the death polynomial representable. Delays are applied as whole-day
//! shifts on the daily grid.

use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SidurError};
use crate::model::Trajectory;

/// Default ICU delay: incubation plus time from symptoms to ICU (days).
pub const ICU_DELAY: f64 = 17.0;
/// Default death delay: incubation plus mean removal time (days).
pub const DEATH_DELAY: f64 = 25.0;
/// Degree of the death polynomial.
pub const DEATH_DEGREE: usize = 10;
/// Condition number of the normal system above which a fit is flagged.
pub const ILL_CONDITIONED: f64 = 1e12;

/// `B(t) = b1·a + b2·√a` with `a = A(t − delay)/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcuModel {
    pub b1: f64,
    pub b2: f64,
    #[serde(rename = "delay")]
    pub delay_days: f64,
}

/// `E(t) = Σ_{i=1..10} e_i·(I(t − delay)/N)^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeathModel {
    pub e: Vec<f64>,
    #[serde(rename = "delay")]
    pub delay_days: f64,
}

/// A fitted death model with its conditioning diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DeathFit {
    pub model: DeathModel,
    /// Condition number of the (column-scaled) normal system.
    pub condition_number: f64,
    pub ill_conditioned: bool,
}

/// Both regressions as written to `outcome_fit.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeFit {
    pub icu: IcuModel,
    pub deaths: DeathModel,
    pub normalization: String,
}

impl OutcomeFit {
    pub fn new(icu: IcuModel, deaths: DeathModel) -> Self {
        Self {
            icu,
            deaths,
            normalization: "per-capita".into(),
        }
    }
}

fn whole_days(delay: f64) -> Result<usize> {
    if !(delay >= 0.0 && delay.is_finite()) {
        return Err(SidurError::InvalidInput(format!("invalid delay {delay}")));
    }
    Ok(delay.round() as usize)
}

/// Pairs `(x[k − d], y[k])` for every `k ≥ d` where the target is present.
fn shifted_pairs(x: &[f64], y: &[Option<f64>], d: usize) -> Vec<(f64, f64)> {
    (d..y.len().min(x.len() + d))
        .filter_map(|k| y[k].map(|target| (x[k - d], target)))
        .collect()
}

struct LeastSquares {
    coefficients: Vec<f64>,
    condition_number: f64,
}

/// Column-scaled SVD solution of `min ‖X·c − y‖`.
fn least_squares(design: DMatrix<f64>, target: DVector<f64>) -> Result<LeastSquares> {
    let cols = design.ncols();
    let mut scaled = design;
    let mut scales = vec![1.0; cols];
    for (j, scale) in scales.iter_mut().enumerate() {
        let norm = scaled.column(j).norm();
        if norm == 0.0 {
            return Err(SidurError::RankDeficient(format!(
                "regressor {j} is identically zero"
            )));
        }
        *scale = norm;
        scaled.column_mut(j).scale_mut(1.0 / norm);
    }
    let svd = scaled.svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let condition_number = if smin > 0.0 {
        (smax / smin).powi(2)
    } else {
        f64::INFINITY
    };
    let solution = svd
        .solve(&target, smax * 1e-15)
        .map_err(|e| SidurError::RankDeficient(e.to_string()))?;
    let coefficients = (0..cols).map(|j| solution[j] / scales[j]).collect();
    Ok(LeastSquares {
        coefficients,
        condition_number,
    })
}

/// Least-squares fit of the ICU model on `[A/N, √(A/N)]`.
///
/// `a` and `icu` share the daily index; `icu` may be absent on early days.
pub fn fit_icu(a: &[f64], icu: &[Option<f64>], delay: f64, population: f64) -> Result<IcuModel> {
    let d = whole_days(delay)?;
    let pairs = shifted_pairs(a, icu, d);
    if pairs.len() < 2 {
        return Err(SidurError::RankDeficient(
            "fewer than two overlapping samples".into(),
        ));
    }
    let design = DMatrix::from_fn(pairs.len(), 2, |r, c| {
        let x = (pairs[r].0 / population).max(0.0);
        if c == 0 {
            x
        } else {
            x.sqrt()
        }
    });
    let target = DVector::from_iterator(pairs.len(), pairs.iter().map(|p| p.1));
    let fit = least_squares(design, target)?;
    if fit.condition_number > 1e24 {
        return Err(SidurError::RankDeficient(
            "active-case regressors are collinear".into(),
        ));
    }
    Ok(IcuModel {
        b1: fit.coefficients[0],
        b2: fit.coefficients[1],
        delay_days: delay,
    })
}

/// Least-squares fit of the degree-10 death polynomial in `I/N`.
pub fn fit_deaths(
    cumulative_infected: &[f64],
    deaths: &[f64],
    delay: f64,
    population: f64,
) -> Result<DeathFit> {
    let d = whole_days(delay)?;
    let targets: Vec<Option<f64>> = deaths.iter().map(|&v| Some(v)).collect();
    let pairs = shifted_pairs(cumulative_infected, &targets, d);
    if pairs.len() < DEATH_DEGREE {
        return Err(SidurError::RankDeficient(format!(
            "{} overlapping samples for {DEATH_DEGREE} coefficients",
            pairs.len()
        )));
    }
    let design = DMatrix::from_fn(pairs.len(), DEATH_DEGREE, |r, c| {
        (pairs[r].0 / population).powi(c as i32 + 1)
    });
    let target = DVector::from_iterator(pairs.len(), pairs.iter().map(|p| p.1));
    let fit = least_squares(design, target)?;
    let ill_conditioned = fit.condition_number > ILL_CONDITIONED;
    if ill_conditioned {
        warn!(
            "death regression is ill-conditioned (condition number {:.3e})",
            fit.condition_number
        );
    }
    Ok(DeathFit {
        model: DeathModel {
            e: fit.coefficients,
            delay_days: delay,
        },
        condition_number: fit.condition_number,
        ill_conditioned,
    })
}

/// Value of `x[k − d]`, holding the earliest value for `k < d`.
fn delayed(x: &[f64], k: usize, d: usize) -> f64 {
    x[k.saturating_sub(d)]
}

impl IcuModel {
    pub fn evaluate(&self, active_per_capita: f64) -> f64 {
        let a = active_per_capita.max(0.0);
        self.b1 * a + self.b2 * a.sqrt()
    }

    /// ICU occupancy at each sample of `active` (persons, daily grid).
    pub fn predict_series(&self, active: &[f64], population: f64) -> Vec<f64> {
        let d = self.delay_days.round().max(0.0) as usize;
        (0..active.len())
            .map(|k| self.evaluate(delayed(active, k, d) / population))
            .collect()
    }
}

impl DeathModel {
    pub fn evaluate(&self, infected_per_capita: f64) -> f64 {
        let x = infected_per_capita;
        self.e
            .iter()
            .rev()
            .fold(0.0, |acc, &c| (acc + c) * x)
            .max(0.0)
    }

    pub fn predict_series(&self, cumulative_infected: &[f64], population: f64) -> Vec<f64> {
        let d = self.delay_days.round().max(0.0) as usize;
        (0..cumulative_infected.len())
            .map(|k| self.evaluate(delayed(cumulative_infected, k, d) / population))
            .collect()
    }
}

/// ICU occupancy along a trajectory.
pub fn predict_icu(model: &IcuModel, traj: &Trajectory) -> Vec<f64> {
    let (a, _) = traj.derived_outputs();
    model.predict_series(&a, traj.population)
}

/// Cumulative deaths along a trajectory, clamped at zero.
pub fn predict_deaths(model: &DeathModel, traj: &Trajectory) -> Vec<f64> {
    let (_, i) = traj.derived_outputs();
    model.predict_series(&i, traj.population)
}

/// Percentage by which the peak of `scenario` falls below that of `baseline`.
pub fn peak_reduction(baseline: &[f64], scenario: &[f64]) -> f64 {
    let b = baseline.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s = scenario.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    100.0 * (1.0 - s / b)
}

/// Percentage by which the final value of `scenario` falls below `baseline`'s.
pub fn final_reduction(baseline: &[f64], scenario: &[f64]) -> f64 {
    let b = baseline.last().copied().unwrap_or(f64::NAN);
    let s = scenario.last().copied().unwrap_or(f64::NAN);
    100.0 * (1.0 - s / b)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: f64 = 1e6;

    fn active() -> Vec<f64> {
        (0..120)
            .map(|k| 5e4 * (-((k as f64 - 50.0) / 20.0).powi(2)).exp() + 10.0)
            .collect()
    }

    #[test]
    fn zero_targets_give_zero_coefficients() {
        let a = active();
        let icu = vec![Some(0.0); a.len()];
        let m = fit_icu(&a, &icu, 17.0, N).unwrap();
        assert_eq!((m.b1, m.b2), (0.0, 0.0));
        let i: Vec<f64> = (0..120).map(|k| 1000.0 * k as f64 + 1.0).collect();
        let d = fit_deaths(&i, &vec![0.0; 120], 25.0, N).unwrap();
        assert!(d.model.e.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn icu_round_trip_is_exact() {
        let a = active();
        let truth = IcuModel {
            b1: -0.54e4,
            b2: 1.25e4,
            delay_days: 17.0,
        };
        let b = truth.predict_series(&a, N);
        let observed: Vec<Option<f64>> = b.iter().map(|&v| Some(v)).collect();
        let m = fit_icu(&a, &observed, 17.0, N).unwrap();
        assert!((m.b1 - truth.b1).abs() < 1e-6 * truth.b1.abs());
        assert!((m.b2 - truth.b2).abs() < 1e-6 * truth.b2.abs());
    }

    #[test]
    fn constant_active_is_rank_deficient() {
        let a = vec![2e4; 80];
        let icu = vec![Some(5.0); 80];
        assert!(matches!(
            fit_icu(&a, &icu, 17.0, N),
            Err(SidurError::RankDeficient(_))
        ));
    }

    #[test]
    fn cubic_death_curve_is_recovered() {
        let i: Vec<f64> = (0..160)
            .map(|k| 2.5e5 * (1.0 - (-(k as f64) / 40.0).exp()))
            .collect();
        let truth = DeathModel {
            e: vec![3e3, -2e3, 5e4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            delay_days: 25.0,
        };
        let e = truth.predict_series(&i, N);
        let fit = fit_deaths(&i, &e, 25.0, N).unwrap();
        let pred = fit.model.predict_series(&i, N);
        let scale = e.iter().copied().fold(0.0, f64::max);
        for k in 25..160 {
            assert!((pred[k] - e[k]).abs() < 1e-9 * scale, "k={k}");
        }
    }

    #[test]
    fn prediction_holds_the_earliest_state_before_the_delay() {
        let m = IcuModel {
            b1: 1.0,
            b2: 0.0,
            delay_days: 3.0,
        };
        let b = m.predict_series(&[10.0, 20.0, 30.0, 40.0, 50.0], 1.0);
        assert_eq!(b, vec![10.0, 10.0, 10.0, 10.0, 20.0]);
    }

    #[test]
    fn reductions() {
        assert!((peak_reduction(&[1.0, 4.0, 2.0], &[1.0, 3.0]) - 25.0).abs() < 1e-12);
        assert!((final_reduction(&[1.0, 10.0], &[2.0, 5.0]) - 50.0).abs() < 1e-12);
    }
}
