//! Best-effort suppression: the smallest constant testing rate that stops the
//! growth of the undiagnosed infected population immediately.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SidurError};
use crate::model::{integrate, ModelParams, Schedule, State, TestSupply, Trajectory};

/// `c* = x_T·max(β·x_S/N − γ, 0)` evaluated at the state's own time.
pub fn best_rate(state: &State, params: &ModelParams) -> f64 {
    let growth = params.beta_at(state.t) * state.x_s / params.population - params.gamma;
    params.testable_of(state) * growth.max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub t_star: f64,
    pub c_star: f64,
    pub peak: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestSolution {
    pub t_star: f64,
    pub c_star: f64,
    /// Largest sampled `x_I` on the counterfactual trajectory.
    pub peak_xi: f64,
    pub peak_time: f64,
    /// Breakpoints at which the rate was recomputed, with the new rate.
    pub recomputations: Vec<(f64, f64)>,
    /// Observed path up to `t*`, BEST path afterwards.
    pub trajectory: Trajectory,
    pub sweep: Option<Vec<SweepPoint>>,
}

/// Breakpoints after `t` where β increases or θ decreases.
fn unfavourable_breakpoints(params: &ModelParams, after: f64, until: f64) -> Vec<f64> {
    let mut times: Vec<f64> = Vec::new();
    let check = |s: &Schedule, rising_is_bad: bool, out: &mut Vec<f64>| {
        for w in s.breakpoints().windows(2) {
            let (t, new) = w[1];
            let old = w[0].1;
            let bad = if rising_is_bad { new > old } else { new < old };
            if bad && t > after && t < until {
                out.push(t);
            }
        }
    };
    check(&params.beta, true, &mut times);
    check(&params.theta, false, &mut times);
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    times.dedup();
    times
}

/// Applies the observed testing up to `t*` (already contained in `observed`)
/// and the constant rate `c*(t*)` afterwards, recomputing the rate at every
/// breakpoint where β rises or θ falls.
pub fn best_policy(
    observed: &Trajectory,
    params: &ModelParams,
    t_star: f64,
) -> Result<BestSolution> {
    let start = *observed.state_at(t_star)?;
    let end = *observed.sample_times.last().expect("nonempty trajectory");
    let c_star = best_rate(&start, params);

    let mut stops = unfavourable_breakpoints(params, t_star, end);
    stops.push(end);
    let mut state = start;
    let mut rate = c_star;
    let mut recomputations = Vec::new();
    let mut path: Option<Trajectory> = None;
    for stop in stops {
        let span = (stop - state.t).round();
        if span < 1.0 {
            continue;
        }
        let supply = TestSupply::unlimited(Schedule::constant(rate));
        let segment = integrate(&state, params, &supply, span)?;
        state = *segment.states.last().expect("segment has samples");
        path = Some(match path {
            None => segment,
            Some(p) => p.spliced(&segment),
        });
        if stop < end {
            rate = best_rate(&state, params);
            recomputations.push((stop, rate));
        }
    }
    let trajectory = match path {
        Some(p) => observed.spliced(&p),
        None => observed.clone(),
    };
    let (peak_time, peak_xi) = trajectory.peak_infected();
    Ok(BestSolution {
        t_star,
        c_star,
        peak_xi,
        peak_time,
        recomputations,
        trajectory,
        sweep: None,
    })
}

/// BEST rate and resulting peak for every whole day in `[first, last]`.
pub fn best_sweep(
    observed: &Trajectory,
    params: &ModelParams,
    first: f64,
    last: f64,
) -> Result<Vec<SweepPoint>> {
    if last < first {
        return Err(SidurError::InvalidInput("empty sweep range".into()));
    }
    let days: Vec<f64> = (0..=((last - first).round() as usize))
        .map(|d| first + d as f64)
        .collect();
    days.par_iter()
        .map(|&t| {
            let sol = best_policy(observed, params, t)?;
            Ok(SweepPoint {
                t_star: t,
                c_star: sol.c_star,
                peak: sol.peak_xi,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TestablePopulation;

    fn params() -> ModelParams {
        ModelParams {
            beta: Schedule::constant(0.4),
            theta: Schedule::constant(0.5),
            gamma: 0.1,
            rho: 0.05,
            population: 1000.0,
            testable: TestablePopulation::Exact,
        }
    }

    #[test]
    fn hand_evaluated_rate() {
        let s = State {
            t: 0.0,
            x_s: 900.0,
            x_i: 50.0,
            x_d: 30.0,
            x_u: 0.0,
            x_r: 20.0,
        };
        assert!((best_rate(&s, &params()) - 130.0).abs() < 1e-9);
    }

    #[test]
    fn no_testing_needed_past_herd_threshold() {
        let s = State {
            t: 0.0,
            x_s: 200.0,
            x_i: 50.0,
            x_d: 0.0,
            x_u: 750.0,
            x_r: 0.0,
        };
        assert_eq!(best_rate(&s, &params()), 0.0);
    }

    #[test]
    fn unfavourable_breakpoints_are_detected() {
        let p = ModelParams {
            beta: Schedule::new(vec![(0.0, 0.4), (10.0, 0.1), (20.0, 0.3)]).unwrap(),
            theta: Schedule::new(vec![(0.0, 0.9), (20.0, 0.95), (30.0, 0.5)]).unwrap(),
            ..params()
        };
        assert_eq!(unfavourable_breakpoints(&p, 5.0, 100.0), vec![20.0, 30.0]);
        assert_eq!(unfavourable_breakpoints(&p, 25.0, 100.0), vec![30.0]);
    }
}
