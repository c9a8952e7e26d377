//! Structural checks on simulated trajectories.

use super::params::{ModelParams, TestablePopulation};
use super::trajectory::Trajectory;

/// Conservation tolerance relative to the population.
pub const CONSERVATION_TOL: f64 = 1e-6;

/// A violated property at a given sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub property: &'static str,
    pub sample: usize,
    pub detail: String,
}

/// Checks conservation, nonnegativity, compartment monotonicity, the output
/// relations `y1 = x_D + x_R`, `y2 = x_R`, `ẏ2 = ρ(y1 − y2)` and `ẏ1 = y3`,
/// and that `x_T` falls wherever `x_I` falls without `θ` falling.
///
/// The derivative relations are checked by Simpson's rule over pairs of
/// daily intervals with a constant testing rate, so they only bind where `u`
/// and the parameters do not change inside the pair.
pub fn check_trajectory(traj: &Trajectory, params: &ModelParams) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = traj.population;
    let mut flag = |property, sample, detail: String| {
        out.push(Violation {
            property,
            sample,
            detail,
        })
    };
    for (k, s) in traj.states.iter().enumerate() {
        let drift = (s.total() - n).abs();
        if drift >= CONSERVATION_TOL * n {
            flag("conservation", k, format!("|sum - N| = {drift}"));
        }
        if !s.is_nonnegative() {
            flag("nonnegativity", k, format!("{s:?}"));
        }
        if (traj.y1[k] - s.diagnosed()).abs() > 1e-9 * n.max(1.0) {
            flag(
                "y1",
                k,
                format!("y1 = {}, x_D + x_R = {}", traj.y1[k], s.diagnosed()),
            );
        }
        if traj.y2[k] != s.x_r {
            flag("y2", k, format!("y2 = {}, x_R = {}", traj.y2[k], s.x_r));
        }
    }
    let slack = 1e-9 * n;
    for (k, w) in traj.states.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        if b.x_s > a.x_s + slack {
            flag("x_S nonincreasing", k, format!("{} -> {}", a.x_s, b.x_s));
        }
        if b.x_u < a.x_u - slack {
            flag("x_U nondecreasing", k, format!("{} -> {}", a.x_u, b.x_u));
        }
        if b.x_r < a.x_r - slack {
            flag("x_R nondecreasing", k, format!("{} -> {}", a.x_r, b.x_r));
        }
        let theta_ok = params.theta_at(b.t) >= params.theta_at(a.t);
        if params.testable == TestablePopulation::Exact && b.x_i < a.x_i && theta_ok {
            let (ta, tb) = (params.testable_of(a), params.testable_of(b));
            if tb - ta > 1e-12 * ta && ta > 0.0 {
                flag("x_T decreases with x_I", k, format!("{ta} -> {tb}"));
            }
        }
    }
    // `y3` at a sample uses the θ in force from that sample on, so a switch
    // at the last sample of a pair already breaks it.
    for k in 0..traj.len().saturating_sub(2) {
        let smooth = traj.u_applied[k] == traj.u_applied[k + 1]
            && traj.u_applied[k] == traj.u_applied[k + 2]
            && params.beta_at(traj.sample_times[k])
                == params.beta_at(traj.sample_times[k + 2] - 1e-9)
            && params.theta_at(traj.sample_times[k]) == params.theta_at(traj.sample_times[k + 2]);
        if !smooth {
            continue;
        }
        // Simpson's rule with a quarter of its gap to the trapezoid rule as
        // the quadrature error allowance, which matters once a rate reaches
        // about one per day.
        let simpson = |f: &dyn Fn(usize) -> f64| {
            let s = (f(k) + 4.0 * f(k + 1) + f(k + 2)) / 3.0;
            let t = (f(k) + 2.0 * f(k + 1) + f(k + 2)) / 2.0;
            (s, 0.25 * (s - t).abs())
        };
        let active = |j: usize| params.rho * (traj.y1[j] - traj.y2[j]);
        let d_y2 = traj.y2[k + 2] - traj.y2[k];
        let (i_y2, err) = simpson(&active);
        if (d_y2 - i_y2).abs() > 1e-3 * d_y2.abs() + err + slack {
            flag("y2' = rho (y1 - y2)", k, format!("{d_y2} vs {i_y2}"));
        }
        let d_y1 = traj.y1[k + 2] - traj.y1[k];
        let (i_y1, err) = simpson(&|j| traj.y3[j]);
        if (d_y1 - i_y1).abs() > 1e-3 * d_y1.abs() + err + slack {
            flag("y1' = y3", k, format!("{d_y1} vs {i_y1}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{integrate, Schedule, State, TestSupply};

    #[test]
    fn disease_free_run_is_clean() {
        let params = ModelParams {
            beta: Schedule::constant(0.3),
            theta: Schedule::constant(0.9),
            gamma: 0.1,
            rho: 0.05,
            population: 1e6,
            testable: TestablePopulation::Exact,
        };
        let s = State {
            t: 0.0,
            x_s: 1e6,
            x_i: 0.0,
            x_d: 0.0,
            x_u: 0.0,
            x_r: 0.0,
        };
        let traj = integrate(
            &s,
            &params,
            &TestSupply::unlimited(Schedule::constant(100.0)),
            20.0,
        )
        .unwrap();
        assert!(check_trajectory(&traj, &params).is_empty());
    }

    #[test]
    fn tampered_conservation_is_reported() {
        let params = ModelParams {
            beta: Schedule::constant(0.3),
            theta: Schedule::constant(0.9),
            gamma: 0.1,
            rho: 0.05,
            population: 1e6,
            testable: TestablePopulation::Exact,
        };
        let s = State::from_first_observation(1e6, 10.0, 0.0, 10.0);
        let mut traj = integrate(
            &s,
            &params,
            &TestSupply::unlimited(Schedule::constant(100.0)),
            10.0,
        )
        .unwrap();
        traj.states[4].x_s += 10.0;
        let v = check_trajectory(&traj, &params);
        assert!(v
            .iter()
            .any(|v| v.property == "conservation" && v.sample == 4));
    }
}
