//! Constant-rate use of a finite test stockpile that minimizes the larger of
//! the two epidemic peaks (during and after testing).
//!
//! Under the approximation `x_T = (1−θ)·N` and constant parameters, the
//! infection time `ξ` with `dξ = x_I·dt` turns the model into closed-form
//! expressions for `x_S`, `x_U` and `x_I`, and real time is recovered as
//! `t(ξ) = ∫ dξ/x_I`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SidurError};
use crate::model::{integrate, ModelParams, Schedule, State, TestSupply, TestablePopulation};
use crate::quadrature::{cumulative_trapezoid_graded, romberg_graded};

/// Relative tolerance of the quadrature inside the Newton residual.
const RESIDUAL_QUADRATURE_TOL: f64 = 1e-12;
/// Relative tolerance of the tabulated time map.
pub const TABLE_TOLERANCE: f64 = 1e-6;
/// Fewer infected persons than this count as extinction.
pub const EXTINCTION_LEVEL: f64 = 1.0;

/// Constant-parameter problem in infection time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostInstance {
    pub beta: f64,
    pub theta: f64,
    pub gamma: f64,
    pub population: f64,
    pub x_s0: f64,
    pub x_i0: f64,
    pub x_u0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakPositions {
    pub xi_peak1: f64,
    pub xi_peak2: f64,
    pub r_c: f64,
    pub r_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSolution {
    /// Constant testing rate (tests/day).
    #[serde(rename = "C")]
    pub c: f64,
    /// Duration of testing, `r_max/C` (days).
    #[serde(rename = "T")]
    pub duration: f64,
    pub xi_star: f64,
    pub peak1: f64,
    pub peak2: f64,
    pub xi_peak1: f64,
    pub xi_peak2: f64,
    pub r_c: f64,
    pub r_w: f64,
    /// Peaks from the alternative closed form with an `R·ln R` term, kept
    /// for comparison only.
    pub printed_peak1: f64,
    pub printed_peak2: f64,
    pub iterations: usize,
    pub bisection_fallback: bool,
    /// `(C, f(C))` at every iterate.
    pub newton_trace: Vec<(f64, f64)>,
}

/// Tabulated solution on a graded ξ-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct XiSolution {
    pub xi: Vec<f64>,
    pub x_s: Vec<f64>,
    pub x_u: Vec<f64>,
    pub x_i: Vec<f64>,
    pub t: Vec<f64>,
}

impl XiSolution {
    /// Infection time at real time `t` by interpolation of the table.
    pub fn xi_at_time(&self, t: f64) -> Option<f64> {
        let idx = self.t.partition_point(|&v| v < t);
        if idx == 0 {
            return (t == 0.0).then_some(0.0);
        }
        if idx >= self.t.len() {
            return None;
        }
        let (t0, t1) = (self.t[idx - 1], self.t[idx]);
        let f = (t - t0) / (t1 - t0);
        Some(self.xi[idx - 1] + f * (self.xi[idx] - self.xi[idx - 1]))
    }
}

impl CostInstance {
    /// Uses the parameters in force at the state's time.
    pub fn new(params: &ModelParams, initial: &State) -> Result<Self> {
        let inst = Self {
            beta: params.beta_at(initial.t),
            theta: params.theta_at(initial.t),
            gamma: params.gamma,
            population: params.population,
            x_s0: initial.x_s,
            x_i0: initial.x_i,
            x_u0: initial.x_u,
        };
        if !(inst.x_i0 > 0.0) {
            return Err(SidurError::InvalidInput(
                "initial infected must be positive".into(),
            ));
        }
        if inst.theta >= 1.0 {
            return Err(SidurError::ThetaOne);
        }
        Ok(inst)
    }

    /// Constant-parameter model with the approximate testable population,
    /// the time-domain counterpart of this instance.
    pub fn time_domain_params(&self, rho: f64) -> ModelParams {
        ModelParams {
            beta: Schedule::constant(self.beta),
            theta: Schedule::constant(self.theta),
            gamma: self.gamma,
            rho,
            population: self.population,
            testable: TestablePopulation::Approximate,
        }
    }

    fn testing_coefficient(&self, c: f64) -> f64 {
        c / ((1.0 - self.theta) * self.population)
    }

    /// Reproduction number without testing at the origin.
    pub fn r_w(&self) -> f64 {
        self.x_s0 * self.beta / (self.gamma * self.population)
    }

    /// Reproduction number under constant testing `C` at the origin.
    pub fn r_c(&self, c: f64) -> f64 {
        self.x_s0 * self.beta / (c / (1.0 - self.theta) + self.gamma * self.population)
    }

    pub fn susceptible(&self, xi: f64) -> f64 {
        self.x_s0 * (-self.beta * xi / self.population).exp()
    }

    pub fn unidentified(&self, xi: f64) -> f64 {
        self.x_u0 + self.gamma * xi
    }

    /// `x_I(ξ)` with testing at rate `C` until `stop` (if any) and none after.
    pub fn infected(&self, xi: f64, c: f64, stop: Option<f64>) -> f64 {
        let tested = stop.map_or(xi, |s| xi.min(s));
        let infected_so_far = -self.x_s0 * (-self.beta * xi / self.population).exp_m1();
        self.x_i0 + infected_so_far - self.testing_coefficient(c) * tested - self.gamma * xi
    }

    /// `dx_I/dξ` on the testing branch.
    pub fn infected_slope(&self, xi: f64, c: f64) -> f64 {
        self.x_s0 * self.beta / self.population * (-self.beta * xi / self.population).exp()
            - self.testing_coefficient(c)
            - self.gamma
    }

    /// Grading scale for quadratures starting at the origin.
    fn grading_scale(&self, c: f64) -> f64 {
        let slope = self.infected_slope(0.0, c).abs();
        if slope > 0.0 {
            self.x_i0 / slope
        } else {
            self.x_i0
        }
    }

    fn ensure_positive(&self, xi: f64, c: f64, stop: Option<f64>) -> Result<()> {
        // x_I is concave on each branch, so its minimum over [0, ξ] sits at
        // an endpoint or at the switch.
        let mut probes = vec![xi];
        if let Some(s) = stop {
            if s < xi {
                probes.push(s);
            }
        }
        for p in probes {
            if self.infected(p, c, stop) <= 0.0 {
                let root = self.extinction(c, stop, p);
                return Err(SidurError::ExtinctionReached { xi: root });
            }
        }
        Ok(())
    }

    /// First zero of `x_I` below `upper` (where `x_I(upper) ≤ 0`).
    fn extinction(&self, c: f64, stop: Option<f64>, upper: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = upper;
        if let Some(s) = stop {
            if s < upper && self.infected(s, c, stop) <= 0.0 {
                hi = s;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.infected(mid, c, stop) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Real time `t(ξ) = ∫0^ξ dξ'/x_I(ξ')`.
    pub fn time_to(&self, xi: f64, c: f64, stop: Option<f64>, rel_tol: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(SidurError::InvalidInput("negative infection time".into()));
        }
        self.ensure_positive(xi, c, stop)?;
        match stop {
            Some(s) if s < xi => {
                let head = romberg_graded(
                    |z| 1.0 / self.infected(z, c, stop),
                    s,
                    self.grading_scale(c),
                    rel_tol,
                )?;
                let tail = romberg_graded(
                    |z| 1.0 / self.infected(s + z, c, stop),
                    xi - s,
                    xi - s,
                    rel_tol,
                )?;
                Ok(head + tail)
            }
            _ => romberg_graded(
                |z| 1.0 / self.infected(z, c, None),
                xi,
                self.grading_scale(c),
                rel_tol,
            ),
        }
    }

    /// `∂t(ξ; C)/∂C = ∫0^ξ ξ'/((1−θ)N·x_I²) dξ'` on the testing branch.
    pub fn time_sensitivity(&self, xi: f64, c: f64, rel_tol: f64) -> Result<f64> {
        self.ensure_positive(xi, c, None)?;
        let k = 1.0 / ((1.0 - self.theta) * self.population);
        romberg_graded(
            |z| {
                let x = self.infected(z, c, None);
                k * z / (x * x)
            },
            xi,
            self.grading_scale(c),
            rel_tol,
        )
    }

    /// Peak positions of the testing and post-testing waves.
    pub fn peak_positions(&self, c: f64) -> Result<PeakPositions> {
        let r_c = self.r_c(c);
        let r_w = self.r_w();
        if !(r_c > 1.0) {
            return Err(SidurError::AssumptionViolated { r_c });
        }
        let scale = self.population / self.beta;
        Ok(PeakPositions {
            xi_peak1: scale * r_c.ln(),
            xi_peak2: scale * r_w.ln(),
            r_c,
            r_w,
        })
    }

    /// Stopping infection time at which both peaks are equal:
    /// `ξ* = (N/β)·(1 + ln R_C − ln(1+δ)/δ)` with `δ = R_W/R_C − 1`.
    pub fn xi_star_optimal(&self, c: f64) -> Result<f64> {
        let pos = self.peak_positions(c)?;
        let delta = c / ((1.0 - self.theta) * self.gamma * self.population);
        Ok(self.population / self.beta * (1.0 + pos.r_c.ln() - ln1p_ratio(delta)))
    }

    /// Derivative of [`Self::xi_star_optimal`] with respect to `C`:
    /// `(N/(βC))·(ln(1+δ)/δ − 1)`.
    pub fn xi_star_optimal_derivative(&self, c: f64) -> f64 {
        let delta = c / ((1.0 - self.theta) * self.gamma * self.population);
        if delta == 0.0 {
            return -self.population
                / (self.beta * 2.0 * (1.0 - self.theta) * self.gamma * self.population);
        }
        self.population / (self.beta * c) * (ln1p_ratio(delta) - 1.0)
    }

    /// Stopping infection time fixed by the budget, `t(ξ*) = r_max/C`.
    ///
    /// Newton on `t(ξ) − r_max/C` with `dt/dξ = 1/x_I`, kept inside a
    /// shrinking bracket.
    pub fn xi_star_budget(&self, c: f64, r_max: f64, rel_tol: f64) -> Result<f64> {
        let target = r_max / c;
        if target == 0.0 {
            return Ok(0.0);
        }
        // x_I is concave with a single root on the testing branch, so the
        // level below which the wave counts as over is crossed once.
        let mut lo = 0.0;
        let mut hi = self.extinction_xi(c);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.infected(mid, c, None) >= EXTINCTION_LEVEL {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let reachable = lo;

        let (mut lo, mut hi) = (0.0, reachable);
        let mut xi = 0.5 * hi;
        let mut overshoot = false;
        for _ in 0..200 {
            let g = self.time_to(xi, c, None, rel_tol)? - target;
            if g < 0.0 {
                lo = xi;
            } else {
                hi = xi;
                overshoot = true;
            }
            if g.abs() <= rel_tol * target || hi - lo <= 1e-14 * hi.max(1.0) {
                break;
            }
            let step = xi - g * self.infected(xi, c, None);
            xi = if step > lo && step < hi {
                step
            } else if !overshoot && step >= hi {
                reachable
            } else {
                0.5 * (lo + hi)
            };
        }
        // Never past the target means even the end of the wave comes early.
        if !overshoot && xi >= reachable * (1.0 - 1e-9) {
            return Err(SidurError::BudgetOutlastsEpidemic { r_max, c });
        }
        Ok(xi)
    }

    /// Largest ξ at which `x_I ≥ 0` on the testing branch.
    fn extinction_xi(&self, c: f64) -> f64 {
        let mut hi = self.population / self.beta;
        while self.infected(hi, c, None) > 0.0 {
            hi *= 2.0;
        }
        self.extinction(c, None, hi)
    }

    /// Peak values from the closed-form solution at the two peak positions.
    pub fn peak_values(&self, c: f64, xi_star: f64) -> Result<(f64, f64)> {
        let pos = self.peak_positions(c)?;
        if !(pos.xi_peak1 <= xi_star && xi_star <= pos.xi_peak2) {
            return Err(SidurError::IllDefinedPeak(format!(
                "xi* = {xi_star} outside [{}, {}]",
                pos.xi_peak1, pos.xi_peak2
            )));
        }
        let stop = Some(xi_star);
        Ok((
            self.infected(pos.xi_peak1, c, stop),
            self.infected(pos.xi_peak2, c, stop),
        ))
    }

    /// Peaks as `x_I(0) + x_S(0)(1 − 1/R) − (x_S(0)/R)·ln R`, the second
    /// reduced by the tests spent before stopping.
    pub fn peak_values_closed_form(&self, c: f64, xi_star: f64) -> Result<(f64, f64)> {
        let pos = self.peak_positions(c)?;
        let wave = |r: f64| self.x_i0 + self.x_s0 * (1.0 - 1.0 / r) - self.x_s0 / r * r.ln();
        Ok((
            wave(pos.r_c),
            wave(pos.r_w) - self.testing_coefficient(c) * xi_star,
        ))
    }

    /// The same expressions with `R·ln R` in place of `(1/R)·ln R`.
    pub fn peak_values_printed(&self, c: f64, xi_star: f64) -> Result<(f64, f64)> {
        let pos = self.peak_positions(c)?;
        let wave = |r: f64| self.x_i0 + self.x_s0 * (1.0 - 1.0 / r) - self.x_s0 * r * r.ln();
        Ok((
            wave(pos.r_c),
            wave(pos.r_w) - self.testing_coefficient(c) * xi_star,
        ))
    }

    /// Tabulates the closed-form solution and the time map up to `xi_max`.
    pub fn xi_solution(&self, c: f64, stop: Option<f64>, xi_max: f64) -> Result<XiSolution> {
        self.ensure_positive(xi_max, c, stop)?;
        let (xi, t) = cumulative_trapezoid_graded(
            |z| 1.0 / self.infected(z, c, stop),
            xi_max,
            self.grading_scale(c),
            TABLE_TOLERANCE,
        )?;
        Ok(XiSolution {
            x_s: xi.iter().map(|&z| self.susceptible(z)).collect(),
            x_u: xi.iter().map(|&z| self.unidentified(z)).collect(),
            x_i: xi.iter().map(|&z| self.infected(z, c, stop)).collect(),
            xi,
            t,
        })
    }

    /// `f(C) = r_max/C − t(ξ*(C); C)` and `f'(C)`.
    fn residual(&self, c: f64, r_max: f64) -> Result<(f64, f64, f64)> {
        let xi_star = self.xi_star_optimal(c)?;
        let t = self.time_to(xi_star, c, None, RESIDUAL_QUADRATURE_TOL)?;
        let f = r_max / c - t;
        let x_at_stop = self.infected(xi_star, c, None);
        let dt_dc = self.time_sensitivity(xi_star, c, RESIDUAL_QUADRATURE_TOL)?;
        let df = -r_max / (c * c) - self.xi_star_optimal_derivative(c) / x_at_stop - dt_dc;
        Ok((f, df, xi_star))
    }

    fn solution(
        &self,
        c: f64,
        r_max: f64,
        trace: Vec<(f64, f64)>,
        bisection: bool,
    ) -> Result<CostSolution> {
        let xi_star = self.xi_star_optimal(c)?;
        let pos = self.peak_positions(c)?;
        let (peak1, peak2) = self.peak_values(c, xi_star)?;
        let (printed_peak1, printed_peak2) = self.peak_values_printed(c, xi_star)?;
        Ok(CostSolution {
            c,
            duration: r_max / c,
            xi_star,
            peak1,
            peak2,
            xi_peak1: pos.xi_peak1,
            xi_peak2: pos.xi_peak2,
            r_c: pos.r_c,
            r_w: pos.r_w,
            printed_peak1,
            printed_peak2,
            iterations: trace.len(),
            bisection_fallback: bisection,
            newton_trace: trace,
        })
    }

    /// Largest `C` with `R_C(C) > 1`, shrunk slightly.
    fn feasible_limit(&self) -> f64 {
        (1.0 - self.theta) * (self.x_s0 * self.beta - self.gamma * self.population) * (1.0 - 1e-9)
    }
}

/// `ln(1+δ)/δ`, continuous at `δ = 0`.
fn ln1p_ratio(delta: f64) -> f64 {
    if delta.abs() < 1e-8 {
        1.0 - delta / 2.0
    } else {
        delta.ln_1p() / delta
    }
}

/// Default Newton start and bisection bracket for a stockpile spent over
/// `horizon` days.
pub fn default_bracket(r_max: f64, horizon: f64) -> (f64, f64, f64) {
    (
        r_max / horizon,
        r_max / (5.0 * horizon),
        5.0 * r_max / horizon,
    )
}

/// Newton iteration on `f(C) = r_max/C − t(ξ*(C); C)`.
///
/// Falls back to bisection on `bracket` if an iterate leaves the region
/// where `R_C > 1` and the residual is defined.
pub fn cost_newton(
    inst: &CostInstance,
    r_max: f64,
    c0: f64,
    bracket: (f64, f64),
) -> Result<CostSolution> {
    if !(r_max > 0.0) {
        return Err(SidurError::InvalidInput(
            "stockpile must be positive".into(),
        ));
    }
    let r_c0 = inst.r_c(c0);
    if !(r_c0 > 1.0) {
        return Err(SidurError::AssumptionViolated { r_c: r_c0 });
    }
    let mut c = c0;
    let mut trace = Vec::new();
    for _ in 0..100 {
        let (f, df, _) = match inst.residual(c, r_max) {
            Ok(v) => v,
            Err(_) => return cost_bisection(inst, r_max, bracket, trace),
        };
        trace.push((c, f));
        let next = c - f / df;
        let duration = r_max / c;
        if !(next > 0.0) || !(next < inst.feasible_limit()) || !next.is_finite() {
            return cost_bisection(inst, r_max, bracket, trace);
        }
        let step = (next - c).abs() / c;
        if (f / duration).abs() < 1e-8 && step < 1e-8 {
            return inst.solution(c, r_max, trace, false);
        }
        c = next;
    }
    Err(SidurError::NewtonDiverged { iterations: 100 })
}

/// Bisection on `f(C)` over a bracket with a sign change.
pub fn cost_bisection(
    inst: &CostInstance,
    r_max: f64,
    bracket: (f64, f64),
    mut trace: Vec<(f64, f64)>,
) -> Result<CostSolution> {
    let (mut lo, mut hi) = bracket;
    hi = hi.min(inst.feasible_limit());
    // Extinction before ξ* means the stop is never reached: t(ξ*) = ∞.
    let f = |c: f64| match inst.residual(c, r_max) {
        Ok(v) => Ok(v.0),
        Err(SidurError::ExtinctionReached { .. }) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    };
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(SidurError::InvalidInput(format!(
            "no sign change of the residual on [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        trace.push((mid, f_mid));
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo) / mid < 1e-12 {
            break;
        }
    }
    inst.solution(0.5 * (lo + hi), r_max, trace, true)
}

/// One row of the brute-force table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BruteForcePoint {
    #[serde(rename = "C")]
    pub c: f64,
    pub max_infected: f64,
}

/// Simulates `u = C` until the stockpile is spent for each `C` on the grid
/// and returns the one with the smallest maximum of `x_I`.
pub fn cost_brute_force(
    params: &ModelParams,
    initial: &State,
    r_max: f64,
    grid: &[f64],
    horizon_days: f64,
) -> Result<(f64, Vec<BruteForcePoint>)> {
    if grid.is_empty() {
        return Err(SidurError::InvalidInput("empty grid".into()));
    }
    let table: Vec<BruteForcePoint> = grid
        .par_iter()
        .map(|&c| {
            let supply = TestSupply::limited(Schedule::constant(c), r_max);
            let traj = integrate(initial, params, &supply, horizon_days)?;
            Ok(BruteForcePoint {
                c,
                max_infected: traj.peak_infected().1,
            })
        })
        .collect::<Result<_>>()?;
    let best = table
        .iter()
        .min_by(|a, b| a.max_infected.total_cmp(&b.max_infected))
        .expect("nonempty table");
    Ok((best.c, table))
}

/// `n` log-spaced values on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
