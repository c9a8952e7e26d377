//! Headline acceptance criteria for the SIDUR toolkit, each a measurement
//! with a verdict against a fixed tolerance and, for most, a time limit.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sidur_cli::commands::{
    cmd_fit, cost_run, fitted, load_dataset, mean_rt, predict, ParamsSource,
};
use sidur_cli::config::{RunConfig, Scenario};
use sidur_core::data::ImputedDataset;
use sidur_core::estimation::{estimate_rho, fit_model, EstimationConfig, FitSetup, PsoConfig};
use sidur_core::france;
use sidur_core::model::{
    basic_reproduction, check_trajectory, integrate, rhs, Integrator, ModelParams, Schedule, State,
    TestSupply, TestablePopulation,
};
use sidur_core::policies::{best_policy, best_rate, CostInstance};

/// Verdict and a one-line account of the measurement, or the error that
/// prevented it.
pub type Check = Result<(bool, String), String>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub limit: Option<Duration>,
    pub run: fn() -> Check,
}

/// Outcome of one criterion, with the time limit folded into `pass`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} | {} | {:.2} s",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(l) = self.limit {
            write!(f, ", limit {} s", l.as_secs())?;
        }
        Ok(())
    }
}

impl Criterion {
    pub fn evaluate(&self) -> Report {
        let started = Instant::now();
        let result = (self.run)();
        let elapsed = started.elapsed();
        let in_time = self.limit.is_none_or(|l| elapsed < l);
        let (pass, detail) = match result {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        Report {
            id: self.id,
            name: self.name,
            pass,
            detail,
            elapsed,
            limit: self.limit,
        }
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn rel(value: f64, target: f64) -> f64 {
    (value - target).abs() / target.abs()
}

fn extract() -> Result<ImputedDataset, String> {
    load_dataset(&RunConfig::default()).map_err(|e| e.to_string())
}

fn exact_config() -> RunConfig {
    RunConfig::default()
}

fn approximate_config() -> RunConfig {
    RunConfig {
        assumption5: true,
        ..RunConfig::default()
    }
}

fn removal_rate() -> Check {
    let data = extract()?;
    let started = Instant::now();
    let rho = estimate_rho(&data.y1, &data.y2).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let ok = within(rho, 0.0499, 0.001) && elapsed < Duration::from_secs(1);
    Ok((ok, format!("rho = {rho:.5} (target 0.0499 +/- 0.001)")))
}

fn round_trip() -> Check {
    let kappa =
        france::reference_initial_infected(&Default::default()).map_err(|e| e.to_string())?;
    let setup = FitSetup {
        kappa,
        ..FitSetup::default()
    };
    let truth = france::exact_estimates();
    let base = extract()?;
    let traj = setup
        .simulate(&truth, &base, france::RHO)
        .map_err(|e| e.to_string())?;
    let data = base.with_model_outputs(&traj).map_err(|e| e.to_string())?;
    let (lower, upper) = setup.default_box(false);
    let config = EstimationConfig {
        pso: PsoConfig {
            swarm_size: 50,
            max_iterations: 500,
            seed: 0,
            ..PsoConfig::with_box(lower, upper)
        },
        setup,
        fit_kappa: false,
        log_specificity: true,
    };
    let fit = fit_model(&data, &config).map_err(|e| e.to_string())?;
    let names = ["beta1", "beta2", "beta3", "theta1", "theta2", "gamma"];
    let errors: Vec<f64> = truth
        .to_vec()
        .iter()
        .zip(fit.params.to_vec())
        .map(|(t, r)| rel(r, *t))
        .collect();
    let worst = errors
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, e)| (names[i], *e))
        .unwrap_or(("none", 0.0));
    let listing: Vec<String> = names
        .iter()
        .zip(fit.params.to_vec())
        .map(|(n, v)| format!("{n} {v:.4}"))
        .collect();
    Ok((
        errors.iter().all(|e| *e <= 0.05),
        format!(
            "recovered [{}], cost {:.3e}, worst {} off by {:.1}% (limit 5%)",
            listing.join(", "),
            fit.cost,
            worst.0,
            100.0 * worst.1
        ),
    ))
}

fn reproduction_numbers() -> Check {
    let config = exact_config();
    let data = extract()?;
    let fit = fitted(&config, &data, &ParamsSource::Published).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let r0 = basic_reproduction(&fit.params, data.u[0]).map_err(|e| e.to_string())?;
    let rt = mean_rt(&fit.observed, france::LOCKDOWN_DAY, france::UNLOCK_DAY);
    let fast = started.elapsed() < Duration::from_secs(1);
    Ok((
        within(r0, 2.33, 0.1) && within(rt, 0.33, 0.05) && fast,
        format!("R0 = {r0:.4} (2.33 +/- 0.1), lockdown mean R_t = {rt:.4} (0.33 +/- 0.05)"),
    ))
}

fn best_headline() -> Check {
    let config = exact_config();
    let data = extract()?;
    let fit = fitted(&config, &data, &ParamsSource::Published).map_err(|e| e.to_string())?;
    let sol =
        best_policy(&fit.observed, &fit.params, france::BEST_DAY).map_err(|e| e.to_string())?;
    let baseline = fit.observed.peak_infected().1;
    let ok = rel(sol.c_star, 147_000.0) <= 0.10
        && rel(sol.peak_xi, 363_169.0) <= 0.10
        && rel(baseline, 6.0e6) <= 0.15;
    Ok((
        ok,
        format!(
            "c* = {:.0} (147000 +/- 10%), peak = {:.0} (363169 +/- 10%), untested peak = {:.0} (6e6 +/- 15%)",
            sol.c_star, sol.peak_xi, baseline
        ),
    ))
}

fn random_constant_params(rng: &mut ChaCha8Rng, n: f64) -> ModelParams {
    let testable = if rng.gen_bool(0.5) {
        TestablePopulation::Exact
    } else {
        TestablePopulation::Approximate
    };
    let gamma = rng.gen_range(0.05..0.3);
    ModelParams {
        beta: Schedule::constant(rng.gen_range(0.15..0.9)),
        theta: Schedule::constant(rng.gen_range(0.05..0.999)),
        gamma,
        rho: rng.gen_range(0.2..1.0) * gamma,
        population: n,
        testable,
    }
}

fn best_flip() -> Check {
    let n = 1e6;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tried = 0;
    let mut failures = Vec::new();
    let mut accepted = 0;
    while accepted < 50 {
        tried += 1;
        let p = random_constant_params(&mut rng, n);
        let x_i = rng.gen_range(10.0..5e4);
        let x_s = rng.gen_range(0.3..1.0) * (n - x_i);
        let diagnosed = rng.gen_range(0.0..0.05);
        let rest = n - x_i - x_s;
        let s = State {
            t: rng.gen_range(0.0..100.0),
            x_s,
            x_i,
            x_d: diagnosed * rest,
            x_u: (1.0 - diagnosed) * rest,
            x_r: 0.0,
        };
        let c = best_rate(&s, &p);
        if c <= 0.0 {
            continue;
        }
        accepted += 1;
        let traj = integrate(&s, &p, &TestSupply::unlimited(Schedule::constant(c)), 5.0)
            .map_err(|e| e.to_string())?;
        let held = traj
            .states
            .windows(2)
            .all(|w| w[1].x_i <= w[0].x_i * (1.0 + 1e-12));
        let slope = rhs(&s, &p, 0.95 * c).map_err(|e| e.to_string())?.x_i;
        if !held || slope <= 0.0 {
            failures.push(format!(
                "state {accepted}: held {held}, slope at 0.95c* {slope:.3e}"
            ));
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "{accepted} spreading states of {tried} drawn, {} violations{}",
            failures.len(),
            failures
                .first()
                .map(|f| format!(", first: {f}"))
                .unwrap_or_default()
        ),
    ))
}

fn cost_headline() -> Check {
    let config = approximate_config();
    let data = extract()?;
    let fit = fitted(&config, &data, &ParamsSource::Published).map_err(|e| e.to_string())?;
    let run = cost_run(&config.policy, &data, &fit, false).map_err(|e| e.to_string())?;
    let s = &run.record.solution;
    let ok = rel(s.c, 17_144.0) <= 0.10 && within(s.duration, 118.0, 10.0) && s.iterations <= 30;
    Ok((
        ok,
        format!(
            "C = {:.0} (17144 +/- 10%), T = {:.1} days (118 +/- 10), {} Newton iterations (limit 30)",
            s.c, s.duration, s.iterations
        ),
    ))
}

fn cost_oracle() -> Check {
    let mut config = approximate_config();
    config.policy.grid_points = Some(200);
    let data = extract()?;
    let fit = fitted(&config, &data, &ParamsSource::Published).map_err(|e| e.to_string())?;
    let run = cost_run(&config.policy, &data, &fit, true).map_err(|e| e.to_string())?;
    let s = &run.record.solution;
    let (grid_best, _) = run.grid.ok_or("no brute-force grid")?;
    let gap = (s.peak1 - s.peak2).abs() / s.peak1.max(s.peak2);
    Ok((
        rel(grid_best, s.c) <= 0.05 && gap <= 0.01,
        format!(
            "Newton C = {:.0}, grid argmin = {:.0} ({:.2}% apart, limit 5%), peaks {:.0} / {:.0} ({:.3}% apart, limit 1%)",
            s.c,
            grid_best,
            100.0 * rel(grid_best, s.c),
            s.peak1,
            s.peak2,
            100.0 * gap
        ),
    ))
}

fn outcome_deltas() -> Check {
    let data = extract()?;
    let best_config = exact_config();
    let fit = fitted(&best_config, &data, &ParamsSource::Published).map_err(|e| e.to_string())?;
    let (best, _) =
        predict(&best_config, &data, &fit, Scenario::Best).map_err(|e| e.to_string())?;
    let cost_config = approximate_config();
    let fit = fitted(&cost_config, &data, &ParamsSource::Published).map_err(|e| e.to_string())?;
    let (cost, _) =
        predict(&cost_config, &data, &fit, Scenario::Cost).map_err(|e| e.to_string())?;
    let ok = within(best.icu_peak_reduction_pct, 34.71, 3.0)
        && within(best.deaths_final_reduction_pct, 74.45, 5.0)
        && within(cost.icu_peak_reduction_pct, 11.12, 3.0)
        && within(cost.deaths_final_reduction_pct, 37.52, 5.0);
    Ok((
        ok,
        format!(
            "BEST: ICU -{:.2}% (34.71 +/- 3), deaths -{:.2}% (74.45 +/- 5); COST: ICU -{:.2}% (11.12 +/- 3), deaths -{:.2}% (37.52 +/- 5)",
            best.icu_peak_reduction_pct,
            best.deaths_final_reduction_pct,
            cost.icu_peak_reduction_pct,
            cost.deaths_final_reduction_pct
        ),
    ))
}

/// Piecewise-parameter instance with a random testing rate and stockpile.
/// Parameters switch at day boundaries, as calendar-driven schedules do.
fn invariant_instance(rng: &mut ChaCha8Rng) -> Result<(ModelParams, State, TestSupply), String> {
    let n = 10f64.powf(rng.gen_range(5.0..7.5));
    let switch = rng.gen_range(10..80) as f64;
    let beta = Schedule::new(vec![
        (0.0, rng.gen_range(0.15..0.9)),
        (switch, rng.gen_range(0.02..0.9)),
    ])
    .map_err(|e| e.to_string())?;
    let theta = Schedule::new(vec![
        (0.0, rng.gen_range(0.05..0.999)),
        (
            switch + rng.gen_range(0..30) as f64,
            rng.gen_range(0.05..0.999),
        ),
    ])
    .map_err(|e| e.to_string())?;
    let gamma = rng.gen_range(0.05..0.3);
    let p = ModelParams {
        beta,
        theta,
        gamma,
        rho: rng.gen_range(0.2..1.0) * gamma,
        population: n,
        testable: if rng.gen_bool(0.5) {
            TestablePopulation::Exact
        } else {
            TestablePopulation::Approximate
        },
    };
    let x_i = rng.gen_range(1e-5..1e-2) * n;
    let s = State {
        t: 0.0,
        x_s: n - x_i,
        x_i,
        x_d: 0.0,
        x_u: 0.0,
        x_r: 0.0,
    };
    let rate = Schedule::constant(rng.gen_range(0.0..0.05) * n);
    let supply = if rng.gen_bool(0.5) {
        TestSupply::unlimited(rate)
    } else {
        TestSupply::limited(rate, rng.gen_range(0.01..0.5) * n)
    };
    Ok((p, s, supply))
}

/// Random constant-parameter problem in infection time with a rate that
/// keeps it spreading.
fn xi_instance(rng: &mut ChaCha8Rng) -> (CostInstance, f64) {
    let n = 1e6;
    let gamma = rng.gen_range(0.05..0.15);
    let theta = rng.gen_range(0.5..0.99);
    let x_i0 = rng.gen_range(10.0..1000.0);
    let inst = CostInstance {
        beta: gamma * rng.gen_range(1.5..4.0),
        theta,
        gamma,
        population: n,
        x_s0: n - x_i0,
        x_i0,
        x_u0: 0.0,
    };
    let limit = (1.0 - theta) * (inst.x_s0 * inst.beta - gamma * n);
    (inst, rng.gen_range(0.05..0.8) * limit)
}

/// End of the tabulated range: most of the way from the first peak to the
/// point where the closed-form infected population vanishes.
fn xi_range(inst: &CostInstance, c: f64, xi_peak: f64) -> f64 {
    let mut hi = 2.0 * xi_peak.max(1.0);
    while inst.infected(hi, c, None) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = xi_peak;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inst.infected(mid, c, None) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    xi_peak + 0.8 * (lo - xi_peak)
}

fn x_i_end(step: f64, p: &ModelParams, s: &State, u: f64, days: f64) -> Result<f64, String> {
    let traj = Integrator::new(step)
        .and_then(|i| i.run(s, p, &TestSupply::unlimited(Schedule::constant(u)), days))
        .map_err(|e| e.to_string())?;
    Ok(traj.states.last().map(|x| x.x_i).unwrap_or(f64::NAN))
}

fn invariant_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures: Vec<String> = Vec::new();
    let mut ratios = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..100 {
        let mut fail = |what: String| failures.push(format!("instance {k}: {what}"));

        // Structural invariants, the output relations and the testable
        // population lemma on a piecewise instance and its BEST counterpart.
        let (p, s, supply) = invariant_instance(&mut rng)?;
        let traj = integrate(&s, &p, &supply, 120.0).map_err(|e| e.to_string())?;
        if let Some(v) = check_trajectory(&traj, &p).first() {
            fail(format!(
                "{} at sample {}: {}",
                v.property, v.sample, v.detail
            ));
        }
        let t_star = rng.gen_range(1..60) as f64;
        let best = best_policy(&traj, &p, t_star).map_err(|e| e.to_string())?;
        if let Some(v) = check_trajectory(&best.trajectory, &p).first() {
            fail(format!("BEST run, {} at sample {}", v.property, v.sample));
        }

        // Halving the step: bounded change, fourth-order error ratio.
        let n = p.population;
        let u = supply.rate(0.0, n);
        let coarse = integrate(&s, &p, &TestSupply::unlimited(Schedule::constant(u)), 120.0)
            .map_err(|e| e.to_string())?;
        let fine = Integrator::new(0.025)
            .and_then(|i| i.run(&s, &p, &TestSupply::unlimited(Schedule::constant(u)), 120.0))
            .map_err(|e| e.to_string())?;
        let drift = coarse
            .states
            .iter()
            .zip(&fine.states)
            .map(|(a, b)| (a.x_i - b.x_i).abs())
            .fold(0.0, f64::max);
        if drift >= 1e-6 * n {
            fail(format!("step halving moved x_I by {drift:.3e}"));
        }
        let smooth = ModelParams {
            beta: Schedule::constant(rng.gen_range(0.3..0.9)),
            theta: Schedule::constant(rng.gen_range(0.5..0.99)),
            gamma: rng.gen_range(0.05..0.2),
            rho: 0.05,
            population: 1e6,
            testable: TestablePopulation::Exact,
        };
        let seed = State {
            t: 0.0,
            x_s: 1e6 - 1e4,
            x_i: 1e4,
            x_d: 0.0,
            x_u: 0.0,
            x_r: 0.0,
        };
        // A rate well below the testable population keeps the cap inactive,
        // so the right-hand side stays smooth.
        let u = rng
            .gen_range(0.0..2e4f64)
            .min(0.25 * (1.0 - smooth.theta_at(0.0)) * 1e6);
        let a = x_i_end(0.2, &smooth, &seed, u, 30.0)?;
        let b = x_i_end(0.1, &smooth, &seed, u, 30.0)?;
        let c = x_i_end(0.05, &smooth, &seed, u, 30.0)?;
        let ratio = (a - b) / (b - c);
        ratios = (ratios.0.min(ratio), ratios.1.max(ratio));
        if !(12.0..20.0).contains(&ratio) {
            fail(format!("error ratio {ratio:.2}"));
        }

        // Logarithm bounds on a random grid.
        for _ in 0..1000 {
            let x: f64 = 10f64.powf(rng.gen_range(0.0..6.0));
            if !(x - 1.0 >= x.ln() && x.ln() >= 1.0 - 1.0 / x) {
                fail(format!("logarithm bounds at x = {x}"));
            }
        }

        // Infection time against real time, and the stop between the peaks.
        let (inst, c) = xi_instance(&mut rng);
        let pos = inst.peak_positions(c).map_err(|e| e.to_string())?;
        let xi_star = inst.xi_star_optimal(c).map_err(|e| e.to_string())?;
        if !(pos.xi_peak1 <= xi_star && xi_star <= pos.xi_peak2) {
            fail(format!(
                "stop {xi_star:.1} outside [{:.1}, {:.1}]",
                pos.xi_peak1, pos.xi_peak2
            ));
        }
        let table = inst
            .xi_solution(c, None, xi_range(&inst, c, pos.xi_peak1))
            .map_err(|e| e.to_string())?;
        let days = table.t.last().copied().unwrap_or(0.0).floor();
        let start = State {
            t: 0.0,
            x_s: inst.x_s0,
            x_i: inst.x_i0,
            x_d: 0.0,
            x_u: inst.x_u0,
            x_r: 0.0,
        };
        let sim = integrate(
            &start,
            &inst.time_domain_params(0.05),
            &TestSupply::unlimited(Schedule::constant(c)),
            days,
        )
        .map_err(|e| e.to_string())?;
        for (t, st) in sim.sample_times.iter().zip(&sim.states) {
            let Some(z) = table.xi_at_time(*t) else {
                fail(format!("no infection time at t = {t}"));
                break;
            };
            if (inst.susceptible(z) - st.x_s).abs() > 1e-4 * st.x_s {
                fail(format!("x_S mismatch at t = {t}"));
                break;
            }
        }
        let (t_peak, _) = sim.peak_infected();
        let top = (0..table.x_i.len())
            .max_by(|&i, &j| table.x_i[i].total_cmp(&table.x_i[j]))
            .unwrap_or(0);
        if (table.t[top] - t_peak).abs() > 1.0 {
            fail(format!(
                "peak at t = {t_peak} vs {:.2} in infection time",
                table.t[top]
            ));
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "100 instances, {} violations, halving ratios in [{:.2}, {:.2}]{}",
            failures.len(),
            ratios.0,
            ratios.1,
            failures
                .first()
                .map(|f| format!(", first: {f}"))
                .unwrap_or_default()
        ),
    ))
}

fn determinism() -> Check {
    let dirs = [tempfile::tempdir(), tempfile::tempdir()];
    let mut outputs = Vec::new();
    for dir in &dirs {
        let dir = dir.as_ref().map_err(|e| e.to_string())?;
        let config = RunConfig {
            out: dir.path().to_path_buf(),
            ..RunConfig::default()
        };
        let summary = cmd_fit(&config).map_err(|e| e.to_string())?;
        let bytes = std::fs::read(dir.path().join("params.json")).map_err(|e| e.to_string())?;
        outputs.push((bytes, summary.params.cost));
    }
    Ok((
        outputs[0].0 == outputs[1].0,
        format!(
            "two seeded runs, params.json {} bytes each, identical: {}, cost {:.4e}",
            outputs[0].0.len(),
            outputs[0].0 == outputs[1].0,
            outputs[0].1.unwrap_or(f64::NAN)
        ),
    ))
}

pub fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion {
            id: 1,
            name: "removal rate",
            limit: secs(1),
            run: removal_rate,
        },
        Criterion {
            id: 2,
            name: "round-trip identifiability",
            limit: secs(600),
            run: round_trip,
        },
        Criterion {
            id: 3,
            name: "reproduction numbers",
            limit: None,
            run: reproduction_numbers,
        },
        Criterion {
            id: 4,
            name: "BEST headline",
            limit: secs(10),
            run: best_headline,
        },
        Criterion {
            id: 5,
            name: "BEST flip property",
            limit: secs(60),
            run: best_flip,
        },
        Criterion {
            id: 6,
            name: "COST headline",
            limit: secs(30),
            run: cost_headline,
        },
        Criterion {
            id: 7,
            name: "COST optimality oracle",
            limit: secs(300),
            run: cost_oracle,
        },
        Criterion {
            id: 8,
            name: "outcome deltas",
            limit: secs(60),
            run: outcome_deltas,
        },
        Criterion {
            id: 9,
            name: "invariant suite",
            limit: secs(300),
            run: invariant_suite,
        },
        Criterion {
            id: 10,
            name: "fit determinism",
            limit: None,
            run: determinism,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passing() -> Check {
        Ok((true, "fine".into()))
    }

    fn broken() -> Check {
        Err("no data".into())
    }

    fn slow() -> Check {
        std::thread::sleep(Duration::from_millis(20));
        Ok((true, "late".into()))
    }

    #[test]
    fn tolerances() {
        assert!(within(2.4, 2.33, 0.1));
        assert!(!within(2.44, 2.33, 0.1));
        assert!((rel(110.0, 100.0) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn errors_and_overruns_fail() {
        let ok = Criterion {
            id: 1,
            name: "a",
            limit: None,
            run: passing,
        }
        .evaluate();
        assert!(ok.pass);
        assert!(ok.to_string().starts_with("criterion  1 PASS: a | fine |"));
        let err = Criterion {
            id: 2,
            name: "b",
            limit: None,
            run: broken,
        }
        .evaluate();
        assert!(!err.pass);
        assert_eq!(err.detail, "error: no data");
        let late = Criterion {
            id: 3,
            name: "c",
            limit: Some(Duration::from_millis(1)),
            run: slow,
        }
        .evaluate();
        assert!(!late.pass);
        assert!(late.to_string().contains("FAIL"));
    }

    #[test]
    fn criteria_are_numbered_one_to_ten() {
        let ids: Vec<u32> = criteria().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=10).collect::<Vec<_>>());
    }
}
