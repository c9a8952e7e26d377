//! Subcommand implementations. Each one computes all of its artifacts first
//! and then commits them to the output directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sidur_core::calendar;
use sidur_core::data::{build_signals, impute, load_imputed, load_raw, read_raw, ImputedDataset};
use sidur_core::estimation::{fit_model, FitSetup, ParameterVector};
use sidur_core::france::{self, REFERENCE_CSV};
use sidur_core::model::{
    basic_reproduction, integrate, ModelParams, Schedule, TestSupply, Trajectory,
};
use sidur_core::outcomes::{
    final_reduction, fit_deaths, fit_icu, peak_reduction, predict_deaths, predict_icu, OutcomeFit,
    DEATH_DELAY, ICU_DELAY,
};
use sidur_core::policies::{
    best_policy, best_sweep, cost_brute_force, cost_newton, default_bracket, log_grid,
    BruteForcePoint, CostInstance, CostSolution, SweepPoint,
};

use crate::config::{PolicyConfig, RunConfig, Scenario};
use crate::error::{CliError, CliResult};
use crate::output::{write_atomic, Artifacts};

/// Contents of `params.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    /// `fit` or `published`.
    pub source: String,
    pub rho: f64,
    pub params: ParameterVector,
    pub setup: FitSetup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swarm_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

/// Where the policy commands take the model from.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamsSource {
    File(PathBuf),
    /// Published estimates of the configured mode, with the reference
    /// initial infected multiplier unless the configuration fixes one.
    Published,
}

impl ParamsSource {
    pub fn resolve(config: &RunConfig, path: Option<PathBuf>, published: bool) -> Self {
        if published {
            Self::Published
        } else {
            Self::File(path.unwrap_or_else(|| config.out.join("params.json")))
        }
    }
}

/// A parameter set with its model and data-driven run.
#[derive(Debug, Clone)]
pub struct Fitted {
    pub file: ParamsFile,
    pub params: ModelParams,
    pub observed: Trajectory,
}

pub fn load_dataset(config: &RunConfig) -> CliResult<ImputedDataset> {
    match &config.data {
        Some(path) => Ok(load_imputed(path)?),
        None => Ok(impute(&read_raw(REFERENCE_CSV.as_bytes())?)?.dataset),
    }
}

pub fn published_params(config: &RunConfig) -> CliResult<ParamsFile> {
    let setup = config.fit_setup();
    let (mut params, _) = france::published(setup.testable);
    let kappa = match config.model.kappa {
        Some(k) => k,
        None => france::reference_initial_infected(&Default::default())?,
    };
    params.kappa = Some(kappa);
    Ok(ParamsFile {
        source: "published".into(),
        rho: france::RHO,
        params,
        setup,
        cost: None,
        seed: None,
        swarm_size: None,
        max_iterations: None,
    })
}

pub fn load_params(config: &RunConfig, source: &ParamsSource) -> CliResult<ParamsFile> {
    match source {
        ParamsSource::Published => published_params(config),
        ParamsSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        }
    }
}

pub fn fitted(
    config: &RunConfig,
    data: &ImputedDataset,
    source: &ParamsSource,
) -> CliResult<Fitted> {
    let file = load_params(config, source)?;
    let params = file.setup.model_params(&file.params, file.rho)?;
    let observed = file.setup.simulate(&file.params, data, file.rho)?;
    Ok(Fitted {
        file,
        params,
        observed,
    })
}

/// Run of `params` from the fitted initial state driven by the data's tests.
fn data_driven(fit: &Fitted, data: &ImputedDataset, params: &ModelParams) -> CliResult<Trajectory> {
    let initial = fit.file.setup.initial_state(data, fit.file.params.kappa)?;
    let (u, _) = build_signals(data)?;
    let horizon = (data.len() - 1).max(1) as f64;
    Ok(integrate(
        &initial,
        params,
        &TestSupply::unlimited(u),
        horizon,
    )?)
}

fn horizon_end(traj: &Trajectory) -> f64 {
    *traj.sample_times.last().expect("nonempty trajectory")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImputeSummary {
    pub days: usize,
    pub total_tests: f64,
    pub final_diagnosed: f64,
    pub final_removed: f64,
    pub warnings: Vec<String>,
    pub output: PathBuf,
}

pub fn cmd_impute(
    config: &RunConfig,
    input: Option<&Path>,
    output: Option<&Path>,
) -> CliResult<ImputeSummary> {
    let raw = match input.or(config.data.as_deref()) {
        Some(path) => load_raw(path)?,
        None => read_raw(REFERENCE_CSV.as_bytes())?,
    };
    let imp = impute(&raw)?;
    let d = &imp.dataset;
    let mut bytes = Vec::new();
    d.write_csv(&mut bytes)?;
    let output = output
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.out.join("imputed.csv"));
    write_atomic(&output, &bytes)?;
    Ok(ImputeSummary {
        days: d.len(),
        total_tests: d.total_tests(),
        final_diagnosed: *d.y1.last().unwrap_or(&0.0),
        final_removed: *d.y2.last().unwrap_or(&0.0),
        warnings: imp.warnings,
        output,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub params: ParamsFile,
    pub written: Vec<PathBuf>,
}

#[derive(Serialize)]
struct TraceRow {
    iteration: usize,
    best_cost: f64,
}

#[derive(Serialize)]
struct CurveRow {
    k: usize,
    date: String,
    u: f64,
    y1_data: f64,
    y1_model: f64,
    y2_data: f64,
    y2_model: f64,
    y3_data: f64,
    y3_model: f64,
}

pub fn cmd_fit(config: &RunConfig) -> CliResult<FitSummary> {
    let data = load_dataset(config)?;
    let est = config.estimation_config()?;
    let result = fit_model(&data, &est)?;
    let file = ParamsFile {
        source: "fit".into(),
        rho: result.rho,
        params: result.params,
        setup: est.setup.clone(),
        cost: Some(result.cost),
        seed: Some(est.pso.seed),
        swarm_size: Some(est.pso.swarm_size),
        max_iterations: Some(est.pso.max_iterations),
    };
    let traj = file.setup.simulate(&file.params, &data, file.rho)?;

    let mut out = Artifacts::new();
    out.json("params.json", &file)?;
    let trace: Vec<TraceRow> = result
        .trace
        .iter()
        .enumerate()
        .map(|(iteration, &best_cost)| TraceRow {
            iteration,
            best_cost,
        })
        .collect();
    out.csv("pso_trace.csv", &trace)?;
    let curves: Vec<CurveRow> = (0..data.len())
        .map(|i| CurveRow {
            k: i + 1,
            date: data.dates[i].to_string(),
            u: data.u[i],
            y1_data: data.y1[i],
            y1_model: traj.y1[i],
            y2_data: data.y2[i],
            y2_model: traj.y2[i],
            y3_data: data.y3[i],
            y3_model: traj.y3[i],
        })
        .collect();
    out.csv("fit_curves.csv", &curves)?;
    let written = out.commit(&config.out)?;
    Ok(FitSummary {
        params: file,
        written,
    })
}

/// Trajectory of a scenario over the data horizon.
pub fn scenario_trajectory(
    config: &RunConfig,
    data: &ImputedDataset,
    fit: &Fitted,
    scenario: Scenario,
) -> CliResult<Trajectory> {
    let switches = fit.file.setup.beta_switches;
    match scenario {
        Scenario::Actual => Ok(fit.observed.clone()),
        Scenario::Best => {
            let t_star = calendar::parse_day(&config.policy.t_star)?;
            Ok(best_policy(&fit.observed, &fit.params, t_star)?.trajectory)
        }
        Scenario::Cost => Ok(cost_run(&config.policy, data, fit, false)?.trajectory),
        Scenario::NoLockdown | Scenario::NoUnlock => {
            let at = if scenario == Scenario::NoLockdown {
                switches[0]
            } else {
                switches[1]
            };
            let params = ModelParams {
                beta: fit.params.beta.frozen_from(at),
                ..fit.params.clone()
            };
            data_driven(fit, data, &params)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateSummary {
    pub scenario: Scenario,
    pub r0: f64,
    /// Mean of `R_t` over the days with the second infection rate.
    pub lockdown_mean_rt: f64,
    pub peak_time: f64,
    pub peak_xi: f64,
    pub written: Vec<PathBuf>,
}

/// Mean of the sampled `R_t` over `[from, to)`.
pub fn mean_rt(traj: &Trajectory, from: f64, to: f64) -> f64 {
    let picked: Vec<f64> = traj
        .sample_times
        .iter()
        .zip(&traj.r_t)
        .filter(|(t, r)| **t >= from && **t < to && r.is_finite())
        .map(|(_, r)| *r)
        .collect();
    picked.iter().sum::<f64>() / picked.len() as f64
}

pub fn cmd_simulate(
    config: &RunConfig,
    source: &ParamsSource,
    scenario: Scenario,
) -> CliResult<SimulateSummary> {
    let data = load_dataset(config)?;
    let fit = fitted(config, &data, source)?;
    let traj = scenario_trajectory(config, &data, &fit, scenario)?;
    let [lock, unlock] = fit.file.setup.beta_switches;
    let r0 = basic_reproduction(&fit.params, data.u[0])?;
    let lockdown_mean_rt = mean_rt(&traj, lock, unlock);
    let (peak_time, peak_xi) = traj.peak_infected();

    let mut bytes = Vec::new();
    traj.write_csv(&mut bytes)?;
    let mut out = Artifacts::new();
    out.add(&format!("trajectory_{}.csv", scenario.name()), bytes);
    let written = out.commit(&config.out)?;
    Ok(SimulateSummary {
        scenario,
        r0,
        lockdown_mean_rt,
        peak_time,
        peak_xi,
        written,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestRecord {
    pub date: String,
    pub t_star: f64,
    pub c_star: f64,
    #[serde(rename = "peak_xI")]
    pub peak_xi: f64,
    pub peak_time: f64,
    /// Peak of the data-driven run, for comparison.
    pub baseline_peak_xi: f64,
    pub recomputations: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestSummary {
    pub record: BestRecord,
    pub sweep: Option<Vec<SweepPoint>>,
    pub written: Vec<PathBuf>,
}

#[derive(Serialize)]
struct SweepRow {
    date: String,
    t_star: f64,
    c_star: f64,
    peak: f64,
}

pub fn cmd_best(config: &RunConfig, source: &ParamsSource) -> CliResult<BestSummary> {
    let data = load_dataset(config)?;
    let fit = fitted(config, &data, source)?;
    let t_star = calendar::parse_day(&config.policy.t_star)?;
    let sol = best_policy(&fit.observed, &fit.params, t_star)?;
    let record = BestRecord {
        date: calendar::date_of(t_star as i64).to_string(),
        t_star,
        c_star: sol.c_star,
        peak_xi: sol.peak_xi,
        peak_time: sol.peak_time,
        baseline_peak_xi: fit.observed.peak_infected().1,
        recomputations: sol.recomputations.clone(),
    };
    let sweep = match &config.policy.sweep {
        Some((from, to)) => Some(best_sweep(
            &fit.observed,
            &fit.params,
            calendar::parse_day(from)?,
            calendar::parse_day(to)?,
        )?),
        None => None,
    };

    let mut out = Artifacts::new();
    out.json("best.json", &record)?;
    let mut bytes = Vec::new();
    sol.trajectory.write_csv(&mut bytes)?;
    out.add("best_trajectory.csv", bytes);
    if let Some(points) = &sweep {
        let rows: Vec<SweepRow> = points
            .iter()
            .map(|p| SweepRow {
                date: calendar::date_of(p.t_star as i64).to_string(),
                t_star: p.t_star,
                c_star: p.c_star,
                peak: p.peak,
            })
            .collect();
        out.csv("best_sweep.csv", &rows)?;
    }
    let written = out.commit(&config.out)?;
    Ok(BestSummary {
        record,
        sweep,
        written,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostRecord {
    pub start: String,
    pub r_max: f64,
    #[serde(flatten)]
    pub solution: CostSolution,
}

#[derive(Debug, Clone)]
pub struct CostRun {
    pub record: CostRecord,
    pub trajectory: Trajectory,
    pub grid: Option<(f64, Vec<BruteForcePoint>)>,
}

/// Solves for the constant rate from the configured start and simulates the
/// fitted model with it until the stockpile is spent.
pub fn cost_run(
    policy: &PolicyConfig,
    data: &ImputedDataset,
    fit: &Fitted,
    with_grid: bool,
) -> CliResult<CostRun> {
    let start = calendar::parse_day(&policy.cost_start)?;
    let initial = *fit.observed.state_at(start)?;
    let inst = CostInstance::new(&fit.params, &initial)?;
    let (c_default, lo, hi) = default_bracket(policy.r_max, data.len() as f64);
    let c0 = policy.c0.unwrap_or(c_default);
    let solution = cost_newton(&inst, policy.r_max, c0, (lo, hi))?;

    let supply = TestSupply::limited(Schedule::constant(solution.c), policy.r_max);
    let tail = integrate(
        &initial,
        &fit.params,
        &supply,
        horizon_end(&fit.observed) - start,
    )?;
    let trajectory = fit.observed.spliced(&tail);

    let grid = match policy.grid_points {
        Some(n) if with_grid => {
            let points = log_grid(0.2 * solution.c, 5.0 * solution.c, n);
            let p = inst.time_domain_params(fit.params.rho);
            Some(cost_brute_force(
                &p,
                &initial,
                policy.r_max,
                &points,
                policy.grid_horizon,
            )?)
        }
        _ => None,
    };
    Ok(CostRun {
        record: CostRecord {
            start: calendar::date_of(start as i64).to_string(),
            r_max: policy.r_max,
            solution,
        },
        trajectory,
        grid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostSummary {
    pub record: CostRecord,
    pub grid_best: Option<f64>,
    pub written: Vec<PathBuf>,
}

pub fn cmd_cost(config: &RunConfig, source: &ParamsSource) -> CliResult<CostSummary> {
    let data = load_dataset(config)?;
    let fit = fitted(config, &data, source)?;
    let run = cost_run(&config.policy, &data, &fit, true)?;

    let mut out = Artifacts::new();
    out.json("cost.json", &run.record)?;
    let mut bytes = Vec::new();
    run.trajectory.write_csv(&mut bytes)?;
    out.add("cost_trajectory.csv", bytes);
    if let Some((_, table)) = &run.grid {
        out.csv("cost_grid.csv", table)?;
    }
    let written = out.commit(&config.out)?;
    Ok(CostSummary {
        record: run.record,
        grid_best: run.grid.map(|g| g.0),
        written,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictRecord {
    #[serde(flatten)]
    pub fit: OutcomeFit,
    pub death_condition_number: f64,
    pub scenario: Scenario,
    pub icu_peak_reduction_pct: f64,
    pub deaths_final_reduction_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictSummary {
    pub record: PredictRecord,
    pub written: Vec<PathBuf>,
}

#[derive(Serialize)]
struct OutcomeRow {
    k: usize,
    date: String,
    observed: Option<f64>,
    actual: f64,
    scenario: f64,
}

/// Outcome regressions on the data-driven run and their predictions for a
/// scenario.
pub fn predict(
    config: &RunConfig,
    data: &ImputedDataset,
    fit: &Fitted,
    scenario: Scenario,
) -> CliResult<(PredictRecord, [Vec<f64>; 4])> {
    let (active, infected) = fit.observed.derived_outputs();
    let n = fit.params.population;
    let icu = fit_icu(&active, &data.icu, ICU_DELAY, n)?;
    let deaths = fit_deaths(&infected, &data.deaths, DEATH_DELAY, n)?;
    let traj = scenario_trajectory(config, data, fit, scenario)?;
    let icu_actual = predict_icu(&icu, &fit.observed);
    let icu_scenario = predict_icu(&icu, &traj);
    let deaths_actual = predict_deaths(&deaths.model, &fit.observed);
    let deaths_scenario = predict_deaths(&deaths.model, &traj);
    let record = PredictRecord {
        icu_peak_reduction_pct: peak_reduction(&icu_actual, &icu_scenario),
        deaths_final_reduction_pct: final_reduction(&deaths_actual, &deaths_scenario),
        death_condition_number: deaths.condition_number,
        fit: OutcomeFit::new(icu, deaths.model),
        scenario,
    };
    Ok((
        record,
        [icu_actual, icu_scenario, deaths_actual, deaths_scenario],
    ))
}

pub fn cmd_predict(
    config: &RunConfig,
    source: &ParamsSource,
    scenario: Scenario,
) -> CliResult<PredictSummary> {
    let data = load_dataset(config)?;
    let fit = fitted(config, &data, source)?;
    let (record, [icu_a, icu_s, deaths_a, deaths_s]) = predict(config, &data, &fit, scenario)?;
    let rows = |observed: &dyn Fn(usize) -> Option<f64>,
                actual: &[f64],
                scen: &[f64]|
     -> Vec<OutcomeRow> {
        (0..data.len())
            .map(|i| OutcomeRow {
                k: i + 1,
                date: data.dates[i].to_string(),
                observed: observed(i),
                actual: actual[i],
                scenario: scen[i],
            })
            .collect()
    };
    let mut out = Artifacts::new();
    out.json("outcome_fit.json", &record)?;
    out.csv("icu.csv", &rows(&|i| data.icu[i], &icu_a, &icu_s))?;
    out.csv(
        "deaths.csv",
        &rows(&|i| Some(data.deaths[i]), &deaths_a, &deaths_s),
    )?;
    let written = out.commit(&config.out)?;
    Ok(PredictSummary { record, written })
}
