//! Run configuration, read from a JSON file and overridden by flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sidur_core::estimation::{EstimationConfig, FitSetup, PsoConfig};
use sidur_core::france;
use sidur_core::model::TestablePopulation;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Raw or imputed CSV. The bundled extract is used when absent.
    pub data: Option<PathBuf>,
    pub out: PathBuf,
    pub model: ModelDefaults,
    pub estimation: EstimationSection,
    pub policy: PolicyConfig,
    pub scenario: Scenario,
    pub assumption5: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: None,
            out: PathBuf::from("out"),
            model: ModelDefaults::default(),
            estimation: EstimationSection::default(),
            policy: PolicyConfig::default(),
            scenario: Scenario::Best,
            assumption5: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelDefaults {
    pub population: f64,
    /// Initial infected multiplier. Estimated when absent.
    pub kappa: Option<f64>,
}

impl Default for ModelDefaults {
    fn default() -> Self {
        Self {
            population: france::POPULATION,
            kappa: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimationSection {
    pub swarm_size: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub log_specificity: bool,
    pub lower: Option<Vec<f64>>,
    pub upper: Option<Vec<f64>>,
}

impl Default for EstimationSection {
    fn default() -> Self {
        Self {
            swarm_size: 50,
            max_iterations: 500,
            seed: 0,
            log_specificity: true,
            lower: None,
            upper: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    /// BEST start date (ISO-8601).
    pub t_star: String,
    /// Inclusive date range of the BEST timing sweep.
    pub sweep: Option<(String, String)>,
    pub r_max: f64,
    /// Newton start; `r_max` over the data horizon when absent.
    pub c0: Option<f64>,
    /// COST start date (ISO-8601).
    pub cost_start: String,
    /// Size of the brute-force grid, none when absent.
    pub grid_points: Option<usize>,
    /// Simulated days per brute-force grid point.
    pub grid_horizon: f64,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            t_star: "2020-03-01".into(),
            sweep: None,
            r_max: france::STOCKPILE,
            c0: None,
            cost_start: "2020-01-24".into(),
            grid_points: None,
            grid_horizon: 400.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Actual,
    Best,
    Cost,
    NoLockdown,
    NoUnlock,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::Actual => "actual",
            Self::Best => "best",
            Self::Cost => "cost",
            Self::NoLockdown => "no-lockdown",
            Self::NoUnlock => "no-unlock",
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn testable(&self) -> TestablePopulation {
        if self.assumption5 {
            TestablePopulation::Approximate
        } else {
            TestablePopulation::Exact
        }
    }

    pub fn fit_setup(&self) -> FitSetup {
        FitSetup {
            population: self.model.population,
            testable: self.testable(),
            kappa: self.model.kappa.unwrap_or(FitSetup::default().kappa),
            ..FitSetup::default()
        }
    }

    pub fn estimation_config(&self) -> CliResult<EstimationConfig> {
        let setup = self.fit_setup();
        let fit_kappa = self.model.kappa.is_none();
        let (lower, upper) = setup.default_box(fit_kappa);
        let e = &self.estimation;
        let lower = e.lower.clone().unwrap_or(lower);
        let upper = e.upper.clone().unwrap_or(upper);
        let pso = PsoConfig {
            swarm_size: e.swarm_size,
            max_iterations: e.max_iterations,
            seed: e.seed,
            ..PsoConfig::with_box(lower, upper)
        };
        pso.validate()?;
        Ok(EstimationConfig {
            pso,
            setup,
            fit_kappa,
            log_specificity: e.log_specificity,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"estimation": {"seed": 9}}"#).unwrap();
        assert_eq!(c.estimation.seed, 9);
        assert_eq!(c.estimation.swarm_size, 50);
        assert_eq!(c.policy.r_max, france::STOCKPILE);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sead": 1}"#).is_err());
    }

    #[test]
    fn fixed_multiplier_drops_a_dimension() {
        let mut c = RunConfig::default();
        assert_eq!(c.estimation_config().unwrap().pso.dimension(), 7);
        c.model.kappa = Some(12.0);
        let e = c.estimation_config().unwrap();
        assert_eq!(e.pso.dimension(), 6);
        assert!(!e.fit_kappa);
        assert_eq!(e.setup.kappa, 12.0);
    }

    #[test]
    fn scenario_names_match_serde() {
        for s in [
            Scenario::Actual,
            Scenario::Best,
            Scenario::Cost,
            Scenario::NoLockdown,
            Scenario::NoUnlock,
        ] {
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
    }
}
