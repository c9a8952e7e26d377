//! Calendar, population and published parameter sets for the France
//! spring-2020 wave, plus the bundled reference extract.

mod reference;

pub use reference::{
    reference_extract, reference_initial_infected, ReferenceSettings, REFERENCE_CSV, REFERENCE_FILE,
};

use crate::estimation::{FitSetup, ParameterVector};
use crate::model::{ModelParams, State, TestablePopulation};
use crate::Result;

/// Metropolitan-France-scale population.
pub const POPULATION: f64 = 66_990_000.0;
/// 2020-03-17, start of the lockdown.
pub const LOCKDOWN_DAY: f64 = 53.0;
/// 2020-05-11, end of the lockdown.
pub const UNLOCK_DAY: f64 = 108.0;
/// 2020-03-01, the BEST start date studied for France.
pub const BEST_DAY: f64 = 37.0;
/// Tests performed from 2020-01-24 to 2020-07-01.
pub const STOCKPILE: f64 = 2_038_037.0;
/// Data horizon in days.
pub const HORIZON: usize = 160;
/// Removal rate estimated from the French data.
pub const RHO: f64 = 0.0499;

/// Estimates obtained with the exact testable population.
pub fn exact_estimates() -> ParameterVector {
    ParameterVector {
        beta1: 0.3708,
        beta2: 0.0707,
        beta3: 0.3717,
        theta1: 0.9948,
        theta2: 0.9967,
        gamma: 0.1589,
        kappa: None,
    }
}

/// Estimates obtained with the approximation `x_T = (1−θ)·N`.
pub fn approximate_estimates() -> ParameterVector {
    ParameterVector {
        beta1: 0.2643,
        beta2: 0.0006,
        beta3: 0.0642,
        theta1: 0.9415,
        theta2: 0.7993,
        gamma: 0.0542,
        kappa: None,
    }
}

/// Published estimates and fit setup for the chosen testable-population mode.
pub fn published(testable: TestablePopulation) -> (ParameterVector, FitSetup) {
    let setup = FitSetup {
        testable,
        ..FitSetup::default()
    };
    let p = match testable {
        TestablePopulation::Exact => exact_estimates(),
        TestablePopulation::Approximate => approximate_estimates(),
    };
    (p, setup)
}

/// Model parameters of a published set.
pub fn published_params(testable: TestablePopulation) -> Result<ModelParams> {
    let (p, setup) = published(testable);
    setup.model_params(&p, RHO)
}

/// Initial state with the given first-day observations and multiplier.
pub fn initial_state(y1: f64, y2: f64, kappa: f64) -> State {
    State::from_first_observation(POPULATION, y1, y2, kappa)
}
