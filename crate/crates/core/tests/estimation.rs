use proptest::prelude::*;
use sidur_core::data::{impute, read_raw, ImputedDataset};
use sidur_core::estimation::{
    estimate_rho, fit_cost, fit_model, run_pso, EstimationConfig, FitSetup, ParameterVector,
    PsoConfig,
};
use sidur_core::france::{self, REFERENCE_CSV};
use sidur_core::model::TestablePopulation;

fn extract() -> ImputedDataset {
    impute(&read_raw(REFERENCE_CSV.as_bytes()).unwrap())
        .unwrap()
        .dataset
}

fn truth() -> ParameterVector {
    ParameterVector {
        kappa: Some(12.0),
        ..france::exact_estimates()
    }
}

fn synthetic(p: &ParameterVector, setup: &FitSetup) -> ImputedDataset {
    let base = extract();
    let traj = setup.simulate(p, &base, france::RHO).unwrap();
    base.with_model_outputs(&traj).unwrap()
}

#[test]
fn cost_vanishes_on_own_simulation_and_grows_off_it() {
    let setup = FitSetup::default();
    let data = synthetic(&truth(), &setup);
    assert_eq!(fit_cost(&truth(), &data, france::RHO, &setup), 0.0);
    let probe = ParameterVector {
        beta1: truth().beta1 * 1.1,
        ..truth()
    };
    assert!(fit_cost(&probe, &data, france::RHO, &setup) > 0.0);
}

#[test]
fn invalid_parameters_cost_infinity() {
    let setup = FitSetup::default();
    let data = extract();
    let slow = ParameterVector {
        gamma: 0.01,
        ..truth()
    };
    assert_eq!(fit_cost(&slow, &data, 0.0499, &setup), f64::INFINITY);
    let crowded = ParameterVector {
        kappa: Some(1e9),
        ..truth()
    };
    assert_eq!(fit_cost(&crowded, &data, 0.0499, &setup), f64::INFINITY);
}

#[test]
fn published_estimates_explain_the_extract() {
    let data = extract();
    for mode in [TestablePopulation::Exact, TestablePopulation::Approximate] {
        let (p, setup) = france::published(mode);
        let cost = fit_cost(&p, &data, france::RHO, &setup);
        assert!(cost.is_finite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_matches_normal_equation_on_exact_data(
        rho in 0.01..0.5f64,
        start in 1.0..1e4f64,
        growth in prop::collection::vec(0.0..1e3f64, 10..60),
    ) {
        let mut y1 = vec![start];
        let mut y2 = vec![0.0];
        for (k, g) in growth.iter().enumerate() {
            y2.push(y2[k] + rho * (y1[k] - y2[k]));
            y1.push(y1[k] + g);
        }
        let est = estimate_rho(&y1, &y2).unwrap();
        prop_assert!((est - rho).abs() < 1e-12 * rho.max(1.0));
    }
}

#[test]
fn swarm_best_cost_never_increases() {
    let setup = FitSetup::default();
    let data = synthetic(&truth(), &setup);
    let (lower, upper) = setup.default_box(true);
    let config = EstimationConfig {
        pso: PsoConfig {
            swarm_size: 12,
            max_iterations: 15,
            seed: 3,
            ..PsoConfig::with_box(lower, upper)
        },
        setup,
        fit_kappa: true,
        log_specificity: true,
    };
    let fit = fit_model(&data, &config).unwrap();
    assert_eq!(fit.trace.len(), 16);
    assert!(fit.trace.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(*fit.trace.last().unwrap(), fit.cost);
    let again = fit_model(&data, &config).unwrap();
    assert_eq!(again, fit);
}

#[test]
fn swarm_recovers_a_shifted_quadratic() {
    let target = [0.3, -1.2, 2.5];
    let objective =
        |x: &[f64]| -> f64 { x.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum() };
    let mut config = PsoConfig::with_box(vec![-5.0; 3], vec![5.0; 3]);
    config.swarm_size = 30;
    config.max_iterations = 200;
    config.seed = 11;
    let res = run_pso(&config, &objective).unwrap();
    for (x, t) in res.position.iter().zip(&target) {
        assert!((x - t).abs() < 1e-3);
    }
}

#[test]
fn fixed_multiplier_fit_reports_it() {
    let setup = FitSetup {
        kappa: 12.0,
        ..FitSetup::default()
    };
    let data = synthetic(&truth(), &setup);
    let (lower, upper) = setup.default_box(false);
    let config = EstimationConfig {
        pso: PsoConfig {
            swarm_size: 8,
            max_iterations: 4,
            ..PsoConfig::with_box(lower, upper)
        },
        setup,
        fit_kappa: false,
        log_specificity: true,
    };
    let fit = fit_model(&data, &config).unwrap();
    assert_eq!(fit.params.kappa, Some(12.0));
}

#[test]
fn box_dimension_mismatch_is_rejected() {
    let setup = FitSetup::default();
    let (lower, upper) = setup.default_box(false);
    let config = EstimationConfig {
        pso: PsoConfig::with_box(lower, upper),
        setup,
        fit_kappa: true,
        log_specificity: true,
    };
    assert!(fit_model(&extract(), &config).is_err());
}
