use proptest::prelude::*;
use sidur_core::model::{
    basic_reproduction, check_trajectory, effective_reproduction, integrate, rhs, Integrator,
    ModelParams, Schedule, State, TestSupply, TestablePopulation,
};
use sidur_core::SidurError;

const N: f64 = 1e7;

fn params(
    beta: f64,
    theta: f64,
    gamma: f64,
    rho: f64,
    testable: TestablePopulation,
) -> ModelParams {
    ModelParams {
        beta: Schedule::constant(beta),
        theta: Schedule::constant(theta),
        gamma,
        rho,
        population: N,
        testable,
    }
}

fn seeded(x_i: f64, x_d: f64) -> State {
    State {
        t: 0.0,
        x_s: N - x_i - x_d,
        x_i,
        x_d,
        x_u: 0.0,
        x_r: 0.0,
    }
}

prop_compose! {
    fn instance()(
        beta in 0.1..0.8f64,
        theta in 0.05..0.999f64,
        gamma in 0.05..0.5f64,
        rho_frac in 0.1..1.0f64,
        x_i in 10.0..1e5f64,
        x_d in 0.0..1e4f64,
        u in 0.0..5e4f64,
        exact in any::<bool>(),
    ) -> (ModelParams, State, f64) {
        let mode = if exact { TestablePopulation::Exact } else { TestablePopulation::Approximate };
        (params(beta, theta, gamma, rho_frac * gamma, mode), seeded(x_i, x_d), u)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_satisfy_structural_invariants((p, s, u) in instance()) {
        let traj = integrate(&s, &p, &TestSupply::unlimited(Schedule::constant(u)), 80.0).unwrap();
        let v = check_trajectory(&traj, &p);
        prop_assert!(v.is_empty(), "{:?}", &v[..v.len().min(3)]);
    }

    #[test]
    fn derivatives_sum_to_zero((p, s, u) in instance()) {
        let d = rhs(&s, &p, u).unwrap();
        let scale = d.x_s.abs() + d.x_i.abs() + d.x_d.abs() + d.x_u.abs() + d.x_r.abs();
        prop_assert!(d.sum().abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn piecewise_parameters_keep_invariants(
        (p, s, u) in instance(),
        beta2 in 0.01..0.8f64,
        theta2 in 0.05..0.999f64,
        switch in 5u32..40,
    ) {
        let mut p = p;
        p.beta = Schedule::new(vec![(0.0, p.beta_at(0.0)), (switch as f64, beta2)]).unwrap();
        p.theta = Schedule::new(vec![(0.0, p.theta_at(0.0)), (switch as f64 + 3.0, theta2)]).unwrap();
        let daily: Vec<f64> = (0..60).map(|d| u * (1.0 + 0.3 * ((d % 7) as f64 / 7.0))).collect();
        let traj = integrate(&s, &p, &TestSupply::unlimited(Schedule::daily(0.0, &daily).unwrap()), 60.0).unwrap();
        let v = check_trajectory(&traj, &p);
        prop_assert!(v.is_empty(), "{:?}", &v[..v.len().min(3)]);
    }

    #[test]
    fn stockpile_is_never_overdrawn((p, s, u) in instance(), stock in 1e3..1e6f64) {
        let traj = integrate(&s, &p, &TestSupply::limited(Schedule::constant(u), stock), 60.0).unwrap();
        prop_assert!(*traj.consumed.last().unwrap() <= stock * (1.0 + 1e-12));
        prop_assert!(traj.consumed.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn i_cum_is_nondecreasing((p, s, u) in instance()) {
        let traj = integrate(&s, &p, &TestSupply::unlimited(Schedule::constant(u)), 40.0).unwrap();
        let (a, i_cum) = traj.derived_outputs();
        prop_assert!(a.iter().all(|&v| v >= 0.0));
        prop_assert!(i_cum.windows(2).all(|w| w[1] >= w[0] - 1e-9 * N));
    }
}

#[test]
fn disease_free_state_is_an_equilibrium() {
    let p = params(0.4, 0.9, 0.1, 0.05, TestablePopulation::Exact);
    let s = seeded(0.0, 0.0);
    let traj = integrate(
        &s,
        &p,
        &TestSupply::unlimited(Schedule::constant(1000.0)),
        30.0,
    )
    .unwrap();
    assert!(traj
        .states
        .iter()
        .all(|x| x.x_s == N && x.x_i == 0.0 && x.x_d == 0.0));
    let (a, i_cum) = traj.derived_outputs();
    assert!(a.iter().all(|&v| v == 0.0));
    assert!(i_cum.iter().all(|&v| v == 0.0));
}

#[test]
fn hand_evaluated_derivatives() {
    let p = ModelParams {
        population: 1000.0,
        ..params(0.4, 0.5, 0.1, 0.05, TestablePopulation::Exact)
    };
    let s = State {
        t: 0.0,
        x_s: 900.0,
        x_i: 100.0,
        x_d: 0.0,
        x_u: 0.0,
        x_r: 0.0,
    };
    let d = rhs(&s, &p, 0.0).unwrap();
    assert!((d.x_s + 36.0).abs() < 1e-12);
    assert!((d.x_i - 26.0).abs() < 1e-12);
    assert!((d.x_u - 10.0).abs() < 1e-12);
}

#[test]
fn reproduction_numbers() {
    let p = params(0.3708, 0.9948, 0.1589, 0.0499, TestablePopulation::Exact);
    assert!((basic_reproduction(&p, 0.0).unwrap() - 2.334).abs() < 5e-4);
    assert!(basic_reproduction(&p, 1e12).unwrap() < 1e-3);
    let s = seeded(0.0, 0.0);
    let r = effective_reproduction(&s, &p, 0.0).unwrap();
    assert!((r - 0.3708 / 0.1589).abs() < 1e-12);
    let one = params(0.3, 1.0, 0.1, 0.05, TestablePopulation::Exact);
    assert_eq!(basic_reproduction(&one, 10.0), Err(SidurError::ThetaOne));
}

fn x_i_at(step: f64, p: &ModelParams, s: &State, u: f64, day: usize) -> Vec<f64> {
    let traj = Integrator::new(step)
        .unwrap()
        .run(
            s,
            p,
            &TestSupply::unlimited(Schedule::constant(u)),
            day as f64,
        )
        .unwrap();
    traj.states.iter().map(|x| x.x_i).collect()
}

#[test]
fn halving_the_step_is_below_the_stated_bound() {
    let p = params(0.3708, 0.9948, 0.1589, 0.0499, TestablePopulation::Exact);
    let s = seeded(500.0, 3.0);
    let coarse = x_i_at(0.05, &p, &s, 2000.0, 120);
    let fine = x_i_at(0.025, &p, &s, 2000.0, 120);
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a - b).abs() < 1e-6 * N);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn global_error_is_fourth_order(
        beta in 0.3..0.9f64,
        gamma in 0.05..0.2f64,
        theta in 0.5..0.99f64,
        u in 0.0..2e4f64,
    ) {
        let p = params(beta, theta, gamma, 0.5 * gamma, TestablePopulation::Exact);
        let s = seeded(1e4, 0.0);
        let day = 30;
        let a = x_i_at(0.2, &p, &s, u, day)[day];
        let b = x_i_at(0.1, &p, &s, u, day)[day];
        let c = x_i_at(0.05, &p, &s, u, day)[day];
        let ratio = (a - b) / (b - c);
        prop_assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }
}
