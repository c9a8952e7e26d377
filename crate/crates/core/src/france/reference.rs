//! Model-generated stand-in for the French surveillance extract.
//!
//! The public series could not be bundled, so the reference extract is
//! produced by the model itself with the published exact-mode estimates and a
//! France-like testing profile, then degraded the way surveillance data is:
//! lognormal noise on daily increments, integer counts, removals recorded only
//! for hospitalized patients, deaths proportional to the delayed cumulative
//! infections, hospital counts from 2020-03-17, care-home
//! deaths from 2020-04-01, laboratory test counts from 2020-03-10 and
//! per-person screening counts from 2020-05-13. The screening volume is scaled
//! so that the imputed tests sum to the French total of 2,038,037, and the
//! initial infected multiplier is chosen so that the undiagnosed infected
//! population on 2020-03-01 is 363,169.

use chrono::Datelike;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{published_params, BEST_DAY, HORIZON, LOCKDOWN_DAY, POPULATION, STOCKPILE};
use crate::calendar;
use crate::data::{impute, RawDataset, RawRecord};
use crate::error::Result;
use crate::model::{integrate, Schedule, State, TestSupply, TestablePopulation, Trajectory};

/// File name of the bundled extract inside the crate's `data` directory.
pub const REFERENCE_FILE: &str = "france_reference.csv";

/// The bundled extract.
pub const REFERENCE_CSV: &str = include_str!("../../data/france_reference.csv");

/// Knobs of the generator. The defaults produce the bundled file.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSettings {
    pub seed: u64,
    /// Log-scale standard deviation of the noise on daily increments.
    pub increment_noise: f64,
    /// Log-scale standard deviation of the noise on ICU occupancy.
    pub icu_noise: f64,
    /// Share of diagnosed people followed in hospital.
    pub hospital_share: f64,
    /// Cumulative deaths on the last day. Deaths follow the cumulative
    /// infections of the generating model with the outcome delay.
    pub total_deaths: f64,
    /// Share of deaths after 2020-04-01 that occur in care homes.
    pub care_home_share: f64,
    /// ICU regression coefficients against `A/max(A)` used to draw occupancy.
    pub icu_coefficients: (f64, f64),
    /// Target undiagnosed infected on 2020-03-01.
    pub infected_on_best_day: f64,
    /// Target sum of imputed tests.
    pub total_tests: f64,
}

impl Default for ReferenceSettings {
    fn default() -> Self {
        Self {
            seed: 20_200_124,
            increment_noise: 0.08,
            icu_noise: 0.03,
            hospital_share: 114_736.0 / 165_700.0,
            total_deaths: 29_860.0,
            care_home_share: 0.34,
            icu_coefficients: (-0.54e4, 1.25e4),
            infected_on_best_day: 363_169.0,
            total_tests: STOCKPILE,
        }
    }
}

const FIRST_DIAGNOSED: f64 = 3.0;
const LAB_START: i64 = 46;
const LAB_END: i64 = 123;
const SCREENING_START: i64 = 110;
const ICU_DELAY_DAYS: usize = 17;
const DEATH_DELAY_DAYS: usize = 25;
const CARE_HOME_START: usize = 68;

fn weekday_factor(day: i64) -> f64 {
    const FACTORS: [f64; 7] = [1.05, 1.10, 1.08, 1.06, 1.00, 0.75, 0.55];
    FACTORS[calendar::date_of(day).weekday().num_days_from_monday() as usize]
}

/// Tests per day in the generating model.
fn testing_profile(day: i64, screening_level: f64) -> f64 {
    if day < LAB_START {
        4.0 * 50f64.powf(day as f64 / 45.0)
    } else if day < SCREENING_START {
        lab_tests(day)
    } else {
        screening_level * weekday_factor(day) * (1.0 + 0.004 * (day - SCREENING_START) as f64)
    }
}

fn lab_tests(day: i64) -> f64 {
    1300.0 * 12f64.powf((day - LAB_START) as f64 / 63.0) * weekday_factor(day)
}

fn truth(kappa: f64, screening_level: f64) -> Result<Trajectory> {
    let params = published_params(TestablePopulation::Exact)?;
    let initial = State::from_first_observation(POPULATION, FIRST_DIAGNOSED, 0.0, kappa);
    let u: Vec<f64> = (0..=HORIZON as i64)
        .map(|d| testing_profile(d, screening_level))
        .collect();
    let supply = TestSupply::unlimited(Schedule::daily(0.0, &u)?);
    integrate(&initial, &params, &supply, HORIZON as f64)
}

/// Initial infected multiplier that makes the generating model reach the
/// target infected count on 2020-03-01.
pub fn reference_initial_infected(settings: &ReferenceSettings) -> Result<f64> {
    let at_best_day =
        |kappa: f64| -> Result<f64> { Ok(truth(kappa, 0.0)?.state_at(BEST_DAY)?.x_i) };
    let (mut lo, mut hi) = (1.0, 100.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if at_best_day(mid)? < settings.infected_on_best_day {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

struct Noise {
    diagnosed: Vec<f64>,
    removed: Vec<f64>,
    icu: Vec<f64>,
}

impl Noise {
    fn draw(settings: &ReferenceSettings) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
        let mut series = |sigma: f64| -> Vec<f64> {
            (0..HORIZON)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    (sigma * z - 0.5 * sigma * sigma).exp()
                })
                .collect()
        };
        let diagnosed = series(settings.increment_noise);
        let removed = series(settings.increment_noise);
        let icu = series(settings.icu_noise);
        Self {
            diagnosed,
            removed,
            icu,
        }
    }
}

fn build(
    traj: &Trajectory,
    screening_level: f64,
    noise: &Noise,
    s: &ReferenceSettings,
) -> RawDataset {
    let n = HORIZON;
    let mut new_cases = vec![0.0; n];
    let mut confirmed = vec![FIRST_DIAGNOSED; n];
    let mut removed = vec![0.0; n];
    let mut removed_flow = vec![0.0; n];
    for t in 0..n {
        new_cases[t] = ((traj.y1[t + 1] - traj.y1[t]).max(0.0) * noise.diagnosed[t]).round();
        removed_flow[t] = ((traj.y2[t + 1] - traj.y2[t]).max(0.0) * noise.removed[t]).round();
        if t + 1 < n {
            confirmed[t + 1] = confirmed[t] + new_cases[t];
            removed[t + 1] = (removed[t] + removed_flow[t]).min(confirmed[t + 1]);
        }
    }
    let (active, _) = traj.derived_outputs();
    let active_peak = active[..n].iter().copied().fold(0.0, f64::max);
    let (b1, b2) = s.icu_coefficients;

    let (_, infected) = traj.derived_outputs();
    let lagged = |t: usize| infected[t.saturating_sub(DEATH_DELAY_DAYS)];
    let deaths: Vec<f64> = (0..n)
        .map(|t| (s.total_deaths * lagged(t) / lagged(n - 1)).floor())
        .collect();
    // Every death is a tracked removal, so tracked removals grow at least as
    // fast as deaths.
    let mut tracked = vec![0.0; n];
    for t in 0..n {
        let floor = if t == 0 {
            deaths[0]
        } else {
            tracked[t - 1] + deaths[t] - deaths[t - 1]
        };
        tracked[t] = (s.hospital_share * removed[t]).round().max(floor);
    }
    let deaths_before_care_homes = deaths[CARE_HOME_START - 1];

    let records = (0..n)
        .map(|t| {
            let day = t as i64;
            let mut r = RawRecord {
                date: Some(calendar::date_of(day)),
                confirmed: Some(confirmed[t]),
                rec_hosp: Some(tracked[t] - deaths[t]),
                ..Default::default()
            };
            if t >= CARE_HOME_START {
                let care = (s.care_home_share * (deaths[t] - deaths_before_care_homes)).floor();
                r.dead_ehpad = Some(care);
                r.dead_hosp = Some(deaths[t] - care);
            } else {
                r.dead_hosp = Some(deaths[t]);
            }
            if day >= LOCKDOWN_DAY as i64 {
                r.hosp = Some((s.hospital_share * (confirmed[t] - removed[t])).round());
                let a = active[t - ICU_DELAY_DAYS] / active_peak;
                let icu = (b1 * a + b2 * a.sqrt()) * noise.icu[t];
                r.icu = Some(icu.max(0.0).round());
            }
            if (LAB_START..=LAB_END).contains(&day) {
                r.tests = Some(lab_tests(day).round());
                r.pos_tests = Some(new_cases[t]);
            }
            if day >= SCREENING_START {
                let tests = testing_profile(day, screening_level).round();
                r.tests_sidep = Some(tests.max(new_cases[t]));
                r.pos_tests_sidep = Some(new_cases[t]);
            }
            r
        })
        .collect();
    RawDataset { records }
}

/// Regenerates the reference extract.
pub fn reference_extract(settings: &ReferenceSettings) -> Result<RawDataset> {
    let kappa = reference_initial_infected(settings)?;
    let noise = Noise::draw(settings);
    let mut level = 37_000.0;
    let mut raw = RawDataset::default();
    for _ in 0..6 {
        let traj = truth(kappa, level)?;
        raw = build(&traj, level, &noise, settings);
        let imputed = impute(&raw)?.dataset;
        let screening: f64 = imputed.u[SCREENING_START as usize..].iter().sum();
        let others = imputed.total_tests() - screening;
        level *= (settings.total_tests - others) / screening;
    }
    let imputed = impute(&raw)?.dataset;
    let shortfall = settings.total_tests - imputed.total_tests();
    let last = raw.records.last_mut().expect("nonempty extract");
    let tests = last.tests_sidep.expect("screening data on the last day") + shortfall;
    last.tests_sidep = Some(tests);
    RawDataset::new(raw.records)
}
