//! Reconstruction of the model's inputs and outputs from surveillance data.
//!
//! * Removed cases: recoveries are only recorded for hospitalized patients.
//!   Non-hospitalized diagnosed people are assumed to leave the active pool
//!   at the same relative rate, which scales the recorded removals by the
//!   ratio of all diagnosed to hospital-tracked diagnosed.
//! * Tests: before 2020-03-10 nothing is recorded and every test is assumed
//!   positive; until 2020-05-12 laboratory counts give `ū`; from 2020-05-13
//!   the per-person screening system gives both `ū` and `ȳ3`.

use chrono::NaiveDate;

use super::imputed::ImputedDataset;
use super::raw::{RawDataset, RawRecord};
use crate::calendar;
use crate::error::{Result, SidurError};

/// Length of the data horizon, 2020-01-24 to 2020-07-01.
pub const HORIZON_DAYS: usize = 160;

/// Last day of the interval where tests are not recorded.
pub fn untracked_end() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 3, 9).expect("valid date")
}

/// First day of per-person screening data.
pub fn screening_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 5, 13).expect("valid date")
}

/// Imputed dataset with the diagnostics collected on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Imputation {
    pub dataset: ImputedDataset,
    pub warnings: Vec<String>,
}

/// Linear interpolation of interior gaps; leading gaps become 0 and trailing
/// gaps hold the last value, which keeps cumulative series nondecreasing.
pub fn fill_cumulative(series: &[Option<f64>]) -> Vec<f64> {
    let mut out = interpolate_interior(series);
    let mut last = 0.0;
    for v in out.iter_mut() {
        match v {
            Some(x) => last = *x,
            None => *v = Some(last),
        }
    }
    out.into_iter().map(|v| v.unwrap_or(0.0)).collect()
}

/// Forward fill after the first observation; leading gaps stay absent.
pub fn fill_active(series: &[Option<f64>]) -> Vec<Option<f64>> {
    let mut last = None;
    series
        .iter()
        .map(|v| {
            if v.is_some() {
                last = *v;
            }
            last
        })
        .collect()
}

fn interpolate_interior(series: &[Option<f64>]) -> Vec<Option<f64>> {
    let mut out = series.to_vec();
    let known: Vec<usize> = (0..series.len()).filter(|&i| series[i].is_some()).collect();
    for w in known.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (va, vb) = (series[a].unwrap(), series[b].unwrap());
        for (i, slot) in out.iter_mut().enumerate().take(b).skip(a + 1) {
            let f = (i - a) as f64 / (b - a) as f64;
            *slot = Some(va + f * (vb - va));
        }
    }
    out
}

fn window(raw: &RawDataset) -> Result<&[RawRecord]> {
    let first = raw
        .first_date()
        .ok_or_else(|| SidurError::Schema("dataset has no records".into()))?;
    if first != calendar::epoch() {
        return Err(SidurError::Schema(format!(
            "data must start on {}, found {first}",
            calendar::epoch()
        )));
    }
    Ok(&raw.records[..raw.len().min(HORIZON_DAYS)])
}

fn confirmed(records: &[RawRecord]) -> Result<Vec<f64>> {
    if records.iter().all(|r| r.confirmed.is_none()) {
        return Err(SidurError::MissingSeries("confirmed".into()));
    }
    let c: Vec<_> = records.iter().map(|r| r.confirmed).collect();
    Ok(fill_cumulative(&c))
}

fn total_deaths(records: &[RawRecord]) -> Vec<f64> {
    let hosp = fill_cumulative(&records.iter().map(|r| r.dead_hosp).collect::<Vec<_>>());
    let ehpad = fill_cumulative(&records.iter().map(|r| r.dead_ehpad).collect::<Vec<_>>());
    records
        .iter()
        .enumerate()
        .map(|(i, r)| r.deaths.unwrap_or(hosp[i] + ehpad[i]))
        .collect()
}

/// Removed among the diagnosed, `ȳ2`.
///
/// With `ȳ2' = rec_hosp + deaths` and `ȳ1' = ȳ2' + H̄`, the result is
/// `ȳ2'·ȳ1/ȳ1'` on days where the hospitalized count `H̄` is known and `ȳ2'`
/// before that. Returns the series and any warnings.
pub fn impute_removed(raw: &RawDataset) -> Result<(Vec<f64>, Vec<String>)> {
    let records = window(raw)?;
    let y1 = confirmed(records)?;
    let recovered = fill_cumulative(&records.iter().map(|r| r.rec_hosp).collect::<Vec<_>>());
    let deaths = total_deaths(records);
    let hosp = fill_active(&records.iter().map(|r| r.hosp).collect::<Vec<_>>());

    let mut warnings = Vec::new();
    let mut y2 = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        if let Some(v) = r.removed {
            y2.push(v);
            continue;
        }
        let tracked_removed = recovered[i] + deaths[i];
        let value = match hosp[i] {
            Some(h) => {
                let tracked = tracked_removed + h;
                if tracked > 0.0 {
                    tracked_removed * y1[i] / tracked
                } else {
                    if y1[i] > 0.0 {
                        warnings.push(format!(
                            "{}: no hospital-tracked cases while {} are diagnosed; removed taken as recorded",
                            r.date(),
                            y1[i]
                        ));
                    }
                    tracked_removed
                }
            }
            None => tracked_removed,
        };
        if value > y1[i] {
            warnings.push(format!(
                "{}: removed {value} exceeds diagnosed {}; clamped",
                r.date(),
                y1[i]
            ));
        }
        y2.push(value.min(y1[i]));
    }
    Ok((y2, warnings))
}

/// Tests `ū` and new diagnoses `ȳ3` over the window, given `ȳ1` on every
/// day of `raw` (the day after the window is used when available).
pub fn impute_tests(raw: &RawDataset, y1: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let records = window(raw)?;
    let n = records.len();
    if y1.len() < n {
        return Err(SidurError::InvalidInput(
            "cumulative diagnosed series shorter than the window".into(),
        ));
    }
    let lab_start = untracked_end().succ_opt().expect("valid date");
    let screening = screening_start();

    let lab = interpolate_interior(&records.iter().map(|r| r.tests).collect::<Vec<_>>());
    let screen_tests: Vec<_> = records.iter().map(|r| r.tests_sidep.or(r.tests)).collect();
    let screen_pos: Vec<_> = records
        .iter()
        .map(|r| r.pos_tests_sidep.or(r.pos_tests))
        .collect();
    let screen_tests = interpolate_interior(&screen_tests);
    let screen_pos = interpolate_interior(&screen_pos);

    let mut u = Vec::with_capacity(n);
    let mut y3 = Vec::with_capacity(n);
    for (i, r) in records.iter().enumerate() {
        if let (Some(uv), Some(yv)) = (r.u, r.y3) {
            u.push(uv);
            y3.push(yv);
            continue;
        }
        let date = r.date();
        let increment = || -> Result<f64> {
            let next = y1.get(i + 1).ok_or_else(|| {
                SidurError::MissingSeries(format!("confirmed count for the day after {date}"))
            })?;
            Ok((next - y1[i]).max(0.0))
        };
        let (uk, yk) = if date < lab_start {
            let d = increment()?;
            (d, d)
        } else if date < screening {
            let tests = lab[i]
                .ok_or_else(|| SidurError::MissingSeries(format!("laboratory tests on {date}")))?;
            (tests, increment()?)
        } else {
            let tests = screen_tests[i]
                .ok_or_else(|| SidurError::MissingSeries(format!("screening tests on {date}")))?;
            let pos = screen_pos[i].ok_or_else(|| {
                SidurError::MissingSeries(format!("screening positives on {date}"))
            })?;
            (tests, pos)
        };
        y3.push(yk);
        u.push(uk.max(yk));
    }
    Ok((u, y3))
}

/// Full pipeline over the first [`HORIZON_DAYS`] records.
pub fn impute(raw: &RawDataset) -> Result<Imputation> {
    let records = window(raw)?;
    let all_confirmed = confirmed(&raw.records)?;
    let (y2, mut warnings) = impute_removed(raw)?;
    let (u, y3) = impute_tests(raw, &all_confirmed)?;
    let y1 = all_confirmed[..records.len()].to_vec();
    let icu = fill_active(&records.iter().map(|r| r.icu).collect::<Vec<_>>());
    let deaths = total_deaths(records);
    if records.len() < HORIZON_DAYS {
        warnings.push(format!(
            "only {} of {HORIZON_DAYS} days available",
            records.len()
        ));
    }
    Ok(Imputation {
        dataset: ImputedDataset {
            dates: records.iter().map(|r| r.date()).collect(),
            u,
            y1,
            y2,
            y3,
            icu,
            deaths,
        },
        warnings,
    })
}
