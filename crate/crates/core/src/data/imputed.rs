use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;

use super::raw::fmt_number;
use crate::error::{Result, SidurError};
use crate::model::{Schedule, Trajectory};

/// Aligned daily series on `k = 1..len`, day `k` being `t = k − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImputedDataset {
    pub dates: Vec<NaiveDate>,
    /// Tests performed per day.
    pub u: Vec<f64>,
    /// Cumulative diagnosed.
    pub y1: Vec<f64>,
    /// Cumulative removed among the diagnosed.
    pub y2: Vec<f64>,
    /// Newly diagnosed per day.
    pub y3: Vec<f64>,
    /// Active ICU patients, not available before hospital reporting starts.
    pub icu: Vec<Option<f64>>,
    /// Cumulative deaths, hospital plus care homes.
    pub deaths: Vec<f64>,
}

/// Step signals reconstructed from the daily series.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSignals {
    pub y1: Schedule,
    pub y2: Schedule,
    pub y3: Schedule,
}

impl ImputedDataset {
    pub fn len(&self) -> usize {
        self.y1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y1.is_empty()
    }

    /// Total tests over the horizon.
    pub fn total_tests(&self) -> f64 {
        self.u.iter().sum()
    }

    /// Active diagnosed `ȳ1 − ȳ2`.
    pub fn active_diagnosed(&self) -> Vec<f64> {
        self.y1.iter().zip(&self.y2).map(|(a, b)| a - b).collect()
    }

    /// Same days and tests with `y1`, `y2`, `y3` replaced by a model run's
    /// daily samples. The run must cover every day.
    pub fn with_model_outputs(&self, traj: &Trajectory) -> Result<Self> {
        if traj.len() < self.len() {
            return Err(SidurError::InvalidInput(format!(
                "trajectory has {} samples for {} days",
                traj.len(),
                self.len()
            )));
        }
        let n = self.len();
        Ok(Self {
            y1: traj.y1[..n].to_vec(),
            y2: traj.y2[..n].to_vec(),
            y3: traj.y3[..n].to_vec(),
            ..self.clone()
        })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| SidurError::Io {
            path: "<imputed>".into(),
            message: e.to_string(),
        };
        w.write_record(["k", "date", "u", "y1", "y2", "y3", "icu", "deaths"])
            .map_err(io)?;
        for i in 0..self.len() {
            w.write_record([
                (i + 1).to_string(),
                self.dates[i].to_string(),
                fmt_number(self.u[i]),
                fmt_number(self.y1[i]),
                fmt_number(self.y2[i]),
                fmt_number(self.y3[i]),
                self.icu[i].map(fmt_number).unwrap_or_default(),
                fmt_number(self.deaths[i]),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| SidurError::Io {
            path: "<imputed>".into(),
            message: e.to_string(),
        })
    }
}

/// Zero-order-hold signals over `[0, len)`: `u(t) = ū(k)` for `k − 1 ≤ t < k`.
pub fn build_signals(imputed: &ImputedDataset) -> Result<(Schedule, OutputSignals)> {
    let u = Schedule::daily(0.0, &imputed.u)?;
    let out = OutputSignals {
        y1: Schedule::daily(0.0, &imputed.y1)?,
        y2: Schedule::daily(0.0, &imputed.y2)?,
        y3: Schedule::daily(0.0, &imputed.y3)?,
    };
    Ok((u, out))
}

/// Loads an imputed file written by [`ImputedDataset::write_csv`].
pub fn load_imputed(path: &Path) -> Result<ImputedDataset> {
    let raw = super::raw::load_raw(path)?;
    Ok(super::impute::impute(&raw)?.dataset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar;

    fn dataset(n: usize) -> ImputedDataset {
        ImputedDataset {
            dates: (0..n as i64).map(calendar::date_of).collect(),
            u: (0..n).map(|k| 10.0 + k as f64).collect(),
            y1: (0..n).map(|k| 3.0 + k as f64).collect(),
            y2: vec![0.0; n],
            y3: vec![1.0; n],
            icu: vec![None; n],
            deaths: vec![0.0; n],
        }
    }

    #[test]
    fn single_day_gives_constant_signal() {
        let (u, _) = build_signals(&dataset(1)).unwrap();
        assert_eq!(u.value_at(0.0), 10.0);
        assert_eq!(u.value_at(500.0), 10.0);
    }

    #[test]
    fn mid_day_evaluation_returns_that_day() {
        let (u, out) = build_signals(&dataset(5)).unwrap();
        assert_eq!(u.value_at(2.5), 12.0);
        assert_eq!(out.y1.value_at(3.999), 6.0);
    }

    #[test]
    fn signal_integral_equals_sum() {
        let ds = dataset(160);
        let (u, _) = build_signals(&ds).unwrap();
        let h = 0.05;
        let steps = (160.0 / h) as usize;
        let integral: f64 = (0..steps)
            .map(|i| u.value_at((i as f64 + 0.5) * h) * h)
            .sum();
        let sum = ds.total_tests();
        assert!(((integral - sum) / sum).abs() < 1e-9);
    }
}
