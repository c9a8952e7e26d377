use serde::{Deserialize, Serialize};

use crate::error::{Result, SidurError};

/// Piecewise-constant signal on right-open intervals.
///
/// Each breakpoint `(start, value)` holds from `start` until the next
/// breakpoint; the last one extends to infinity. Times before the first
/// breakpoint evaluate to the first value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    breakpoints: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(SidurError::InvalidInput(
                "schedule needs a breakpoint".into(),
            ));
        }
        for &(start, value) in &breakpoints {
            if !start.is_finite() || !value.is_finite() {
                return Err(SidurError::InvalidInput("non-finite schedule entry".into()));
            }
        }
        if breakpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(SidurError::InvalidInput(
                "schedule breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { breakpoints })
    }

    /// A signal with one value for all time.
    pub fn constant(value: f64) -> Self {
        Self {
            breakpoints: vec![(0.0, value)],
        }
    }

    /// Zero-order hold of daily values: `values[d]` on `[start + d, start + d + 1)`.
    pub fn daily(start: f64, values: &[f64]) -> Result<Self> {
        let points = values
            .iter()
            .enumerate()
            .map(|(d, &v)| (start + d as f64, v))
            .collect();
        Self::new(points)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&(start, _)| start <= t);
        self.breakpoints[idx.saturating_sub(1)].1
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.iter().map(|&(_, v)| v)
    }

    /// Copy where every breakpoint at or after `t` is dropped, so the value in
    /// force just before `t` is held forever.
    pub fn frozen_from(&self, t: f64) -> Self {
        let kept: Vec<_> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&(start, _)| start < t)
            .collect();
        if kept.is_empty() {
            Self {
                breakpoints: vec![self.breakpoints[0]],
            }
        } else {
            Self { breakpoints: kept }
        }
    }

    /// Copy where the signal switches to `value` at `t` and stays there.
    pub fn overridden_from(&self, t: f64, value: f64) -> Self {
        let mut kept: Vec<_> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&(start, _)| start < t)
            .collect();
        kept.push((t, value));
        Self { breakpoints: kept }
    }
}
