use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::schedule::Schedule;
use super::state::State;
use crate::error::{Result, SidurError};

/// Test availability: a daily capacity signal and an optional finite
/// stockpile with its running consumption.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSupply {
    pub capacity: Schedule,
    pub stockpile: Option<f64>,
    pub consumed: f64,
}

impl TestSupply {
    pub fn unlimited(capacity: Schedule) -> Self {
        Self {
            capacity,
            stockpile: None,
            consumed: 0.0,
        }
    }

    pub fn limited(capacity: Schedule, stockpile: f64) -> Self {
        Self {
            capacity,
            stockpile: Some(stockpile),
            consumed: 0.0,
        }
    }

    /// No testing at all.
    pub fn none() -> Self {
        Self::unlimited(Schedule::constant(0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if self.capacity.values().any(|c| c < 0.0) {
            return Err(SidurError::InvalidInput(
                "capacity must be nonnegative".into(),
            ));
        }
        if let Some(r_max) = self.stockpile {
            if r_max < 0.0 || self.consumed > r_max * (1.0 + 1e-12) {
                return Err(SidurError::InvalidInput(
                    "consumed tests exceed the stockpile".into(),
                ));
            }
        }
        Ok(())
    }

    /// Tests left in the stockpile, infinite when unlimited.
    pub fn remaining(&self) -> f64 {
        match self.stockpile {
            Some(r_max) => (r_max - self.consumed).max(0.0),
            None => f64::INFINITY,
        }
    }

    /// `u = min(c(t), r(t), x_T)`.
    pub fn rate(&self, t: f64, x_t: f64) -> f64 {
        self.capacity
            .value_at(t)
            .min(self.remaining())
            .min(x_t)
            .max(0.0)
    }
}

/// Testing rate applied to `state` at time `t`.
pub fn testing_rate(supply: &TestSupply, state: &State, params: &ModelParams, t: f64) -> f64 {
    supply.rate(t, params.testable_of(state))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_is_the_minimum_of_its_limits() {
        let none = TestSupply::unlimited(Schedule::constant(0.0));
        assert_eq!(none.rate(3.0, 1e6), 0.0);

        let mut stock = TestSupply::limited(Schedule::constant(5000.0), 1000.0);
        stock.consumed = 700.0;
        assert_eq!(stock.rate(0.0, 1e6), 300.0);

        let open = TestSupply::unlimited(Schedule::constant(147_000.0));
        assert_eq!(open.rate(0.0, 1e7), 147_000.0);
        assert_eq!(open.rate(0.0, 1000.0), 1000.0);
    }

    #[test]
    fn exhausted_stockpile_gives_zero() {
        let mut s = TestSupply::limited(Schedule::constant(10.0), 50.0);
        s.consumed = 50.0;
        assert_eq!(s.rate(0.0, 1e9), 0.0);
    }
}
