use serde::{Deserialize, Serialize};

/// Compartment populations at time `t` (days since 2020-01-24).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub t: f64,
    pub x_s: f64,
    pub x_i: f64,
    pub x_d: f64,
    pub x_u: f64,
    pub x_r: f64,
}

/// Time derivatives of the five compartments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub x_s: f64,
    pub x_i: f64,
    pub x_d: f64,
    pub x_u: f64,
    pub x_r: f64,
}

impl StateDerivative {
    pub fn sum(&self) -> f64 {
        self.x_s + self.x_i + self.x_d + self.x_u + self.x_r
    }

    #[cfg(test)]
    pub(crate) fn as_array(&self) -> [f64; 5] {
        [self.x_s, self.x_i, self.x_d, self.x_u, self.x_r]
    }
}

impl State {
    /// Initial state from the first observed cumulative diagnosed and removed
    /// counts: `x_D + x_R = y1`, `x_R = y2`, `x_U = 0`, `x_I = κ·y1`.
    pub fn from_first_observation(population: f64, y1: f64, y2: f64, kappa: f64) -> Self {
        let x_r = y2;
        let x_d = (y1 - y2).max(0.0);
        let x_i = kappa * y1;
        Self {
            t: 0.0,
            x_s: population - x_i - x_d - x_r,
            x_i,
            x_d,
            x_u: 0.0,
            x_r,
        }
    }

    pub fn total(&self) -> f64 {
        self.x_s + self.x_i + self.x_d + self.x_u + self.x_r
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.as_array().iter().all(|&v| v >= 0.0)
    }

    /// Cumulative diagnosed `y1 = x_D + x_R`.
    pub fn diagnosed(&self) -> f64 {
        self.x_d + self.x_r
    }

    /// Active infected `A = x_I + x_D`.
    pub fn active(&self) -> f64 {
        self.x_i + self.x_d
    }

    pub(crate) fn as_array(&self) -> [f64; 5] {
        [self.x_s, self.x_i, self.x_d, self.x_u, self.x_r]
    }

    pub(crate) fn from_array(t: f64, a: [f64; 5]) -> Self {
        Self {
            t,
            x_s: a[0],
            x_i: a[1],
            x_d: a[2],
            x_u: a[3],
            x_r: a[4],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_observation_conserves_population() {
        let s = State::from_first_observation(66_990_000.0, 3.0, 0.0, 10.0);
        assert_eq!(s.x_i, 30.0);
        assert_eq!(s.x_d, 3.0);
        assert_eq!(s.x_u, 0.0);
        assert!((s.total() - 66_990_000.0).abs() < 1e-6);
    }
}
