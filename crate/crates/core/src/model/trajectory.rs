use std::io::Write;

use serde::Serialize;

use super::params::ModelParams;
use super::state::State;
use crate::error::{Result, SidurError};

/// Daily-sampled simulation output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub population: f64,
    pub sample_times: Vec<f64>,
    pub states: Vec<State>,
    /// Testing rate in force from each sample to the next.
    pub u_applied: Vec<f64>,
    /// Cumulative diagnosed `x_D + x_R`.
    pub y1: Vec<f64>,
    /// Cumulative removed `x_R`.
    pub y2: Vec<f64>,
    /// Instantaneous detection flow `u·x_I/x_T`.
    pub y3: Vec<f64>,
    /// Effective reproduction number at each sample (NaN if `x_T = 0`).
    pub r_t: Vec<f64>,
    /// Tests consumed up to each sample.
    pub consumed: Vec<f64>,
}

#[derive(Serialize)]
struct CsvRow {
    t: f64,
    #[serde(rename = "x_S")]
    x_s: f64,
    #[serde(rename = "x_I")]
    x_i: f64,
    #[serde(rename = "x_D")]
    x_d: f64,
    #[serde(rename = "x_U")]
    x_u: f64,
    #[serde(rename = "x_R")]
    x_r: f64,
    u: f64,
    y1: f64,
    y2: f64,
    y3: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "I_cum")]
    i_cum: f64,
    #[serde(rename = "R_t")]
    r_t: f64,
}

impl Trajectory {
    pub(crate) fn with_capacity(population: f64, n: usize) -> Self {
        Self {
            population,
            sample_times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            u_applied: Vec::with_capacity(n),
            y1: Vec::with_capacity(n),
            y2: Vec::with_capacity(n),
            y3: Vec::with_capacity(n),
            r_t: Vec::with_capacity(n),
            consumed: Vec::with_capacity(n),
        }
    }

    pub(crate) fn push_sample(
        &mut self,
        state: &State,
        params: &ModelParams,
        u: f64,
        x_t: f64,
        consumed: f64,
    ) {
        let detection = if u > 0.0 && x_t > 0.0 {
            u.min(x_t) * state.x_i / x_t
        } else {
            0.0
        };
        let r_t = if x_t > 0.0 {
            params.beta_at(state.t) / (u / x_t + params.gamma) * state.x_s / params.population
        } else {
            f64::NAN
        };
        self.sample_times.push(state.t);
        self.states.push(*state);
        self.u_applied.push(u);
        self.y1.push(state.diagnosed());
        self.y2.push(state.x_r);
        self.y3.push(detection);
        self.r_t.push(r_t);
        self.consumed.push(consumed);
    }

    /// Concatenates `self` up to (excluding) the first sample of `tail`
    /// with `tail`.
    pub fn spliced(&self, tail: &Trajectory) -> Trajectory {
        let t_split = tail.sample_times.first().copied().unwrap_or(f64::INFINITY);
        let keep = self.sample_times.partition_point(|&t| t < t_split);
        let join =
            |a: &[f64], b: &[f64]| -> Vec<f64> { a[..keep].iter().chain(b).copied().collect() };
        Trajectory {
            population: self.population,
            sample_times: join(&self.sample_times, &tail.sample_times),
            states: self.states[..keep]
                .iter()
                .chain(&tail.states)
                .copied()
                .collect(),
            u_applied: join(&self.u_applied, &tail.u_applied),
            y1: join(&self.y1, &tail.y1),
            y2: join(&self.y2, &tail.y2),
            y3: join(&self.y3, &tail.y3),
            r_t: join(&self.r_t, &tail.r_t),
            consumed: join(&self.consumed, &tail.consumed),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Sample whose time equals `t` (to within 1e-9 day).
    pub fn state_at(&self, t: f64) -> Result<&State> {
        let first = self.sample_times.first().copied().unwrap_or(0.0);
        let idx = (t - first).round();
        if idx < 0.0 || idx as usize >= self.len() || (first + idx - t).abs() > 1e-9 {
            return Err(SidurError::HorizonExceeded {
                t,
                horizon: self.sample_times.last().copied().unwrap_or(0.0),
            });
        }
        Ok(&self.states[idx as usize])
    }

    /// Active infected `A = x_I + x_D` and cumulative infected
    /// `I = N − x_S` at each sample.
    pub fn derived_outputs(&self) -> (Vec<f64>, Vec<f64>) {
        let a = self.states.iter().map(|s| s.active()).collect();
        let i = self
            .states
            .iter()
            .map(|s| (self.population - s.x_s).max(0.0))
            .collect();
        (a, i)
    }

    pub fn infected(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.x_i).collect()
    }

    /// Time and value of the largest sampled `x_I`.
    pub fn peak_infected(&self) -> (f64, f64) {
        self.states
            .iter()
            .fold((f64::NAN, f64::NEG_INFINITY), |best, s| {
                if s.x_i > best.1 {
                    (s.t, s.x_i)
                } else {
                    best
                }
            })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let (a, i_cum) = self.derived_outputs();
        for k in 0..self.len() {
            let s = &self.states[k];
            w.serialize(CsvRow {
                t: self.sample_times[k],
                x_s: s.x_s,
                x_i: s.x_i,
                x_d: s.x_d,
                x_u: s.x_u,
                x_r: s.x_r,
                u: self.u_applied[k],
                y1: self.y1[k],
                y2: self.y2[k],
                y3: self.y3[k],
                a: a[k],
                i_cum: i_cum[k],
                r_t: self.r_t[k],
            })
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| SidurError::Io {
            path: "<trajectory>".into(),
            message: e.to_string(),
        })
    }
}

fn csv_err(e: csv::Error) -> SidurError {
    SidurError::Io {
        path: "<trajectory>".into(),
        message: e.to_string(),
    }
}
