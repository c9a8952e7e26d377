//! Global-best particle swarm optimization with box constraints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SidurError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub max_iterations: usize,
    /// Inertia weight `w`.
    pub inertia: f64,
    /// Cognitive acceleration `c1`.
    pub c1: f64,
    /// Social acceleration `c2`.
    pub c2: f64,
    pub seed: u64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl PsoConfig {
    /// Standard constriction coefficients with the given box.
    pub fn with_box(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        Self {
            swarm_size: 50,
            max_iterations: 500,
            inertia: 0.729,
            c1: 1.494,
            c2: 1.494,
            seed: 0,
            lower,
            upper,
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SidurError::InvalidInput(m.to_string()));
        if self.swarm_size < 2 {
            return bad("swarm needs at least two particles");
        }
        if !(self.inertia > 0.0 && self.inertia < 1.0) {
            return bad("inertia must lie in (0, 1)");
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return bad("acceleration coefficients must be positive");
        }
        if self.lower.is_empty() || self.lower.len() != self.upper.len() {
            return bad("box bounds must be nonempty and of equal length");
        }
        if self.lower.iter().zip(&self.upper).any(|(l, u)| !(l <= u)) {
            return bad("box lower bound exceeds upper bound");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsoState {
    pub particles: Vec<Particle>,
    pub social_position: Vec<f64>,
    pub social_cost: f64,
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsoResult {
    pub position: Vec<f64>,
    pub cost: f64,
    /// Social best cost after initialization and after every iteration.
    pub trace: Vec<f64>,
}

fn sanitize(cost: f64) -> f64 {
    if cost.is_nan() {
        f64::INFINITY
    } else {
        cost
    }
}

fn evaluate<F>(positions: &[Vec<f64>], objective: &F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    positions
        .par_iter()
        .map(|p| sanitize(objective(p)))
        .collect()
}

impl PsoState {
    /// Uniform positions in the box, zero velocities.
    pub fn initialize<F, R>(config: &PsoConfig, objective: &F, rng: &mut R) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync,
        R: Rng,
    {
        config.validate()?;
        let dim = config.dimension();
        let positions: Vec<Vec<f64>> = (0..config.swarm_size)
            .map(|_| {
                (0..dim)
                    .map(|d| {
                        let (lo, hi) = (config.lower[d], config.upper[d]);
                        lo + rng.gen::<f64>() * (hi - lo)
                    })
                    .collect()
            })
            .collect();
        let costs = evaluate(&positions, objective);
        let particles: Vec<Particle> = positions
            .into_iter()
            .zip(costs)
            .map(|(position, cost)| Particle {
                velocity: vec![0.0; dim],
                best_position: position.clone(),
                position,
                best_cost: cost,
            })
            .collect();
        let mut state = Self {
            social_position: particles[0].best_position.clone(),
            social_cost: particles[0].best_cost,
            particles,
            iteration: 0,
        };
        state.update_social();
        Ok(state)
    }

    fn update_social(&mut self) {
        for p in &self.particles {
            if p.best_cost <= self.social_cost {
                self.social_cost = p.best_cost;
                self.social_position = p.best_position.clone();
            }
        }
    }
}

/// One synchronous swarm update.
///
/// Draws `r1, r2` for every particle and coordinate in order on the calling
/// thread, moves all particles, clamps them into the box (zeroing the
/// velocity component that left it), evaluates the objective for all particles in parallel and
/// updates the personal and social bests.
pub fn pso_step<F, R>(state: &PsoState, config: &PsoConfig, objective: &F, rng: &mut R) -> PsoState
where
    F: Fn(&[f64]) -> f64 + Sync,
    R: Rng,
{
    let mut next = state.clone();
    for particle in next.particles.iter_mut() {
        for d in 0..particle.position.len() {
            let r1: f64 = rng.gen();
            let r2: f64 = rng.gen();
            let x = particle.position[d];
            let v = config.inertia * particle.velocity[d]
                + config.c1 * r1 * (particle.best_position[d] - x)
                + config.c2 * r2 * (state.social_position[d] - x);
            let moved = x + v;
            let (lo, hi) = (config.lower[d], config.upper[d]);
            if moved < lo || moved > hi {
                particle.position[d] = moved.clamp(lo, hi);
                particle.velocity[d] = 0.0;
            } else {
                particle.position[d] = moved;
                particle.velocity[d] = v;
            }
        }
    }
    let positions: Vec<Vec<f64>> = next.particles.iter().map(|p| p.position.clone()).collect();
    let costs = evaluate(&positions, objective);
    for (particle, cost) in next.particles.iter_mut().zip(costs) {
        if cost <= particle.best_cost {
            particle.best_cost = cost;
            particle.best_position = particle.position.clone();
        }
    }
    next.update_social();
    next.iteration += 1;
    next
}

/// Runs the configured number of iterations from a seeded start.
pub fn run_pso<F>(config: &PsoConfig, objective: &F) -> Result<PsoResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = PsoState::initialize(config, objective, &mut rng)?;
    let mut trace = Vec::with_capacity(config.max_iterations + 1);
    trace.push(state.social_cost);
    for _ in 0..config.max_iterations {
        state = pso_step(&state, config, objective, &mut rng);
        trace.push(state.social_cost);
    }
    Ok(PsoResult {
        position: state.social_position,
        cost: state.social_cost,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    /// Generator whose every draw is zero.
    struct ZeroRng;

    impl RngCore for ZeroRng {
        fn next_u32(&mut self) -> u32 {
            0
        }
        fn next_u64(&mut self) -> u64 {
            0
        }
        fn fill_bytes(&mut self, dest: &mut [u8]) {
            dest.fill(0);
        }
        fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
            dest.fill(0);
            Ok(())
        }
    }

    fn sphere(p: &[f64]) -> f64 {
        p.iter().map(|x| x * x).sum()
    }

    fn config(dim: usize) -> PsoConfig {
        PsoConfig::with_box(vec![-5.0; dim], vec![5.0; dim])
    }

    fn single(position: Vec<f64>, velocity: Vec<f64>, best: Vec<f64>) -> PsoState {
        let cost = sphere(&best);
        PsoState {
            particles: vec![Particle {
                position,
                velocity,
                best_position: best.clone(),
                best_cost: cost,
            }],
            social_position: best,
            social_cost: cost,
            iteration: 0,
        }
    }

    #[test]
    fn zero_draws_scale_velocity_by_inertia() {
        let cfg = config(2);
        let state = single(vec![1.0, -1.0], vec![0.5, -0.25], vec![3.0, 3.0]);
        let next = pso_step(&state, &cfg, &sphere, &mut ZeroRng);
        let v = &next.particles[0].velocity;
        assert_eq!(v[0], 0.729 * 0.5);
        assert_eq!(v[1], 0.729 * -0.25);
    }

    #[test]
    fn particle_at_both_bests_without_velocity_is_stationary() {
        let cfg = config(3);
        let state = single(vec![0.5, 0.2, -0.1], vec![0.0; 3], vec![0.5, 0.2, -0.1]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let next = pso_step(&state, &cfg, &sphere, &mut rng);
        assert_eq!(next.particles[0].position, vec![0.5, 0.2, -0.1]);
        assert_eq!(next.particles[0].velocity, vec![0.0; 3]);
    }

    #[test]
    fn clamping_zeroes_the_violating_component() {
        let cfg = config(2);
        let state = single(vec![4.9, 0.0], vec![2.0, 0.1], vec![4.9, 0.0]);
        let next = pso_step(&state, &cfg, &sphere, &mut ZeroRng);
        let p = &next.particles[0];
        assert_eq!(p.position[0], 5.0);
        assert_eq!(p.velocity[0], 0.0);
        assert!((p.velocity[1] - 0.0729).abs() < 1e-15);
    }

    #[test]
    fn sphere_in_six_dimensions_converges() {
        let mut cfg = config(6);
        cfg.swarm_size = 40;
        cfg.max_iterations = 200;
        cfg.seed = 11;
        let res = run_pso(&cfg, &sphere).unwrap();
        assert!(res.cost < 1e-4, "cost {}", res.cost);
        assert!(res.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn identical_seeds_give_identical_runs() {
        let mut cfg = config(4);
        cfg.max_iterations = 30;
        cfg.seed = 3;
        let a = run_pso(&cfg, &sphere).unwrap();
        let b = run_pso(&cfg, &sphere).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nan_costs_are_treated_as_infinite() {
        let mut cfg = config(2);
        cfg.max_iterations = 5;
        let res = run_pso(&cfg, &|p: &[f64]| if p[0] > 0.0 { f64::NAN } else { -p[0] }).unwrap();
        assert!(res.cost.is_finite());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = config(2);
        cfg.swarm_size = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = config(2);
        cfg.inertia = 1.0;
        assert!(cfg.validate().is_err());
    }
}
