//! Constant-rate testing policies.

mod best;
mod cost;

pub use best::{best_policy, best_rate, best_sweep, BestSolution, SweepPoint};
pub use cost::{
    cost_bisection, cost_brute_force, cost_newton, default_bracket, log_grid, BruteForcePoint,
    CostInstance, CostSolution, PeakPositions, XiSolution, EXTINCTION_LEVEL, TABLE_TOLERANCE,
};
