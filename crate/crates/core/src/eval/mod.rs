//! Trial harness and statistics for checking sampler output distributions.

mod budget;
mod counting;
mod stats;
mod trials;

pub use budget::{space_budget_check, BudgetCheck, SpaceBound, DEFAULT_SPACE_CONSTANT};
pub use counting::{estimate_from_successes, estimate_t_by_sampling, CountEstimate, CountingAlgo};
pub use stats::{
    additive_delta_for, cells_within_bounds, chernoff_tolerance, chi_square, hoeffding_delta_for, l1_between,
    l1_to_uniform, relative_delta_for, ChiSquare, ToleranceSpec,
};
pub use trials::{run_trials, with_pool, AlgoSpec, SeedPolicy, TrialReport, WORKERS_ENV};
