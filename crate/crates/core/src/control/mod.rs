//! Scheduling policies and capacity-region estimation.

mod capacity;
mod linprog;
mod policy;
mod sweep;

pub use capacity::{estimate_capacity_region, CapacityRegion, Halfspace};
pub use linprog::{solve_equality_form, LpSolution, LpStatus};
pub use policy::{
    GreedyPolicy, MaxWeightPolicy, Policy, PolicyContext, PolicySpec, RandomPolicy,
};
pub use sweep::{queue_growth_slope, stability_sweep, SweepPoint, STABILITY_SLOPE_EPSILON};
