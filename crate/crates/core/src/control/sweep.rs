//! Load sweeps with a queue-growth stability verdict.

use super::policy::PolicySpec;
use crate::error::{Error, Result};
use crate::netsim::{run, Commodity, Metrics, SimParams, Topology};

/// Default slope threshold (requests per slot) below which a run counts as
/// stable. The verdict is a desk-scale heuristic: a fitted growth rate this
/// small over the second half of the horizon is indistinguishable from a
/// bounded queue.
pub const STABILITY_SLOPE_EPSILON: f64 = 1e-3;

/// Verdict for one load factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub rho: f64,
    /// Arrival rates actually applied (`rho · direction`, clamped to [0,1]).
    pub rates: Vec<f64>,
    /// Fitted total-queue slope per seed, in grid order.
    pub slopes: Vec<f64>,
    pub mean_slope: f64,
    pub stable: bool,
}

/// Least-squares slope of the total backlog over the last half of the run.
pub fn queue_growth_slope(metrics: &Metrics) -> f64 {
    let series = metrics.total_queue_series();
    let tail = &series[series.len() / 2..];
    if tail.len() < 2 {
        return 0.0;
    }
    let n = tail.len() as f64;
    let t_mean = (tail.len() - 1) as f64 / 2.0;
    let q_mean = tail.iter().map(|&q| q as f64).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (i, &q) in tail.iter().enumerate() {
        let dt = i as f64 - t_mean;
        cov += dt * (q as f64 - q_mean);
        var += dt * dt;
    }
    cov / var
}

/// Classify stability along the ray `rho · direction` for each load factor
/// in `rho_grid`, running `seeds.len()` independent replications per point.
#[allow(clippy::too_many_arguments)]
pub fn stability_sweep(
    topology: &Topology,
    commodities: &[Commodity],
    params: &SimParams,
    policy: &PolicySpec,
    direction: &[f64],
    rho_grid: &[f64],
    horizon: u64,
    seeds: &[u64],
    epsilon: f64,
) -> Result<Vec<SweepPoint>> {
    if direction.len() != commodities.len() {
        return Err(Error::Usage(format!(
            "direction has {} entries for {} commodities",
            direction.len(),
            commodities.len()
        )));
    }
    if direction.iter().any(|&d| d < 0.0 || !d.is_finite()) {
        return Err(Error::Usage("direction entries must be nonnegative".into()));
    }
    if seeds.is_empty() {
        return Err(Error::Usage("at least one seed is required".into()));
    }
    let mut out = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        if rho < 0.0 || !rho.is_finite() {
            return Err(Error::Usage(format!("load factor {rho} must be nonnegative")));
        }
        let rates: Vec<f64> = direction.iter().map(|d| (rho * d).clamp(0.0, 1.0)).collect();
        let loaded: Vec<Commodity> = commodities
            .iter()
            .zip(&rates)
            .map(|(c, &rate)| Commodity { rate, ..c.clone() })
            .collect();
        let mut slopes = Vec::with_capacity(seeds.len());
        for &seed in seeds {
            let mut policy = policy.build();
            let metrics = run(topology, &loaded, params, policy.as_mut(), horizon, seed)?;
            slopes.push(queue_growth_slope(&metrics));
        }
        let mean_slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
        out.push(SweepPoint {
            rho,
            rates,
            slopes,
            mean_slope,
            stable: mean_slope < epsilon,
        });
    }
    Ok(out)
}
