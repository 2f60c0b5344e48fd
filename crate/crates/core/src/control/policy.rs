//! The controller interface and the three bundled policies.
//!
//! Every policy is a deterministic function of (slot state, seed stream);
//! tie-breaks are total and documented so that runs are reproducible.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model;
use crate::netsim::{
    feasible_configurations, Assignment, CandidatePaths, Commodity, EnumerationBudget, LleId,
    Path, ServiceCaps, ServiceConfiguration, SimParams, SlotState, Topology,
};
use crate::rng::SimRng;

/// Read-only view a policy decides from.
pub struct PolicyContext<'a> {
    pub state: &'a SlotState,
    pub topology: &'a Topology,
    pub commodities: &'a [Commodity],
    pub paths: &'a CandidatePaths,
    pub params: &'a SimParams,
}

/// The controller: maps the current slot state to a service configuration.
pub trait Policy {
    fn name(&self) -> &'static str;

    /// Choose the configuration to execute this slot. The returned
    /// configuration must be feasible against `ctx.state`; infeasible
    /// output is rejected by the simulator and counted as a violation.
    fn decide(&mut self, ctx: &PolicyContext<'_>, rng: &mut SimRng) -> Result<ServiceConfiguration>;
}

/// Declarative policy choice, buildable into a fresh instance per run.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicySpec {
    Random { budget: EnumerationBudget },
    Greedy,
    MaxWeight { budget: EnumerationBudget, fallback: bool },
}

impl PolicySpec {
    pub fn build(&self) -> Box<dyn Policy> {
        match *self {
            PolicySpec::Random { budget } => Box::new(RandomPolicy { budget }),
            PolicySpec::Greedy => Box::new(GreedyPolicy),
            PolicySpec::MaxWeight { budget, fallback } => {
                Box::new(MaxWeightPolicy { budget, fallback })
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolicySpec::Random { .. } => "random",
            PolicySpec::Greedy => "greedy",
            PolicySpec::MaxWeight { .. } => "max-weight",
        }
    }
}

/// Picks uniformly among the maximal feasible configurations; falls back to
/// a randomised greedy construction past the enumeration budget.
#[derive(Debug, Clone)]
pub struct RandomPolicy {
    pub budget: EnumerationBudget,
}

impl Policy for RandomPolicy {
    fn name(&self) -> &'static str {
        "random"
    }

    fn decide(&mut self, ctx: &PolicyContext<'_>, rng: &mut SimRng) -> Result<ServiceConfiguration> {
        match feasible_configurations(
            ctx.state,
            ctx.topology,
            ctx.commodities,
            ctx.paths,
            ServiceCaps::Queues(ctx.state.queues()),
            ctx.params.min_service_fidelity,
            &self.budget,
        ) {
            Ok(configs) => {
                let i = if configs.len() == 1 { 0 } else { rng.gen_range(0..configs.len()) };
                Ok(configs[i].clone())
            }
            Err(Error::Budget(_)) => Ok(greedy_randomized(ctx, rng)),
            Err(e) => Err(e),
        }
    }
}

/// Longest-queue-first greedy with deterministic tie-breaks: largest
/// remaining backlog, then lower commodity id, then shorter path, then
/// lexicographic path order; hops take the lowest-id free entanglement.
#[derive(Debug, Clone)]
pub struct GreedyPolicy;

impl Policy for GreedyPolicy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn decide(&mut self, ctx: &PolicyContext<'_>, _rng: &mut SimRng) -> Result<ServiceConfiguration> {
        Ok(greedy_deterministic(ctx))
    }
}

/// Exact max-weight: the feasible configuration maximising
/// `Σ_c queue_c · served_c`, ties broken by lexicographically smallest
/// configuration. With `fallback` the deterministic greedy stands in past
/// the enumeration budget; otherwise the budget error aborts the run.
#[derive(Debug, Clone)]
pub struct MaxWeightPolicy {
    pub budget: EnumerationBudget,
    pub fallback: bool,
}

impl Policy for MaxWeightPolicy {
    fn name(&self) -> &'static str {
        "max-weight"
    }

    fn decide(&mut self, ctx: &PolicyContext<'_>, _rng: &mut SimRng) -> Result<ServiceConfiguration> {
        let queues = ctx.state.queues();
        match feasible_configurations(
            ctx.state,
            ctx.topology,
            ctx.commodities,
            ctx.paths,
            ServiceCaps::Queues(queues),
            ctx.params.min_service_fidelity,
            &self.budget,
        ) {
            Ok(configs) => {
                let mut best: Option<(u128, &ServiceConfiguration)> = None;
                for cfg in &configs {
                    let weight: u128 = cfg
                        .assignments
                        .iter()
                        .map(|a| u128::from(queues[a.commodity]))
                        .sum();
                    best = match best {
                        Some((bw, bc)) if (weight, std::cmp::Reverse(cfg)) <= (bw, std::cmp::Reverse(bc)) => {
                            Some((bw, bc))
                        }
                        _ => Some((weight, cfg)),
                    };
                }
                match best {
                    Some((w, cfg)) if w > 0 => Ok(cfg.clone()),
                    _ => Ok(ServiceConfiguration::empty()),
                }
            }
            Err(Error::Budget(_)) if self.fallback => Ok(greedy_deterministic(ctx)),
            Err(e) => Err(e),
        }
    }
}

/// Lowest-id free entanglement per hop of `path`, or `None` if some hop has
/// no free entanglement (or the chain would fall below the fidelity floor).
fn first_fit_lles(
    ctx: &PolicyContext<'_>,
    path: &Path,
    used: &BTreeSet<LleId>,
) -> Option<Vec<LleId>> {
    let mut ids = Vec::with_capacity(path.edges.len());
    let mut fidelities = Vec::with_capacity(path.edges.len());
    for &edge in &path.edges {
        let lle = ctx
            .state
            .lles_on_edge(edge)
            .find(|l| !used.contains(&l.id))?;
        ids.push(lle.id);
        fidelities.push(lle.fidelity);
    }
    if let Some(min_f) = ctx.params.min_service_fidelity {
        let f = model::chain_fidelity(&fidelities).ok()?;
        if f < min_f - 1e-12 {
            return None;
        }
    }
    Some(ids)
}

/// Deterministic greedy construction shared by [`GreedyPolicy`] and the
/// max-weight fallback.
fn greedy_deterministic(ctx: &PolicyContext<'_>) -> ServiceConfiguration {
    let mut remaining: Vec<u64> = ctx.state.queues().to_vec();
    let mut used: BTreeSet<LleId> = BTreeSet::new();
    let mut assignments = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..ctx.commodities.len())
            .filter(|&c| remaining[c] > 0)
            .collect();
        order.sort_by(|&a, &b| {
            remaining[b]
                .cmp(&remaining[a])
                .then(ctx.commodities[a].id.cmp(&ctx.commodities[b].id))
        });
        let mut progressed = false;
        'commodities: for &c in &order {
            for path in ctx.paths.for_commodity(c) {
                if let Some(lle_ids) = first_fit_lles(ctx, path, &used) {
                    used.extend(lle_ids.iter().copied());
                    assignments.push(Assignment { commodity: c, path: path.nodes.clone(), lle_ids });
                    remaining[c] -= 1;
                    progressed = true;
                    break 'commodities;
                }
            }
        }
        if !progressed {
            break;
        }
    }
    ServiceConfiguration::new(assignments)
}

/// Randomised greedy used by [`RandomPolicy`] past the enumeration budget:
/// shuffled commodity and path order, random free entanglement per hop.
fn greedy_randomized(ctx: &PolicyContext<'_>, rng: &mut SimRng) -> ServiceConfiguration {
    let mut remaining: Vec<u64> = ctx.state.queues().to_vec();
    let mut used: BTreeSet<LleId> = BTreeSet::new();
    let mut assignments = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..ctx.commodities.len())
            .filter(|&c| remaining[c] > 0)
            .collect();
        order.shuffle(rng);
        let mut progressed = false;
        'commodities: for &c in &order {
            let mut paths: Vec<&Path> = ctx.paths.for_commodity(c).iter().collect();
            paths.shuffle(rng);
            for path in paths {
                let mut ids = Vec::with_capacity(path.edges.len());
                let mut fidelities = Vec::with_capacity(path.edges.len());
                for &edge in &path.edges {
                    let free: Vec<&crate::netsim::Lle> = ctx
                        .state
                        .lles_on_edge(edge)
                        .filter(|l| !used.contains(&l.id))
                        .collect();
                    if free.is_empty() {
                        ids.clear();
                        break;
                    }
                    let pick = free[rng.gen_range(0..free.len())];
                    ids.push(pick.id);
                    fidelities.push(pick.fidelity);
                }
                if ids.len() != path.edges.len() {
                    continue;
                }
                if let Some(min_f) = ctx.params.min_service_fidelity {
                    match model::chain_fidelity(&fidelities) {
                        Ok(f) if f >= min_f - 1e-12 => {}
                        _ => continue,
                    }
                }
                used.extend(ids.iter().copied());
                assignments.push(Assignment { commodity: c, path: path.nodes.clone(), lle_ids: ids });
                remaining[c] -= 1;
                progressed = true;
                break 'commodities;
            }
        }
        if !progressed {
            break;
        }
    }
    ServiceConfiguration::new(assignments)
}
