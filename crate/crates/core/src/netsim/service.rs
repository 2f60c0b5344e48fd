//! Link-level entanglements and per-slot service configurations.

use std::collections::BTreeSet;

use super::topology::{CandidatePaths, Commodity, EdgeId, NodeId, NodeRole, Topology};
use super::SlotState;
use crate::error::{Error, Result};
use crate::model;

/// Identifier of a link-level entanglement, unique within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LleId(pub u64);

/// A link-level entanglement: one consumable "virtual link" on an edge.
#[derive(Debug, Clone)]
pub struct Lle {
    pub id: LleId,
    pub edge: EdgeId,
    pub created_slot: u64,
    /// Current fidelity; decayed once per elapsed slot.
    pub fidelity: f64,
}

impl Lle {
    pub fn age(&self, slot: u64) -> u64 {
        slot.saturating_sub(self.created_slot)
    }
}

/// One served request: a commodity, the route, and the entanglement
/// consumed on each hop of the route.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    /// Position of the commodity in the commodity list.
    pub commodity: usize,
    /// Node sequence from source to destination.
    pub path: Vec<NodeId>,
    /// One live entanglement per path edge, in path order.
    pub lle_ids: Vec<LleId>,
}

/// A feasible set of assignments executable in one slot.
///
/// Assignments are kept sorted, so configurations compare and sort
/// lexicographically by (commodity, path, entanglement ids).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ServiceConfiguration {
    pub assignments: Vec<Assignment>,
}

impl ServiceConfiguration {
    pub fn empty() -> Self {
        ServiceConfiguration::default()
    }

    pub fn new(mut assignments: Vec<Assignment>) -> Self {
        assignments.sort();
        ServiceConfiguration { assignments }
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Requests served per commodity position.
    pub fn services(&self, num_commodities: usize) -> Vec<u64> {
        let mut v = vec![0u64; num_commodities];
        for a in &self.assignments {
            v[a.commodity] += 1;
        }
        v
    }
}

/// Validate `config` against the current slot state.
///
/// Checks route shape (simple, client endpoints, switch interior), that
/// every referenced entanglement is live and lies on the matching hop, the
/// single-use rule, per-commodity queue bounds, and the optional minimum
/// service fidelity.
pub fn validate_configuration(
    config: &ServiceConfiguration,
    state: &SlotState,
    topology: &Topology,
    commodities: &[Commodity],
    min_service_fidelity: Option<f64>,
) -> Result<()> {
    let mut used = BTreeSet::new();
    let mut counts = vec![0u64; commodities.len()];
    for a in &config.assignments {
        let commodity = commodities
            .get(a.commodity)
            .ok_or_else(|| Error::Usage(format!("assignment references commodity index {}", a.commodity)))?;
        if a.path.len() < 2 {
            return Err(Error::Usage(format!("commodity {}: path has no edges", commodity.id)));
        }
        if a.path.first() != Some(&commodity.src) || a.path.last() != Some(&commodity.dst) {
            return Err(Error::Usage(format!(
                "commodity {}: path endpoints do not match the commodity",
                commodity.id
            )));
        }
        let mut seen_nodes = BTreeSet::new();
        for (i, &n) in a.path.iter().enumerate() {
            if n.0 >= topology.nodes().len() {
                return Err(Error::Usage(format!("commodity {}: path references an undefined node", commodity.id)));
            }
            if !seen_nodes.insert(n) {
                return Err(Error::Usage(format!("commodity {}: path is not simple", commodity.id)));
            }
            if i > 0 && i + 1 < a.path.len() && topology.node(n).role != NodeRole::Switch {
                return Err(Error::Usage(format!(
                    "commodity {}: interior node '{}' is not a switch",
                    commodity.id,
                    topology.node(n).name
                )));
            }
        }
        if a.lle_ids.len() + 1 != a.path.len() {
            return Err(Error::Usage(format!(
                "commodity {}: {} entanglements assigned for {} hops",
                commodity.id,
                a.lle_ids.len(),
                a.path.len() - 1
            )));
        }
        let mut fidelities = Vec::with_capacity(a.lle_ids.len());
        for (hop, (&id, pair)) in a.lle_ids.iter().zip(a.path.windows(2)).enumerate() {
            let lle = state
                .lle(id)
                .ok_or_else(|| Error::Usage(format!("commodity {}: entanglement {:?} is not live", commodity.id, id)))?;
            let edge = topology
                .edge_between(pair[0], pair[1])
                .ok_or_else(|| Error::Usage(format!("commodity {}: hop {hop} is not an edge", commodity.id)))?;
            if lle.edge != edge {
                return Err(Error::Usage(format!(
                    "commodity {}: entanglement {:?} lies on a different edge than hop {hop}",
                    commodity.id, id
                )));
            }
            if !used.insert(id) {
                return Err(Error::Usage(format!("entanglement {id:?} assigned twice")));
            }
            fidelities.push(lle.fidelity);
        }
        if let Some(min_f) = min_service_fidelity {
            let f = model::chain_fidelity(&fidelities)?;
            if f < min_f - 1e-12 {
                return Err(Error::Usage(format!(
                    "commodity {}: delivered fidelity {f:.6} below the service minimum {min_f:.6}",
                    commodity.id
                )));
            }
        }
        counts[a.commodity] += 1;
        if counts[a.commodity] > state.queues()[a.commodity] {
            return Err(Error::Usage(format!(
                "commodity {}: served more requests than are queued",
                commodity.id
            )));
        }
    }
    Ok(())
}

/// Budget guard for the exhaustive configuration enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Maximum number of candidate assignments.
    pub max_candidates: usize,
    /// Maximum number of search-tree nodes.
    pub max_nodes: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_candidates: 64, max_nodes: 200_000 }
    }
}

/// Per-commodity caps on how many requests may be served.
#[derive(Debug, Clone, Copy)]
pub enum ServiceCaps<'a> {
    /// Bounded by the current queue lengths.
    Queues(&'a [u64]),
    /// Unbounded (used by the capacity estimator).
    Unlimited,
}

impl ServiceCaps<'_> {
    fn cap(&self, commodity: usize) -> u64 {
        match self {
            ServiceCaps::Queues(q) => q[commodity],
            ServiceCaps::Unlimited => u64::MAX,
        }
    }
}

/// All single-request assignments executable in the current state, in
/// deterministic order (commodity, path, entanglement ids).
///
/// For a path whose edges carry several live entanglements, every
/// combination is a distinct candidate.
pub fn candidate_assignments(
    state: &SlotState,
    _topology: &Topology,
    commodities: &[Commodity],
    paths: &CandidatePaths,
    caps: ServiceCaps<'_>,
    min_service_fidelity: Option<f64>,
    budget: &EnumerationBudget,
) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for (ci, _) in commodities.iter().enumerate() {
        if caps.cap(ci) == 0 {
            continue;
        }
        for path in paths.for_commodity(ci) {
            // Live entanglements per hop, ids ascending.
            let mut per_hop: Vec<Vec<&Lle>> = Vec::with_capacity(path.edges.len());
            for &edge in &path.edges {
                let lles: Vec<&Lle> = state.lles_on_edge(edge).collect();
                if lles.is_empty() {
                    per_hop.clear();
                    break;
                }
                per_hop.push(lles);
            }
            if per_hop.len() != path.edges.len() {
                continue;
            }
            let mut pick = vec![0usize; per_hop.len()];
            'combos: loop {
                let chosen: Vec<&Lle> = pick.iter().zip(&per_hop).map(|(&i, v)| v[i]).collect();
                let admissible = match min_service_fidelity {
                    None => true,
                    Some(min_f) => {
                        let fids: Vec<f64> = chosen.iter().map(|l| l.fidelity).collect();
                        model::chain_fidelity(&fids)? >= min_f - 1e-12
                    }
                };
                if admissible {
                    out.push(Assignment {
                        commodity: ci,
                        path: path.nodes.clone(),
                        lle_ids: chosen.iter().map(|l| l.id).collect(),
                    });
                    if out.len() > budget.max_candidates {
                        return Err(Error::Budget(format!(
                            "more than {} candidate assignments",
                            budget.max_candidates
                        )));
                    }
                }
                // Advance the mixed-radix picker over per-hop choices.
                let mut k = per_hop.len() - 1;
                loop {
                    pick[k] += 1;
                    if pick[k] < per_hop[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    if k == 0 {
                        break 'combos;
                    }
                    k -= 1;
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustively enumerate all maximal feasible configurations.
///
/// A configuration is maximal when no further candidate assignment is
/// compatible with it (single-use entanglements, per-commodity caps). The
/// result is sorted lexicographically and always nonempty: with no
/// servable candidate the unique maximal configuration is the empty one.
pub fn feasible_configurations(
    state: &SlotState,
    topology: &Topology,
    commodities: &[Commodity],
    paths: &CandidatePaths,
    caps: ServiceCaps<'_>,
    min_service_fidelity: Option<f64>,
    budget: &EnumerationBudget,
) -> Result<Vec<ServiceConfiguration>> {
    let candidates =
        candidate_assignments(state, topology, commodities, paths, caps, min_service_fidelity, budget)?;
    let mut search = MaximalSearch {
        candidates: &candidates,
        caps: &caps,
        budget,
        nodes: 0,
        out: Vec::new(),
    };
    let mut chosen = Vec::new();
    let mut used = BTreeSet::new();
    let mut counts = vec![0u64; commodities.len()];
    search.dfs(0, &mut chosen, &mut used, &mut counts)?;
    let mut configs = search.out;
    configs.sort();
    Ok(configs)
}

struct MaximalSearch<'a> {
    candidates: &'a [Assignment],
    caps: &'a ServiceCaps<'a>,
    budget: &'a EnumerationBudget,
    nodes: u64,
    out: Vec<ServiceConfiguration>,
}

impl MaximalSearch<'_> {
    fn compatible(&self, a: &Assignment, used: &BTreeSet<LleId>, counts: &[u64]) -> bool {
        counts[a.commodity] < self.caps.cap(a.commodity)
            && a.lle_ids.iter().all(|id| !used.contains(id))
    }

    fn dfs(
        &mut self,
        index: usize,
        chosen: &mut Vec<usize>,
        used: &mut BTreeSet<LleId>,
        counts: &mut Vec<u64>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::Budget(format!(
                "configuration search exceeded {} nodes",
                self.budget.max_nodes
            )));
        }
        if index == self.candidates.len() {
            let maximal = (0..self.candidates.len())
                .filter(|i| !chosen.contains(i))
                .all(|i| !self.compatible(&self.candidates[i], used, counts));
            if maximal {
                self.out.push(ServiceConfiguration::new(
                    chosen.iter().map(|&i| self.candidates[i].clone()).collect(),
                ));
            }
            return Ok(());
        }
        let a = &self.candidates[index];
        if self.compatible(a, used, counts) {
            chosen.push(index);
            for &id in &a.lle_ids {
                used.insert(id);
            }
            counts[a.commodity] += 1;
            self.dfs(index + 1, chosen, used, counts)?;
            counts[a.commodity] -= 1;
            for &id in &a.lle_ids {
                used.remove(&id);
            }
            chosen.pop();
        }
        self.dfs(index + 1, chosen, used, counts)?;
        Ok(())
    }
}
