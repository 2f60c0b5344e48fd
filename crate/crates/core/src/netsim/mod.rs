//! Discrete-time network control model.
//!
//! Time is slotted. Every slot runs a fixed phase order:
//!
//! 1. decay all live link-level entanglements by one slot and discard those
//!    that reached the cutoff age;
//! 2. attempt to generate one fresh entanglement per edge (Bernoulli
//!    `p_gen`), subject to per-node memory capacity, edges in list order;
//! 3. draw request arrivals into the per-commodity queues (Bernoulli rate);
//! 4. ask the policy for a service configuration;
//! 5. validate the configuration and apply it — consume the assigned
//!    entanglements, decrement queues, record delivered fidelities. An
//!    infeasible configuration is rejected whole (counted, never repaired)
//!    and the slot serves nothing;
//! 6. append a metrics record.
//!
//! Fresh entanglements can serve requests that arrived in the same slot, so
//! a cutoff age of 1 ("no entanglement survives a slot boundary") still
//! admits useful service.

mod metrics;
mod service;
mod topology;

pub use metrics::{Metrics, SlotRecord, Summary};
pub use service::{
    candidate_assignments, feasible_configurations, validate_configuration, Assignment,
    EnumerationBudget, Lle, LleId, ServiceCaps, ServiceConfiguration,
};
pub use topology::{
    validate_commodities, CandidatePaths, Commodity, Edge, EdgeId, Node, NodeId, NodeRole, Path,
    Topology,
};

use crate::control::{Policy, PolicyContext};
use crate::error::{Error, Result};
use crate::model::{self, FidelityParams};
use crate::rng::{substream, SimRng, STREAM_ENV, STREAM_POLICY};
use rand::Rng;

/// Simulation parameters shared by every slot.
#[derive(Debug, Clone)]
pub struct SimParams {
    pub fidelity: FidelityParams,
    /// Reject assignments whose delivered fidelity would fall below this.
    pub min_service_fidelity: Option<f64>,
    /// Hop cap for precomputed candidate paths.
    pub max_path_hops: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            fidelity: FidelityParams::ideal(),
            min_service_fidelity: None,
            max_path_hops: 6,
        }
    }
}

/// Mutable per-slot state: live entanglements and request backlogs.
#[derive(Debug, Clone)]
pub struct SlotState {
    slot: u64,
    /// Live entanglements, ascending by id.
    lles: Vec<Lle>,
    /// Request backlog per commodity position.
    queues: Vec<u64>,
    next_lle_id: u64,
}

impl SlotState {
    pub fn empty(num_commodities: usize) -> Self {
        SlotState {
            slot: 0,
            lles: Vec::new(),
            queues: vec![0; num_commodities],
            next_lle_id: 0,
        }
    }

    /// Build a state snapshot with the given entanglements and queues
    /// (primarily for feasibility analysis and tests).
    pub fn with_lles(slot: u64, lles: Vec<Lle>, queues: Vec<u64>) -> Result<Self> {
        let mut ids = std::collections::BTreeSet::new();
        for l in &lles {
            if !ids.insert(l.id) {
                return Err(Error::Usage(format!("duplicate entanglement id {:?}", l.id)));
            }
        }
        let next = lles.iter().map(|l| l.id.0 + 1).max().unwrap_or(0);
        let mut lles = lles;
        lles.sort_by_key(|l| l.id);
        Ok(SlotState { slot, lles, queues, next_lle_id: next })
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn live_lles(&self) -> &[Lle] {
        &self.lles
    }

    pub fn queues(&self) -> &[u64] {
        &self.queues
    }

    pub fn lle(&self, id: LleId) -> Option<&Lle> {
        self.lles
            .binary_search_by_key(&id, |l| l.id)
            .ok()
            .map(|i| &self.lles[i])
    }

    pub fn lles_on_edge(&self, edge: EdgeId) -> impl Iterator<Item = &Lle> {
        self.lles.iter().filter(move |l| l.edge == edge)
    }

    /// Entangled-qubit endpoints currently held at `node`.
    pub fn endpoints_at(&self, node: NodeId, topology: &Topology) -> u64 {
        self.lles
            .iter()
            .filter(|l| topology.edge(l.edge).touches(node))
            .count() as u64
    }
}

/// Run one slot. Returns the per-slot metrics record.
///
/// Policy errors (for example an exceeded enumeration budget without a
/// fallback) abort the run; an infeasible configuration does not.
pub fn step(
    state: &mut SlotState,
    topology: &Topology,
    commodities: &[Commodity],
    params: &SimParams,
    paths: &CandidatePaths,
    policy: &mut dyn Policy,
    env_rng: &mut SimRng,
    policy_rng: &mut SimRng,
) -> Result<SlotRecord> {
    let slot = state.slot;
    let mut record = SlotRecord::new(slot, commodities.len());

    // Phase 1: decay and expire.
    for lle in &mut state.lles {
        lle.fidelity = model::decay(lle.fidelity, 1.0, &params.fidelity)
            .expect("live fidelity stays in range");
    }
    if let Some(cutoff) = params.fidelity.cutoff_age {
        let before = state.lles.len();
        state.lles.retain(|l| l.age(slot) < u64::from(cutoff));
        record.lles_expired = (before - state.lles.len()) as u64;
    }

    // Phase 2: generation, subject to memory capacity. The Bernoulli draw
    // happens for every edge so the stream stays aligned regardless of the
    // capacity-filter outcome.
    for (i, edge) in topology.edges().iter().enumerate() {
        let hit = env_rng.gen::<f64>() < edge.p_gen;
        if !hit {
            continue;
        }
        let room = [edge.a, edge.b].iter().all(|&n| match topology.node(n).memory {
            None => true,
            Some(cap) => state.endpoints_at(n, topology) < u64::from(cap),
        });
        if !room {
            record.lles_blocked += 1;
            continue;
        }
        state.lles.push(Lle {
            id: LleId(state.next_lle_id),
            edge: EdgeId(i),
            created_slot: slot,
            fidelity: edge.f0,
        });
        state.next_lle_id += 1;
        record.lles_generated += 1;
    }

    // Phase 3: arrivals.
    for (ci, c) in commodities.iter().enumerate() {
        if env_rng.gen::<f64>() < c.rate {
            state.queues[ci] += 1;
            record.arrivals[ci] = 1;
        }
    }

    // Phase 4: decide.
    let ctx = PolicyContext { state, topology, commodities, paths, params };
    let config = policy.decide(&ctx, policy_rng)?;

    // Phase 5: validate and apply.
    match validate_configuration(&config, state, topology, commodities, params.min_service_fidelity) {
        Err(_) => record.violation = true,
        Ok(()) => {
            for a in &config.assignments {
                let fidelities: Vec<f64> = a
                    .lle_ids
                    .iter()
                    .map(|&id| state.lle(id).expect("validated as live").fidelity)
                    .collect();
                let delivered = model::chain_fidelity(&fidelities).expect("validated fidelities");
                state.lles.retain(|l| !a.lle_ids.contains(&l.id));
                state.queues[a.commodity] -= 1;
                record.services[a.commodity] += 1;
                record.delivered_fidelity_sum += delivered;
                record.delivered_count += 1;
                record.lles_consumed += a.lle_ids.len() as u64;
            }
        }
    }

    // Phase 6: close out the slot.
    record.queues.copy_from_slice(&state.queues);
    record.live_lles = state.lles.len() as u64;
    state.slot += 1;
    Ok(record)
}

/// Fold [`step`] over `horizon` slots from the empty initial state.
///
/// Identical `(topology, commodities, params, policy, horizon, seed)`
/// inputs produce bit-identical metrics.
pub fn run(
    topology: &Topology,
    commodities: &[Commodity],
    params: &SimParams,
    policy: &mut dyn Policy,
    horizon: u64,
    seed: u64,
) -> Result<Metrics> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1 slot".into()));
    }
    validate_commodities(topology, commodities)?;
    let paths = CandidatePaths::build(topology, commodities, params.max_path_hops);
    let mut env_rng = substream(seed, STREAM_ENV);
    let mut policy_rng = substream(seed, STREAM_POLICY);
    let mut state = SlotState::empty(commodities.len());
    let mut metrics = Metrics::new(commodities.iter().map(|c| c.id).collect(), horizon as usize);
    for _ in 0..horizon {
        let record = step(
            &mut state,
            topology,
            commodities,
            params,
            &paths,
            policy,
            &mut env_rng,
            &mut policy_rng,
        )?;
        metrics.push(record);
    }
    debug_assert!(metrics.verify_conservation().is_ok());
    Ok(metrics)
}
