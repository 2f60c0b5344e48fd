//! Per-slot metrics and run summaries.

use serde::Serialize;

use crate::error::{Error, Result};

/// Everything recorded about one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    pub slot: u64,
    /// Requests that arrived this slot, per commodity (0 or 1 under
    /// Bernoulli arrivals).
    pub arrivals: Vec<u64>,
    /// Requests served this slot, per commodity.
    pub services: Vec<u64>,
    /// Backlog at the end of the slot, per commodity.
    pub queues: Vec<u64>,
    pub lles_generated: u64,
    /// Generation attempts dropped by memory capacity.
    pub lles_blocked: u64,
    pub lles_expired: u64,
    pub lles_consumed: u64,
    /// Live entanglements at the end of the slot.
    pub live_lles: u64,
    /// The policy returned an infeasible configuration this slot.
    pub violation: bool,
    /// Sum of delivered end-to-end fidelities over served requests.
    pub delivered_fidelity_sum: f64,
    pub delivered_count: u64,
}

impl SlotRecord {
    pub(crate) fn new(slot: u64, num_commodities: usize) -> Self {
        SlotRecord {
            slot,
            arrivals: vec![0; num_commodities],
            services: vec![0; num_commodities],
            queues: vec![0; num_commodities],
            lles_generated: 0,
            lles_blocked: 0,
            lles_expired: 0,
            lles_consumed: 0,
            live_lles: 0,
            violation: false,
            delivered_fidelity_sum: 0.0,
            delivered_count: 0,
        }
    }
}

/// Full per-slot time series of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub commodity_ids: Vec<u32>,
    pub records: Vec<SlotRecord>,
}

impl Metrics {
    pub(crate) fn new(commodity_ids: Vec<u32>, capacity: usize) -> Self {
        Metrics { commodity_ids, records: Vec::with_capacity(capacity) }
    }

    pub(crate) fn push(&mut self, record: SlotRecord) {
        self.records.push(record);
    }

    pub fn horizon(&self) -> u64 {
        self.records.len() as u64
    }

    /// Check the queue recursion and entanglement bookkeeping on every
    /// slot: `Q(t+1) = Q(t) + A(t) − S(t)` per commodity, and
    /// `live(t) = live(t−1) + generated − expired − consumed`.
    pub fn verify_conservation(&self) -> Result<()> {
        let k = self.commodity_ids.len();
        let mut queues = vec![0u64; k];
        let mut live = 0u64;
        for r in &self.records {
            for c in 0..k {
                let available = queues[c] + r.arrivals[c];
                if r.services[c] > available {
                    return Err(Error::Protocol(format!(
                        "slot {}: commodity {} served {} with only {} available",
                        r.slot, self.commodity_ids[c], r.services[c], available
                    )));
                }
                let expected = available - r.services[c];
                if r.queues[c] != expected {
                    return Err(Error::Protocol(format!(
                        "slot {}: commodity {} queue {} != {} expected",
                        r.slot, self.commodity_ids[c], r.queues[c], expected
                    )));
                }
                queues[c] = r.queues[c];
            }
            let removed = r.lles_expired + r.lles_consumed;
            if live + r.lles_generated < removed || r.live_lles != live + r.lles_generated - removed {
                return Err(Error::Protocol(format!(
                    "slot {}: live entanglement count {} does not match the bookkeeping",
                    r.slot, r.live_lles
                )));
            }
            live = r.live_lles;
        }
        Ok(())
    }

    pub fn total_arrivals(&self) -> Vec<u64> {
        self.per_commodity_total(|r, c| r.arrivals[c])
    }

    pub fn total_services(&self) -> Vec<u64> {
        self.per_commodity_total(|r, c| r.services[c])
    }

    pub fn final_queues(&self) -> Vec<u64> {
        self.records
            .last()
            .map(|r| r.queues.clone())
            .unwrap_or_else(|| vec![0; self.commodity_ids.len()])
    }

    pub fn total_violations(&self) -> u64 {
        self.records.iter().filter(|r| r.violation).count() as u64
    }

    /// Total backlog per slot, summed over commodities.
    pub fn total_queue_series(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.queues.iter().sum()).collect()
    }

    fn per_commodity_total(&self, f: impl Fn(&SlotRecord, usize) -> u64) -> Vec<u64> {
        let k = self.commodity_ids.len();
        let mut totals = vec![0u64; k];
        for r in &self.records {
            for (c, t) in totals.iter_mut().enumerate() {
                *t += f(r, c);
            }
        }
        totals
    }

    pub fn summary(&self) -> Summary {
        let horizon = self.horizon();
        let k = self.commodity_ids.len();
        let arrivals = self.total_arrivals();
        let services = self.total_services();
        let mut mean_queues = vec![0.0; k];
        for r in &self.records {
            for c in 0..k {
                mean_queues[c] += r.queues[c] as f64;
            }
        }
        for q in &mut mean_queues {
            *q /= horizon.max(1) as f64;
        }
        let delivered: f64 = self.records.iter().map(|r| r.delivered_fidelity_sum).sum();
        let count: u64 = self.records.iter().map(|r| r.delivered_count).sum();
        Summary {
            horizon,
            commodity_ids: self.commodity_ids.clone(),
            arrivals,
            services: services.clone(),
            final_queues: self.final_queues(),
            mean_queues,
            throughput: services.iter().map(|&s| s as f64 / horizon.max(1) as f64).collect(),
            lles_generated: self.records.iter().map(|r| r.lles_generated).sum(),
            lles_blocked: self.records.iter().map(|r| r.lles_blocked).sum(),
            lles_expired: self.records.iter().map(|r| r.lles_expired).sum(),
            lles_consumed: self.records.iter().map(|r| r.lles_consumed).sum(),
            violations: self.total_violations(),
            mean_delivered_fidelity: if count == 0 { None } else { Some(delivered / count as f64) },
            delivered_count: count,
        }
    }
}

/// Aggregates of one run, serialisable as the JSON summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub horizon: u64,
    pub commodity_ids: Vec<u32>,
    pub arrivals: Vec<u64>,
    pub services: Vec<u64>,
    pub final_queues: Vec<u64>,
    pub mean_queues: Vec<f64>,
    pub throughput: Vec<f64>,
    pub lles_generated: u64,
    pub lles_blocked: u64,
    pub lles_expired: u64,
    pub lles_consumed: u64,
    pub violations: u64,
    pub mean_delivered_fidelity: Option<f64>,
    pub delivered_count: u64,
}
