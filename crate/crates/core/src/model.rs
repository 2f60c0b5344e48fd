//! Scalar fidelity algebra for Werner pairs.
//!
//! The network layer never carries full density matrices; a link-level
//! entanglement is summarised by a single fidelity in `[1/4, 1]`. The three
//! closed forms here — decay over idle slots, composition under swapping,
//! and the BBPSSW distillation recurrence — are each validated against the
//! exact density-matrix evaluation in the test suite.

use crate::error::{Error, Result};

/// Fidelity of the maximally mixed two-qubit state; the fixed point of
/// decay, swapping and distillation.
pub const FIDELITY_FLOOR: f64 = 0.25;

/// Slack accepted on fidelity range checks, for values produced by chained
/// floating-point arithmetic.
const RANGE_EPS: f64 = 1e-9;

/// Decoherence and lifetime parameters for link-level entanglements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityParams {
    /// Exponential decay constant in slots; `f64::INFINITY` disables decay.
    pub coherence_time: f64,
    /// Age in slots at which an entanglement is discarded; `None` keeps
    /// entanglements until consumed.
    pub cutoff_age: Option<u32>,
}

impl FidelityParams {
    pub fn new(coherence_time: f64, cutoff_age: Option<u32>) -> Result<Self> {
        if !(coherence_time > 0.0) {
            return Err(Error::Config(format!(
                "coherence time must be positive, got {coherence_time}"
            )));
        }
        if cutoff_age == Some(0) {
            return Err(Error::Config("cutoff age must be at least 1".into()));
        }
        Ok(FidelityParams { coherence_time, cutoff_age })
    }

    /// No decay, no cutoff: entanglements last until consumed.
    pub fn ideal() -> Self {
        FidelityParams { coherence_time: f64::INFINITY, cutoff_age: None }
    }
}

fn check_fidelity(f: f64, what: &str) -> Result<f64> {
    if !f.is_finite() || f < FIDELITY_FLOOR - RANGE_EPS || f > 1.0 + RANGE_EPS {
        return Err(Error::Domain(format!("{what} fidelity {f} outside [1/4, 1]")));
    }
    Ok(f.clamp(FIDELITY_FLOOR, 1.0))
}

/// Fidelity after `elapsed_slots` idle slots under depolarizing decay:
/// `1/4 + (F − 1/4)·exp(−Δ/T)`.
pub fn decay(fidelity: f64, elapsed_slots: f64, params: &FidelityParams) -> Result<f64> {
    let f = check_fidelity(fidelity, "input")?;
    if !(elapsed_slots >= 0.0) {
        return Err(Error::Domain(format!("elapsed slots {elapsed_slots} is negative")));
    }
    Ok(FIDELITY_FLOOR + (f - FIDELITY_FLOOR) * (-elapsed_slots / params.coherence_time).exp())
}

/// Fidelity of the pair produced by swapping two Werner pairs:
/// `F1·F2 + (1 − F1)(1 − F2)/3`.
pub fn swap_fidelity(f1: f64, f2: f64) -> Result<f64> {
    let f1 = check_fidelity(f1, "first")?;
    let f2 = check_fidelity(f2, "second")?;
    Ok(f1 * f2 + (1.0 - f1) * (1.0 - f2) / 3.0)
}

/// Output fidelity and success probability of BBPSSW distillation on two
/// Werner pairs.
///
/// With `x = (1−F1)/3` and `y = (1−F2)/3`:
/// success probability `p = (F1 + x)(F2 + y) + 4xy`, output fidelity
/// `(F1·F2 + xy)/p`.
pub fn distill_fidelity(f1: f64, f2: f64) -> Result<(f64, f64)> {
    let f1 = check_fidelity(f1, "first")?;
    let f2 = check_fidelity(f2, "second")?;
    let x = (1.0 - f1) / 3.0;
    let y = (1.0 - f2) / 3.0;
    let p_success = (f1 + x) * (f2 + y) + 4.0 * x * y;
    let f_out = (f1 * f2 + x * y) / p_success;
    Ok((f_out, p_success))
}

/// Fidelity of an end-to-end pair built by swapping along a chain of links,
/// folded left with [`swap_fidelity`] (which is associative, so the fold
/// order does not matter).
pub fn chain_fidelity(fidelities: &[f64]) -> Result<f64> {
    let (&first, rest) = fidelities
        .split_first()
        .ok_or_else(|| Error::Usage("chain fidelity of an empty link list".into()))?;
    let mut acc = check_fidelity(first, "link")?;
    for &f in rest {
        acc = swap_fidelity(acc, f)?;
    }
    Ok(acc)
}
