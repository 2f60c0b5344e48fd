//! Entanglement-based key distribution (E91).
//!
//! Each round distributes one entangled pair; both parties measure in
//! independently chosen random bases. Rounds measured in the same basis are
//! sifted, a disclosed subset estimates the error rate, and the rest become
//! the key. All bases are disclosed (that is what identifies the same-basis
//! rounds); outcomes are disclosed only for the test subset.

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::{bell_pair, make_werner, MeasurementBasis};

/// Eavesdropper model applied to the flying qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eavesdropper {
    None,
    /// Measure every round in a uniformly random basis from the protocol's
    /// basis set and forward the collapsed eigenstate.
    InterceptResend,
}

/// Session parameters.
#[derive(Debug, Clone)]
pub struct E91Config {
    /// Number of entangled pairs to distribute.
    pub pairs: usize,
    /// Bases both parties sample from, uniformly and independently.
    pub bases: Vec<MeasurementBasis>,
    /// Fraction of sifted rounds disclosed for error estimation.
    pub test_fraction: f64,
    /// Abort when the estimated error rate exceeds this threshold.
    pub abort_threshold: f64,
    pub eavesdropper: Eavesdropper,
}

impl E91Config {
    /// Z/X bases, 20% test disclosure, 5% abort threshold, no eavesdropper.
    pub fn new(pairs: usize) -> Self {
        E91Config {
            pairs,
            bases: vec![MeasurementBasis::Z, MeasurementBasis::X],
            test_fraction: 0.2,
            abort_threshold: 0.05,
            eavesdropper: Eavesdropper::None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.pairs == 0 {
            return Err(Error::Config("session needs at least one pair".into()));
        }
        if self.bases.len() < 2 {
            return Err(Error::Config("basis set needs at least two bases".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config(format!(
                "test fraction {} outside (0, 1)",
                self.test_fraction
            )));
        }
        if !(0.0..1.0).contains(&self.abort_threshold) {
            return Err(Error::Config(format!(
                "abort threshold {} outside [0, 1)",
                self.abort_threshold
            )));
        }
        Ok(())
    }
}

/// Outcome of a session.
#[derive(Debug, Clone)]
pub struct E91Result {
    pub key_alice: Vec<u8>,
    pub key_bob: Vec<u8>,
    /// Mismatch fraction on the disclosed test subset.
    pub qber_estimate: f64,
    pub aborted: bool,
    pub sifted_count: usize,
    pub tested_count: usize,
}

/// Run a session over a channel delivering Werner pairs at
/// `channel_fidelity`.
///
/// Perfect-fidelity pairs take the pure-state path, so with no eavesdropper
/// the error rate is exactly zero; noisy pairs run on the density-matrix
/// kernel.
pub fn e91_run<R: Rng>(cfg: &E91Config, channel_fidelity: f64, rng: &mut R) -> Result<E91Result> {
    cfg.validate()?;
    if !(0.25..=1.0).contains(&channel_fidelity) {
        return Err(Error::Domain(format!(
            "channel fidelity {channel_fidelity} outside [1/4, 1]"
        )));
    }

    let nbases = cfg.bases.len();
    let mut alice_bits = Vec::with_capacity(cfg.pairs);
    let mut bob_bits = Vec::with_capacity(cfg.pairs);
    let mut sifted: Vec<usize> = Vec::new();

    for round in 0..cfg.pairs {
        let a_basis = rng.gen_range(0..nbases);
        let b_basis = rng.gen_range(0..nbases);
        let eve_basis = match cfg.eavesdropper {
            Eavesdropper::None => None,
            Eavesdropper::InterceptResend => Some(rng.gen_range(0..nbases)),
        };

        let (a_bit, b_bit) = if channel_fidelity == 1.0 {
            let mut pair = bell_pair();
            if let Some(e) = eve_basis {
                // Collapsing the flying qubit is exactly an intercept-resend:
                // the post-measurement state is the re-prepared eigenstate.
                pair.measure(1, cfg.bases[e], rng)?;
            }
            let a = pair.measure(0, cfg.bases[a_basis], rng)?;
            let b = pair.measure(1, cfg.bases[b_basis], rng)?;
            (a, b)
        } else {
            let mut pair = make_werner(channel_fidelity)?;
            if let Some(e) = eve_basis {
                pair.measure(1, cfg.bases[e], rng)?;
            }
            let a = pair.measure(0, cfg.bases[a_basis], rng)?;
            let b = pair.measure(1, cfg.bases[b_basis], rng)?;
            (a, b)
        };

        alice_bits.push(a_bit);
        bob_bits.push(b_bit);
        if a_basis == b_basis {
            sifted.push(round);
        }
    }

    let sifted_count = sifted.len();
    let tested_count = (cfg.test_fraction * sifted_count as f64).floor() as usize;
    if tested_count == 0 {
        return Err(Error::Protocol(format!(
            "{} pairs left {} sifted rounds; too few to populate a test subset at fraction {}",
            cfg.pairs, sifted_count, cfg.test_fraction
        )));
    }

    // Choose the disclosed subset by a seeded partial shuffle.
    let mut order: Vec<usize> = (0..sifted_count).collect();
    for i in 0..tested_count {
        let j = rng.gen_range(i..sifted_count);
        order.swap(i, j);
    }
    let mut is_test = vec![false; sifted_count];
    for &i in &order[..tested_count] {
        is_test[i] = true;
    }

    let mismatches = order[..tested_count]
        .iter()
        .filter(|&&i| alice_bits[sifted[i]] != bob_bits[sifted[i]])
        .count();
    let qber_estimate = mismatches as f64 / tested_count as f64;
    let aborted = qber_estimate > cfg.abort_threshold;

    let (key_alice, key_bob) = if aborted {
        (Vec::new(), Vec::new())
    } else {
        let mut ka = Vec::with_capacity(sifted_count - tested_count);
        let mut kb = Vec::with_capacity(sifted_count - tested_count);
        for (i, &round) in sifted.iter().enumerate() {
            if !is_test[i] {
                ka.push(alice_bits[round]);
                kb.push(bob_bits[round]);
            }
        }
        (ka, kb)
    };

    Ok(E91Result {
        key_alice,
        key_bob,
        qber_estimate,
        aborted,
        sifted_count,
        tested_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn config_validation() {
        let mut rng = seeded(1);
        let mut cfg = E91Config::new(0);
        assert!(e91_run(&cfg, 1.0, &mut rng).is_err());
        cfg.pairs = 100;
        cfg.test_fraction = 1.0;
        assert!(e91_run(&cfg, 1.0, &mut rng).is_err());
        cfg.test_fraction = 0.2;
        assert!(e91_run(&cfg, 0.1, &mut rng).is_err());
    }

    #[test]
    fn too_few_pairs_for_test_subset() {
        let mut rng = seeded(3);
        let cfg = E91Config::new(2);
        let err = e91_run(&cfg, 1.0, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Protocol(_)));
    }

    #[test]
    fn perfect_channel_yields_matching_keys() {
        let mut rng = seeded(11);
        let cfg = E91Config::new(2000);
        let res = e91_run(&cfg, 1.0, &mut rng).unwrap();
        assert!(!res.aborted);
        assert_eq!(res.qber_estimate, 0.0);
        assert_eq!(res.key_alice, res.key_bob);
        assert_eq!(res.key_alice.len(), res.sifted_count - res.tested_count);
    }

    #[test]
    fn zero_threshold_does_not_abort_clean_run() {
        let mut rng = seeded(17);
        let mut cfg = E91Config::new(1000);
        cfg.abort_threshold = 0.0;
        let res = e91_run(&cfg, 1.0, &mut rng).unwrap();
        assert!(!res.aborted);
    }
}
