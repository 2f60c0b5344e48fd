//! Quantum network control simulator.
//!
//! The crate is organised in two layers. The bottom layer is an exact
//! simulation kernel for small quantum registers ([`kernel`]) together with
//! gate-level implementations of the network primitives built on it
//! ([`protocols`]): Bell-state measurement, entanglement swapping,
//! teleportation, E91 key distribution and BBPSSW distillation.
//!
//! The top layer is a discrete-time network control model: a scalar Werner
//! fidelity algebra ([`model`]), a slotted multi-hop simulator with
//! link-level entanglement generation and request queues ([`netsim`]), and
//! scheduling policies plus a capacity-region estimator ([`control`]).
//! Every closed-form expression used by the top layer is validated against
//! the exact kernel in the test suite.
//!
//! All randomness flows through explicitly seeded [`rng::SimRng`] streams;
//! identical seeds produce bit-identical results.

pub mod control;
pub mod error;
pub mod kernel;
pub mod model;
pub mod netsim;
pub mod protocols;
pub mod rng;

pub use error::{Error, Result};
