//! Gate-level network primitives on the exact kernel.
//!
//! These run the real circuits — Bell-state measurement, entanglement
//! swapping, teleportation, the E91 session and BBPSSW distillation — and
//! serve as ground truth for the scalar fidelity algebra in [`crate::model`].

mod distill;
mod e91;
mod swap;
mod teleport;

pub use distill::{distill_analysis, distill_bbpssw, DistillAnalysis};
pub use e91::{e91_run, E91Config, E91Result, Eavesdropper};
pub use swap::{bsm, entanglement_swap, swap_circuit, swap_werner, BsmOutcome, SwapCircuitReport, SwapResult};
pub use teleport::{pre_correction_mixture, teleport, teleport_branches, TeleportBranch};
