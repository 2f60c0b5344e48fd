//! Crate-wide error type.

/// Errors produced by the simulator.
///
/// The variants mirror the failure classes surfaced at the CLI: `Usage` and
/// `Domain` indicate bad arguments, `Config` a rejected configuration,
/// `Protocol` a run that cannot proceed, `Budget` an enumeration that
/// exceeded its combinatorial budget, and `Unsupported` a request outside a
/// component's validity regime.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported regime: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
