use thiserror::Error;

/// Errors raised by layout construction, schedule generation, purification
/// budgeting, decoding and fitting.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("qubit {qubit} out of range for a frame of {len} qubits")]
    QubitIndex { qubit: usize, len: usize },

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("incomplete measurement record: {0}")]
    IncompleteRecord(String),

    #[error("purification acceptance probability is zero at tier {tier}")]
    DegenerateChannel { tier: usize },

    #[error("success probability {target} not reachable within a budget of {cap} raw pairs")]
    BudgetUnreachable { target: f64, cap: usize },

    #[error("matching problem is infeasible: {0}")]
    Infeasible(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("zero trials requested")]
    ZeroTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
