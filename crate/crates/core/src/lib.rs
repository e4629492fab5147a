//! Simulation and resource estimation for the two-tier (hierarchical)
//! surface code running on a network of quantum modules.
//!
//! Layers, bottom up:
//!
//! - [`pauli`]: Pauli algebra, frames and noise channels.
//! - [`topology`]: module grids, client lattices, perimeter and broker
//!   annotations.
//! - [`sim`]: noisy Clifford circuits, frame execution and detector error
//!   models.
//! - [`circuits`]: stabiliser rounds, distributed CNOTs and the module-qubit
//!   stabiliser protocol.
//! - [`purification`]: tiered entanglement purification and raw-pair budgets.
//! - [`matching`]: minimum-weight perfect matching (Edmonds blossom).
//! - [`decoder`]: matching graphs, tier-1 cube decoding and tier-2 decoding.
//! - [`experiments`]: threshold sweeps, scaling fits and qubit-cost reports.

pub mod blocks;
pub mod circuits;
pub mod decoder;
pub mod error;
pub mod experiments;
pub mod matching;
pub mod pauli;
pub mod purification;
pub mod sim;
pub mod tableau;
pub mod topology;

pub use error::{Error, Result};
