//! Connectivity oracles for graphs subject to batched vertex or edge
//! failures: a deterministic oracle built on a low-degree hierarchy, and two
//! Monte Carlo oracles built on XOR graph sketches, all checkable against a
//! brute-force reference.

pub mod error;
pub mod fr;
pub mod graph;
pub mod range_store;

pub use error::{FltoError, Result};
