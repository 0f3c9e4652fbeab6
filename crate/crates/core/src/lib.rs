//! Biased diffusion on heterogeneous networks.
//!
//! Synthetic power-law networks with tunable degree correlations
//! ([`netgen`]), money-transport dynamics iterated to steady state
//! ([`transport`]), annealed mean-field predictions ([`meanfield`]), and the
//! log-binned measurements used to compare them ([`stats`]). [`pipeline`]
//! chains them into reproducible experiment runs.

pub mod error;
pub mod formats;
pub mod graph;
pub mod meanfield;
pub mod netgen;
pub mod pipeline;
pub mod sampler;
pub mod stats;
pub mod transport;

pub use error::{Error, Result};
