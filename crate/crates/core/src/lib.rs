//! Source localization of SI epidemics from sparse first-infection timestamps.
//!
//! The crate covers graph generation and I/O, diffusion simulation, single
//! source estimators built on Gromov matrices, multi-source clustering
//! heuristics, and a seeded benchmark harness.

pub mod diffusion;
pub mod error;
pub mod evaluation;
mod fsutil;
pub mod graph;
pub mod gromov;
pub mod multi_source;
pub mod observations;
pub mod par;
pub mod single_source;

pub use error::{Error, Result};
pub use graph::{BfsOrder, Graph, SpanningTree};
pub use observations::Observations;
