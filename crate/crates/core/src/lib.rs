//! Round-synchronous CONGEST-model simulator together with the distance
//! approximation algorithms and lower-bound gadget constructions built on it.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] - graph type, text format, and exact sequential oracles
//! * [`gen`] - seeded random graph generators used by tests and the CLI
//! * [`sim`] - the synchronous message-passing engine and tree aggregation
//! * [`primitives`] - distributed building blocks (BFS, multi-source BFS,
//!   farthest-node election, closest-set selection, SSSP engines)
//! * [`pseudo_center`] - pseudo-center construction and eccentricity
//!   over-estimates for weighted digraphs
//! * [`cairo`] - sampling-based all-eccentricity under-estimates for
//!   unweighted graphs
//! * [`bichromatic`] - two-sided diameter estimates over an S/T partition
//! * [`gadgets`] - communication-complexity gadget graphs and their verifier

pub mod bichromatic;
pub mod cairo;
pub mod gadgets;
pub mod gen;
pub mod graph;
pub mod primitives;
pub mod pseudo_center;
pub mod sim;

pub use graph::{Dist, Direction, Graph, GraphError, NodeId, StPartition, Weight};
pub use sim::{Mode, RunReport, SimConfig};
