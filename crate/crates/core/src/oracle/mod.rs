//! Brute-force ground truth on concrete small graphs.

pub mod dynamics;
pub mod graph;
pub mod statevector;

pub use dynamics::{enumerate_threshold_exact, mc_threshold, mc_threshold_lightcone, McEstimate};
pub use graph::{cycle_graph, girth, heawood_graph, load_edge_list, parse_edge_list, Graph};
pub use statevector::{qaoa_statevector_cut_fraction, StateVector};

/// Largest graph the exhaustive oracles accept.
pub const MAX_ORACLE_VERTICES: usize = 24;
