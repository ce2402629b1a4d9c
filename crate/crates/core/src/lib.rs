//! Wireless link scheduling as maximum weight independent set, solved with
//! a simulated QAOA loop and scored against classical baselines.
//!
//! The pipeline is: [`graph`] instances, [`ising`] compilation of the
//! penalised objective into a diagonal Hamiltonian, [`simulator`] state
//! evolution, [`optimizer`] parameter search and sample extraction, and
//! [`bench`] batch experiments with the η = found / optimal weight ratio.

pub mod bench;
pub mod error;
pub mod graph;
pub mod ising;
pub mod mwis;
pub mod optimizer;
pub mod simulator;

pub use error::{Error, Result};
pub use graph::{generate_random_graph, ConflictGraph, GraphGenConfig};
pub use mwis::{LinkSchedule, OptResult};
pub use simulator::{EnergyTable, QaoaParams, StateVector};
