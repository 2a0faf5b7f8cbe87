//! Discrete-time stochastic spread of one word through the agent graph.

mod adopters;
mod config;
mod log;
mod simulation;

pub use adopters::sample_initial_adopters;
pub use config::{Mode, SimulationConfig};
pub use log::{AdoptionLog, IterationRecord, Termination};
pub use simulation::{
    novelty, run, seed_simulation, Networks, PreparedWord, Simulation, SimulationState,
};
