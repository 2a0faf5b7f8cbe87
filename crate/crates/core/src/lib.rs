//! Simulation and spatial evaluation of words spreading through a social
//! network of identity-bearing agents.
//!
//! A run seeds a word with its first adopters, derives the identity the word
//! signals from them, and iterates a stochastic adoption process in which an
//! agent's chance of using the word depends on tie strength, identity
//! similarity to the word and to exposing neighbours, stickiness, and
//! novelty. Four variants switch identity and the observed network on and
//! off. The [`geostats`] module turns runs into county maps and county-to-county
//! pathways and scores them against observed usage.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod calibration;
pub mod cli;
pub mod engine;
pub mod error;
pub mod geostats;
pub mod identity;
pub mod io;
pub mod network;
pub mod rng;

pub use error::{Error, Result};
