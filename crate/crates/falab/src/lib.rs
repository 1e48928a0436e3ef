//! Fuzzy-aware loss laboratory.
//!
//! A desk-scale numerical lab around the fuzzy-aware loss (FAL) family:
//! the losses themselves with analytic logit gradients, a minimal
//! feed-forward classifier, a source-free adaptation pipeline driven by
//! pseudo-labels and memory-bank class weights, label-noise machinery
//! that verifies the boundedness and risk-gap theory by brute force, and
//! a synthetic domain-shift generator standing in for real benchmark
//! datasets.
//!
//! Everything is seeded and deterministic: the same config and seed
//! reproduce every number bit-exactly.

pub mod cli;
pub mod config;
pub mod datagen;
pub mod error;
pub mod losses;
pub mod mathcore;
pub mod nn;
pub mod noiselab;
pub mod outputs;
pub mod plot;
pub mod sfda;

pub use error::{FalabError, Result};
