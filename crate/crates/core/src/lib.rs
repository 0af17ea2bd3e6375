//! Cooperative multi-agent bandits with threshold-activated rewards.
//!
//! Arms pay only when enough agents pull them in the same round, and some arms
//! are decoys that activate but never pay. The crate provides the environment
//! ([`env`]), five action-selection policies ([`policies`]), evaluation
//! metrics ([`metrics`]) and a seeded, reproducible experiment harness
//! ([`experiment`]).
//!
//! Independent runs execute on rayon when the default `parallel` feature is
//! enabled; without it they run sequentially with identical results.

pub mod env;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod policies;

pub use env::{ArmSpec, EnvironmentSpec, JointAction, RoundOutcome};
pub use error::{Error, Result};
