//! Replicator dynamics of 2×2 bi-matrix games in classical and
//! Marinatto–Weber quantized form.
//!
//! The crate is organized bottom-up:
//!
//! - [`game`]: games, initial-state weights and the quantized payoff matrices.
//! - [`dynamics`]: the planar replicator field, the n-strategy field and an RK4 integrator.
//! - [`stability`]: rest points, linearization, eigenvalues and classification.
//! - [`ess`]: strict-NE (ESS) margins at the corner (1, 0) and classical/quantum comparison.
//! - [`scenarios`]: the three worked case studies and a simplex scan for stability flips.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod ess;
pub mod game;
pub mod scenarios;
pub mod stability;

pub use error::{Error, Result};
