//! Single-frame wireless neighbor discovery with on-off signatures.
//!
//! Every node in a large address space is assigned a sparse on-off
//! signature; all nodes transmit simultaneously and each node recovers the
//! set of its neighbors from the superposition it observes through its own
//! off-slots. Two codebook/decoder pairs are provided:
//!
//! * pseudo-random Bernoulli on-off signatures decoded by noncoherent
//!   t-tolerance group testing ([`group_testing`]), and
//! * deterministic second-order Reed-Muller signatures with structured
//!   erasures decoded by an iterative chirp algorithm ([`chirp`]).
//!
//! The [`channel`] module supplies the stochastic-geometry network model
//! (Poisson field, power-law path loss, Rayleigh fading) that both schemes
//! are evaluated on, [`baseline`] the closed-form random-access discovery
//! baseline, and [`experiment`] a deterministic Monte Carlo harness that
//! produces plot-ready CSV/JSON. See the crate examples for runnable entry
//! points into each capability.

pub mod baseline;
pub mod channel;
pub mod chirp;
pub mod config;
pub mod error;
pub mod experiment;
pub mod fwht;
pub mod gf2;
pub mod group_testing;
pub mod lsq;
pub mod metrics;
pub mod numeric;
pub mod random_sig;
pub mod rm;
pub mod rng;

pub use error::{Error, Result};
