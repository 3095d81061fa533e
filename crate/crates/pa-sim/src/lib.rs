//! Link-level Monte Carlo simulator for predictor-antenna (PA) moving-relay
//! backhaul: prediction-horizon kinematics, spatially correlated channel
//! models, beamforming mispointing, outage-optimal rate adaptation and
//! multi-wagon satellite pairing, with a deterministic experiment runner.

// Validation sites use `!(v > 0.0)` on purpose: the negation also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beamforming;
pub mod channel;
pub mod error;
pub mod kinematics;
pub mod link;
pub mod math;
pub mod runner;
pub mod train;

pub use error::{Result, SimError};
