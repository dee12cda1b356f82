//! Dynamics and stability analysis of a sail levitated on a Gaussian laser beam.
//!
//! The crate models the sail as a rigid body whose surface is a revolved
//! sweep curve, computes radiation force and torque by ray casting, closes a
//! Lyapunov-based height loop, and estimates the region of attraction of the
//! remaining transverse and attitude dynamics. See the `examples/` directory
//! for one runnable program per capability.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod poly;
pub mod radiation;
pub mod roa;
pub mod stability;
pub mod svg;

pub use error::{Result, SailError};
