//! Simulation of a microwave-to-optical quantum transducer built around a
//! single-photon emitter hosted in an atomically thin membrane resonator.
//!
//! * [`mechanics`]: flexural frequency, force balance and zero-point motion
//! * [`circuit`]: LC resonator and electromechanical coupling
//! * [`coupling`]: strain/Stark optomechanical coupling and thermal factors
//! * [`device`]: composes the three into a device evaluated at a bias
//! * [`dynamics`]: single-excitation transfer dynamics
//! * [`harness`]: configuration, parameter sweeps and tabular output

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod constants;
pub mod coupling;
pub mod device;
pub mod dynamics;
mod error;
pub mod harness;
pub mod mechanics;

pub use error::{Error, Result};
