//! Single-excitation state-transfer dynamics.
//!
//! The excitation starts as a microwave photon in the LC circuit and moves
//! through the phonon into the emitter, which radiates into a discretised
//! free-space continuum. Two views are provided: the closed three-level
//! evolution without any loss, and the open conditional-Hamiltonian model
//! integrated with a fixed-step fourth-order Runge–Kutta scheme.

mod closed;
mod integrate;
mod system;

pub use closed::{closed_evolution, ClosedEvolution};
pub use integrate::{
    default_step, evolve, evolve_with_step, step, summarize, time_to_fidelity, Propagator,
    RunSummary, Sample, Trajectory,
};
pub use system::{
    build_transfer_system, Discretization, TransferRates, TransferState, TransferSystem,
};
