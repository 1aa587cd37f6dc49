//! A complete transducer evaluated at one bias point.

use crate::circuit::{electromechanical_coupling, CircuitParams, ElectromechanicalCoupling};
use crate::coupling::{coupling_set, CouplingSet, Drive, EmitterParams};
use crate::error::Result;
use crate::mechanics::{
    solve_equilibrium, ElectrostaticEnvironment, MembraneGeometry, OperatingPoint,
};

/// Device description in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Device {
    pub geometry: MembraneGeometry,
    pub environment: ElectrostaticEnvironment,
    pub inductance: f64,
    pub quality_factor: f64,
    pub emitter: EmitterParams,
    /// Γ_m (rad/s)
    pub mechanical_damping: f64,
}

/// Everything derived from a [`Device`] at its operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceState {
    pub operating_point: OperatingPoint,
    pub circuit: CircuitParams,
    pub electromechanical: ElectromechanicalCoupling,
    pub couplings: CouplingSet,
}

impl Device {
    /// Solves the equilibrium at the configured bias and evaluates all couplings.
    pub fn evaluate(&self, drive: &Drive, temperature: f64) -> Result<DeviceState> {
        let op = solve_equilibrium(&self.geometry, &self.environment)?;
        self.evaluate_at(op, drive, temperature)
    }

    /// Evaluates couplings at a given operating point, e.g. a prescribed deflection.
    pub fn evaluate_at(
        &self,
        op: OperatingPoint,
        drive: &Drive,
        temperature: f64,
    ) -> Result<DeviceState> {
        let circuit = CircuitParams::resonance_matched(
            &self.geometry,
            &self.environment,
            &op,
            self.inductance,
            self.quality_factor,
        )?;
        let em = electromechanical_coupling(&op, &circuit, &self.geometry)?;
        let couplings = coupling_set(
            &op,
            &self.geometry,
            &self.environment,
            &self.emitter,
            em.rate,
            circuit.damping_rate(),
            circuit.lc_frequency,
            self.mechanical_damping,
            drive,
            temperature,
        )?;
        Ok(DeviceState {
            operating_point: op,
            circuit,
            electromechanical: em,
            couplings,
        })
    }
}
