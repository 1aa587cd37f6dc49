//! Experiment configuration documents.
//!
//! A config is a TOML document with fixed sections. Every key carries its unit
//! in the name (`_nm`, `_mhz`, …); frequencies are ordinary frequencies
//! (the "/2π" values) and are converted to rad/s on load. Unknown keys are
//! rejected.

use serde::Deserialize;
use std::path::PathBuf;

use crate::constants::{
    hz_to_angular, mev_per_mv_per_m_to_angular_per_field, mev_per_percent_to_angular_per_strain,
    wavelength_to_angular, MICRO, MILLI, NANO,
};
use crate::coupling::{Drive, EmitterParams};
use crate::device::Device;
use crate::error::{Error, Result};
use crate::mechanics::{ElectrostaticEnvironment, MembraneGeometry};

/// Bundled parameter set of the reference device and transfer run.
pub const REFERENCE_DEFAULTS: &str = include_str!("../../configs/reference_defaults.toml");

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub length_nm: f64,
    pub width_um: f64,
    pub thickness_nm: f64,
    pub youngs_modulus_gpa: f64,
    #[serde(default = "default_density")]
    pub mass_density_kg_m3: f64,
    pub pre_tension_nn: f64,
    #[serde(default = "default_clamping")]
    pub clamping_coefficient: f64,
}

fn default_density() -> f64 {
    MembraneGeometry::DEFAULT_MASS_DENSITY
}

fn default_clamping() -> f64 {
    MembraneGeometry::DEFAULT_CLAMPING_COEFFICIENT
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitBlock {
    pub gap_nm: f64,
    pub bias_voltage_v: f64,
    pub inductance_uh: f64,
    pub quality_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterBlock {
    pub zpl_wavelength_nm: f64,
    /// κ/2π
    pub optical_decay_mhz: f64,
    pub strain_shift_mev_per_percent: f64,
    pub stark_shift_mev_per_mv_per_m: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveBlock {
    /// Ω/2π
    pub rabi_frequency_mhz: f64,
    /// ω_L/2π; omitted means the red sideband of the emitter.
    #[serde(default)]
    pub laser_frequency_thz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationBlock {
    pub temperature_mk: f64,
    /// Γ_m/2π
    pub mechanical_damping_khz: f64,
    /// Γ_LC/2π; defaults to ω_LC/Q_LC.
    #[serde(default)]
    pub lc_damping_khz: Option<f64>,
    /// Common mechanical/LC frequency for thermal occupations; defaults to the solved ω_m.
    #[serde(default)]
    pub mode_frequency_ghz: Option<f64>,
    /// g_c/2π with g̃_om = g_em = g_c; omitted means couplings derived from the device.
    #[serde(default)]
    pub coupling_mhz: Option<f64>,
    #[serde(default)]
    pub mode_spacing_mhz: Option<f64>,
    #[serde(default)]
    pub mode_count: Option<usize>,
    #[serde(default)]
    pub max_step_ps: Option<f64>,
    pub duration_ns: f64,
    pub sample_interval_ns: f64,
    #[serde(default = "default_threshold")]
    pub fidelity_threshold: f64,
}

fn default_threshold() -> f64 {
    0.95
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Membrane thickness in nm.
    Thickness,
    /// Bias voltage in V.
    BiasVoltage,
    /// Static deflection in nm.
    Displacement,
    /// Temperature in mK.
    Temperature,
    /// κ/2π in MHz, with g_c slaved to κ.
    Kappa,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Thickness => "thickness",
            SweepVariable::BiasVoltage => "bias_voltage",
            SweepVariable::Displacement => "displacement",
            SweepVariable::Temperature => "temperature",
            SweepVariable::Kappa => "kappa",
        }
    }

    pub fn unit(&self) -> &'static str {
        match self {
            SweepVariable::Thickness | SweepVariable::Displacement => "nm",
            SweepVariable::BiasVoltage => "V",
            SweepVariable::Temperature => "mK",
            SweepVariable::Kappa => "MHz",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepBlock {
    /// Evenly spaced points from `start` to `stop` inclusive.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// SHA-256 of the source document, filled in by [`parse_config`].
    #[serde(skip)]
    pub source_hash: String,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub geometry: GeometryBlock,
    pub circuit: CircuitBlock,
    pub emitter: EmitterBlock,
    pub drive: DriveBlock,
    pub simulation: SimulationBlock,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
}

/// Strict parse plus range validation.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg: ExperimentConfig =
        toml::from_str(text).map_err(|e| Error::config(e.to_string().trim_end().to_string()))?;
    cfg.validate()?;
    cfg.source_hash = super::table::config_hash(text);
    Ok(cfg)
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("{field} must be positive, got {v}")))
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!(
            "{field} must be non-negative, got {v}"
        )))
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        positive("geometry.length_nm", g.length_nm)?;
        positive("geometry.width_um", g.width_um)?;
        positive("geometry.thickness_nm", g.thickness_nm)?;
        positive("geometry.youngs_modulus_gpa", g.youngs_modulus_gpa)?;
        positive("geometry.mass_density_kg_m3", g.mass_density_kg_m3)?;
        non_negative("geometry.pre_tension_nn", g.pre_tension_nn)?;
        positive("geometry.clamping_coefficient", g.clamping_coefficient)?;

        let c = &self.circuit;
        positive("circuit.gap_nm", c.gap_nm)?;
        non_negative("circuit.bias_voltage_v", c.bias_voltage_v)?;
        positive("circuit.inductance_uh", c.inductance_uh)?;
        positive("circuit.quality_factor", c.quality_factor)?;

        let e = &self.emitter;
        positive("emitter.zpl_wavelength_nm", e.zpl_wavelength_nm)?;
        positive("emitter.optical_decay_mhz", e.optical_decay_mhz)?;
        if !e.strain_shift_mev_per_percent.is_finite()
            || !e.stark_shift_mev_per_mv_per_m.is_finite()
        {
            return Err(Error::config("emitter shift coefficients must be finite"));
        }

        non_negative("drive.rabi_frequency_mhz", self.drive.rabi_frequency_mhz)?;
        if let Some(f) = self.drive.laser_frequency_thz {
            positive("drive.laser_frequency_thz", f)?;
        }

        let s = &self.simulation;
        non_negative("simulation.temperature_mk", s.temperature_mk)?;
        non_negative(
            "simulation.mechanical_damping_khz",
            s.mechanical_damping_khz,
        )?;
        if let Some(v) = s.lc_damping_khz {
            non_negative("simulation.lc_damping_khz", v)?;
        }
        if let Some(v) = s.mode_frequency_ghz {
            positive("simulation.mode_frequency_ghz", v)?;
        }
        if let Some(v) = s.coupling_mhz {
            non_negative("simulation.coupling_mhz", v)?;
        }
        if let Some(v) = s.mode_spacing_mhz {
            positive("simulation.mode_spacing_mhz", v)?;
        }
        if s.mode_count == Some(0) {
            return Err(Error::config("simulation.mode_count must be at least 1"));
        }
        if let Some(v) = s.max_step_ps {
            positive("simulation.max_step_ps", v)?;
        }
        non_negative("simulation.duration_ns", s.duration_ns)?;
        positive("simulation.sample_interval_ns", s.sample_interval_ns)?;
        if !(s.fidelity_threshold > 0.0 && s.fidelity_threshold < 1.0) {
            return Err(Error::config(format!(
                "simulation.fidelity_threshold must lie in (0, 1), got {}",
                s.fidelity_threshold
            )));
        }

        if let Some(sw) = &self.sweep {
            if sw.steps == 0 {
                return Err(Error::config(
                    "sweep.steps must be at least 1 (empty range)",
                ));
            }
            if !sw.start.is_finite() || !sw.stop.is_finite() {
                return Err(Error::config("sweep bounds must be finite"));
            }
            if sw.stop < sw.start || (sw.steps > 1 && sw.stop == sw.start) {
                return Err(Error::config(format!(
                    "sweep range [{}, {}] with {} steps is empty or unordered",
                    sw.start, sw.stop, sw.steps
                )));
            }
            let lower_ok = match sw.variable {
                SweepVariable::Thickness | SweepVariable::Kappa => sw.start > 0.0,
                _ => sw.start >= 0.0,
            };
            if !lower_ok {
                return Err(Error::config(format!(
                    "sweep over {} starts at an unphysical value {}",
                    sw.variable.name(),
                    sw.start
                )));
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> MembraneGeometry {
        let g = &self.geometry;
        MembraneGeometry {
            length: g.length_nm * NANO,
            width: g.width_um * MICRO,
            thickness: g.thickness_nm * NANO,
            youngs_modulus: g.youngs_modulus_gpa * 1e9,
            mass_density: g.mass_density_kg_m3,
            pre_tension: g.pre_tension_nn * NANO,
            clamping_coefficient: g.clamping_coefficient,
        }
    }

    pub fn environment(&self) -> ElectrostaticEnvironment {
        ElectrostaticEnvironment {
            gap: self.circuit.gap_nm * NANO,
            bias_voltage: self.circuit.bias_voltage_v,
        }
    }

    pub fn emitter(&self) -> EmitterParams {
        let e = &self.emitter;
        EmitterParams {
            zpl_frequency: wavelength_to_angular(e.zpl_wavelength_nm * NANO),
            optical_decay: hz_to_angular(e.optical_decay_mhz * 1e6),
            strain_shift_coefficient: mev_per_percent_to_angular_per_strain(
                e.strain_shift_mev_per_percent,
            ),
            stark_shift_coefficient: mev_per_mv_per_m_to_angular_per_field(
                e.stark_shift_mev_per_mv_per_m,
            ),
        }
    }

    pub fn drive(&self) -> Drive {
        Drive {
            rabi_rate: hz_to_angular(self.drive.rabi_frequency_mhz * 1e6),
            laser_frequency: self
                .drive
                .laser_frequency_thz
                .map(|f| hz_to_angular(f * 1e12)),
        }
    }

    pub fn device(&self) -> Device {
        Device {
            geometry: self.geometry(),
            environment: self.environment(),
            inductance: self.circuit.inductance_uh * MICRO,
            quality_factor: self.circuit.quality_factor,
            emitter: self.emitter(),
            mechanical_damping: hz_to_angular(self.simulation.mechanical_damping_khz * 1e3),
        }
    }

    /// Temperature in kelvin.
    pub fn temperature(&self) -> f64 {
        self.simulation.temperature_mk * MILLI
    }

    pub fn require_sweep(&self) -> Result<&SweepBlock> {
        self.sweep
            .as_ref()
            .ok_or_else(|| Error::config("missing [sweep] section"))
    }
}
