//! Emitter–phonon coupling through strain and the Stark effect, the drive
//! reduced effective coupling, and thermal occupations of the loss channels.

use crate::constants::{
    hz_to_angular, mev_per_mv_per_m_to_angular_per_field, mev_per_percent_to_angular_per_strain,
    wavelength_to_angular, HBAR, K_B,
};
use crate::error::{Error, Result};
use crate::mechanics::{ElectrostaticEnvironment, MembraneGeometry, OperatingPoint};

/// Optical transition of the quantum emitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterParams {
    /// Zero-phonon-line angular frequency ω0.
    pub zpl_frequency: f64,
    /// Spontaneous decay rate κ (rad/s).
    pub optical_decay: f64,
    /// ∂ω/∂S in rad/s per unit strain.
    pub strain_shift_coefficient: f64,
    /// ∂ω/∂E in rad/s per V/m.
    pub stark_shift_coefficient: f64,
}

impl EmitterParams {
    /// 600 nm ZPL, κ/2π = 50 MHz, 5 meV/% strain shift, 21 meV per 4×10⁸ V/m.
    pub fn reference() -> Self {
        Self {
            zpl_frequency: wavelength_to_angular(600e-9),
            optical_decay: hz_to_angular(50e6),
            strain_shift_coefficient: mev_per_percent_to_angular_per_strain(5.0),
            stark_shift_coefficient: mev_per_mv_per_m_to_angular_per_field(21.0 / 400.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zpl_frequency > 0.0) {
            return Err(Error::domain("ZPL frequency must be positive"));
        }
        if !(self.optical_decay > 0.0) {
            return Err(Error::domain("optical decay rate must be positive"));
        }
        if !self.strain_shift_coefficient.is_finite() || !self.stark_shift_coefficient.is_finite() {
            return Err(Error::domain("shift coefficients must be finite"));
        }
        Ok(())
    }
}

/// g_om1 = (4·x0·x_zpf/l²)·∂ω/∂S.
pub fn strain_coupling(
    op: &OperatingPoint,
    geom: &MembraneGeometry,
    emitter: &EmitterParams,
) -> f64 {
    let l = geom.length;
    4.0 * op.deflection * op.x_zpf / (l * l) * emitter.strain_shift_coefficient
}

/// g_om2 = x_zpf·V_dc/(d − x0)²·∂ω/∂E, field gradient taken at the deflected gap.
pub fn stark_coupling(
    op: &OperatingPoint,
    env: &ElectrostaticEnvironment,
    emitter: &EmitterParams,
) -> Result<f64> {
    if op.deflection >= env.gap {
        return Err(Error::domain(format!(
            "deflection {:e} m reaches the electrode",
            op.deflection
        )));
    }
    let g = env.gap - op.deflection;
    let field_zpf = op.x_zpf * env.bias_voltage / (g * g);
    Ok(field_zpf * emitter.stark_shift_coefficient)
}

/// g̃_om = (Ω/2)·(g_om/ω_m).
pub fn effective_optomechanical_coupling(rabi_rate: f64, g_om: f64, mech_frequency: f64) -> f64 {
    0.5 * rabi_rate * g_om / mech_frequency
}

/// Bose–Einstein occupation 1/(exp(ħω/k_BT) − 1); zero at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * temperature);
    // exp_m1 overflows to +inf for optical frequencies, giving exactly 0.
    1.0 / x.exp_m1()
}

/// Thermally enhanced decay (n̄ + 1)·rate.
pub fn effective_decay(rate: f64, occupation: f64) -> f64 {
    (occupation + 1.0) * rate
}

/// Laser drive on the emitter transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    /// Rabi rate Ω (rad/s).
    pub rabi_rate: f64,
    /// Laser angular frequency ω_L; `None` places it on the red sideband ω0 − ω_m.
    pub laser_frequency: Option<f64>,
}

/// All rates entering the state-transfer model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSet {
    pub g_em: f64,
    pub g_om1: f64,
    pub g_om2: f64,
    pub rabi_rate: f64,
    pub effective_g_om: f64,
    /// Δ = ω_L − ω0 − g_om²/ω_m
    pub detuning: f64,
    pub optical_decay: f64,
    pub gamma_m: f64,
    pub gamma_lc: f64,
    pub n_m: f64,
    pub n_lc: f64,
    pub n_0: f64,
}

impl CouplingSet {
    /// Total single-phonon optomechanical coupling; both mechanisms shift the same ZPL.
    pub fn g_om(&self) -> f64 {
        self.g_om1 + self.g_om2
    }

    /// Decay rates multiplied by (n̄ + 1): (κ, Γ_m, Γ_LC).
    pub fn thermal_rates(&self) -> (f64, f64, f64) {
        (
            effective_decay(self.optical_decay, self.n_0),
            effective_decay(self.gamma_m, self.n_m),
            effective_decay(self.gamma_lc, self.n_lc),
        )
    }

    /// Symmetric set with g̃_om = g_em = g_c and the given bare rates.
    pub fn symmetric(
        g_c: f64,
        optical_decay: f64,
        gamma_m: f64,
        gamma_lc: f64,
        occupations: (f64, f64, f64),
    ) -> Self {
        let (n_0, n_m, n_lc) = occupations;
        Self {
            g_em: g_c,
            g_om1: 0.0,
            g_om2: 0.0,
            rabi_rate: 0.0,
            effective_g_om: g_c,
            detuning: 0.0,
            optical_decay,
            gamma_m,
            gamma_lc,
            n_m,
            n_lc,
            n_0,
        }
    }
}

/// Builds the full coupling set from device quantities.
#[allow(clippy::too_many_arguments)]
pub fn coupling_set(
    op: &OperatingPoint,
    geom: &MembraneGeometry,
    env: &ElectrostaticEnvironment,
    emitter: &EmitterParams,
    g_em: f64,
    gamma_lc: f64,
    lc_frequency: f64,
    gamma_m: f64,
    drive: &Drive,
    temperature: f64,
) -> Result<CouplingSet> {
    emitter.validate()?;
    let g_om1 = strain_coupling(op, geom, emitter);
    let g_om2 = stark_coupling(op, env, emitter)?;
    let g_om = g_om1 + g_om2;
    let w_m = op.mech_frequency;
    let laser = drive.laser_frequency.unwrap_or(emitter.zpl_frequency - w_m);
    Ok(CouplingSet {
        g_em,
        g_om1,
        g_om2,
        rabi_rate: drive.rabi_rate,
        effective_g_om: effective_optomechanical_coupling(drive.rabi_rate, g_om, w_m),
        detuning: laser - emitter.zpl_frequency - g_om * g_om / w_m,
        optical_decay: emitter.optical_decay,
        gamma_m,
        gamma_lc,
        n_m: thermal_occupation(w_m, temperature),
        n_lc: thermal_occupation(lc_frequency, temperature),
        n_0: thermal_occupation(emitter.zpl_frequency, temperature),
    })
}
