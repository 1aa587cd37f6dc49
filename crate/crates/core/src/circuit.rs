//! LC microwave resonator with the membrane as a movable capacitor plate.
//!
//! The bias-isolation elements (the series capacitor and choke inductor) are
//! treated as ideal and never enter the resonance. The total capacitance is
//! C(x) = C0 + C_m(x) with a uniform-gap parallel-plate C_m.
//!
//! Note: for L1 = 1 µH the exact resonance condition at 5 GHz needs a total
//! capacitance of about 1.01 fF; a value of 1.3 fF resonates near 4.4 GHz.

use crate::constants::{EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::mechanics::{ElectrostaticEnvironment, MembraneGeometry, OperatingPoint};

/// Parallel-plate membrane capacitance ε0·l·w/(d − x).
pub fn membrane_capacitance(geom: &MembraneGeometry, gap: f64, x: f64) -> Result<f64> {
    check(gap, x)?;
    Ok(EPSILON_0 * geom.area() / (gap - x))
}

/// dC_m/dx = ε0·l·w/(d − x)².
pub fn membrane_capacitance_slope(geom: &MembraneGeometry, gap: f64, x: f64) -> Result<f64> {
    check(gap, x)?;
    let g = gap - x;
    Ok(EPSILON_0 * geom.area() / (g * g))
}

fn check(gap: f64, x: f64) -> Result<()> {
    if !(gap > 0.0) {
        return Err(Error::domain(format!("gap must be positive, got {gap}")));
    }
    if !(x >= 0.0) || x >= gap {
        return Err(Error::domain(format!(
            "capacitor plate position {x:e} m outside [0, {gap:e})"
        )));
    }
    Ok(())
}

/// Tuning capacitance that puts the resonance at `omega_target`.
pub fn tune_c0(inductance: f64, omega_target: f64, membrane: f64) -> Result<f64> {
    if !(inductance > 0.0) || !(omega_target > 0.0) {
        return Err(Error::domain(
            "inductance and target frequency must be positive",
        ));
    }
    let required = 1.0 / (inductance * omega_target * omega_target);
    if membrane > required {
        return Err(Error::Tuning { membrane, required });
    }
    Ok(required - membrane)
}

/// LC resonator evaluated at a membrane operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    pub inductance: f64,
    pub tuning_capacitance: f64,
    pub gap: f64,
    pub bias_voltage: f64,
    pub quality_factor: f64,
    /// ω_LC = 1/sqrt(L1·(C_m(x0) + C0)) (rad/s)
    pub lc_frequency: f64,
    pub q_zpf: f64,
}

impl CircuitParams {
    /// Circuit with an explicit tuning capacitor.
    pub fn new(
        geom: &MembraneGeometry,
        env: &ElectrostaticEnvironment,
        op: &OperatingPoint,
        inductance: f64,
        tuning_capacitance: f64,
        quality_factor: f64,
    ) -> Result<Self> {
        if !(inductance > 0.0) || !(quality_factor > 0.0) || !(tuning_capacitance >= 0.0) {
            return Err(Error::domain("circuit needs L1 > 0, Q_LC > 0 and C0 >= 0"));
        }
        let total = tuning_capacitance + membrane_capacitance(geom, env.gap, op.deflection)?;
        let lc_frequency = 1.0 / (inductance * total).sqrt();
        Ok(Self {
            inductance,
            tuning_capacitance,
            gap: env.gap,
            bias_voltage: env.bias_voltage,
            quality_factor,
            lc_frequency,
            q_zpf: charge_zero_point(inductance, lc_frequency),
        })
    }

    /// Circuit with C0 chosen so that ω_LC equals the mechanical frequency.
    pub fn resonance_matched(
        geom: &MembraneGeometry,
        env: &ElectrostaticEnvironment,
        op: &OperatingPoint,
        inductance: f64,
        quality_factor: f64,
    ) -> Result<Self> {
        let cm = membrane_capacitance(geom, env.gap, op.deflection)?;
        let c0 = tune_c0(inductance, op.mech_frequency, cm)?;
        Self::new(geom, env, op, inductance, c0, quality_factor)
    }

    pub fn total_capacitance(&self, geom: &MembraneGeometry, x: f64) -> Result<f64> {
        Ok(self.tuning_capacitance + membrane_capacitance(geom, self.gap, x)?)
    }

    /// Microwave energy damping rate Γ_LC = ω_LC/Q_LC.
    pub fn damping_rate(&self) -> f64 {
        self.lc_frequency / self.quality_factor
    }
}

/// q_zpf = sqrt(ħ/(2·L·ω_LC)).
pub fn charge_zero_point(inductance: f64, lc_frequency: f64) -> f64 {
    (HBAR / (2.0 * inductance * lc_frequency)).sqrt()
}

/// Phonon–microwave coupling at the operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectromechanicalCoupling {
    /// |q̄·∂(1/C)/∂x| at x0 (V/m).
    pub gradient: f64,
    /// g_em (rad/s).
    pub rate: f64,
    /// q̄ = V_dc·C(x0).
    pub static_charge: f64,
}

/// g_em = G·x_zpf·q_zpf/ħ, with G = q̄·C_m'(x0)/C(x0)².
pub fn electromechanical_coupling(
    op: &OperatingPoint,
    circuit: &CircuitParams,
    geom: &MembraneGeometry,
) -> Result<ElectromechanicalCoupling> {
    let total = circuit.total_capacitance(geom, op.deflection)?;
    let slope = membrane_capacitance_slope(geom, circuit.gap, op.deflection)?;
    let static_charge = circuit.bias_voltage * total;
    // ∂(1/C)/∂x = −C'/C²; only the magnitude enters the (b+b†)(c+c†) coupling.
    let gradient = static_charge * slope / (total * total);
    let rate = gradient * op.x_zpf * circuit.q_zpf / HBAR;
    Ok(ElectromechanicalCoupling {
        gradient,
        rate,
        static_charge,
    })
}

/// Cooperativity g²/(γ1·γ2).
pub fn cooperativity(coupling: f64, rate_a: f64, rate_b: f64) -> f64 {
    coupling * coupling / (rate_a * rate_b)
}
