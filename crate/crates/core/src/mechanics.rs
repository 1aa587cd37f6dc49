//! Doubly clamped membrane mechanics.
//!
//! Flexural frequency under tension, the nonlinear elastic restoring force at
//! the membrane centre, the parallel-plate electrostatic pull toward the
//! bottom electrode, and the static equilibrium that results from balancing
//! the two. Deflection `x` is positive toward the electrode everywhere.

use std::f64::consts::PI;

use crate::constants::{EPSILON_0, HBAR};
use crate::error::{Error, Result};

/// Dimensions and material constants of the suspended membrane (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneGeometry {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    pub youngs_modulus: f64,
    pub mass_density: f64,
    /// Pre-tension as an absolute force (N).
    pub pre_tension: f64,
    pub clamping_coefficient: f64,
}

impl MembraneGeometry {
    pub const DEFAULT_MASS_DENSITY: f64 = 2260.0;
    pub const DEFAULT_CLAMPING_COEFFICIENT: f64 = 1.03;

    /// Three-layer membrane: 110 nm × 1 µm × 1.1 nm, Y = 1000 GPa, T0 = 10 nN.
    pub fn reference() -> Self {
        Self {
            length: 110e-9,
            width: 1e-6,
            thickness: 1.1e-9,
            youngs_modulus: 1000e9,
            mass_density: Self::DEFAULT_MASS_DENSITY,
            pre_tension: 10e-9,
            clamping_coefficient: Self::DEFAULT_CLAMPING_COEFFICIENT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("length", self.length),
            ("width", self.width),
            ("thickness", self.thickness),
            ("youngs_modulus", self.youngs_modulus),
            ("mass_density", self.mass_density),
            ("clamping_coefficient", self.clamping_coefficient),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if !(self.pre_tension >= 0.0 && self.pre_tension.is_finite()) {
            return Err(Error::domain(format!(
                "pre_tension must be non-negative, got {}",
                self.pre_tension
            )));
        }
        Ok(())
    }

    /// Total membrane mass ρ·l·w·h.
    pub fn mass(&self) -> f64 {
        self.mass_density * self.length * self.width * self.thickness
    }

    /// Lumped effective mass of the fundamental mode (the full membrane mass).
    pub fn effective_mass(&self) -> f64 {
        self.mass()
    }

    /// Plate area facing the electrode.
    pub fn area(&self) -> f64 {
        self.length * self.width
    }
}

/// Bias electrode seen by the membrane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectrostaticEnvironment {
    /// Undeflected membrane-to-electrode distance (m).
    pub gap: f64,
    pub bias_voltage: f64,
}

impl ElectrostaticEnvironment {
    pub fn new(gap: f64, bias_voltage: f64) -> Result<Self> {
        let env = Self { gap, bias_voltage };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::domain(format!(
                "gap must be positive, got {}",
                self.gap
            )));
        }
        if !(self.bias_voltage >= 0.0 && self.bias_voltage.is_finite()) {
            return Err(Error::domain(format!(
                "bias voltage must be non-negative, got {}",
                self.bias_voltage
            )));
        }
        Ok(())
    }

    pub fn with_bias(self, bias_voltage: f64) -> Self {
        Self {
            bias_voltage,
            ..self
        }
    }

    /// Field between membrane and electrode, V_dc/(d − x).
    pub fn field(&self, x: f64) -> Result<f64> {
        check_gap(self.gap, x)?;
        Ok(self.bias_voltage / (self.gap - x))
    }
}

/// Solved static equilibrium of the membrane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub deflection: f64,
    pub tension: f64,
    /// Angular frequency of the fundamental flexural mode (rad/s).
    pub mech_frequency: f64,
    pub effective_mass: f64,
    pub x_zpf: f64,
}

impl OperatingPoint {
    /// Operating point at a prescribed static deflection, without any force balance.
    ///
    /// Used for displacement sweeps where `x0` is the independent variable.
    pub fn at_deflection(geom: &MembraneGeometry, deflection: f64) -> Result<Self> {
        geom.validate()?;
        let tension = induced_tension(geom, deflection)?;
        let mech_frequency = flexural_frequency(geom, tension)?;
        let effective_mass = geom.effective_mass();
        Ok(Self {
            deflection,
            tension,
            mech_frequency,
            effective_mass,
            x_zpf: zero_point_amplitude(effective_mass, mech_frequency)?,
        })
    }
}

fn check_gap(gap: f64, x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "deflection must be non-negative, got {x}"
        )));
    }
    if x >= gap {
        return Err(Error::domain(format!(
            "deflection {x:e} m reaches the electrode at gap {gap:e} m"
        )));
    }
    Ok(())
}

/// Fundamental flexural angular frequency at the given tension.
///
/// ω = 2π·(A²Yh²/(ρl⁴) + 0.57·A²·T/(ρl²wh))^(1/2)
pub fn flexural_frequency(geom: &MembraneGeometry, tension: f64) -> Result<f64> {
    geom.validate()?;
    if !(tension >= 0.0) {
        return Err(Error::domain(format!(
            "tension must be non-negative, got {tension}"
        )));
    }
    let MembraneGeometry {
        length: l,
        width: w,
        thickness: h,
        youngs_modulus: y,
        mass_density: rho,
        clamping_coefficient: a,
        ..
    } = *geom;
    let a2 = a * a;
    let plate = a2 * y * h * h / (rho * l.powi(4));
    let membrane = 0.57 * a2 * tension / (rho * l * l * w * h);
    Ok(2.0 * PI * (plate + membrane).sqrt())
}

/// Linear spring constant of the centre-loaded membrane (N/m).
fn linear_stiffness(geom: &MembraneGeometry) -> f64 {
    let MembraneGeometry {
        length: l,
        width: w,
        thickness: h,
        youngs_modulus: y,
        pre_tension: t0,
        ..
    } = *geom;
    30.78 * w * h.powi(3) * y / l.powi(3) + 12.32 * t0 / l
}

/// Cubic stretching coefficient (N/m³).
fn cubic_stiffness(geom: &MembraneGeometry) -> f64 {
    8.0 * geom.width * geom.thickness * geom.youngs_modulus / (3.0 * geom.length.powi(3))
}

/// Restoring force for a centre deflection δ ≥ 0 (N).
pub fn elastic_force(geom: &MembraneGeometry, deflection: f64) -> Result<f64> {
    geom.validate()?;
    if !(deflection >= 0.0) {
        return Err(Error::domain(format!(
            "deflection must be non-negative, got {deflection}"
        )));
    }
    Ok(elastic_force_unchecked(geom, deflection))
}

#[inline]
fn elastic_force_unchecked(geom: &MembraneGeometry, d: f64) -> f64 {
    linear_stiffness(geom) * d + cubic_stiffness(geom) * d.powi(3)
}

/// Electrostatic attraction ε0·w·l·V²/(2(d − x)²) (N).
pub fn electrostatic_force(
    env: &ElectrostaticEnvironment,
    geom: &MembraneGeometry,
    x: f64,
) -> Result<f64> {
    env.validate()?;
    geom.validate()?;
    check_gap(env.gap, x)?;
    Ok(electrostatic_force_unchecked(env, geom, x))
}

#[inline]
fn electrostatic_force_unchecked(
    env: &ElectrostaticEnvironment,
    geom: &MembraneGeometry,
    x: f64,
) -> f64 {
    let gap = env.gap - x;
    EPSILON_0 * geom.area() * env.bias_voltage * env.bias_voltage / (2.0 * gap * gap)
}

/// Static strain from the centre deflection, S = 2x0²/l².
pub fn static_strain(geom: &MembraneGeometry, deflection: f64) -> f64 {
    2.0 * deflection * deflection / (geom.length * geom.length)
}

/// Tension after a static deflection: T0 + Y·w·h·S.
pub fn induced_tension(geom: &MembraneGeometry, deflection: f64) -> Result<f64> {
    if !(deflection >= 0.0) {
        return Err(Error::domain(format!(
            "deflection must be non-negative, got {deflection}"
        )));
    }
    Ok(geom.pre_tension
        + geom.youngs_modulus * geom.width * geom.thickness * static_strain(geom, deflection))
}

/// x_zpf = sqrt(ħ/(2·m·ω)).
pub fn zero_point_amplitude(effective_mass: f64, omega: f64) -> Result<f64> {
    if !(effective_mass > 0.0) || !(omega > 0.0) {
        return Err(Error::domain(format!(
            "zero-point amplitude needs positive mass and frequency, got m = {effective_mass}, ω = {omega}"
        )));
    }
    Ok((HBAR / (2.0 * effective_mass * omega)).sqrt())
}

/// Elastic minus electrostatic force.
fn net_force(geom: &MembraneGeometry, env: &ElectrostaticEnvironment, x: f64) -> f64 {
    elastic_force_unchecked(geom, x) - electrostatic_force_unchecked(env, geom, x)
}

/// Net-force stiffness d(F_el − F_es)/dx by central difference.
pub fn net_stiffness(geom: &MembraneGeometry, env: &ElectrostaticEnvironment, x: f64) -> f64 {
    let step = env.gap * 1e-6;
    let lo = (x - step).max(0.0);
    let hi = (x + step).min(env.gap * (1.0 - 1e-9));
    (net_force(geom, env, hi) - net_force(geom, env, lo)) / (hi - lo)
}

const SCAN_POINTS: usize = 4096;

/// Smallest stable deflection where the elastic and electrostatic forces balance.
///
/// The net force is negative at `x = 0` whenever `V_dc > 0`. The interval
/// `[0, d(1 − 10⁻⁶)]` is scanned for the first sign change, refined by
/// bisection down to floating-point resolution. If the scan finds none, the
/// best grid point is polished with a golden-section search before declaring
/// pull-in, so a near-critical bias with a narrow stable window is not missed.
pub fn solve_equilibrium(
    geom: &MembraneGeometry,
    env: &ElectrostaticEnvironment,
) -> Result<OperatingPoint> {
    geom.validate()?;
    env.validate()?;
    let deflection = equilibrium_deflection(geom, env)?;
    let op = OperatingPoint::at_deflection(geom, deflection)?;
    Ok(op)
}

fn equilibrium_deflection(geom: &MembraneGeometry, env: &ElectrostaticEnvironment) -> Result<f64> {
    if env.bias_voltage == 0.0 {
        return Ok(0.0);
    }
    let pull_in = Error::PullIn {
        bias_voltage: env.bias_voltage,
        gap: env.gap,
    };
    let upper = env.gap * (1.0 - 1e-6);
    let f = |x: f64| net_force(geom, env, x);

    let dx = upper / SCAN_POINTS as f64;
    let mut bracket = None;
    let mut best = (0.0, f(0.0));
    let mut prev = 0.0;
    for i in 1..=SCAN_POINTS {
        let x = dx * i as f64;
        let fx = f(x);
        if fx >= 0.0 {
            bracket = Some((prev, x));
            break;
        }
        if fx > best.1 {
            best = (x, fx);
        }
        prev = x;
    }

    let (lo, hi) = match bracket {
        Some(b) => b,
        None => {
            let lo = (best.0 - dx).max(0.0);
            let hi = (best.0 + dx).min(upper);
            let (xm, fm) = golden_max(&f, lo, hi);
            if fm < 0.0 {
                return Err(pull_in);
            }
            // Left branch of the narrow peak.
            (lo, xm)
        }
    };

    let root = bisect(&f, lo, hi);
    if net_stiffness(geom, env, root) <= 0.0 {
        return Err(pull_in);
    }
    Ok(root)
}

/// Bisection for f(lo) < 0 ≤ f(hi), run until the bracket stops shrinking.
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Return the endpoint with the smaller residual.
    if f(hi).abs() <= f(lo).abs() {
        hi
    } else {
        lo
    }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    for _ in 0..200 {
        if (b - a).abs() <= f64::EPSILON * b.abs() {
            break;
        }
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Bias voltage that holds the membrane at a given deflection by force balance.
///
/// Inverse of the equilibrium condition; says nothing about stability, see
/// [`net_stiffness`].
pub fn bias_for_deflection(geom: &MembraneGeometry, gap: f64, deflection: f64) -> Result<f64> {
    geom.validate()?;
    check_gap(gap, deflection)?;
    let restoring = elastic_force_unchecked(geom, deflection);
    let g = gap - deflection;
    Ok((2.0 * restoring * g * g / (EPSILON_0 * geom.area())).sqrt())
}

/// Critical bias for pull-in, bracketed by bisection to `tolerance` volts.
///
/// Returns the largest bias (within `tolerance`) that still has a stable equilibrium.
pub fn pull_in_voltage(geom: &MembraneGeometry, gap: f64, tolerance: f64) -> Result<f64> {
    let env = ElectrostaticEnvironment::new(gap, 0.0)?;
    let stable = |v: f64| solve_equilibrium(geom, &env.with_bias(v)).is_ok();
    let mut lo = 0.0;
    let mut hi = 1.0;
    while stable(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::domain("no pull-in below 1 MV"));
        }
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
