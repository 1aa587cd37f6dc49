//! Physical constants and the unit conversions shared by every module.
//!
//! Everything inside the crate is SI: metres, newtons, farads, seconds and
//! angular frequencies in rad/s. Values quoted as "/2π" are only produced at
//! the reporting boundary.

use std::f64::consts::PI;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const NANO: f64 = 1e-9;
pub const MICRO: f64 = 1e-6;
pub const MILLI: f64 = 1e-3;

/// Ordinary frequency in Hz to angular frequency in rad/s.
#[inline]
pub fn hz_to_angular(hz: f64) -> f64 {
    2.0 * PI * hz
}

/// Angular frequency in rad/s to ordinary frequency in Hz.
#[inline]
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Photon energy in meV to angular frequency.
#[inline]
pub fn mev_to_angular(mev: f64) -> f64 {
    mev * MILLI * ELEMENTARY_CHARGE / HBAR
}

/// Strain shift quoted in meV per percent strain, returned per unit strain (rad/s).
///
/// 1 % strain is 0.01, so 5 meV/% is 0.5 eV per unit strain.
#[inline]
pub fn mev_per_percent_to_angular_per_strain(mev_per_percent: f64) -> f64 {
    mev_to_angular(mev_per_percent) * 100.0
}

/// Stark shift quoted in meV per MV/m, returned in rad/s per V/m.
#[inline]
pub fn mev_per_mv_per_m_to_angular_per_field(mev_per_mv_per_m: f64) -> f64 {
    mev_to_angular(mev_per_mv_per_m) / 1e6
}

/// Vacuum wavelength (m) to optical angular frequency (rad/s).
#[inline]
pub fn wavelength_to_angular(wavelength: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strain_coefficient_is_half_ev_per_unit_strain() {
        let per_strain = mev_per_percent_to_angular_per_strain(5.0);
        let expected = 0.5 * ELEMENTARY_CHARGE / HBAR;
        assert!((per_strain / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn stark_coefficient_from_reference_shift() {
        // 21 meV over 4e8 V/m
        let coeff = mev_per_mv_per_m_to_angular_per_field(21.0 / 400.0);
        let expected = 21e-3 * ELEMENTARY_CHARGE / HBAR / 4e8;
        assert!((coeff / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frequency_round_trip() {
        let f = 5e9;
        assert!((angular_to_hz(hz_to_angular(f)) - f).abs() < 1e-3);
    }
}
