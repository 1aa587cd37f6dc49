use num_complex::Complex64;
use std::f64::consts::PI;

use crate::coupling::CouplingSet;
use crate::error::{Error, Result};

/// Coherent couplings and loss rates of the open transfer model (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferRates {
    /// Drive-induced emitter–phonon coupling g̃_om.
    pub emitter_coupling: f64,
    /// Phonon–microwave coupling g_em.
    pub phonon_coupling: f64,
    /// Emitter decay into the continuum κ.
    pub optical_decay: f64,
    pub gamma_m: f64,
    pub gamma_lc: f64,
}

impl TransferRates {
    /// g̃_om = g_em = g_c.
    pub fn symmetric(coupling: f64, optical_decay: f64, gamma_m: f64, gamma_lc: f64) -> Self {
        Self {
            emitter_coupling: coupling,
            phonon_coupling: coupling,
            optical_decay,
            gamma_m,
            gamma_lc,
        }
    }
}

/// Discretisation of the free-space continuum into N modes spaced δω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization {
    /// δω (rad/s)
    pub mode_spacing: f64,
    pub mode_count: usize,
}

impl Discretization {
    pub fn new(mode_spacing: f64, mode_count: usize) -> Self {
        Self {
            mode_spacing,
            mode_count,
        }
    }

    /// Default continuum for a given coupling and decay rate.
    ///
    /// Spacing 2π·0.25 MHz below g_c/2π = 10 MHz, 2π·1 MHz above; the
    /// half-bandwidth covers five times the larger of κ and g_c.
    pub fn default_for(coupling: f64, optical_decay: f64) -> Self {
        let mhz = 2.0 * PI * 1e6;
        let mode_spacing = if coupling < 10.0 * mhz {
            0.25 * mhz
        } else {
            mhz
        };
        let half_bandwidth = 5.0 * coupling.max(optical_decay);
        let mode_count = (2.0 * half_bandwidth / mode_spacing - 1e-9).ceil() as usize;
        Self {
            mode_spacing,
            mode_count: mode_count + mode_count % 2,
        }
    }

    /// ω_a = N·δω/2
    pub fn half_bandwidth(&self) -> f64 {
        self.mode_count as f64 * self.mode_spacing / 2.0
    }
}

/// Generator of the single-excitation conditional dynamics.
///
/// State vector layout is (c1, c2, c3, c_ω1 … c_ωN) with c1 = |e,00⟩,
/// c2 = |g,10⟩ (phonon), c3 = |g,01⟩ (microwave photon):
///
/// ```text
/// ċ1   = −i g̃ c2 + κ′ Σ c_ωj
/// ċ2   = −i g̃ c1 − i g_em c3 − (Γ_m/2) c2
/// ċ3   = −i g_em c2 − (Γ_LC/2) c3
/// ċ_ωj = −κ′ c1 − i ω_j c_ωj,     ω_j = (j − N/2)·δω
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSystem {
    rates: TransferRates,
    discretization: Discretization,
    kappa_prime: f64,
    detunings: Vec<f64>,
}

impl TransferSystem {
    pub fn new(rates: TransferRates, discretization: Discretization) -> Result<Self> {
        let r = &rates;
        for (name, v) in [
            ("emitter coupling", r.emitter_coupling),
            ("phonon coupling", r.phonon_coupling),
            ("optical decay", r.optical_decay),
            ("mechanical damping", r.gamma_m),
            ("LC damping", r.gamma_lc),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        let Discretization {
            mode_spacing,
            mode_count,
        } = discretization;
        if !(mode_spacing > 0.0 && mode_spacing.is_finite()) {
            return Err(Error::config(format!(
                "mode spacing must be positive, got {mode_spacing}"
            )));
        }
        if mode_count == 0 {
            return Err(Error::config("continuum needs at least one mode"));
        }
        let half_bandwidth = discretization.half_bandwidth();
        // Relative slack so that ω_a = 5κ exactly is accepted despite rounding.
        if half_bandwidth < 5.0 * r.optical_decay * (1.0 - 1e-12) {
            return Err(Error::config(format!(
                "continuum half-bandwidth {:.4e} rad/s is below 5κ = {:.4e} rad/s",
                half_bandwidth,
                5.0 * r.optical_decay
            )));
        }
        let kappa_prime = (r.optical_decay * mode_spacing / (2.0 * PI)).sqrt();
        let half = mode_count as f64 / 2.0;
        let detunings = (1..=mode_count)
            .map(|j| (j as f64 - half) * mode_spacing)
            .collect();
        Ok(Self {
            rates,
            discretization,
            kappa_prime,
            detunings,
        })
    }

    pub fn rates(&self) -> &TransferRates {
        &self.rates
    }

    pub fn discretization(&self) -> &Discretization {
        &self.discretization
    }

    pub fn mode_count(&self) -> usize {
        self.discretization.mode_count
    }

    pub fn mode_spacing(&self) -> f64 {
        self.discretization.mode_spacing
    }

    pub fn half_bandwidth(&self) -> f64 {
        self.discretization.half_bandwidth()
    }

    /// κ′ = sqrt(κ·δω/2π)
    pub fn kappa_prime(&self) -> f64 {
        self.kappa_prime
    }

    /// Mode detunings ω_j from the emission line centre.
    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    /// Length of the amplitude vector, N + 3.
    pub fn dimension(&self) -> usize {
        self.discretization.mode_count + 3
    }

    /// Largest step that resolves the fastest detuned mode, 0.05·2π/ω_a.
    pub fn max_step(&self) -> f64 {
        0.05 * 2.0 * PI / self.half_bandwidth()
    }

    /// Writes dc/dt into `out`.
    pub fn derivative(&self, c: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(c.len(), self.dimension());
        debug_assert_eq!(out.len(), self.dimension());
        let minus_i = Complex64::new(0.0, -1.0);
        let TransferRates {
            emitter_coupling: ge,
            phonon_coupling: gp,
            gamma_m,
            gamma_lc,
            ..
        } = self.rates;
        let kp = self.kappa_prime;
        let (head, modes) = c.split_at(3);
        let (out_head, out_modes) = out.split_at_mut(3);

        let field: Complex64 = modes.iter().sum();
        out_head[0] = minus_i * ge * head[1] + field * kp;
        out_head[1] = minus_i * (head[0] * ge + head[2] * gp) - head[1] * (0.5 * gamma_m);
        out_head[2] = minus_i * gp * head[1] - head[2] * (0.5 * gamma_lc);

        let source = -kp * head[0];
        for ((o, m), w) in out_modes.iter_mut().zip(modes).zip(&self.detunings) {
            *o = source + minus_i * *w * *m;
        }
    }
}

/// Builds the transfer generator from a coupling set, applying the (n̄ + 1)
/// thermal factors to κ, Γ_m and Γ_LC.
pub fn build_transfer_system(
    couplings: &CouplingSet,
    discretization: Discretization,
) -> Result<TransferSystem> {
    let (kappa, gamma_m, gamma_lc) = couplings.thermal_rates();
    let rates = TransferRates {
        emitter_coupling: couplings.effective_g_om,
        phonon_coupling: couplings.g_em,
        optical_decay: kappa,
        gamma_m,
        gamma_lc,
    };
    TransferSystem::new(rates, discretization)
}

/// Amplitudes (c1, c2, c3, c_ω1 … c_ωN) at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferState {
    pub time: f64,
    pub amplitudes: Vec<Complex64>,
}

impl TransferState {
    /// Microwave photon loaded: c3 = 1, everything else empty.
    pub fn initial(system: &TransferSystem) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); system.dimension()];
        amplitudes[2] = Complex64::new(1.0, 0.0);
        Self {
            time: 0.0,
            amplitudes,
        }
    }

    /// Emitter excited, |e,00⟩.
    pub fn c1(&self) -> Complex64 {
        self.amplitudes[0]
    }

    /// One phonon, |g,10⟩.
    pub fn c2(&self) -> Complex64 {
        self.amplitudes[1]
    }

    /// One microwave photon, |g,01⟩.
    pub fn c3(&self) -> Complex64 {
        self.amplitudes[2]
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.amplitudes[3..]
    }

    /// P_n: norm of the tracked state, the probability nothing leaked.
    pub fn survival_probability(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// F_trans: population of the free-space photon modes.
    pub fn transfer_fidelity(&self) -> f64 {
        self.modes().iter().map(|c| c.norm_sqr()).sum()
    }

    /// (ω_j, |c_ωj|²) for every continuum mode.
    pub fn pulse_spectrum(&self, system: &TransferSystem) -> Vec<(f64, f64)> {
        system
            .detunings()
            .iter()
            .zip(self.modes())
            .map(|(&w, c)| (w, c.norm_sqr()))
            .collect()
    }
}
