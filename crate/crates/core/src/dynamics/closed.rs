use num_complex::Complex64;
use std::f64::consts::SQRT_2;

/// Lossless three-level exchange |g,01⟩ ↔ |g,10⟩ ↔ |e,00⟩ at common coupling g_c.
///
/// Amplitude triples are ordered (|g,01⟩, |g,10⟩, |e,00⟩): microwave photon,
/// phonon, emitter excitation. In that basis H/ħ = g_c·[[0,1,0],[1,0,1],[0,1,0]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedEvolution {
    pub coupling: f64,
}

impl ClosedEvolution {
    pub fn new(coupling: f64) -> Self {
        Self { coupling }
    }

    /// Eigenvectors with their eigenvalues (rad/s): −√2·g_c, +√2·g_c, 0.
    pub fn eigenstates(&self) -> [([f64; 3], f64); 3] {
        let g = self.coupling;
        [
            ([0.5, -0.5 * SQRT_2, 0.5], -SQRT_2 * g),
            ([0.5, 0.5 * SQRT_2, 0.5], SQRT_2 * g),
            ([0.5 * SQRT_2, 0.0, -0.5 * SQRT_2], 0.0),
        ]
    }

    /// H/ħ applied to an amplitude triple.
    pub fn apply_hamiltonian(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        let g = self.coupling;
        [v[1] * g, (v[0] + v[2]) * g, v[1] * g]
    }

    pub fn amplitudes(&self, t: f64) -> [Complex64; 3] {
        closed_evolution(self.coupling, t)
    }
}

/// Amplitudes at time `t` starting from |g,01⟩.
pub fn closed_evolution(coupling: f64, t: f64) -> [Complex64; 3] {
    let phase = SQRT_2 * coupling * t;
    let (s, c) = phase.sin_cos();
    [
        Complex64::new(0.5 * (1.0 + c), 0.0),
        Complex64::new(0.0, -0.5 * SQRT_2 * s),
        Complex64::new(-0.5 * (1.0 - c), 0.0),
    ]
}
