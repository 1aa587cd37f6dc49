use proptest::prelude::*;
use std::f64::consts::PI;

use transducer_sim::constants::hz_to_angular;
use transducer_sim::coupling::{effective_optomechanical_coupling, thermal_occupation};
use transducer_sim::dynamics::{evolve, Discretization, Trajectory, TransferRates, TransferSystem};
use transducer_sim::mechanics::{
    elastic_force, electrostatic_force, net_stiffness, solve_equilibrium, ElectrostaticEnvironment,
    MembraneGeometry,
};

const MHZ: f64 = 2.0 * PI * 1e6;

fn run(rates: TransferRates, spacing: f64, n: usize, duration: f64, every: f64) -> Trajectory {
    let sys = TransferSystem::new(rates, Discretization::new(spacing, n)).unwrap();
    evolve(&sys, duration, every).unwrap()
}

fn wide_band(rates: &TransferRates, factor: f64) -> Discretization {
    let top = rates
        .optical_decay
        .max(rates.emitter_coupling)
        .max(rates.phonon_coupling);
    let n = ((2.0 * factor * top / MHZ).ceil() as usize).max(2);
    Discretization::new(MHZ, n + n % 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lossless_norm_is_conserved(g in 1.0f64..100.0, kappa in 1.0f64..60.0) {
        let rates = TransferRates::symmetric(g * MHZ, kappa * MHZ, 0.0, 0.0);
        let d = wide_band(&rates, 5.0);
        let traj = run(rates, d.mode_spacing, d.mode_count, 200e-9, 5e-9);
        for s in &traj.samples {
            prop_assert!((s.survival - 1.0).abs() < 1e-8, "P_n = {}", s.survival);
        }
    }

    #[test]
    fn populations_partition_survival(
        ge in 1.0f64..100.0,
        gp in 1.0f64..100.0,
        kappa in 1.0f64..60.0,
        gamma in 0.0f64..10.0,
    ) {
        let rates = TransferRates {
            emitter_coupling: ge * MHZ,
            phonon_coupling: gp * MHZ,
            optical_decay: kappa * MHZ,
            gamma_m: gamma * MHZ,
            gamma_lc: 0.5 * gamma * MHZ,
        };
        let d = wide_band(&rates, 5.0);
        let traj = run(rates, d.mode_spacing, d.mode_count, 100e-9, 1e-9);
        for s in &traj.samples {
            let sum = s.emitter + s.phonon + s.microwave + s.fidelity;
            prop_assert!((sum - s.survival).abs() < 1e-12);
            prop_assert!(s.fidelity >= 0.0 && s.fidelity <= s.survival + 1e-15);
        }
        for w in traj.samples.windows(2) {
            prop_assert!(w[1].survival <= w[0].survival + 1e-15);
        }
    }

    #[test]
    fn emission_is_monotone_in_a_wide_band(
        g in 1.0f64..100.0,
        kappa in 10.0f64..60.0,
    ) {
        let rates = TransferRates::symmetric(g * MHZ, kappa * MHZ, 0.1 * MHZ, 0.1 * MHZ);
        let d = wide_band(&rates, 20.0);
        let traj = run(rates, d.mode_spacing, d.mode_count, 150e-9, 0.5e-9);
        // Finite band: the emission kernel has a memory of ~1/ω_a, so F_trans
        // can dip slightly while c1 changes sign.
        for w in traj.samples.windows(2) {
            prop_assert!(w[1].fidelity >= w[0].fidelity - 1e-6, "{:?} -> {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn deflection_grows_with_bias(v1 in 0.0f64..4.5, dv in 0.0f64..0.3) {
        let geom = MembraneGeometry::reference();
        let a = solve_equilibrium(&geom, &ElectrostaticEnvironment::new(10e-9, v1).unwrap()).unwrap();
        let b = solve_equilibrium(&geom, &ElectrostaticEnvironment::new(10e-9, v1 + dv).unwrap()).unwrap();
        prop_assert!(b.deflection >= a.deflection);
        prop_assert!(b.mech_frequency >= a.mech_frequency);
    }

    #[test]
    fn equilibrium_balances_forces(v in 0.1f64..4.5) {
        let geom = MembraneGeometry::reference();
        let env = ElectrostaticEnvironment::new(10e-9, v).unwrap();
        let op = solve_equilibrium(&geom, &env).unwrap();
        let fe = elastic_force(&geom, op.deflection).unwrap();
        let fs = electrostatic_force(&env, &geom, op.deflection).unwrap();
        prop_assert!((fe - fs).abs() <= 1e-9 * fs);
        prop_assert!(net_stiffness(&geom, &env, op.deflection) > 0.0);
    }

    #[test]
    fn occupation_rises_with_temperature(f_ghz in 0.5f64..20.0, t1 in 0.001f64..2.0, dt in 0.0f64..1.0) {
        let w = hz_to_angular(f_ghz * 1e9);
        prop_assert!(thermal_occupation(w, t1 + dt) >= thermal_occupation(w, t1));
    }

    #[test]
    fn effective_coupling_is_linear_in_drive(omega in 0.0f64..5e9, g in 0.0f64..1e9) {
        let w_m = hz_to_angular(5e9);
        let one = effective_optomechanical_coupling(omega, g, w_m);
        let two = effective_optomechanical_coupling(2.0 * omega, g, w_m);
        prop_assert!((two - 2.0 * one).abs() <= 1e-12 * two.abs().max(1.0));
    }
}

/// With the band edge at 5κ the emitter reabsorbs a little from the truncated
/// continuum, so F_trans dips by a few 1e-5 before resuming.
#[test]
fn band_limited_emission_dips_are_small() {
    let rates = TransferRates::symmetric(50.0 * MHZ, 50.0 * MHZ, 0.1 * MHZ, 0.1 * MHZ);
    let traj = run(rates, MHZ, 500, 100e-9, 0.25e-9);
    let worst = traj
        .samples
        .windows(2)
        .map(|w| w[0].fidelity - w[1].fidelity)
        .fold(0.0, f64::max);
    assert!(worst < 1e-4, "{worst:e}");
}
