//! Experiment runners: each turns a config into a [`ResultTable`].

use rayon::prelude::*;
use std::f64::consts::PI;

use super::config::{ExperimentConfig, SweepVariable};
use super::table::{Column, Provenance, ResultTable, Row, RowStatus};
use crate::constants::{angular_to_hz, hz_to_angular, NANO};
use crate::coupling::{thermal_occupation, CouplingSet};
use crate::dynamics::{
    build_transfer_system, default_step, evolve_with_step, summarize, Discretization,
    TransferSystem,
};
use crate::error::{Error, Result};
use crate::mechanics::{bias_for_deflection, net_stiffness, solve_equilibrium, OperatingPoint};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "TRANSDUCER_SIM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Mechanics,
    Couplings,
    Transfer,
    Scan,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Mechanics => "mechanics",
            Experiment::Couplings => "couplings",
            Experiment::Transfer => "transfer",
            Experiment::Scan => "scan",
        }
    }
}

pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<ResultTable> {
    match experiment {
        Experiment::Mechanics => run_mechanics_sweep(cfg),
        Experiment::Couplings => run_coupling_sweep(cfg),
        Experiment::Transfer => run_transfer(cfg),
        Experiment::Scan => run_environment_scan(cfg),
    }
}

/// Worker count from [`THREADS_ENV`]; 0 lets the pool decide.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Maps sweep points in parallel, keeping their order.
fn par_map<T, F>(points: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    match rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
    {
        Ok(pool) => pool.install(|| points.par_iter().map(|&v| f(v)).collect()),
        Err(_) => points.iter().map(|&v| f(v)).collect(),
    }
}

fn sweep_column(var: SweepVariable) -> Column {
    Column::new(var.name(), var.unit())
}

fn check_variable(
    cfg: &ExperimentConfig,
    allowed: &[SweepVariable],
    op: &str,
) -> Result<SweepVariable> {
    let sweep = cfg.require_sweep()?;
    if allowed.contains(&sweep.variable) {
        Ok(sweep.variable)
    } else {
        let names: Vec<&str> = allowed.iter().map(|v| v.name()).collect();
        Err(Error::config(format!(
            "{op} sweeps {}, got {}",
            names.join(" or "),
            sweep.variable.name()
        )))
    }
}

fn failed_row(width: usize, head: f64, err: &Error) -> Row {
    let mut values = vec![f64::NAN; width];
    values[0] = head;
    let status = match err {
        Error::PullIn { .. } => RowStatus::PullIn,
        other => RowStatus::Failed(other.to_string()),
    };
    Row { values, status }
}

/// Static deflection, tension and frequency across thickness or bias.
pub fn run_mechanics_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let var = check_variable(
        cfg,
        &[SweepVariable::Thickness, SweepVariable::BiasVoltage],
        "mechanics",
    )?;
    let points = cfg.require_sweep()?.points();
    let columns = vec![
        sweep_column(var),
        Column::new("x0", "nm"),
        Column::new("tension", "nN"),
        Column::new("f_m", "GHz"),
    ];
    let rows = par_map(&points, |v| {
        let mut geom = cfg.geometry();
        let mut env = cfg.environment();
        match var {
            SweepVariable::Thickness => geom.thickness = v * NANO,
            _ => env.bias_voltage = v,
        }
        match solve_equilibrium(&geom, &env) {
            Ok(op) => Row::ok(vec![
                v,
                op.deflection / NANO,
                op.tension / NANO,
                angular_to_hz(op.mech_frequency) / 1e9,
            ]),
            Err(e) => failed_row(4, v, &e),
        }
    });
    let mut table = ResultTable::new(Provenance::new("mechanics", &cfg.source_hash), columns);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// g_em, g_om1 and g_om2 across bias or prescribed deflection.
///
/// A fifth column holds the complementary quantity: x0 for a bias sweep, the
/// bias holding the deflection for a displacement sweep.
pub fn run_coupling_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let var = check_variable(
        cfg,
        &[SweepVariable::BiasVoltage, SweepVariable::Displacement],
        "couplings",
    )?;
    let points = cfg.require_sweep()?.points();
    let extra = match var {
        SweepVariable::BiasVoltage => Column::new("x0", "nm"),
        _ => Column::new("bias_voltage", "V"),
    };
    let columns = vec![
        sweep_column(var),
        Column::new("g_em", "MHz"),
        Column::new("g_om1", "MHz"),
        Column::new("g_om2", "MHz"),
        extra,
    ];
    let drive = cfg.drive();
    let temperature = cfg.temperature();
    let mhz = |w: f64| angular_to_hz(w) / 1e6;
    let rows = par_map(&points, |v| {
        let mut device = cfg.device();
        let evaluated = match var {
            SweepVariable::BiasVoltage => {
                device.environment.bias_voltage = v;
                device
                    .evaluate(&drive, temperature)
                    .map(|s| (s, RowStatus::Ok, s.operating_point.deflection / NANO))
            }
            _ => (|| {
                let x0 = v * NANO;
                let bias = bias_for_deflection(&device.geometry, device.environment.gap, x0)?;
                device.environment.bias_voltage = bias;
                let op = OperatingPoint::at_deflection(&device.geometry, x0)?;
                let status = if net_stiffness(&device.geometry, &device.environment, x0) > 0.0 {
                    RowStatus::Ok
                } else {
                    RowStatus::Unstable
                };
                let s = device.evaluate_at(op, &drive, temperature)?;
                Ok((s, status, bias))
            })(),
        };
        match evaluated {
            Ok((s, status, extra)) => Row {
                values: vec![
                    v,
                    mhz(s.couplings.g_em),
                    mhz(s.couplings.g_om1),
                    mhz(s.couplings.g_om2),
                    extra,
                ],
                status,
            },
            Err(e) => failed_row(5, v, &e),
        }
    });
    let mut table = ResultTable::new(Provenance::new("couplings", &cfg.source_hash), columns);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// Mode count covering ±5·max(κ, g) at the given spacing, rounded up to even.
fn covering_mode_count(spacing: f64, coupling: f64, kappa: f64) -> usize {
    let n = (10.0 * coupling.max(kappa) / spacing - 1e-9).ceil() as usize;
    (n + n % 2).max(2)
}

/// Coupling set for a transfer run at `temperature` (K), optionally with κ
/// overridden and g_c slaved to it.
pub fn transfer_couplings(
    cfg: &ExperimentConfig,
    temperature: f64,
    slaved_kappa: Option<f64>,
) -> Result<CouplingSet> {
    let device = cfg.device();
    let sim = &cfg.simulation;
    let kappa = slaved_kappa.unwrap_or(device.emitter.optical_decay);
    let g_c = match slaved_kappa {
        Some(k) => Some(k),
        None => sim.coupling_mhz.map(|g| hz_to_angular(g * 1e6)),
    };
    let n_0 = thermal_occupation(device.emitter.zpl_frequency, temperature);
    match g_c {
        Some(g_c) => {
            let mode = match sim.mode_frequency_ghz {
                Some(f) => hz_to_angular(f * 1e9),
                None => solve_equilibrium(&device.geometry, &device.environment)?.mech_frequency,
            };
            let gamma_lc = match sim.lc_damping_khz {
                Some(k) => hz_to_angular(k * 1e3),
                None => mode / device.quality_factor,
            };
            let n = thermal_occupation(mode, temperature);
            Ok(CouplingSet::symmetric(
                g_c,
                kappa,
                device.mechanical_damping,
                gamma_lc,
                (n_0, n, n),
            ))
        }
        None => {
            let mut set = device.evaluate(&cfg.drive(), temperature)?.couplings;
            set.optical_decay = kappa;
            if let Some(k) = sim.lc_damping_khz {
                set.gamma_lc = hz_to_angular(k * 1e3);
            }
            if let Some(f) = sim.mode_frequency_ghz {
                let n = thermal_occupation(hz_to_angular(f * 1e9), temperature);
                set.n_m = n;
                set.n_lc = n;
            }
            Ok(set)
        }
    }
}

/// Transfer generator for the config, with the default or overridden continuum.
pub fn transfer_system(
    cfg: &ExperimentConfig,
    temperature: f64,
    slaved_kappa: Option<f64>,
) -> Result<TransferSystem> {
    let set = transfer_couplings(cfg, temperature, slaved_kappa)?;
    let sim = &cfg.simulation;
    let g = set.effective_g_om.max(set.g_em);
    let (kappa, _, _) = set.thermal_rates();
    let spacing = sim
        .mode_spacing_mhz
        .map(|d| hz_to_angular(d * 1e6))
        .unwrap_or_else(|| Discretization::default_for(g, kappa).mode_spacing);
    // An explicit count fixed for one κ may not cover a slaved κ.
    let count = match (sim.mode_count, slaved_kappa) {
        (Some(n), None) => n,
        _ => covering_mode_count(spacing, g, kappa),
    };
    let system = build_transfer_system(&set, Discretization::new(spacing, count))?;
    let duration = sim.duration_ns * NANO;
    // A discretised continuum refocuses the emitted field after 2π/δω.
    if duration * spacing >= 2.0 * PI {
        return Err(Error::config(format!(
            "duration {} ns reaches the mode revival time {} ns; reduce the mode spacing",
            sim.duration_ns,
            2.0 * PI / spacing / NANO
        )));
    }
    Ok(system)
}

fn step_bound(cfg: &ExperimentConfig, system: &TransferSystem) -> f64 {
    match cfg.simulation.max_step_ps {
        Some(ps) => (ps * 1e-12).min(system.max_step()),
        None => default_step(system),
    }
}

/// Populations sampled along one transfer trajectory.
pub fn run_transfer(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let system = transfer_system(cfg, cfg.temperature(), None)?;
    let sim = &cfg.simulation;
    let traj = evolve_with_step(
        &system,
        sim.duration_ns * NANO,
        sim.sample_interval_ns * NANO,
        step_bound(cfg, &system),
    )?;
    let columns = vec![
        Column::new("t", "ns"),
        Column::new("emitter", "1"),
        Column::new("phonon", "1"),
        Column::new("microwave", "1"),
        Column::new("P_n", "1"),
        Column::new("F_trans", "1"),
    ];
    let mut table = ResultTable::new(Provenance::new("transfer", &cfg.source_hash), columns);
    for s in &traj.samples {
        table.push(Row::ok(vec![
            s.time / NANO,
            s.emitter,
            s.phonon,
            s.microwave,
            s.survival,
            s.fidelity,
        ]));
    }
    Ok(table)
}

/// Peak fidelity, final survival and threshold time across temperature or κ.
pub fn run_environment_scan(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let var = check_variable(
        cfg,
        &[SweepVariable::Temperature, SweepVariable::Kappa],
        "scan",
    )?;
    let points = cfg.require_sweep()?.points();
    let sim = &cfg.simulation;
    let threshold = sim.fidelity_threshold;
    let columns = vec![
        sweep_column(var),
        Column::new("max_F_trans", "1"),
        Column::new("P_n", "1"),
        Column::new("time_to_threshold", "ns"),
    ];
    let rows = par_map(&points, |v| {
        let (temperature, kappa) = match var {
            SweepVariable::Temperature => (v * 1e-3, None),
            _ => (cfg.temperature(), Some(hz_to_angular(v * 1e6))),
        };
        let summary = transfer_system(cfg, temperature, kappa).and_then(|system| {
            summarize(
                &system,
                sim.duration_ns * NANO,
                threshold,
                step_bound(cfg, &system),
            )
        });
        match summary {
            Ok(s) => match s.threshold_time {
                Some(t) => Row::ok(vec![v, s.max_fidelity, s.final_survival, t / NANO]),
                None => Row {
                    values: vec![v, s.max_fidelity, s.final_survival, f64::NAN],
                    status: RowStatus::NotReached {
                        achieved: s.max_fidelity,
                    },
                },
            },
            Err(e) => failed_row(4, v, &e),
        }
    });
    let mut table = ResultTable::new(Provenance::new("scan", &cfg.source_hash), columns);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
