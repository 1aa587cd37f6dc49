//! Configuration, sweeps and tabular output.

mod config;
mod experiments;
mod table;

pub use config::{
    parse_config, CircuitBlock, DriveBlock, EmitterBlock, ExperimentConfig, GeometryBlock,
    SimulationBlock, SweepBlock, SweepVariable, REFERENCE_DEFAULTS,
};
pub use experiments::{
    run, run_coupling_sweep, run_environment_scan, run_mechanics_sweep, run_transfer,
    transfer_couplings, transfer_system, worker_count, Experiment, THREADS_ENV,
};
pub use table::{config_hash, Column, Provenance, ResultTable, Row, RowStatus, SCHEMA_VERSION};
