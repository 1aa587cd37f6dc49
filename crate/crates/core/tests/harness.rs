use std::path::PathBuf;

use transducer_sim::harness::{
    config_hash, parse_config, run_coupling_sweep, run_environment_scan, run_mechanics_sweep,
    run_transfer, ExperimentConfig, ResultTable, RowStatus, REFERENCE_DEFAULTS, THREADS_ENV,
};
use transducer_sim::Error;

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn load(name: &str) -> (String, ExperimentConfig) {
    let text = std::fs::read_to_string(configs_dir().join(format!("{name}.toml"))).unwrap();
    let cfg = parse_config(&text).unwrap();
    (text, cfg)
}

fn with_sweep(variable: &str, start: f64, stop: f64, steps: usize) -> String {
    format!(
        "{REFERENCE_DEFAULTS}\n[sweep]\nvariable = \"{variable}\"\nstart = {start:?}\nstop = {stop:?}\nsteps = {steps}\n"
    )
}

fn value(table: &ResultTable, row: usize, column: &str) -> f64 {
    table.rows[row].values[table.column_index(column).unwrap()]
}

#[test]
fn bundled_defaults_match_shipped_file() {
    let (text, _) = load("reference_defaults");
    assert_eq!(text, REFERENCE_DEFAULTS);
}

#[test]
fn voltage_sweep_raises_frequency() {
    let (_, cfg) = load("mechanics_voltage");
    let t = run_mechanics_sweep(&cfg).unwrap();
    assert_eq!(t.rows.len(), 34);
    assert!(t.rows.iter().all(|r| r.is_ok()));
    let f = t.column("f_m").unwrap();
    assert!((f[0] - 2.020043198).abs() < 1e-8);
    assert!(f.windows(2).all(|w| w[1] >= w[0]));
    let x = t.column("x0").unwrap();
    assert_eq!(x[0], 0.0);
    assert!(x.windows(2).all(|w| w[1] >= w[0]));
    assert!((x[33] - 2.037696421).abs() < 1e-8);
    assert!((value(&t, 0, "tension") - 10.0).abs() < 1e-12);
}

#[test]
fn thickness_sweep_crosses_from_membrane_to_plate() {
    let (_, cfg) = load("mechanics_thickness");
    let t = run_mechanics_sweep(&cfg).unwrap();
    assert_eq!(t.rows.len(), 200);
    let f = t.column("f_m").unwrap();
    let h = t.column("thickness").unwrap();
    let slope = |i: usize, j: usize| (f[j] / f[i]).ln() / (h[j] / h[i]).ln();
    // Tension keeps the thin end well below the bending-only slope of 1.
    assert!(slope(0, 1) < 0.6, "{}", slope(0, 1));
    assert!((slope(180, 199) - 1.0).abs() < 0.02, "{}", slope(180, 199));
}

#[test]
fn pull_in_is_flagged_not_fatal() {
    let cfg = parse_config(&with_sweep("bias_voltage", 0.0, 6.0, 13)).unwrap();
    let t = run_mechanics_sweep(&cfg).unwrap();
    assert_eq!(t.rows.len(), 13);
    assert!(t.rows[..9].iter().all(|r| r.is_ok()));
    let last = t.rows.last().unwrap();
    assert_eq!(last.status, RowStatus::PullIn);
    assert_eq!(last.values[0], 6.0);
    assert!(last.values[1].is_nan());
    assert!(t.to_csv().trim_end().ends_with("pull_in"));
}

#[test]
fn coupling_sweep_over_bias() {
    let (_, cfg) = load("couplings_voltage");
    let t = run_coupling_sweep(&cfg).unwrap();
    assert_eq!(t.rows.len(), 34);
    for c in ["g_em", "g_om1", "g_om2"] {
        assert_eq!(value(&t, 0, c), 0.0, "{c}");
    }
    let g_em = value(&t, 33, "g_em");
    assert!((g_em - 212.715475).abs() < 1e-3, "{g_em}");
    assert!((value(&t, 25, "bias_voltage") - 2.5).abs() < 1e-12);
    let g_om2 = value(&t, 25, "g_om2");
    assert!((g_om2 - 41.096).abs() < 0.01, "{g_om2}");
    let em = t.column("g_em").unwrap();
    assert!(em.windows(2).all(|w| w[1] > w[0]));
    // Stark dominates strain over the working range.
    for r in 15..34 {
        assert!(value(&t, r, "g_om2") > 8.0 * value(&t, r, "g_om1"));
    }
}

#[test]
fn coupling_sweep_over_displacement() {
    let (_, cfg) = load("couplings_displacement");
    let t = run_coupling_sweep(&cfg).unwrap();
    assert_eq!(t.rows.len(), 41);
    assert_eq!(value(&t, 0, "bias_voltage"), 0.0);
    assert_eq!(value(&t, 0, "g_em"), 0.0);
    let g1 = value(&t, 40, "g_om1");
    assert!((g1 - 9.96).abs() < 0.01, "{g1}");
    let v = t.column("bias_voltage").unwrap();
    let stable = t.rows.iter().take_while(|r| r.is_ok()).count();
    assert!(v[..stable].windows(2).all(|w| w[1] > w[0]));
    assert!(t.rows[stable..]
        .iter()
        .all(|r| r.status == RowStatus::Unstable));
}

#[test]
fn sweep_variable_must_match_runner() {
    let cfg = parse_config(&with_sweep("temperature", 10.0, 100.0, 3)).unwrap();
    assert!(run_mechanics_sweep(&cfg).unwrap_err().is_config());
    assert!(run_coupling_sweep(&cfg).unwrap_err().is_config());
    let cfg = parse_config(&with_sweep("thickness", 1.0, 2.0, 3)).unwrap();
    assert!(run_environment_scan(&cfg).unwrap_err().is_config());
    let cfg = parse_config(REFERENCE_DEFAULTS).unwrap();
    assert!(run_mechanics_sweep(&cfg).unwrap_err().is_config());
}

#[test]
fn empty_range_rejected() {
    let err = parse_config(&with_sweep("bias_voltage", 0.0, 3.3, 0)).unwrap_err();
    assert!(err.is_config());
}

#[test]
fn transfer_table_layout() {
    let (text, cfg) = load("transfer_g50");
    let t = run_transfer(&cfg).unwrap();
    assert_eq!(t.rows.len(), 201);
    let names: Vec<&str> = t.columns.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        ["t", "emitter", "phonon", "microwave", "P_n", "F_trans"]
    );
    assert!(t.columns.iter().all(|c| !c.unit.is_empty()));
    assert_eq!(t.provenance.config_hash, config_hash(&text));
    assert_eq!(t.provenance.experiment, "transfer");
    let f = t.column("F_trans").unwrap();
    let max = f.iter().cloned().fold(0.0, f64::max);
    assert!((max - 0.995).abs() < 0.01, "{max}");
    let csv = t.to_csv();
    assert!(csv.contains(&format!("# config_sha256 = {}", config_hash(&text))));
    assert!(csv.contains("t [ns],emitter [1],phonon [1],microwave [1],P_n [1],F_trans [1],status"));
}

#[test]
fn zero_duration_transfer_is_initial_state() {
    let text = REFERENCE_DEFAULTS.replace("duration_ns = 100.0", "duration_ns = 0.0");
    let t = run_transfer(&parse_config(&text).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0].values, vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
}

#[test]
fn duration_past_revival_rejected() {
    let text = REFERENCE_DEFAULTS.replace("duration_ns = 100.0", "duration_ns = 1500.0");
    let err = run_transfer(&parse_config(&text).unwrap()).unwrap_err();
    assert!(err.is_config(), "{err}");
}

#[test]
fn transfer_needs_stable_bias_without_fixed_mode() {
    let text = REFERENCE_DEFAULTS
        .replace("mode_frequency_ghz = 5.0\n", "")
        .replace("bias_voltage_v = 3.3", "bias_voltage_v = 6.0");
    let err = run_transfer(&parse_config(&text).unwrap()).unwrap_err();
    assert!(matches!(err, Error::PullIn { .. }), "{err:?}");
}

#[test]
fn device_derived_transfer_runs() {
    let (_, cfg) = load("transfer_device");
    let t = run_transfer(&cfg).unwrap();
    for r in &t.rows {
        let v = &r.values;
        assert!((v[1] + v[2] + v[3] + v[5] - v[4]).abs() < 1e-12);
        assert!(v[4] <= 1.0 + 1e-9);
    }
}

#[test]
fn temperature_scan() {
    let (_, cfg) = load("scan_temperature");
    let t = run_environment_scan(&cfg).unwrap();
    assert_eq!(t.rows.len(), 20);
    let f = t.column("max_F_trans").unwrap();
    assert!(f.windows(2).all(|w| w[1] <= w[0]));
    assert!(f[19] > 0.95);
    assert_eq!(value(&t, 19, "temperature"), 1000.0);
    assert!(t.rows.iter().all(|r| r.is_ok()));
}

#[test]
fn kappa_scan_time_falls_with_decay_rate() {
    let (_, cfg) = load("scan_kappa");
    let t = run_environment_scan(&cfg).unwrap();
    let times = t.column("time_to_threshold").unwrap();
    assert!(times.iter().all(|x| x.is_finite()));
    assert!(times.windows(2).all(|w| w[1] < w[0]));
    let f = t.column("max_F_trans").unwrap();
    assert!(f.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn unreached_threshold_recorded_per_row() {
    let text =
        with_sweep("kappa", 20.0, 50.0, 2).replace("duration_ns = 100.0", "duration_ns = 20.0");
    let t = run_environment_scan(&parse_config(&text).unwrap()).unwrap();
    for r in &t.rows {
        match r.status {
            RowStatus::NotReached { achieved } => {
                assert!(achieved < 0.95);
                assert_eq!(achieved, r.values[1]);
                assert!(r.values[3].is_nan());
            }
            ref other => panic!("{other:?}"),
        }
    }
}

#[test]
fn reruns_are_bit_identical_across_worker_counts() {
    let (_, cfg) = load("scan_kappa");
    std::env::set_var(THREADS_ENV, "1");
    let a = run_environment_scan(&cfg).unwrap().to_csv();
    std::env::set_var(THREADS_ENV, "4");
    let b = run_environment_scan(&cfg).unwrap().to_csv();
    std::env::remove_var(THREADS_ENV);
    let c = run_environment_scan(&cfg).unwrap().to_csv();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn every_shipped_config_runs() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        let (_, cfg) = load(&name);
        let table = if name.starts_with("mechanics") {
            run_mechanics_sweep(&cfg)
        } else if name.starts_with("couplings") {
            run_coupling_sweep(&cfg)
        } else if name.starts_with("scan") {
            run_environment_scan(&cfg)
        } else {
            run_transfer(&cfg)
        }
        .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!table.rows.is_empty(), "{name}");
        assert!(table.columns.iter().all(|c| !c.unit.is_empty()));
        if let Some(sweep) = &cfg.sweep {
            assert_eq!(table.rows.len(), sweep.steps, "{name}");
        }
        if let Some(g) = name.strip_prefix("transfer_g") {
            let target = match g {
                "5" => 0.905,
                "20" => 0.990,
                "50" => 0.995,
                "200" => 0.996,
                other => panic!("unexpected {other}"),
            };
            let max = table
                .column("F_trans")
                .unwrap()
                .into_iter()
                .fold(0.0, f64::max);
            assert!((max - target).abs() <= 0.01, "{name}: {max}");
        }
        seen += 1;
    }
    assert_eq!(seen, 12);
}
