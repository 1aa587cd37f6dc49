use num_complex::Complex64;

use super::system::{TransferState, TransferSystem};
use crate::error::{Error, Result};

/// Default fixed step: min(0.05·2π/ω_a, 0.01/g, 0.01/κ′), zero rates ignored.
pub fn default_step(system: &TransferSystem) -> f64 {
    let r = system.rates();
    let g = r.emitter_coupling.max(r.phonon_coupling);
    let mut dt = system.max_step();
    if g > 0.0 {
        dt = dt.min(0.01 / g);
    }
    if system.kappa_prime() > 0.0 {
        dt = dt.min(0.01 / system.kappa_prime());
    }
    dt
}

/// Classical RK4 stepper with reusable stage buffers.
pub struct Propagator<'a> {
    system: &'a TransferSystem,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl<'a> Propagator<'a> {
    pub fn new(system: &'a TransferSystem) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); system.dimension()];
        Self {
            system,
            k1: zero.clone(),
            k2: zero.clone(),
            k3: zero.clone(),
            k4: zero.clone(),
            scratch: zero,
        }
    }

    pub fn system(&self) -> &TransferSystem {
        self.system
    }

    /// Advances `state` by `dt` in place.
    pub fn advance(&mut self, state: &mut TransferState, dt: f64) -> Result<()> {
        let limit = self.system.max_step();
        // Tolerate rounding when dt is derived by dividing an interval.
        if !(dt >= 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::StepSize { dt, limit });
        }
        if state.amplitudes.len() != self.system.dimension() {
            return Err(Error::config(format!(
                "state has {} amplitudes, system expects {}",
                state.amplitudes.len(),
                self.system.dimension()
            )));
        }
        let sys = self.system;
        let y = &mut state.amplitudes;
        let half = 0.5 * dt;

        sys.derivative(y, &mut self.k1);
        for ((s, y), k) in self.scratch.iter_mut().zip(y.iter()).zip(&self.k1) {
            *s = y + k * half;
        }
        sys.derivative(&self.scratch, &mut self.k2);
        for ((s, y), k) in self.scratch.iter_mut().zip(y.iter()).zip(&self.k2) {
            *s = y + k * half;
        }
        sys.derivative(&self.scratch, &mut self.k3);
        for ((s, y), k) in self.scratch.iter_mut().zip(y.iter()).zip(&self.k3) {
            *s = y + k * dt;
        }
        sys.derivative(&self.scratch, &mut self.k4);

        let sixth = dt / 6.0;
        for (i, y) in y.iter_mut().enumerate() {
            *y += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
        state.time += dt;
        Ok(())
    }

    /// Advances over `interval` with equal steps no longer than `max_dt`.
    pub fn advance_by(
        &mut self,
        state: &mut TransferState,
        interval: f64,
        max_dt: f64,
    ) -> Result<()> {
        if interval <= 0.0 {
            return Ok(());
        }
        let steps = (interval / max_dt).ceil().max(1.0) as usize;
        let dt = interval / steps as f64;
        for _ in 0..steps {
            self.advance(state, dt)?;
        }
        Ok(())
    }
}

/// One fixed RK4 step returning the new state.
pub fn step(system: &TransferSystem, state: &TransferState, dt: f64) -> Result<TransferState> {
    let mut next = state.clone();
    Propagator::new(system).advance(&mut next, dt)?;
    Ok(next)
}

/// Populations recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub time: f64,
    /// |c1|², emitter excited
    pub emitter: f64,
    /// |c2|², phonon
    pub phonon: f64,
    /// |c3|², microwave photon
    pub microwave: f64,
    pub survival: f64,
    pub fidelity: f64,
}

impl Sample {
    pub fn of(state: &TransferState) -> Self {
        let emitter = state.c1().norm_sqr();
        let phonon = state.c2().norm_sqr();
        let microwave = state.c3().norm_sqr();
        let fidelity = state.transfer_fidelity();
        Self {
            time: state.time,
            emitter,
            phonon,
            microwave,
            survival: state.survival_probability(),
            fidelity,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub final_state: TransferState,
}

impl Trajectory {
    pub fn max_fidelity(&self) -> f64 {
        self.samples.iter().map(|s| s.fidelity).fold(0.0, f64::max)
    }

    /// First sampled time with F_trans ≥ threshold.
    pub fn first_time_above(&self, threshold: f64) -> Option<f64> {
        self.samples
            .iter()
            .find(|s| s.fidelity >= threshold)
            .map(|s| s.time)
    }

    /// First sampled time with F_trans within `fraction` of its maximum over the run.
    pub fn time_to_fraction_of_max(&self, fraction: f64) -> Option<f64> {
        self.first_time_above(fraction * self.max_fidelity())
    }
}

/// Integrates from the initial state over `duration`, recording a sample
/// every `sample_interval` (plus t = 0 and the final time) on a fixed step
/// no longer than [`default_step`].
pub fn evolve(system: &TransferSystem, duration: f64, sample_interval: f64) -> Result<Trajectory> {
    evolve_with_step(system, duration, sample_interval, default_step(system))
}

/// [`evolve`] with an explicit upper bound on the step.
pub fn evolve_with_step(
    system: &TransferSystem,
    duration: f64,
    sample_interval: f64,
    max_dt: f64,
) -> Result<Trajectory> {
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(Error::config(format!(
            "duration must be non-negative, got {duration}"
        )));
    }
    if !(sample_interval > 0.0) {
        return Err(Error::config(format!(
            "sample interval must be positive, got {sample_interval}"
        )));
    }
    if !(max_dt > 0.0) || max_dt > system.max_step() * (1.0 + 1e-12) {
        return Err(Error::StepSize {
            dt: max_dt,
            limit: system.max_step(),
        });
    }
    let mut state = TransferState::initial(system);
    let mut prop = Propagator::new(system);
    let mut samples = vec![Sample::of(&state)];
    let segments = (duration / sample_interval - 1e-9).ceil().max(0.0) as usize;
    for k in 1..=segments {
        let target = (k as f64 * sample_interval).min(duration);
        let interval = target - state.time;
        prop.advance_by(&mut state, interval, max_dt)?;
        state.time = target;
        samples.push(Sample::of(&state));
    }
    Ok(Trajectory {
        samples,
        final_state: state,
    })
}

/// First time F_trans reaches `threshold`, checked after every default step.
pub fn time_to_fidelity(system: &TransferSystem, threshold: f64, t_max: f64) -> Result<f64> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::config(format!(
            "threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let dt = default_step(system);
    let steps = (t_max / dt).ceil() as usize;
    let dt = if steps > 0 { t_max / steps as f64 } else { dt };
    let mut state = TransferState::initial(system);
    let mut prop = Propagator::new(system);
    let mut best: f64 = 0.0;
    for _ in 0..steps {
        prop.advance(&mut state, dt)?;
        let f = state.transfer_fidelity();
        if f >= threshold {
            return Ok(state.time);
        }
        best = best.max(f);
    }
    Err(Error::NotReached {
        threshold,
        t_max,
        achieved: best,
    })
}

/// Scalar figures of one run, checked after every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub duration: f64,
    pub max_fidelity: f64,
    pub time_of_max: f64,
    pub final_fidelity: f64,
    pub final_survival: f64,
    /// First time F_trans reached the threshold, if it did.
    pub threshold_time: Option<f64>,
}

/// Integrates over `duration` in one pass with steps no longer than `max_dt`.
pub fn summarize(
    system: &TransferSystem,
    duration: f64,
    threshold: f64,
    max_dt: f64,
) -> Result<RunSummary> {
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(Error::config(format!(
            "duration must be non-negative, got {duration}"
        )));
    }
    if !(max_dt > 0.0) || max_dt > system.max_step() * (1.0 + 1e-12) {
        return Err(Error::StepSize {
            dt: max_dt,
            limit: system.max_step(),
        });
    }
    let mut state = TransferState::initial(system);
    let mut prop = Propagator::new(system);
    let steps = (duration / max_dt).ceil() as usize;
    let dt = if steps > 0 {
        duration / steps as f64
    } else {
        0.0
    };
    let (mut max_fidelity, mut time_of_max) = (0.0, 0.0);
    let mut threshold_time = None;
    for _ in 0..steps {
        prop.advance(&mut state, dt)?;
        let f = state.transfer_fidelity();
        if f > max_fidelity {
            max_fidelity = f;
            time_of_max = state.time;
        }
        if threshold_time.is_none() && f >= threshold {
            threshold_time = Some(state.time);
        }
    }
    Ok(RunSummary {
        duration,
        max_fidelity,
        time_of_max,
        final_fidelity: state.transfer_fidelity(),
        final_survival: state.survival_probability(),
        threshold_time,
    })
}
