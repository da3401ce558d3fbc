//! Supply rates, storage functions and energy accounting along trajectories.
//!
//! Everything here works on sampled trajectories: integrals are composite
//! Simpson on the simulation grid, split at input discontinuities.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::extract::{synthesize_extraction_current, ExtractionProblem};
use crate::oneport::OnePortModel;
use crate::signals::CapacitanceProfile;
use crate::trajectory::{storage, PortTrajectory, Sample};
use crate::twoport::TwoPortModel;

/// Relative tolerance for cycle endpoint matching (unit floor).
pub const CYCLE_ENDPOINT_TOLERANCE: f64 = 1e-9;

/// Instantaneous supplied power as a function of port samples.
#[derive(Debug, Clone, Copy)]
pub enum SupplyRate {
    /// `V·I`.
    Electrical,
    /// `V·I + F·U`.
    TwoPort,
    Custom(fn(&Sample) -> f64),
}

impl SupplyRate {
    /// The passivity supply rate matching the trajectory's ports.
    pub fn passivity(traj: &PortTrajectory) -> Self {
        if traj.is_two_port() {
            SupplyRate::TwoPort
        } else {
            SupplyRate::Electrical
        }
    }

    pub fn eval(&self, s: &Sample) -> f64 {
        match self {
            SupplyRate::Electrical => s.v * s.i,
            SupplyRate::TwoPort => s.v * s.i + s.f * s.c_dot,
            SupplyRate::Custom(f) => f(s),
        }
    }
}

/// Candidate storage function `S(Q, C)`.
#[derive(Debug, Clone, Copy)]
pub struct StorageCandidate {
    pub function: fn(f64, f64) -> f64,
    /// Claimed nonnegative; checked by [`StorageCandidate::is_nonnegative_on`].
    pub nonnegative: bool,
}

impl Default for StorageCandidate {
    fn default() -> Self {
        Self {
            function: storage,
            nonnegative: true,
        }
    }
}

impl StorageCandidate {
    pub fn eval(&self, q: f64, c: f64) -> f64 {
        (self.function)(q, c)
    }

    pub fn is_nonnegative_on(&self, traj: &PortTrajectory) -> bool {
        (0..traj.len()).all(|k| self.eval(traj.q[k], traj.c[k]) >= 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissipationCheck {
    pub holds: bool,
    /// Smallest `∫s − ΔS` seen; negative values are violations.
    pub worst_slack: f64,
    /// Time of the smallest slack.
    pub location: f64,
    pub max_abs_slack: f64,
    pub tolerance: f64,
    /// False if a candidate flagged nonnegative went negative on the run.
    pub storage_nonnegative: bool,
}

impl DissipationCheck {
    /// Energy extracted beyond what was supplied, or zero.
    pub fn worst_violation(&self) -> f64 {
        (-self.worst_slack).max(0.0)
    }
}

/// A tolerance that scales with the stored energies on the trajectory.
pub fn default_tolerance(traj: &PortTrajectory) -> f64 {
    let peak = (0..traj.len()).map(|k| traj.storage(k).abs()).fold(0.0, f64::max);
    1e-6 * (1.0 + peak)
}

/// Check `S(x(t)) − S(x(0)) ≤ ∫₀ᵗ s dt` at every sample.
pub fn check_dissipation_inequality(
    traj: &PortTrajectory,
    candidate: &StorageCandidate,
    supply: &SupplyRate,
    tolerance: f64,
) -> DissipationCheck {
    let supplied = traj.cumulative(|s| supply.eval(s));
    let s0 = candidate.eval(traj.q[0], traj.c[0]);
    let mut worst = (f64::INFINITY, 0.0);
    let mut max_abs: f64 = 0.0;
    for (k, e) in supplied.iter().enumerate() {
        let slack = e - (candidate.eval(traj.q[k], traj.c[k]) - s0);
        max_abs = max_abs.max(slack.abs());
        if slack < worst.0 {
            worst = (slack, traj.time(k));
        }
    }
    DissipationCheck {
        holds: worst.0 >= -tolerance,
        worst_slack: worst.0,
        location: worst.1,
        max_abs_slack: max_abs,
        tolerance,
        storage_nonnegative: !candidate.nonnegative || candidate.is_nonnegative_on(traj),
    }
}

/// Energies over one closed cycle of `(C, V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleEnergy {
    /// `∮ V·I dt`.
    pub supplied: f64,
    /// `∮ ½·Ċ·V² dt`; equal to `supplied` by integration by parts.
    pub deficit: f64,
    /// `∮ F·U dt` (zero on one-port runs).
    pub mechanical: f64,
}

impl CycleEnergy {
    /// Net energy through every port of the device.
    pub fn total(&self) -> f64 {
        self.supplied + self.mechanical
    }
}

fn matches(a: f64, b: f64) -> bool {
    (a - b).abs() <= CYCLE_ENDPOINT_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Supplied energy over `[t1, t2]`, which must be a cycle: `C(t1) = C(t2)`
/// and `V(t1) = V(t2)`. Both sides of the integration-by-parts identity are
/// evaluated and must agree.
pub fn cycle_energy(traj: &PortTrajectory, t1: f64, t2: f64) -> Result<CycleEnergy> {
    if !(t1 < t2) {
        return Err(Error::Invalid("cycle needs t1 < t2"));
    }
    let (k1, k2) = (traj.index_of(t1)?, traj.index_of(t2)?);
    for (quantity, series) in [("C", &traj.c), ("V", &traj.v)] {
        if !matches(series[k1], series[k2]) {
            return Err(Error::NotCyclic {
                quantity,
                start: series[k1],
                end: series[k2],
            });
        }
    }
    let supplied = traj.integral(k1, k2, |s| s.v * s.i);
    let deficit = traj.integral(k1, k2, |s| 0.5 * s.c_dot * s.v * s.v);
    if (supplied - deficit).abs() > 1e-6 * (1.0 + supplied.abs()) {
        return Err(Error::IdentityMismatch {
            lhs: supplied,
            rhs: deficit,
        });
    }
    let mechanical = if traj.is_two_port() {
        traj.integral(k1, k2, |s| s.f * s.c_dot)
    } else {
        0.0
    };
    Ok(CycleEnergy {
        supplied,
        deficit,
        mechanical,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleEntry {
    pub start: f64,
    pub end: f64,
    pub e_elec: f64,
    pub e_mech: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    /// `∫ V·I dt`.
    pub e_elec: f64,
    /// `∫ F·U dt` on two-port runs; on one-port runs the missing power
    /// `−∫ ½·Ċ·V² dt` that no port accounts for.
    pub e_mech: f64,
    pub delta_s: f64,
    /// `e_elec + e_mech − delta_s`.
    pub residual: f64,
    pub per_cycle: Vec<CycleEntry>,
}

fn mech_power(s: &Sample, two_port: bool) -> f64 {
    if two_port {
        s.f * s.c_dot
    } else {
        -0.5 * s.c_dot * s.v * s.v
    }
}

/// Energy bookkeeping over the whole trajectory.
pub fn energy_balance(traj: &PortTrajectory) -> EnergyReport {
    let n = traj.len() - 1;
    let two = traj.is_two_port();
    let e_elec = traj.integral(0, n, |s| s.v * s.i);
    let e_mech = traj.integral(0, n, |s| mech_power(s, two));
    let delta_s = traj.storage(n) - traj.storage(0);
    EnergyReport {
        e_elec,
        e_mech,
        delta_s,
        residual: e_elec + e_mech - delta_s,
        per_cycle: Vec::new(),
    }
}

/// [`energy_balance`] plus a breakdown over consecutive periods.
pub fn energy_balance_per_cycle(traj: &PortTrajectory, period: f64) -> Result<EnergyReport> {
    if !(period > 0.0) {
        return Err(Error::Invalid("period must be positive"));
    }
    let mut report = energy_balance(traj);
    let two = traj.is_two_port();
    let cycles = libm::floor(traj.grid().end() / period * (1.0 + 1e-12)) as usize;
    for m in 0..cycles {
        let (start, end) = (m as f64 * period, (m + 1) as f64 * period);
        let (k1, k2) = (traj.index_of(start)?, traj.index_of(end)?);
        report.per_cycle.push(CycleEntry {
            start,
            end,
            e_elec: traj.integral(k1, k2, |s| s.v * s.i),
            e_mech: traj.integral(k1, k2, |s| mech_power(s, two)),
        });
    }
    Ok(report)
}

/// Device whose available storage is probed.
#[derive(Debug, Clone, PartialEq)]
pub enum Device {
    OnePort(OnePortModel),
    /// Two-port with its capacitance driven along `capacitance` via `U = Ċ`.
    TwoPort { q0: f64, capacitance: CapacitanceProfile },
}

impl Device {
    fn capacitance(&self) -> &CapacitanceProfile {
        match self {
            Device::OnePort(m) => m.capacitance(),
            Device::TwoPort { capacitance, .. } => capacitance,
        }
    }

    fn simulate(&self, current: &crate::signals::Waveform, t_end: f64, dt: f64) -> Result<PortTrajectory> {
        match self {
            Device::OnePort(m) => m.simulate_current_driven(current, t_end, dt),
            Device::TwoPort { q0, capacitance } => TwoPortModel::new(*q0, capacitance.value(0.0)?)?
                .simulate_two_port(current, capacitance.derivative(), t_end, dt),
        }
    }
}

/// Truncated Fourier currents used to lower-bound the available storage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationFamily {
    pub order: usize,
    /// Euclidean norm of the coefficient vector of every candidate.
    pub amplitude: f64,
    pub steps_per_period: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StorageVerdict {
    Finite,
    Growing,
}

/// Best-effort lower bounds on the available storage. The supremum is taken
/// only over the excitation family, never over all inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct AvailableStorage {
    pub horizons: Vec<usize>,
    pub lower_bounds: Vec<f64>,
    pub verdict: StorageVerdict,
    /// Average increase of the bound per extra cycle.
    pub per_cycle_gain: f64,
    pub supremum: f64,
}

/// Lower-bound `S_a(x₀) = sup −∫₀ᵀ s dt` for horizons given in whole periods.
pub fn estimate_available_storage(
    device: &Device,
    period: f64,
    horizons: &[usize],
    family: &ExcitationFamily,
) -> Result<AvailableStorage> {
    if horizons.is_empty() {
        return Err(Error::Invalid("at least one horizon is required"));
    }
    let mut horizons = horizons.to_vec();
    horizons.sort_unstable();
    horizons.dedup();
    let problem = ExtractionProblem::new(device.capacitance().clone(), period, family.order)?
        .with_resolution(family.steps_per_period)?;
    let synthesis = synthesize_extraction_current(&problem, family.amplitude)?;

    let dim = 2 * family.order;
    let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(2 * dim + 2);
    let mut push_pair = |c: Vec<f64>| {
        candidates.push(c.iter().map(|x| -x).collect());
        candidates.push(c);
    };
    if synthesis.coefficients.iter().any(|c| *c != 0.0) {
        push_pair(synthesis.coefficients.clone());
    }
    for j in 0..dim {
        let mut c = vec![0.0; dim];
        c[j] = family.amplitude;
        push_pair(c);
    }

    let max_cycles = *horizons.last().unwrap_or(&0);
    let dt = period / family.steps_per_period as f64;
    let mut bounds = vec![0.0_f64; horizons.len()];
    if max_cycles > 0 {
        for coeffs in &candidates {
            let current = problem.current(coeffs)?;
            let traj = device.simulate(&current, period * max_cycles as f64, dt)?;
            let supply = SupplyRate::passivity(&traj);
            let supplied = traj.cumulative(|s| supply.eval(s));
            let mut running: f64 = 0.0;
            let mut next = 0;
            for (k, e) in supplied.iter().enumerate() {
                running = running.max(-e);
                while next < horizons.len() && k == horizons[next] * family.steps_per_period {
                    bounds[next] = bounds[next].max(running);
                    next += 1;
                }
            }
        }
    }

    let (first, last) = (0, horizons.len() - 1);
    let span = (horizons[last] - horizons[first]) as f64;
    let gain = if span > 0.0 {
        (bounds[last] - bounds[first]) / span
    } else {
        0.0
    };
    let linear = horizons.windows(2).zip(bounds.windows(2)).all(|(h, b)| {
        let step = (b[1] - b[0]) / (h[1] - h[0]) as f64;
        step >= 0.5 * gain && step <= 1.5 * gain
    });
    let growing = span > 0.0 && gain > 1e-9 * (1.0 + bounds[first].abs()) && linear;
    Ok(AvailableStorage {
        supremum: bounds.iter().copied().fold(0.0, f64::max),
        horizons,
        lower_bounds: bounds,
        verdict: if growing {
            StorageVerdict::Growing
        } else {
            StorageVerdict::Finite
        },
        per_cycle_gain: gain,
    })
}
