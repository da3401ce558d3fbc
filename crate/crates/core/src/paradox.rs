//! Charge-conserving capacitance change and where the energy goes.
//!
//! With no current, `Q` is fixed while `C` ramps from `C₀` to `k·C₀`. The
//! stored energy drops from `Q²/(2C₀)` to `Q²/(2kC₀)` and the difference
//! leaves through the mechanical port as `∫ F·U dt`, whatever the ramp time.

use alloc::vec::Vec;

use crate::energy::energy_balance;
use crate::error::{Error, Result};
use crate::signals::Waveform;
use crate::trajectory::storage;
use crate::twoport::TwoPortModel;

/// Grid steps used for the ramp itself.
pub const DEFAULT_RAMP_STEPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParadoxScenario {
    pub charge: f64,
    pub c0: f64,
    /// Ramp duration `T`.
    pub ramp: f64,
    /// End factor `k`: `C` goes from `C₀` to `k·C₀`.
    pub factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParadoxOutcome {
    pub ramp: f64,
    pub s_before: f64,
    pub s_after: f64,
    /// `∫ F·U dt`.
    pub w_mech: f64,
    /// `|W_mech − (S_after − S_before)|`.
    pub residual: f64,
    /// `∫ V·I dt`; zero since no current flows.
    pub w_elec: f64,
}

impl ParadoxScenario {
    pub fn new(charge: f64, c0: f64, ramp: f64, factor: f64) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::NonPositiveCapacitance { t: 0.0, value: c0 });
        }
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Invalid("end factor must be positive"));
        }
        if !(ramp >= 0.0 && ramp.is_finite()) {
            return Err(Error::Invalid("ramp duration must be nonnegative"));
        }
        if !charge.is_finite() {
            return Err(Error::Invalid("charge must be finite"));
        }
        Ok(Self {
            charge,
            c0,
            ramp,
            factor,
        })
    }

    /// Two-port drive: `I ≡ 0`, `U = (k − 1)C₀/T` on `[0, T)`.
    pub fn rate(&self) -> Result<Waveform> {
        if !(self.ramp > 0.0) {
            return Err(Error::Invalid("a zero-length ramp has no finite rate; use the closed form"));
        }
        Waveform::pulse(0.0, self.ramp, (self.factor - 1.0) * self.c0 / self.ramp)
    }

    /// Simulate the ramp and a quarter of its duration at rest afterwards.
    pub fn run(&self, ramp_steps: usize) -> Result<ParadoxOutcome> {
        let ramp_steps = ramp_steps.max(4) / 4 * 4;
        let t_end = 1.25 * self.ramp;
        let traj = TwoPortModel::new(self.charge, self.c0)?.simulate_two_port(
            &Waveform::Constant(0.0),
            &self.rate()?,
            t_end,
            self.ramp / ramp_steps as f64,
        )?;
        let report = energy_balance(&traj);
        let s_before = storage(self.charge, self.c0);
        let s_after = storage(self.charge, self.factor * self.c0);
        Ok(ParadoxOutcome {
            ramp: self.ramp,
            s_before,
            s_after,
            w_mech: report.e_mech,
            residual: (report.e_mech - (s_after - s_before)).abs(),
            w_elec: report.e_elec,
        })
    }

    /// `−Q²(1 − 1/k)/(2C₀)`, the work for any ramp time including the jump limit.
    pub fn closed_form_limit(&self) -> f64 {
        -self.charge * self.charge * (1.0 - 1.0 / self.factor) / (2.0 * self.c0)
    }
}

/// Run the scenario for each ramp time in `ramps`.
pub fn sweep(charge: f64, c0: f64, factor: f64, ramps: &[f64], ramp_steps: usize) -> Result<Vec<ParadoxOutcome>> {
    ramps
        .iter()
        .map(|&t| ParadoxScenario::new(charge, c0, t, factor)?.run(ramp_steps))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_scenario() {
        let out = ParadoxScenario::new(1.0, 1.0, 1.0, 2.0).unwrap().run(DEFAULT_RAMP_STEPS).unwrap();
        assert_eq!(out.s_before, 0.5);
        assert_eq!(out.s_after, 0.25);
        assert!((out.w_mech + 0.25).abs() < 1e-12);
        assert!(out.residual < 1e-12);
        assert_eq!(out.w_elec, 0.0);
    }

    #[test]
    fn identity_and_double_charge() {
        let same = ParadoxScenario::new(1.0, 1.0, 1.0, 1.0).unwrap().run(100).unwrap();
        assert_eq!(same.w_mech, 0.0);
        let s = ParadoxScenario::new(2.0, 1.0, 0.1, 2.0).unwrap();
        assert!((s.run(DEFAULT_RAMP_STEPS).unwrap().w_mech + 1.0).abs() < 1e-8);
        assert_eq!(s.closed_form_limit(), -1.0);
    }

    #[test]
    fn ramp_time_does_not_matter() {
        let outs = sweep(1.0, 1.0, 2.0, &[1.0, 0.1, 0.01, 0.001], DEFAULT_RAMP_STEPS).unwrap();
        for o in &outs {
            assert!((o.w_mech + 0.25).abs() < 1e-8, "{o:?}");
            assert!(o.residual < 1e-8);
        }
    }

    #[test]
    fn energy_leaves_when_capacitance_grows() {
        for k in [1.5, 2.0, 10.0] {
            let s = ParadoxScenario::new(0.7, 2.0, 0.5, k).unwrap();
            let out = s.run(DEFAULT_RAMP_STEPS).unwrap();
            assert!(out.w_mech < 0.0);
            assert!((out.w_mech - s.closed_form_limit()).abs() < 1e-8, "{k} {out:?}");
        }
        let steep = ParadoxScenario::new(0.7, 2.0, 0.5, 1e6).unwrap().run(400).unwrap();
        assert!(steep.w_mech < 0.0);
        let huge = ParadoxScenario::new(1.0, 1.0, 0.0, 1e300).unwrap();
        assert!((huge.closed_form_limit() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_zero_ramp_runs() {
        assert!(ParadoxScenario::new(1.0, 1.0, 0.0, 2.0).unwrap().run(10).is_err());
        assert!(ParadoxScenario::new(1.0, 0.0, 1.0, 2.0).is_err());
        assert!(ParadoxScenario::new(1.0, 1.0, -1.0, 2.0).is_err());
    }
}
