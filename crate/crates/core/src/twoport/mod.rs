//! The lossless two-port capacitor.
//!
//! States `Q̇ = I`, `Ċ = U`; outputs `V = Q/C` and the back EMF
//! `F = −Q²/(2C²)`. The storage `S(Q, C) = Q²/(2C)` obeys
//! `Ṡ = V·I + F·U`, so nothing is created or lost.

mod dual;
mod mechanical;

pub use dual::{InductorOnePort, InductorTrajectory, InductorTwoPort};
pub use mechanical::{MechanicalCapModel, MechanicalTrajectory};

pub use crate::energy::energy_balance;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ode::{self, Grid};
use crate::signals::Waveform;
use crate::trajectory::PortTrajectory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortModel {
    q0: f64,
    c0: f64,
}

impl TwoPortModel {
    pub fn new(q0: f64, c0: f64) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::NonPositiveCapacitance { t: 0.0, value: c0 });
        }
        if !q0.is_finite() {
            return Err(Error::Invalid("initial charge must be finite"));
        }
        Ok(Self { q0, c0 })
    }

    pub fn initial_charge(&self) -> f64 {
        self.q0
    }

    pub fn initial_capacitance(&self) -> f64 {
        self.c0
    }

    /// RK4 on `(Q, C)` driven by current `I` and capacitance rate `U`.
    pub fn simulate_two_port(
        &self,
        current: &Waveform,
        rate: &Waveform,
        t_end: f64,
        dt: f64,
    ) -> Result<PortTrajectory> {
        let grid = Grid::new(t_end, dt)?;
        let mut prev_c = self.c0;
        let states = ode::integrate(
            |t, _: &[f64; 2], side| Ok([current.eval_on(t, side)?, rate.eval_on(t, side)?]),
            [self.q0, self.c0],
            &grid,
            |k, x| {
                let c = x[1];
                if !(c > 0.0) {
                    // Linear interpolation of the first crossing inside the step.
                    let t0 = grid.time(k.saturating_sub(1));
                    let t = t0 + (grid.time(k) - t0) * prev_c / (prev_c - c);
                    return Err(Error::NonPositiveCapacitance { t, value: c });
                }
                prev_c = c;
                Ok(())
            },
        )?;
        let (q, c): (Vec<f64>, Vec<f64>) = states.into_iter().map(|[q, c]| (q, c)).unzip();
        PortTrajectory::assemble(grid, q, c, current, rate, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oneport::OnePortModel;
    use crate::signals::CapacitanceProfile;
    use alloc::vec;

    #[test]
    fn frozen_capacitance_matches_one_port() {
        let i = Waveform::fourier(2.0, 0.1, vec![1.0], vec![0.5]).unwrap();
        let two = TwoPortModel::new(0.3, 1.5)
            .unwrap()
            .simulate_two_port(&i, &Waveform::Constant(0.0), 3.0, 1e-2)
            .unwrap();
        let one = OnePortModel::with_charge(CapacitanceProfile::constant(1.5).unwrap(), 0.3)
            .unwrap()
            .simulate_current_driven(&i, 3.0, 1e-2)
            .unwrap();
        let f = two.force.as_ref().unwrap();
        for k in 0..two.len() {
            assert_eq!(two.q[k], one.q[k]);
            assert_eq!(two.v[k], one.v[k]);
            assert!((f[k] + two.q[k] * two.q[k] / (2.0 * 1.5 * 1.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn paradox_drive_closed_forms() {
        let u = Waveform::pulse(0.0, 1.0, 1.0).unwrap();
        let tr = TwoPortModel::new(1.0, 1.0)
            .unwrap()
            .simulate_two_port(&Waveform::Constant(0.0), &u, 1.0, 1e-3)
            .unwrap();
        let f = tr.force.as_ref().unwrap();
        for k in 0..tr.len() {
            let t = tr.time(k);
            assert!((tr.c[k] - (1.0 + t)).abs() < 1e-12);
            assert!((tr.v[k] - 1.0 / (1.0 + t)).abs() < 1e-12);
            assert!((f[k] + 0.5 / ((1.0 + t) * (1.0 + t))).abs() < 1e-12);
        }
        let last = tr.len() - 1;
        assert!((tr.c[last] - 2.0).abs() < 1e-12);
        assert!((tr.v[last] - 0.5).abs() < 1e-12);
        assert!((f[last] + 0.125).abs() < 1e-12);
    }

    #[test]
    fn back_emf_is_never_positive() {
        let tr = TwoPortModel::new(0.0, 2.0)
            .unwrap()
            .simulate_two_port(
                &Waveform::fourier(1.0, 0.0, vec![1.0], vec![]).unwrap(),
                &Waveform::fourier(0.5, 0.0, vec![0.5], vec![]).unwrap(),
                10.0,
                1e-2,
            )
            .unwrap();
        for (k, f) in tr.force.as_ref().unwrap().iter().enumerate() {
            assert!(*f <= 0.0);
            assert_eq!(*f == 0.0, tr.q[k] == 0.0);
        }
    }

    #[test]
    fn reports_first_capacitance_crossing() {
        let err = TwoPortModel::new(1.0, 1.0)
            .unwrap()
            .simulate_two_port(&Waveform::Constant(0.0), &Waveform::Constant(-0.5), 5.0, 0.3)
            .unwrap_err();
        match err {
            Error::NonPositiveCapacitance { t, .. } => assert!((t - 2.0).abs() < 1e-9, "{t}"),
            other => panic!("{other:?}"),
        }
        assert!(TwoPortModel::new(1.0, 0.0).is_err());
    }
}
