//! The classical one-port time-varying capacitor `Q = C(t)V`, `Q̇ = I`.
//!
//! Charge is the integrated state and voltage the output map `V = Q/C`.
//! This model omits whatever drives the capacitance change, so it can
//! release more energy over a cycle than it is supplied with.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ode::{self, Grid};
use crate::quad;
use crate::signals::{CapacitanceProfile, Waveform};
use crate::trajectory::PortTrajectory;

#[derive(Debug, Clone, PartialEq)]
pub struct OnePortModel {
    capacitance: CapacitanceProfile,
    q0: f64,
}

impl OnePortModel {
    /// Model initialised with voltage `v0`, i.e. `Q(0) = C(0)·v0`.
    pub fn new(capacitance: CapacitanceProfile, v0: f64) -> Result<Self> {
        let c0 = initial_capacitance(&capacitance)?;
        Ok(Self {
            capacitance,
            q0: c0 * v0,
        })
    }

    pub fn with_charge(capacitance: CapacitanceProfile, q0: f64) -> Result<Self> {
        initial_capacitance(&capacitance)?;
        Ok(Self { capacitance, q0 })
    }

    pub fn capacitance(&self) -> &CapacitanceProfile {
        &self.capacitance
    }

    pub fn initial_charge(&self) -> f64 {
        self.q0
    }

    pub fn initial_voltage(&self) -> f64 {
        self.q0 / self.capacitance.value(0.0).unwrap_or(f64::NAN)
    }

    /// Integrate `Q̇ = I(t)` with fixed-step RK4 on `[0, t_end]`.
    pub fn simulate_current_driven(
        &self,
        current: &Waveform,
        t_end: f64,
        dt: f64,
    ) -> Result<PortTrajectory> {
        let grid = Grid::new(t_end, dt)?;
        self.capacitance.check_positive(0.0, t_end, check_step(&grid))?;
        let states = ode::integrate(
            |t, _: &[f64; 1], side| Ok([current.eval_on(t, side)?]),
            [self.q0],
            &grid,
            |_, _| Ok(()),
        )?;
        let q = states.into_iter().map(|[q]| q).collect();
        let c = grid
            .times()
            .map(|t| self.capacitance.value(t))
            .collect::<Result<Vec<_>>>()?;
        PortTrajectory::assemble(grid, q, c, current, self.capacitance.derivative(), false)
    }

    /// Voltage at `t` from the integrating-factor solution of
    /// `V̇ + (Ċ/C)V = I/C`: with `α(τ) = ln C(τ) − ln C(0)`,
    /// `V(t) = e^{−α(t)} (∫₀ᵗ e^{α} I/C dτ + V(0))`.
    ///
    /// Independent of the RK4 path; the quadrature is adaptive.
    pub fn solve_voltage_ode(&self, current: &Waveform, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Invalid("solution time must be nonnegative"));
        }
        self.capacitance.check_positive(0.0, t, (t / 1024.0).max(1e-6))?;
        let c0 = self.capacitance.value(0.0)?;
        let ln_c0 = libm::log(c0);
        let alpha = |tau: f64| self.capacitance.value(tau).map(|c| libm::log(c) - ln_c0);
        let forced = quad::adaptive_simpson(
            |tau| {
                let (Ok(a), Ok(c), Ok(i)) = (alpha(tau), self.capacitance.value(tau), current.eval(tau))
                else {
                    return f64::NAN;
                };
                libm::exp(a) * i / c
            },
            0.0,
            t,
            1e-13,
        );
        if !forced.is_finite() {
            let (start, end) = current.support();
            return Err(Error::Domain { t, start, end });
        }
        let gamma = self.q0 / c0;
        Ok(libm::exp(-alpha(t)?) * (forced + gamma))
    }

    /// `I = C·V̇ + Ċ·V` for a prescribed voltage. This is the differentiating
    /// direction, which no physical source realises as such (a voltage step
    /// would demand an impulsive current); it is offered for analysis only.
    pub fn current_from_voltage(&self, voltage: &Waveform) -> Result<Waveform> {
        let dv = voltage.derivative()?;
        Ok(self.capacitance.waveform().clone() * dv
            + self.capacitance.derivative().clone() * voltage.clone())
    }

    /// As [`OnePortModel::current_from_voltage`] for sampled voltage data,
    /// using central differences for `V̇`.
    pub fn current_from_sampled_voltage(&self, voltage: &Waveform) -> Result<Waveform> {
        let Waveform::Sampled(s) = voltage else {
            return self.current_from_voltage(voltage);
        };
        let Waveform::Sampled(dv) = voltage.finite_difference()? else {
            unreachable!("finite difference of sampled data is sampled");
        };
        let values = s
            .values
            .iter()
            .zip(&dv.values)
            .enumerate()
            .map(|(k, (v, dv))| {
                let t = s.t0 + s.dt * k as f64;
                Ok(self.capacitance.value(t)? * dv + self.capacitance.rate(t)? * v)
            })
            .collect::<Result<Vec<_>>>()?;
        Waveform::sampled(s.t0, s.dt, values)
    }

    /// Change in the implied current when the voltage reference shifts by
    /// `psi`: `Ċ·psi`, which vanishes only for constant capacitance.
    pub fn gauge_residual(&self, psi: f64) -> Waveform {
        self.capacitance.derivative().scale(psi)
    }

    /// [`OnePortModel::gauge_residual`] computed as the difference of the
    /// currents implied by `voltage + psi` and `voltage`.
    pub fn gauge_residual_from(&self, voltage: &Waveform, psi: f64) -> Result<Waveform> {
        let shifted = self.current_from_voltage(&voltage.offset(psi))?;
        let base = self.current_from_voltage(voltage)?;
        Ok(shifted - base)
    }
}

/// Positivity is sampled at a quarter of the integrator step.
pub(crate) fn check_step(grid: &Grid) -> f64 {
    if grid.step() > 0.0 {
        grid.step()
    } else {
        1.0
    }
}

fn initial_capacitance(capacitance: &CapacitanceProfile) -> Result<f64> {
    let c0 = capacitance.value(0.0)?;
    if !(c0 > 0.0) {
        return Err(Error::NonPositiveCapacitance { t: 0.0, value: c0 });
    }
    Ok(c0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn ramp_instance() -> (OnePortModel, Waveform) {
        // C = 1 + t, I = (C0 + 2φt)a with C0 = φ = a = 1, V(0) = 2.
        let model = OnePortModel::new(CapacitanceProfile::ramp(1.0, 1.0).unwrap(), 2.0).unwrap();
        (model, Waveform::polynomial(vec![1.0, 2.0]).unwrap())
    }

    #[test]
    fn unit_integrator() {
        let m = OnePortModel::new(CapacitanceProfile::constant(1.0).unwrap(), 0.0).unwrap();
        let tr = m.simulate_current_driven(&Waveform::Constant(1.0), 1.0, 1e-3).unwrap();
        let last = tr.len() - 1;
        assert!((tr.q[last] - 1.0).abs() < 1e-12);
        assert!((tr.v[last] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ramp_matches_complete_solution() {
        let (m, i) = ramp_instance();
        let tr = m.simulate_current_driven(&i, 1.0, 1e-3).unwrap();
        for k in 0..tr.len() {
            let t = tr.time(k);
            let exact = t + 2.0 / (1.0 + t);
            assert!((tr.v[k] - exact).abs() < 1e-8);
        }
        assert!((tr.v[tr.len() - 1] - 2.0).abs() < 1e-12);
        assert!((m.solve_voltage_ode(&i, 1.0).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn sinusoidal_current_returns_to_rest() {
        let m = OnePortModel::with_charge(CapacitanceProfile::sinusoidal(2.0, 1.0, 0.5).unwrap(), 0.0)
            .unwrap();
        let i = Waveform::fourier(1.0, 0.0, vec![1.0], vec![]).unwrap();
        let tr = m.simulate_current_driven(&i, 4.0 * PI, 4.0 * PI / 4096.0).unwrap();
        let last = tr.len() - 1;
        assert!(tr.q[last].abs() < 1e-12);
        assert!(tr.v[last].abs() < 1e-12);
    }

    #[test]
    fn homogeneous_decay() {
        let (c0, phi, v0) = (1.5, 0.4, 3.0);
        let m = OnePortModel::new(CapacitanceProfile::ramp(c0, phi).unwrap(), v0).unwrap();
        let zero = Waveform::Constant(0.0);
        for t in [0.0, 0.5, 2.0, 7.0] {
            let v = m.solve_voltage_ode(&zero, t).unwrap();
            let c = c0 + phi * t;
            assert!((v - c0 * v0 / c).abs() < 1e-12);
            // Substitution into the ODE: V̇ + (Ċ/C)V with V̇ = −C0·v0·φ/C².
            let residual = -c0 * v0 * phi / (c * c) + phi / c * v;
            assert!(residual.abs() < 1e-10);
        }
    }

    #[test]
    fn constant_capacitor_ramp() {
        let m = OnePortModel::new(CapacitanceProfile::constant(2.0).unwrap(), 0.5).unwrap();
        let v = m.solve_voltage_ode(&Waveform::Constant(3.0), 4.0).unwrap();
        assert!((v - (0.5 + 3.0 * 4.0 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn current_from_voltage_examples() {
        let (c0, phi, a, v0) = (2.0, 0.5, 3.0, 1.5);
        let m = OnePortModel::new(CapacitanceProfile::ramp(c0, phi).unwrap(), 0.0).unwrap();
        let i = m.current_from_voltage(&Waveform::polynomial(vec![0.0, a]).unwrap()).unwrap();
        assert!(i.is_closed_form());
        for t in [0.0, 1.0, 2.5] {
            assert!((i.eval(t).unwrap() - (c0 + 2.0 * phi * t) * a).abs() < 1e-12);
        }
        let i = m.current_from_voltage(&Waveform::Constant(v0)).unwrap();
        assert_eq!(i.eval(0.0).unwrap(), phi * v0);
        let m = OnePortModel::new(CapacitanceProfile::constant(2.0).unwrap(), 0.0).unwrap();
        assert_eq!(m.current_from_voltage(&Waveform::Constant(4.0)).unwrap().eval(1.0).unwrap(), 0.0);
        let sampled = Waveform::sampled(0.0, 0.1, vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(m.current_from_voltage(&sampled), Err(Error::Unsupported(_))));
        let fd = m.current_from_sampled_voltage(&sampled).unwrap();
        assert!((fd.eval(0.1).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn gauge_residual_examples() {
        let v = Waveform::fourier(1.3, 0.2, vec![1.0, -0.5], vec![0.25]).unwrap();
        let constant = OnePortModel::new(CapacitanceProfile::constant(3.0).unwrap(), 0.0).unwrap();
        let ramp = OnePortModel::new(CapacitanceProfile::ramp(2.0, 0.7).unwrap(), 0.0).unwrap();
        for t in [0.0, 0.3, 1.7, 4.0] {
            assert_eq!(constant.gauge_residual(2.5).eval(t).unwrap(), 0.0);
            assert_eq!(ramp.gauge_residual(1.5).eval(t).unwrap(), 0.7 * 1.5);
            assert_eq!(constant.gauge_residual_from(&v, 2.5).unwrap().eval(t).unwrap(), 0.0);
            assert!((ramp.gauge_residual_from(&v, 1.0).unwrap().eval(t).unwrap() - 0.7).abs() < 1e-12);
            assert!(ramp.gauge_residual_from(&v, 0.0).unwrap().eval(t).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_nonpositive_capacitance() {
        let m = OnePortModel::new(CapacitanceProfile::ramp(1.0, -0.5).unwrap(), 1.0).unwrap();
        match m.simulate_current_driven(&Waveform::Constant(0.0), 3.0, 1e-2) {
            Err(Error::NonPositiveCapacitance { t, .. }) => assert!((t - 2.0).abs() < 0.01),
            other => panic!("{other:?}"),
        }
        assert!(m.solve_voltage_ode(&Waveform::Constant(0.0), 3.0).is_err());
        assert!(OnePortModel::new(CapacitanceProfile::ramp(-1.0, 1.0).unwrap(), 0.0).is_err());
    }
}
