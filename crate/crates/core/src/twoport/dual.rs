//! Time-varying inductor `Φ = L(t)I`, `Φ̇ = V`, obtained from the capacitor
//! models by renaming Q→Φ, C→L, V→I, I→V. Power `V·I` is symmetric in the
//! swap, so every energy statement carries over unchanged.

use crate::error::Result;
use crate::oneport::OnePortModel;
use crate::signals::{CapacitanceProfile, Waveform};
use crate::trajectory::PortTrajectory;

use super::TwoPortModel;

#[derive(Debug, Clone, PartialEq)]
pub struct InductorOnePort {
    inner: OnePortModel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductorTwoPort {
    inner: TwoPortModel,
}

/// Capacitor trajectory read back in inductor symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct InductorTrajectory(PortTrajectory);

impl InductorOnePort {
    /// Inductor carrying current `i0` at t = 0.
    pub fn new(inductance: CapacitanceProfile, i0: f64) -> Result<Self> {
        Ok(Self {
            inner: OnePortModel::new(inductance, i0)?,
        })
    }

    pub fn with_flux(inductance: CapacitanceProfile, phi0: f64) -> Result<Self> {
        Ok(Self {
            inner: OnePortModel::with_charge(inductance, phi0)?,
        })
    }

    pub fn inductance(&self) -> &CapacitanceProfile {
        self.inner.capacitance()
    }

    pub fn simulate_voltage_driven(
        &self,
        voltage: &Waveform,
        t_end: f64,
        dt: f64,
    ) -> Result<InductorTrajectory> {
        self.inner
            .simulate_current_driven(voltage, t_end, dt)
            .map(InductorTrajectory)
    }

    pub fn solve_current_ode(&self, voltage: &Waveform, t: f64) -> Result<f64> {
        self.inner.solve_voltage_ode(voltage, t)
    }

    /// `V = L·İ + L̇·I`.
    pub fn voltage_from_current(&self, current: &Waveform) -> Result<Waveform> {
        self.inner.current_from_voltage(current)
    }
}

impl InductorTwoPort {
    pub fn new(phi0: f64, l0: f64) -> Result<Self> {
        Ok(Self {
            inner: TwoPortModel::new(phi0, l0)?,
        })
    }

    /// Drive with terminal voltage and inductance rate `L̇ = U`.
    pub fn simulate(
        &self,
        voltage: &Waveform,
        rate: &Waveform,
        t_end: f64,
        dt: f64,
    ) -> Result<InductorTrajectory> {
        self.inner
            .simulate_two_port(voltage, rate, t_end, dt)
            .map(InductorTrajectory)
    }
}

impl InductorTrajectory {
    pub fn flux(&self) -> &[f64] {
        &self.0.q
    }

    pub fn inductance(&self) -> &[f64] {
        &self.0.c
    }

    pub fn current(&self) -> &[f64] {
        &self.0.v
    }

    pub fn voltage(&self) -> &[f64] {
        &self.0.i
    }

    /// `−Φ²/(2L²)` on two-port runs.
    pub fn force(&self) -> Option<&[f64]> {
        self.0.force.as_deref()
    }

    pub fn as_port(&self) -> &PortTrajectory {
        &self.0
    }

    pub fn into_port(self) -> PortTrajectory {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::energy_balance;
    use alloc::vec;

    #[test]
    fn constant_inductor_is_lossless() {
        let l = InductorOnePort::new(CapacitanceProfile::constant(0.5).unwrap(), 1.0).unwrap();
        let v = Waveform::fourier(3.0, 0.0, vec![1.0], vec![-0.4]).unwrap();
        let tr = l.simulate_voltage_driven(&v, 5.0, 1e-3).unwrap();
        let r = energy_balance(tr.as_port());
        assert_eq!(r.e_mech, 0.0);
        assert!((r.e_elec - r.delta_s).abs() < 1e-10);
    }

    #[test]
    fn ramp_with_constant_current() {
        let (l0, rate, i) = (2.0, 0.3, 1.5);
        let l = InductorOnePort::new(CapacitanceProfile::ramp(l0, rate).unwrap(), 0.0).unwrap();
        let v = l.voltage_from_current(&Waveform::Constant(i)).unwrap();
        for t in [0.0, 1.0, 4.0] {
            assert_eq!(v.eval(t).unwrap(), rate * i);
        }
        // Driving with that voltage from Φ(0) = L0·I keeps the current constant.
        let l = InductorOnePort::new(CapacitanceProfile::ramp(l0, rate).unwrap(), i).unwrap();
        let tr = l.simulate_voltage_driven(&v, 3.0, 1e-2).unwrap();
        assert!(tr.current().iter().all(|c| (c - i).abs() < 1e-12));
        assert!((tr.flux()[tr.flux().len() - 1] - (l0 + 3.0 * rate) * i).abs() < 1e-12);
    }

    #[test]
    fn two_port_dual_carries_force() {
        let l = InductorTwoPort::new(1.0, 1.0).unwrap();
        let tr = l
            .simulate(&Waveform::Constant(0.0), &Waveform::pulse(0.0, 1.0, 1.0).unwrap(), 1.0, 1e-3)
            .unwrap();
        let last = tr.inductance().len() - 1;
        assert!((tr.inductance()[last] - 2.0).abs() < 1e-12);
        assert!((tr.force().unwrap()[last] + 0.125).abs() < 1e-12);
        assert!(tr.voltage().iter().all(|v| *v == 0.0));
    }
}
