//! State-modulated capacitor `Q = C(Θ)V` on a rotor with inertia `J`.
//!
//! Hamiltonian `H = Q²/(2C(Θ)) + P²/(2J)`; states `Q̇ = I`, `Θ̇ = P/J`,
//! `Ṗ = τ + Q²C′(Θ)/(2C(Θ)²)`, where the last term is the electrostatic
//! torque `−∂H/∂Θ`. Along solutions `Ḣ = V·I + Θ̇·τ`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ode::{self, Grid};
use crate::signals::{CapacitanceProfile, Waveform};
use crate::trajectory::{back_emf, piecewise_cumulative, piecewise_integral, storage};

#[derive(Debug, Clone, PartialEq)]
pub struct MechanicalCapModel {
    inertia: f64,
    /// Capacitance as a function of rotor angle.
    capacitance: CapacitanceProfile,
    q0: f64,
    theta0: f64,
    p0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MechanicalTrajectory {
    grid: Grid,
    inertia: f64,
    pub q: Vec<f64>,
    pub theta: Vec<f64>,
    /// Angular momentum.
    pub p: Vec<f64>,
    pub c: Vec<f64>,
    /// `dC/dΘ` at the current angle.
    pub c_prime: Vec<f64>,
    pub v: Vec<f64>,
    pub i: Vec<f64>,
    pub tau: Vec<f64>,
    /// `(index, I⁻, τ⁻)` at input discontinuities.
    jumps: Vec<(usize, f64, f64)>,
}

impl MechanicalCapModel {
    pub fn new(
        inertia: f64,
        capacitance: CapacitanceProfile,
        q0: f64,
        theta0: f64,
        p0: f64,
    ) -> Result<Self> {
        if !(inertia > 0.0 && inertia.is_finite()) {
            return Err(Error::Invalid("moment of inertia must be positive"));
        }
        let c = capacitance.value(theta0)?;
        if !(c > 0.0) {
            return Err(Error::NonPositiveCapacitance { t: 0.0, value: c });
        }
        Ok(Self {
            inertia,
            capacitance,
            q0,
            theta0,
            p0,
        })
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn capacitance(&self) -> &CapacitanceProfile {
        &self.capacitance
    }

    pub fn hamiltonian(&self, q: f64, theta: f64, p: f64) -> Result<f64> {
        Ok(storage(q, self.capacitance.value(theta)?) + p * p / (2.0 * self.inertia))
    }

    pub fn simulate_state_modulated(
        &self,
        current: &Waveform,
        torque: &Waveform,
        t_end: f64,
        dt: f64,
    ) -> Result<MechanicalTrajectory> {
        let grid = Grid::new(t_end, dt)?;
        let j = self.inertia;
        let cap = &self.capacitance;
        let states = ode::integrate(
            |t, x: &[f64; 3], side| {
                let [q, theta, p] = *x;
                let c = cap.value(theta)?;
                if !(c > 0.0) {
                    return Err(Error::NonPositiveCapacitance { t, value: c });
                }
                let cp = cap.rate(theta)?;
                let electrostatic = 0.5 * q * q * cp / (c * c);
                Ok([current.eval_on(t, side)?, p / j, torque.eval_on(t, side)? + electrostatic])
            },
            [self.q0, self.theta0, self.p0],
            &grid,
            |k, x| {
                let c = cap.value(x[1])?;
                if !(c > 0.0) {
                    return Err(Error::NonPositiveCapacitance {
                        t: grid.time(k),
                        value: c,
                    });
                }
                Ok(())
            },
        )?;
        let n = grid.len();
        let mut tr = MechanicalTrajectory {
            grid,
            inertia: j,
            q: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
            c: Vec::with_capacity(n),
            c_prime: Vec::with_capacity(n),
            v: Vec::with_capacity(n),
            i: Vec::with_capacity(n),
            tau: Vec::with_capacity(n),
            jumps: Vec::new(),
        };
        for (k, [q, theta, p]) in states.into_iter().enumerate() {
            let t = grid.time(k);
            let c = cap.value(theta)?;
            let (i, tau) = (current.eval(t)?, torque.eval(t)?);
            if k > 0 {
                let (il, tl) = (current.eval_left(t)?, torque.eval_left(t)?);
                if il != i || tl != tau {
                    tr.jumps.push((k, il, tl));
                }
            }
            tr.q.push(q);
            tr.theta.push(theta);
            tr.p.push(p);
            tr.c.push(c);
            tr.c_prime.push(cap.rate(theta)?);
            tr.v.push(q / c);
            tr.i.push(i);
            tr.tau.push(tau);
        }
        Ok(tr)
    }
}

impl MechanicalTrajectory {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid.time(k)
    }

    pub fn angular_velocity(&self, k: usize) -> f64 {
        self.p[k] / self.inertia
    }

    /// Electric storage `Q²/(2C(Θ))`.
    pub fn electric_energy(&self, k: usize) -> f64 {
        storage(self.q[k], self.c[k])
    }

    pub fn kinetic_energy(&self, k: usize) -> f64 {
        self.p[k] * self.p[k] / (2.0 * self.inertia)
    }

    pub fn hamiltonian(&self, k: usize) -> f64 {
        self.electric_energy(k) + self.kinetic_energy(k)
    }

    /// Capacitance rate `U = C′(Θ)·Θ̇` seen by the electrical side.
    pub fn capacitance_rate(&self, k: usize) -> f64 {
        self.c_prime[k] * self.angular_velocity(k)
    }

    pub fn electrostatic_torque(&self, k: usize) -> f64 {
        0.5 * self.q[k] * self.q[k] * self.c_prime[k] / (self.c[k] * self.c[k])
    }

    fn inputs(&self, k: usize, left: bool) -> (f64, f64) {
        if left {
            if let Some(&(_, i, tau)) = self.jumps.iter().find(|j| j.0 == k) {
                return (i, tau);
            }
        }
        (self.i[k], self.tau[k])
    }

    fn integral<F: Fn(usize, f64, f64) -> f64>(&self, f: F) -> f64 {
        let n = self.len() - 1;
        piecewise_integral(&self.grid, self.jumps.iter().map(|j| j.0), 0, n, |k, left| {
            let (i, tau) = self.inputs(k, left);
            f(k, i, tau)
        })
    }

    /// `∫ V·I dt` over the run.
    pub fn electrical_supply(&self) -> f64 {
        self.integral(|k, i, _| self.v[k] * i)
    }

    /// `∫ Θ̇·τ dt` over the run.
    pub fn mechanical_supply(&self) -> f64 {
        self.integral(|k, _, tau| self.angular_velocity(k) * tau)
    }

    /// `∫ F·U dt` with `U = C′(Θ)Θ̇`: the work the rotor does on the field.
    pub fn field_work(&self) -> f64 {
        self.integral(|k, _, _| back_emf(self.q[k], self.c[k]) * self.capacitance_rate(k))
    }

    /// Running `∫ (V·I + Θ̇·τ) dt`.
    pub fn cumulative_supply(&self) -> Vec<f64> {
        piecewise_cumulative(&self.grid, self.jumps.iter().map(|j| j.0), |k, left| {
            let (i, tau) = self.inputs(k, left);
            self.v[k] * i + self.angular_velocity(k) * tau
        })
    }
}
