//! Worst-case periodic currents for the one-port model.
//!
//! With `Q(0) = 0` the voltage is linear in the Fourier coefficients of a
//! zero-mean current, so the cycle energy `∮ ½ĊV² dt` is a quadratic form
//! `½ cᵀMc`. Its most negative eigenpair is the best extraction per unit
//! coefficient norm.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::energy::cycle_energy;
use crate::error::{Error, Result};
use crate::linalg::{self, symmetric_eigen, SymmetricEigen};
use crate::oneport::OnePortModel;
use crate::signals::{CapacitanceProfile, Waveform};
use crate::trajectory::{piecewise_integral, PortTrajectory};

pub const DEFAULT_STEPS_PER_PERIOD: usize = 4096;

/// Points at which periodicity of `C` is sampled.
const PERIODICITY_PROBES: usize = 97;

/// Zero-mean current Fourier family of order `N` over one period of `C`.
///
/// Coefficients are interleaved: `c = [a₁, b₁, a₂, b₂, …]` for
/// `Σ aₖ cos(kωt) + bₖ sin(kωt)` with `ω = 2π/T`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionProblem {
    capacitance: CapacitanceProfile,
    period: f64,
    order: usize,
    steps_per_period: usize,
}

impl ExtractionProblem {
    pub fn new(capacitance: CapacitanceProfile, period: f64, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("harmonic order must be at least 1"));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Invalid("period must be positive"));
        }
        for k in 0..PERIODICITY_PROBES {
            let t = period * k as f64 / (PERIODICITY_PROBES - 1) as f64;
            let (a, b) = match (capacitance.value(t), capacitance.value(t + period)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return Err(Error::NotPeriodic { period }),
            };
            if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::NotPeriodic { period });
            }
        }
        capacitance.check_positive(0.0, period, period / DEFAULT_STEPS_PER_PERIOD as f64)?;
        Ok(Self {
            capacitance,
            period,
            order,
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
        })
    }

    /// Grid steps per period; must be even.
    pub fn with_resolution(mut self, steps_per_period: usize) -> Result<Self> {
        if steps_per_period < 2 || steps_per_period % 2 != 0 {
            return Err(Error::Invalid("steps per period must be even and at least 2"));
        }
        self.steps_per_period = steps_per_period;
        Ok(self)
    }

    pub fn capacitance(&self) -> &CapacitanceProfile {
        &self.capacitance
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        2 * self.order
    }

    pub fn steps_per_period(&self) -> usize {
        self.steps_per_period
    }

    pub fn dt(&self) -> f64 {
        self.period / self.steps_per_period as f64
    }

    /// Current for an interleaved coefficient vector.
    pub fn current(&self, coeffs: &[f64]) -> Result<Waveform> {
        if coeffs.len() != self.dim() {
            return Err(Error::Invalid("coefficient vector has the wrong length"));
        }
        let cos = coeffs.iter().step_by(2).copied().collect();
        let sin = coeffs.iter().skip(1).step_by(2).copied().collect();
        Waveform::fourier(self.omega(), 0.0, cos, sin)
    }

    /// The `j`-th basis current.
    pub fn basis(&self, j: usize) -> Result<Waveform> {
        let mut e = vec![0.0; self.dim()];
        *e.get_mut(j).ok_or(Error::Invalid("basis index out of range"))? = 1.0;
        self.current(&e)
    }

    /// One-port run over `cycles` periods from `Q(0) = 0`.
    pub fn simulate(&self, current: &Waveform, cycles: usize) -> Result<PortTrajectory> {
        OnePortModel::with_charge(self.capacitance.clone(), 0.0)?.simulate_current_driven(
            current,
            self.period * cycles as f64,
            self.dt(),
        )
    }

    /// Simulated one-cycle supplied energy for `coeffs`.
    pub fn cycle_energy(&self, coeffs: &[f64]) -> Result<f64> {
        let traj = self.simulate(&self.current(coeffs)?, 1)?;
        Ok(traj.integral(0, traj.len() - 1, |s| s.v * s.i))
    }
}

/// `E(c) = ½ cᵀMc`, row-major `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticEnergyForm {
    pub dim: usize,
    pub matrix: Vec<f64>,
    pub order: usize,
    pub omega: f64,
}

impl QuadraticEnergyForm {
    pub fn energy(&self, coeffs: &[f64]) -> f64 {
        0.5 * linalg::quadratic_form(&self.matrix, coeffs)
    }

    pub fn gradient(&self, coeffs: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.matrix[i * self.dim + j] * coeffs[j]).sum())
            .collect()
    }

    pub fn eigen(&self) -> Result<SymmetricEigen> {
        symmetric_eigen(&self.matrix, self.dim)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (self.matrix[i * n + j] - self.matrix[j * n + i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Simulate every basis current and integrate `Ċ·Vᵢ·Vⱼ` over the period.
pub fn build_energy_form(p: &ExtractionProblem) -> Result<QuadraticEnergyForm> {
    let n = p.dim();
    let runs = (0..n)
        .map(|j| p.simulate(&p.basis(j)?, 1))
        .collect::<Result<Vec<_>>>()?;
    let shape = &runs[0];
    let last = shape.len() - 1;
    let mut matrix = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let (vi, vj) = (&runs[i].v, &runs[j].v);
            let m = piecewise_integral(
                shape.grid(),
                shape.jumps().iter().map(|jump| jump.index),
                0,
                last,
                |k, left| {
                    let s = if left { shape.sample_left(k) } else { shape.sample(k) };
                    s.c_dot * vi[k] * vj[k]
                },
            );
            matrix[i * n + j] = m;
            matrix[j * n + i] = m;
        }
    }
    Ok(QuadraticEnergyForm {
        dim: n,
        matrix,
        order: p.order(),
        omega: p.omega(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionVerdict {
    Extracting,
    PassiveOverFamily,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub verdict: ExtractionVerdict,
    /// Coefficients scaled to the requested amplitude (zero when passive).
    pub coefficients: Vec<f64>,
    pub current: Waveform,
    pub min_eigenvalue: f64,
    /// `½λ_min`: cycle energy of the unit-norm minimiser.
    pub energy_unit_norm: f64,
    /// Cycle energy at the requested amplitude.
    pub energy_per_cycle: f64,
    pub amplitude: f64,
    pub form: QuadraticEnergyForm,
}

/// Most negative eigenpair of the energy form, scaled to `amplitude`.
///
/// The eigenvector sign is fixed so that its largest component is positive.
pub fn synthesize_extraction_current(p: &ExtractionProblem, amplitude: f64) -> Result<Extraction> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::Invalid("amplitude must be finite and nonnegative"));
    }
    let form = build_energy_form(p)?;
    let eig = form.eigen()?;
    let lambda = eig.values[0];
    let spread = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let extracting = lambda < -1e-12 * (1.0 + spread);
    let coefficients = if extracting {
        let mut v = eig.vectors[0].clone();
        let lead = v
            .iter()
            .copied()
            .reduce(|a, b| if b.abs() > a.abs() + 1e-12 { b } else { a })
            .unwrap_or(0.0);
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v.iter().map(|x| x * amplitude).collect()
    } else {
        vec![0.0; form.dim]
    };
    let (energy_unit_norm, energy_per_cycle) = if extracting {
        (0.5 * lambda, form.energy(&coefficients))
    } else {
        (0.0, 0.0)
    };
    Ok(Extraction {
        verdict: if extracting {
            ExtractionVerdict::Extracting
        } else {
            ExtractionVerdict::PassiveOverFamily
        },
        current: p.current(&coefficients)?,
        coefficients,
        min_eigenvalue: lambda,
        energy_unit_norm,
        energy_per_cycle,
        amplitude,
        form,
    })
}

/// The hand-picked harvesting current for `C(t) = 2 + sin(t/2)`:
/// `5/2 sin ωt − 1/4 cos ωt − 5 sin 2ωt − 5/4 cos 2ωt + 11/4 cos 3ωt − 5/4 cos 4ωt`, `ω = ½`.
pub fn reference_profile() -> Waveform {
    Waveform::Fourier(crate::signals::Fourier {
        omega: 0.5,
        offset: 0.0,
        cos: vec![-0.25, -1.25, 2.75, -1.25],
        sin: vec![2.5, -5.0, 0.0, 0.0],
    })
}

/// Interleaved coefficients of [`reference_profile`] in the order-4 family.
pub fn reference_profile_coefficients() -> Vec<f64> {
    vec![-0.25, 2.5, -1.25, -5.0, 2.75, 0.0, -1.25, 0.0]
}

/// Euclidean norm of [`reference_profile_coefficients`].
pub fn reference_profile_norm() -> f64 {
    linalg::norm(&reference_profile_coefficients())
}

/// Richardson-extrapolated cycle energy from runs at `steps` and `2·steps`
/// per period (fourth-order error model).
pub fn reference_cycle_energy(
    model: &OnePortModel,
    current: &Waveform,
    period: f64,
    steps: usize,
) -> Result<f64> {
    let run = |n: usize| -> Result<f64> {
        let tr = model.simulate_current_driven(current, period, period / n as f64)?;
        Ok(cycle_energy(&tr, 0.0, period)?.supplied)
    };
    let (coarse, fine) = (run(steps)?, run(2 * steps)?);
    Ok((16.0 * fine - coarse) / 15.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Degenerate,
}

/// One closed loop of the `(Q, V)` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopArea {
    pub start: f64,
    pub end: f64,
    /// `∮ V dQ` from the polygon (minus the shoelace signed area).
    pub area: f64,
    /// Richardson combination of the full and every-other-sample polygons.
    pub extrapolated: f64,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lissajous {
    /// `(Q, V)` samples.
    pub points: Vec<(f64, f64)>,
    pub loops: Vec<LoopArea>,
}

impl Lissajous {
    pub fn total_area(&self) -> f64 {
        self.loops.iter().map(|l| l.area).sum()
    }

    pub fn total_extrapolated(&self) -> f64 {
        self.loops.iter().map(|l| l.extrapolated).sum()
    }
}

/// `∮ V dQ` of the closed polygon through `points`.
pub fn polygon_integral(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let twice_area: f64 = (0..n)
        .map(|k| {
            let (q0, v0) = points[k];
            let (q1, v1) = points[(k + 1) % n];
            q0 * v1 - q1 * v0
        })
        .sum();
    -0.5 * twice_area
}

/// `(Q, V)` curve with per-period signed loop areas.
pub fn lissajous(traj: &PortTrajectory, period: f64) -> Result<Lissajous> {
    if !(period > 0.0) {
        return Err(Error::Invalid("period must be positive"));
    }
    let cycles = libm::floor(traj.grid().end() / period * (1.0 + 1e-12)) as usize;
    if cycles == 0 {
        return Err(Error::Invalid("trajectory is shorter than one period"));
    }
    let points: Vec<(f64, f64)> = traj.q.iter().copied().zip(traj.v.iter().copied()).collect();
    let mut loops = Vec::with_capacity(cycles);
    for m in 0..cycles {
        let (start, end) = (m as f64 * period, (m + 1) as f64 * period);
        let (k0, k1) = (traj.index_of(start)?, traj.index_of(end)?);
        // the closing edge back to k0 is implicit, so leave k1 out
        let ring = &points[k0..k1];
        let area = polygon_integral(ring);
        let extrapolated = if ring.len() % 2 == 0 {
            let coarse: Vec<(f64, f64)> = ring.iter().step_by(2).copied().collect();
            (4.0 * area - polygon_integral(&coarse)) / 3.0
        } else {
            area
        };
        let scale = ring.iter().map(|(q, v)| (q * v).abs()).fold(0.0, f64::max);
        let orientation = if area.abs() <= 1e-9 * scale {
            Orientation::Degenerate
        } else if area < 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        };
        loops.push(LoopArea {
            start,
            end,
            area,
            extrapolated,
            orientation,
        });
    }
    Ok(Lissajous { points, loops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    const PERIOD: f64 = 4.0 * PI;
    const HARVEST_ORACLE: f64 = -8.857699156482358;

    fn harvesting() -> ExtractionProblem {
        ExtractionProblem::new(CapacitanceProfile::sinusoidal(2.0, 1.0, 0.5).unwrap(), PERIOD, 4).unwrap()
    }

    #[test]
    fn problem_validation() {
        let cap = CapacitanceProfile::sinusoidal(2.0, 1.0, 0.5).unwrap();
        assert!(ExtractionProblem::new(cap.clone(), PERIOD, 0).is_err());
        assert_eq!(
            ExtractionProblem::new(cap.clone(), 3.0, 2).unwrap_err(),
            Error::NotPeriodic { period: 3.0 }
        );
        let ramp = CapacitanceProfile::ramp(1.0, 0.1).unwrap();
        assert!(matches!(ExtractionProblem::new(ramp, 1.0, 1), Err(Error::NotPeriodic { .. })));
        assert!(ExtractionProblem::new(cap.clone(), 2.0 * PERIOD, 1).is_ok());
        assert!(harvesting().with_resolution(101).is_err());
    }

    #[test]
    fn reference_profile_is_zero_mean_member_of_family() {
        let i = reference_profile();
        assert!(i.integrate(0.0, PERIOD).unwrap().abs() < 1e-12);
        assert_eq!(harvesting().current(&reference_profile_coefficients()).unwrap(), i);
        assert!((reference_profile_norm() - libm::sqrt(42.0)).abs() < 1e-14);
    }

    #[test]
    fn constant_capacitance_gives_zero_form() {
        let p = ExtractionProblem::new(CapacitanceProfile::constant(3.0).unwrap(), 2.0, 3).unwrap();
        let form = build_energy_form(&p).unwrap();
        assert!(form.matrix.iter().all(|m| *m == 0.0));
        let x = synthesize_extraction_current(&p, 1.0).unwrap();
        assert_eq!(x.verdict, ExtractionVerdict::PassiveOverFamily);
        assert_eq!(x.energy_per_cycle, 0.0);
    }

    #[test]
    fn harvesting_form_is_indefinite_and_beats_reference_profile() {
        let p = harvesting();
        let form = build_energy_form(&p).unwrap();
        assert!(form.max_asymmetry() < 1e-12);
        let reference = form.energy(&reference_profile_coefficients());
        assert!((reference - HARVEST_ORACLE).abs() < 1e-6, "{reference}");
        let x = synthesize_extraction_current(&p, reference_profile_norm()).unwrap();
        assert_eq!(x.verdict, ExtractionVerdict::Extracting);
        assert!(x.min_eigenvalue < 0.0);
        assert!(x.energy_per_cycle <= reference);
        assert!((linalg::norm(&x.coefficients) - reference_profile_norm()).abs() < 1e-12);
        let simulated = p.cycle_energy(&x.coefficients).unwrap();
        assert!((simulated - x.energy_per_cycle).abs() < 1e-6 * (1.0 + simulated.abs()));
    }

    #[test]
    fn fidelity_on_random_coefficients() {
        let p = harvesting().with_resolution(1024).unwrap();
        let form = build_energy_form(&p).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let c: Vec<f64> = (0..p.dim()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let e = p.cycle_energy(&c).unwrap();
            assert!((form.energy(&c) - e).abs() < 1e-6 * (1.0 + e.abs()));
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = harvesting().with_resolution(512).unwrap();
        let form = build_energy_form(&p).unwrap();
        let c = reference_profile_coefficients();
        let grad = form.gradient(&c);
        let h = 1e-4;
        for j in 0..p.dim() {
            let (mut up, mut down) = (c.clone(), c.clone());
            up[j] += h;
            down[j] -= h;
            let fd = (p.cycle_energy(&up).unwrap() - p.cycle_energy(&down).unwrap()) / (2.0 * h);
            assert!((fd - grad[j]).abs() < 1e-6 * (1.0 + grad[j].abs()), "{j}: {fd} {}", grad[j]);
        }
    }

    #[test]
    fn single_harmonic_matches_brute_force() {
        let p = ExtractionProblem::new(CapacitanceProfile::sinusoidal(2.0, 1.0, 0.5).unwrap(), PERIOD, 1)
            .unwrap()
            .with_resolution(1024)
            .unwrap();
        let x = synthesize_extraction_current(&p, 1.0).unwrap();
        let mut best = f64::INFINITY;
        for k in 0..720 {
            let th = PI * k as f64 / 360.0;
            best = best.min(p.cycle_energy(&[libm::cos(th), libm::sin(th)]).unwrap());
        }
        assert!(x.energy_per_cycle <= best + 1e-9);
        assert!(best - x.energy_per_cycle < 1e-3 * (1.0 + best.abs()), "{best} {}", x.energy_per_cycle);
    }

    #[test]
    fn reference_energy_is_stable() {
        let model = OnePortModel::with_charge(CapacitanceProfile::sinusoidal(2.0, 1.0, 0.5).unwrap(), 0.0).unwrap();
        let e = reference_cycle_energy(&model, &reference_profile(), PERIOD, 1024).unwrap();
        assert!((e - HARVEST_ORACLE).abs() < 1e-10, "{e}");
    }

    #[test]
    fn lissajous_areas() {
        let p = harvesting();
        let tr = p.simulate(&reference_profile(), 2).unwrap();
        let l = lissajous(&tr, PERIOD).unwrap();
        assert_eq!(l.loops.len(), 2);
        assert_eq!(l.points.len(), tr.len());
        for lp in &l.loops {
            assert_eq!(lp.orientation, Orientation::CounterClockwise);
            assert!((lp.area - HARVEST_ORACLE).abs() < 1e-4);
            assert!((lp.extrapolated - HARVEST_ORACLE).abs() < 1e-6 * HARVEST_ORACLE.abs());
        }

        let cos = Waveform::fourier(1.0, 0.0, vec![1.0], vec![]).unwrap();
        let l = lissajous(&p.simulate(&cos, 1).unwrap(), PERIOD).unwrap();
        assert!(l.total_extrapolated().abs() < 1e-8);

        let flat = ExtractionProblem::new(CapacitanceProfile::constant(2.0).unwrap(), PERIOD, 1).unwrap();
        let l = lissajous(&flat.simulate(&reference_profile(), 1).unwrap(), PERIOD).unwrap();
        assert!(l.total_area().abs() < 1e-12);
        assert_eq!(l.loops[0].orientation, Orientation::Degenerate);
    }
}
