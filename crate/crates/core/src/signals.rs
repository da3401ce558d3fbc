//! Scalar time functions: currents, voltages, capacitance profiles.
//!
//! Closed forms (constant, polynomial, Fourier) evaluate, differentiate and
//! integrate exactly. Piecewise and sampled data interpolate linearly.
//! Sums and products are kept as small expression trees; products are
//! integrated numerically on a uniform Simpson grid.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ode::Side;
use crate::quad;

/// Panels used when a product of waveforms has to be integrated numerically.
pub const PRODUCT_PANELS: usize = 4096;

/// Snap tolerance (in units of the sample spacing) for grid-aligned endpoints.
const GRID_SNAP: f64 = 1e-9;

/// Truncated Fourier series `a0 + Σ aₖ cos(kωt) + bₖ sin(kωt)`, k = 1, 2, ….
#[derive(Debug, Clone, PartialEq)]
pub struct Fourier {
    /// Fundamental angular frequency in rad/s.
    pub omega: f64,
    pub offset: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Fourier {
    pub fn period(&self) -> f64 {
        2.0 * core::f64::consts::PI / self.omega
    }

    pub fn harmonics(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn coeff(v: &[f64], k: usize) -> f64 {
        v.get(k).copied().unwrap_or(0.0)
    }
}

/// Piecewise-constant signal: `levels[i].1` holds from `levels[i].0` up to the
/// next start; the last level holds up to `end` (which may be infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct Steps {
    pub levels: Vec<(f64, f64)>,
    pub end: f64,
}

/// Uniformly sampled data, linearly interpolated between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl Sampled {
    pub fn end(&self) -> f64 {
        self.t0 + self.dt * (self.values.len() - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Waveform {
    Constant(f64),
    /// Coefficients in ascending powers of t.
    Polynomial(Vec<f64>),
    Fourier(Fourier),
    /// Breakpoints `(t, value)`, strictly increasing in t.
    PiecewiseLinear(Vec<(f64, f64)>),
    Steps(Steps),
    Sampled(Sampled),
    Sum(Vec<Waveform>),
    Product(Box<Waveform>, Box<Waveform>),
}

fn all_finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite())
}

impl Waveform {
    pub fn constant(c: f64) -> Self {
        Waveform::Constant(c)
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if !all_finite(&coeffs) {
            return Err(Error::Invalid("polynomial coefficients must be finite"));
        }
        Ok(match coeffs.len() {
            0 => Waveform::Constant(0.0),
            1 => Waveform::Constant(coeffs[0]),
            _ => Waveform::Polynomial(coeffs),
        })
    }

    pub fn fourier(omega: f64, offset: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Invalid("Fourier frequency must be positive"));
        }
        if !(offset.is_finite() && all_finite(&cos) && all_finite(&sin)) {
            return Err(Error::Invalid("Fourier coefficients must be finite"));
        }
        Ok(Waveform::Fourier(Fourier {
            omega,
            offset,
            cos,
            sin,
        }))
    }

    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid("piecewise-linear waveform needs two breakpoints"));
        }
        if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::Invalid("piecewise-linear breakpoints must be finite"));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Invalid("piecewise-linear breakpoints must be strictly increasing"));
        }
        Ok(Waveform::PiecewiseLinear(points))
    }

    pub fn steps(levels: Vec<(f64, f64)>, end: f64) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Invalid("step waveform needs at least one level"));
        }
        if levels.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) || end.is_nan() {
            return Err(Error::Invalid("step levels must be finite"));
        }
        if levels.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Invalid("step starts must be strictly increasing"));
        }
        if end < levels[levels.len() - 1].0 {
            return Err(Error::Invalid("step end precedes the last start"));
        }
        Ok(Waveform::Steps(Steps { levels, end }))
    }

    /// Rectangular pulse of height `level` on `[start, stop)`, zero afterwards.
    pub fn pulse(start: f64, stop: f64, level: f64) -> Result<Self> {
        Waveform::steps(vec![(start, level), (stop, 0.0)], f64::INFINITY)
    }

    pub fn sampled(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Invalid("sample spacing must be positive"));
        }
        if values.len() < 2 {
            return Err(Error::Invalid("sampled waveform needs two samples"));
        }
        if !t0.is_finite() || !all_finite(&values) {
            return Err(Error::Invalid("samples must be finite"));
        }
        Ok(Waveform::Sampled(Sampled { t0, dt, values }))
    }

    /// Re-check the construction invariants, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        match self {
            Waveform::Constant(c) if !c.is_finite() => Err(Error::Invalid("constant must be finite")),
            Waveform::Constant(_) => Ok(()),
            Waveform::Polynomial(c) => Waveform::polynomial(c.clone()).map(|_| ()),
            Waveform::Fourier(f) => {
                Waveform::fourier(f.omega, f.offset, f.cos.clone(), f.sin.clone()).map(|_| ())
            }
            Waveform::PiecewiseLinear(p) => Waveform::piecewise_linear(p.clone()).map(|_| ()),
            Waveform::Steps(s) => Waveform::steps(s.levels.clone(), s.end).map(|_| ()),
            Waveform::Sampled(s) => Waveform::sampled(s.t0, s.dt, s.values.clone()).map(|_| ()),
            Waveform::Sum(terms) => terms.iter().try_for_each(Waveform::validate),
            Waveform::Product(a, b) => a.validate().and_then(|_| b.validate()),
        }
    }

    /// Interval on which the waveform is defined.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Waveform::Constant(_) | Waveform::Polynomial(_) | Waveform::Fourier(_) => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            Waveform::PiecewiseLinear(p) => (p[0].0, p[p.len() - 1].0),
            Waveform::Steps(s) => (s.levels[0].0, s.end),
            Waveform::Sampled(s) => (s.t0, s.end()),
            Waveform::Sum(terms) => terms.iter().fold(
                (f64::NEG_INFINITY, f64::INFINITY),
                |(lo, hi), w| {
                    let (a, b) = w.support();
                    (lo.max(a), hi.min(b))
                },
            ),
            Waveform::Product(a, b) => {
                let (a0, a1) = a.support();
                let (b0, b1) = b.support();
                (a0.max(b0), a1.min(b1))
            }
        }
    }

    pub fn is_closed_form(&self) -> bool {
        match self {
            Waveform::Constant(_) | Waveform::Polynomial(_) | Waveform::Fourier(_) => true,
            Waveform::Sum(terms) => terms.iter().all(Waveform::is_closed_form),
            Waveform::Product(a, b) => a.is_closed_form() && b.is_closed_form(),
            _ => false,
        }
    }

    /// Fundamental period of a Fourier waveform.
    pub fn period(&self) -> Option<f64> {
        match self {
            Waveform::Fourier(f) if f.cos.iter().chain(&f.sin).any(|c| *c != 0.0) => Some(f.period()),
            _ => None,
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let (start, end) = self.support();
        let slack = match self {
            Waveform::Sampled(s) => GRID_SNAP * s.dt,
            _ => 0.0,
        };
        if t.is_nan() || t < start - slack || t > end + slack {
            return Err(Error::Domain { t, start, end });
        }
        Ok(())
    }

    /// Value at `t`. Step waveforms are right-continuous.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_sided(t, false)
    }

    /// Left limit at `t`; differs from [`Waveform::eval`] only at step edges.
    pub fn eval_left(&self, t: f64) -> Result<f64> {
        self.eval_sided(t, true)
    }

    pub fn eval_on(&self, t: f64, side: Side) -> Result<f64> {
        self.eval_sided(t, side == Side::Left)
    }

    fn eval_sided(&self, t: f64, left: bool) -> Result<f64> {
        match self {
            Waveform::Constant(c) => Ok(*c),
            Waveform::Polynomial(c) => Ok(horner(c, t)),
            Waveform::Fourier(f) => {
                let mut acc = f.offset;
                for k in 0..f.harmonics() {
                    let phase = (k + 1) as f64 * f.omega * t;
                    let (s, c) = libm::sincos(phase);
                    acc += Fourier::coeff(&f.cos, k) * c + Fourier::coeff(&f.sin, k) * s;
                }
                Ok(acc)
            }
            Waveform::PiecewiseLinear(p) => {
                self.check_domain(t)?;
                let i = p.partition_point(|(x, _)| *x <= t).clamp(1, p.len() - 1);
                let (x0, y0) = p[i - 1];
                let (x1, y1) = p[i];
                Ok(y0 + (y1 - y0) * (t - x0) / (x1 - x0))
            }
            Waveform::Steps(s) => {
                self.check_domain(t)?;
                let i = if left {
                    s.levels.partition_point(|(x, _)| *x < t)
                } else {
                    s.levels.partition_point(|(x, _)| *x <= t)
                };
                Ok(s.levels[i.max(1) - 1].1)
            }
            Waveform::Sampled(s) => {
                self.check_domain(t)?;
                let x = ((t - s.t0) / s.dt).clamp(0.0, (s.values.len() - 1) as f64);
                let i = (libm::floor(x) as usize).min(s.values.len() - 2);
                let frac = x - i as f64;
                Ok(s.values[i] + (s.values[i + 1] - s.values[i]) * frac)
            }
            Waveform::Sum(terms) => terms.iter().map(|w| w.eval_sided(t, left)).sum(),
            Waveform::Product(a, b) => Ok(a.eval_sided(t, left)? * b.eval_sided(t, left)?),
        }
    }

    /// Exact derivative. Piecewise-linear data differentiates to steps; sampled
    /// data is rejected (use finite differences explicitly).
    pub fn derivative(&self) -> Result<Waveform> {
        Ok(match self {
            Waveform::Constant(_) => Waveform::Constant(0.0),
            Waveform::Polynomial(c) => {
                let d: Vec<f64> = c
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, ck)| k as f64 * ck)
                    .collect();
                Waveform::polynomial(d)?
            }
            Waveform::Fourier(f) => {
                let n = f.harmonics();
                let mut cos = Vec::with_capacity(n);
                let mut sin = Vec::with_capacity(n);
                for k in 0..n {
                    let kw = (k + 1) as f64 * f.omega;
                    cos.push(kw * Fourier::coeff(&f.sin, k));
                    sin.push(-kw * Fourier::coeff(&f.cos, k));
                }
                trim_zeros(&mut cos);
                trim_zeros(&mut sin);
                Waveform::Fourier(Fourier {
                    omega: f.omega,
                    offset: 0.0,
                    cos,
                    sin,
                })
            }
            Waveform::PiecewiseLinear(p) => {
                let levels = p
                    .windows(2)
                    .map(|w| (w[0].0, (w[1].1 - w[0].1) / (w[1].0 - w[0].0)))
                    .collect();
                Waveform::Steps(Steps {
                    levels,
                    end: p[p.len() - 1].0,
                })
            }
            Waveform::Steps(s) => {
                if s.levels.windows(2).any(|w| w[0].1 != w[1].1) {
                    return Err(Error::Unsupported("derivative of a step waveform with jumps"));
                }
                Waveform::Steps(Steps {
                    levels: s.levels.iter().map(|(t, _)| (*t, 0.0)).collect(),
                    end: s.end,
                })
            }
            Waveform::Sampled(_) => {
                return Err(Error::Unsupported(
                    "derivative of sampled data; use finite_difference",
                ))
            }
            Waveform::Sum(terms) => Waveform::Sum(
                terms
                    .iter()
                    .map(Waveform::derivative)
                    .collect::<Result<Vec<_>>>()?,
            ),
            Waveform::Product(a, b) => {
                let da = a.derivative()?;
                let db = b.derivative()?;
                da * (**b).clone() + (**a).clone() * db
            }
        })
    }

    /// Central-difference derivative of sampled data (one-sided at the ends).
    pub fn finite_difference(&self) -> Result<Waveform> {
        let Waveform::Sampled(s) = self else {
            return self.derivative();
        };
        let n = s.values.len();
        let v = &s.values;
        let d = (0..n)
            .map(|k| match k {
                0 => (v[1] - v[0]) / s.dt,
                k if k == n - 1 => (v[n - 1] - v[n - 2]) / s.dt,
                k => (v[k + 1] - v[k - 1]) / (2.0 * s.dt),
            })
            .collect();
        Waveform::sampled(s.t0, s.dt, d)
    }

    /// Definite integral over `[t1, t2]`.
    pub fn integrate(&self, t1: f64, t2: f64) -> Result<f64> {
        self.integrate_with(t1, t2, PRODUCT_PANELS)
    }

    /// As [`Waveform::integrate`], with an explicit Simpson resolution for products.
    pub fn integrate_with(&self, t1: f64, t2: f64, panels: usize) -> Result<f64> {
        if !(t1 <= t2) {
            return Err(Error::Invalid("integration bounds must satisfy t1 <= t2"));
        }
        if t1 == t2 {
            return Ok(0.0);
        }
        match self {
            Waveform::Constant(c) => Ok(c * (t2 - t1)),
            Waveform::Polynomial(c) => Ok(poly_antiderivative(c, t2) - poly_antiderivative(c, t1)),
            Waveform::Fourier(f) => {
                let mut acc = f.offset * (t2 - t1);
                for k in 0..f.harmonics() {
                    let kw = (k + 1) as f64 * f.omega;
                    let (s2, c2) = libm::sincos(kw * t2);
                    let (s1, c1) = libm::sincos(kw * t1);
                    acc += Fourier::coeff(&f.cos, k) * (s2 - s1) / kw;
                    acc -= Fourier::coeff(&f.sin, k) * (c2 - c1) / kw;
                }
                Ok(acc)
            }
            Waveform::PiecewiseLinear(p) => {
                self.check_domain(t1)?;
                self.check_domain(t2)?;
                let mut acc = 0.0;
                for w in p.windows(2) {
                    let a = t1.max(w[0].0);
                    let b = t2.min(w[1].0);
                    if b > a {
                        acc += 0.5 * (b - a) * (self.eval(a)? + self.eval(b)?);
                    }
                }
                Ok(acc)
            }
            Waveform::Steps(s) => {
                self.check_domain(t1)?;
                self.check_domain(t2)?;
                let mut acc = 0.0;
                for (i, (start, level)) in s.levels.iter().enumerate() {
                    let stop = s.levels.get(i + 1).map_or(s.end, |l| l.0);
                    let a = t1.max(*start);
                    let b = t2.min(stop);
                    if b > a {
                        acc += level * (b - a);
                    }
                }
                Ok(acc)
            }
            Waveform::Sampled(s) => integrate_sampled(self, s, t1, t2),
            Waveform::Sum(terms) => terms.iter().map(|w| w.integrate_with(t1, t2, panels)).sum(),
            Waveform::Product(..) => {
                self.check_domain(t1)?;
                self.check_domain(t2)?;
                let panels = panels.max(2);
                let h = (t2 - t1) / panels as f64;
                let values = (0..=panels)
                    .map(|k| self.eval(t1 + h * k as f64))
                    .collect::<Result<Vec<_>>>()?;
                Ok(quad::simpson(&values, h))
            }
        }
    }

    /// Multiply by a scalar, staying in closed form where possible.
    pub fn scale(&self, k: f64) -> Waveform {
        match self {
            Waveform::Constant(c) => Waveform::Constant(k * c),
            Waveform::Polynomial(c) => Waveform::Polynomial(c.iter().map(|x| k * x).collect()),
            Waveform::Fourier(f) => Waveform::Fourier(Fourier {
                omega: f.omega,
                offset: k * f.offset,
                cos: f.cos.iter().map(|x| k * x).collect(),
                sin: f.sin.iter().map(|x| k * x).collect(),
            }),
            Waveform::PiecewiseLinear(p) => {
                Waveform::PiecewiseLinear(p.iter().map(|(t, v)| (*t, k * v)).collect())
            }
            Waveform::Steps(s) => Waveform::Steps(Steps {
                levels: s.levels.iter().map(|(t, v)| (*t, k * v)).collect(),
                end: s.end,
            }),
            Waveform::Sampled(s) => Waveform::Sampled(Sampled {
                t0: s.t0,
                dt: s.dt,
                values: s.values.iter().map(|x| k * x).collect(),
            }),
            Waveform::Sum(terms) => Waveform::Sum(terms.iter().map(|w| w.scale(k)).collect()),
            Waveform::Product(a, b) => Waveform::Product(Box::new(a.scale(k)), b.clone()),
        }
    }

    /// Add a constant level.
    pub fn offset(&self, c: f64) -> Waveform {
        match self {
            Waveform::Constant(x) => Waveform::Constant(x + c),
            Waveform::Polynomial(p) => {
                let mut p = p.clone();
                p[0] += c;
                Waveform::Polynomial(p)
            }
            Waveform::Fourier(f) => Waveform::Fourier(Fourier {
                offset: f.offset + c,
                ..f.clone()
            }),
            Waveform::PiecewiseLinear(p) => {
                Waveform::PiecewiseLinear(p.iter().map(|(t, v)| (*t, v + c)).collect())
            }
            Waveform::Steps(s) => Waveform::Steps(Steps {
                levels: s.levels.iter().map(|(t, v)| (*t, v + c)).collect(),
                end: s.end,
            }),
            Waveform::Sampled(s) => Waveform::Sampled(Sampled {
                values: s.values.iter().map(|x| x + c).collect(),
                ..s.clone()
            }),
            other => other.clone() + Waveform::Constant(c),
        }
    }

    /// Sample on `n + 1` uniform points of `[t0, t0 + n·dt]`.
    pub fn sample(&self, t0: f64, dt: f64, n: usize) -> Result<Waveform> {
        let values = (0..=n)
            .map(|k| self.eval(t0 + dt * k as f64))
            .collect::<Result<Vec<_>>>()?;
        Waveform::sampled(t0, dt, values)
    }
}

fn trim_zeros(v: &mut Vec<f64>) {
    while v.last() == Some(&0.0) {
        v.pop();
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn poly_antiderivative(coeffs: &[f64], t: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (k, c)| acc * t + c / (k + 1) as f64)
        * t
}

fn integrate_sampled(w: &Waveform, s: &Sampled, t1: f64, t2: f64) -> Result<f64> {
    w.check_domain(t1)?;
    w.check_domain(t2)?;
    let last = s.values.len() - 1;
    let x1 = ((t1 - s.t0) / s.dt).max(0.0);
    let x2 = ((t2 - s.t0) / s.dt).min(last as f64);
    let i1 = (libm::ceil(x1 - GRID_SNAP) as usize).min(last);
    let i2 = libm::floor(x2 + GRID_SNAP) as usize;
    if i1 > i2 || i2 > last {
        return Ok(0.5 * (t2 - t1) * (w.eval(t1)? + w.eval(t2)?));
    }
    let g1 = s.t0 + s.dt * i1 as f64;
    let g2 = s.t0 + s.dt * i2 as f64;
    let mut acc = quad::simpson(&s.values[i1..=i2], s.dt);
    if g1 > t1 {
        acc += 0.5 * (g1 - t1) * (w.eval(t1)? + s.values[i1]);
    }
    if t2 > g2 {
        acc += 0.5 * (t2 - g2) * (s.values[i2] + w.eval(t2)?);
    }
    Ok(acc)
}

impl Add for Waveform {
    type Output = Waveform;

    fn add(self, rhs: Waveform) -> Waveform {
        let mut terms = Vec::new();
        for w in [self, rhs] {
            match w {
                Waveform::Sum(inner) => terms.extend(inner),
                other => terms.push(other),
            }
        }
        Waveform::Sum(terms)
    }
}

impl Neg for Waveform {
    type Output = Waveform;

    fn neg(self) -> Waveform {
        self.scale(-1.0)
    }
}

impl Sub for Waveform {
    type Output = Waveform;

    fn sub(self, rhs: Waveform) -> Waveform {
        self + (-rhs)
    }
}

impl Mul for Waveform {
    type Output = Waveform;

    fn mul(self, rhs: Waveform) -> Waveform {
        match (self, rhs) {
            (Waveform::Constant(k), w) | (w, Waveform::Constant(k)) => w.scale(k),
            (a, b) => Waveform::Product(Box::new(a), Box::new(b)),
        }
    }
}

/// A strictly positive capacitance `C(t)` together with its rate `Ċ(t)`.
///
/// The same type carries inductance profiles for the dual device and
/// angle-dependent capacitance `C(Θ)` for the mechanical model.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitanceProfile {
    waveform: Waveform,
    derivative: Waveform,
}

impl CapacitanceProfile {
    pub fn new(waveform: Waveform) -> Result<Self> {
        waveform.validate()?;
        let derivative = waveform.derivative()?;
        Ok(Self {
            waveform,
            derivative,
        })
    }

    /// For data without an analytic derivative; the caller supplies `Ċ`.
    pub fn with_derivative(waveform: Waveform, derivative: Waveform) -> Result<Self> {
        waveform.validate()?;
        derivative.validate()?;
        Ok(Self {
            waveform,
            derivative,
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::NonPositiveCapacitance { t: 0.0, value: c });
        }
        Self::new(Waveform::Constant(c))
    }

    /// `C(t) = c0 + rate·t`.
    pub fn ramp(c0: f64, rate: f64) -> Result<Self> {
        Self::new(Waveform::polynomial(vec![c0, rate])?)
    }

    /// `C(t) = mean + amplitude·sin(ωt)`.
    pub fn sinusoidal(mean: f64, amplitude: f64, omega: f64) -> Result<Self> {
        Self::new(Waveform::fourier(omega, mean, vec![], vec![amplitude])?)
    }

    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(Waveform::piecewise_linear(points)?)
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }

    pub fn derivative(&self) -> &Waveform {
        &self.derivative
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.waveform.eval(t)
    }

    pub fn rate(&self, t: f64) -> Result<f64> {
        self.derivative.eval(t)
    }

    /// Dense positivity check on `[start, end]` at a quarter of `step`.
    pub fn check_positive(&self, start: f64, end: f64, step: f64) -> Result<()> {
        if !(step > 0.0) {
            return Err(Error::Invalid("positivity check step must be positive"));
        }
        let fine = 0.25 * step;
        let n = libm::ceil((end - start) / fine).max(0.0) as usize;
        for k in 0..=n {
            let t = if k == n { end } else { start + fine * k as f64 };
            let c = self.waveform.eval(t)?;
            if !(c > 0.0) {
                return Err(Error::NonPositiveCapacitance { t, value: c });
            }
        }
        Ok(())
    }
}
