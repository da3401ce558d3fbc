//! Fixed-step classical Runge–Kutta on a uniform grid starting at t = 0.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform time grid `t_k = k·step`, `k = 0..=steps`, ending exactly at `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    steps: usize,
    step: f64,
    end: f64,
}

impl Grid {
    /// Grid covering `[0, t_end]` with spacing at most `dt`. When `t_end / dt`
    /// is not an integer the step count is rounded up.
    pub fn new(t_end: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Invalid("time step must be positive"));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::Invalid("end time must be finite and nonnegative"));
        }
        let ratio = t_end / dt;
        let steps = libm::ceil(ratio - 1e-9 * ratio.max(1.0)).max(0.0) as usize;
        Self::with_steps(t_end, steps)
    }

    pub fn with_steps(t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::Invalid("end time must be finite and nonnegative"));
        }
        let steps = if t_end == 0.0 { 0 } else { steps.max(1) };
        let step = if steps == 0 { 0.0 } else { t_end / steps as f64 };
        Ok(Self {
            steps,
            step,
            end: t_end,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of samples, `steps + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.end
        } else {
            self.step * k as f64
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }

    /// Index of the grid point at `t`, which must lie on the grid.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        if self.steps == 0 {
            return if t == 0.0 {
                Ok(0)
            } else {
                Err(Error::Domain { t, start: 0.0, end: 0.0 })
            };
        }
        let x = t / self.step;
        let k = libm::round(x);
        if k < 0.0 || k > self.steps as f64 {
            return Err(Error::Domain {
                t,
                start: 0.0,
                end: self.end,
            });
        }
        if libm::fabs(x - k) > 1e-6 {
            return Err(Error::Invalid("time does not fall on the simulation grid"));
        }
        Ok(k as usize)
    }
}

/// Which one-sided value a right-hand side should use for step inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// One classical RK4 step. The final stage samples inputs from the left so a
/// step edge lying on the grid is not smeared into the preceding interval.
pub fn rk4_step<const N: usize, F>(f: &mut F, t: f64, x: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N], Side) -> Result<[f64; N]>,
{
    let axpy = |a: f64, k: &[f64; N]| {
        let mut y = *x;
        for (yi, ki) in y.iter_mut().zip(k) {
            *yi += a * ki;
        }
        y
    };
    let k1 = f(t, x, Side::Right)?;
    let k2 = f(t + 0.5 * h, &axpy(0.5 * h, &k1), Side::Right)?;
    let k3 = f(t + 0.5 * h, &axpy(0.5 * h, &k2), Side::Right)?;
    let k4 = f(t + h, &axpy(h, &k3), Side::Left)?;
    let mut out = *x;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Integrate over `grid`, calling `check` on every new state.
pub fn integrate<const N: usize, F, G>(
    mut f: F,
    x0: [f64; N],
    grid: &Grid,
    mut check: G,
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N], Side) -> Result<[f64; N]>,
    G: FnMut(usize, &[f64; N]) -> Result<()>,
{
    let mut states = Vec::with_capacity(grid.len());
    check(0, &x0)?;
    states.push(x0);
    let mut x = x0;
    for k in 0..grid.steps() {
        let t = grid.time(k);
        let h = grid.time(k + 1) - t;
        x = rk4_step(&mut f, t, &x, h)?;
        check(k + 1, &x)?;
        states.push(x);
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_lands_on_end() {
        let g = Grid::new(4.0 * core::f64::consts::PI, 4.0 * core::f64::consts::PI / 4096.0).unwrap();
        assert_eq!(g.steps(), 4096);
        assert_eq!(g.time(4096), 4.0 * core::f64::consts::PI);
        let g = Grid::new(1.0, 0.3).unwrap();
        assert_eq!(g.steps(), 4);
        assert_eq!(g.step(), 0.25);
        assert_eq!(g.index_of(0.75).unwrap(), 3);
        assert!(g.index_of(0.6).is_err());
        assert!(Grid::new(1.0, 0.0).is_err());
        assert!(Grid::new(-1.0, 0.1).is_err());
    }

    #[test]
    fn rk4_is_fourth_order_on_exponential() {
        let err = |n: usize| {
            let g = Grid::with_steps(1.0, n).unwrap();
            let xs = integrate(|_, x: &[f64; 1], _| Ok([x[0]]), [1.0], &g, |_, _| Ok(())).unwrap();
            (xs[n][0] - core::f64::consts::E).abs()
        };
        let ratio = err(16) / err(32);
        assert!(ratio > 15.0 && ratio < 17.0, "{ratio}");
    }

    #[test]
    fn left_stage_sees_step_value() {
        // dx/dt = 1 on [0, 1), 0 afterwards; one step landing on the edge.
        let g = Grid::with_steps(1.0, 1).unwrap();
        let rhs = |t: f64, _: &[f64; 1], side: Side| {
            let on = t < 1.0 || (t == 1.0 && side == Side::Left);
            Ok([if on { 1.0 } else { 0.0 }])
        };
        let xs = integrate(rhs, [0.0], &g, |_, _| Ok(())).unwrap();
        assert_eq!(xs[1][0], 1.0);
    }
}
