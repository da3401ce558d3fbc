//! Time-aligned port samples produced by the simulators.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ode::Grid;
use crate::quad;
use crate::signals::Waveform;

/// Port variables at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub q: f64,
    pub c: f64,
    /// `Ċ`; equal to the mechanical input `U` on two-port runs.
    pub c_dot: f64,
    pub v: f64,
    pub i: f64,
    /// Back EMF `F = −Q²/(2C²)`; zero on one-port runs.
    pub f: f64,
}

/// An input discontinuity on the grid: left limits of the inputs at `index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub index: usize,
    pub i_left: f64,
    pub c_dot_left: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortTrajectory {
    grid: Grid,
    pub q: Vec<f64>,
    pub c: Vec<f64>,
    pub c_dot: Vec<f64>,
    pub v: Vec<f64>,
    pub i: Vec<f64>,
    /// Present on two-port runs.
    pub force: Option<Vec<f64>>,
    jumps: Vec<Jump>,
}

pub fn storage(q: f64, c: f64) -> f64 {
    q * q / (2.0 * c)
}

pub fn back_emf(q: f64, c: f64) -> f64 {
    -q * q / (2.0 * c * c)
}

impl PortTrajectory {
    /// Build from integrated `(Q, C)` states. `rate` is `Ċ` (one-port) or `U`.
    pub(crate) fn assemble(
        grid: Grid,
        q: Vec<f64>,
        c: Vec<f64>,
        current: &Waveform,
        rate: &Waveform,
        two_port: bool,
    ) -> Result<Self> {
        let n = grid.len();
        let mut i = Vec::with_capacity(n);
        let mut c_dot = Vec::with_capacity(n);
        let mut jumps = Vec::new();
        for k in 0..n {
            let t = grid.time(k);
            let (ir, ur) = (current.eval(t)?, rate.eval(t)?);
            if k > 0 {
                let (il, ul) = (current.eval_left(t)?, rate.eval_left(t)?);
                if il != ir || ul != ur {
                    jumps.push(Jump {
                        index: k,
                        i_left: il,
                        c_dot_left: ul,
                    });
                }
            }
            i.push(ir);
            c_dot.push(ur);
        }
        let v = q.iter().zip(&c).map(|(q, c)| q / c).collect();
        let force = two_port.then(|| q.iter().zip(&c).map(|(q, c)| back_emf(*q, *c)).collect());
        Ok(Self {
            grid,
            q,
            c,
            c_dot,
            v,
            i,
            force,
            jumps,
        })
    }

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

    pub fn is_two_port(&self) -> bool {
        self.force.is_some()
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn sample(&self, k: usize) -> Sample {
        Sample {
            t: self.grid.time(k),
            q: self.q[k],
            c: self.c[k],
            c_dot: self.c_dot[k],
            v: self.v[k],
            i: self.i[k],
            f: self.force.as_ref().map_or(0.0, |f| f[k]),
        }
    }

    /// Sample with inputs replaced by their left limits.
    pub fn sample_left(&self, k: usize) -> Sample {
        let mut s = self.sample(k);
        if let Ok(pos) = self.jumps.binary_search_by_key(&k, |j| j.index) {
            s.i = self.jumps[pos].i_left;
            s.c_dot = self.jumps[pos].c_dot_left;
        }
        s
    }

    /// Stored energy `Q²/(2C)` at sample `k`.
    pub fn storage(&self, k: usize) -> f64 {
        storage(self.q[k], self.c[k])
    }

    pub fn index_of(&self, t: f64) -> Result<usize> {
        self.grid.index_of(t)
    }

    fn jump_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.jumps.iter().map(|j| j.index)
    }

    /// `∫ power dt` between samples `k0 ≤ k1`, split at input jumps.
    pub fn integral<P: Fn(&Sample) -> f64>(&self, k0: usize, k1: usize, power: P) -> f64 {
        piecewise_integral(&self.grid, self.jump_indices(), k0, k1, |k, left| {
            power(&if left { self.sample_left(k) } else { self.sample(k) })
        })
    }

    /// Running `∫₀ power dt` at every sample.
    pub fn cumulative<P: Fn(&Sample) -> f64>(&self, power: P) -> Vec<f64> {
        piecewise_cumulative(&self.grid, self.jump_indices(), |k, left| {
            power(&if left { self.sample_left(k) } else { self.sample(k) })
        })
    }

    /// Truncate to samples `0..=k`.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k >= self.len() {
            return Err(Error::Invalid("truncation index beyond trajectory"));
        }
        let grid = Grid::with_steps(self.grid.time(k), k)?;
        let cut = |v: &Vec<f64>| v[..=k].to_vec();
        Ok(Self {
            grid,
            q: cut(&self.q),
            c: cut(&self.c),
            c_dot: cut(&self.c_dot),
            v: cut(&self.v),
            i: cut(&self.i),
            force: self.force.as_ref().map(cut),
            jumps: self.jumps.iter().copied().filter(|j| j.index <= k).collect(),
        })
    }
}

fn segments(
    jumps: impl Iterator<Item = usize>,
    k0: usize,
    k1: usize,
) -> impl Iterator<Item = (usize, usize)> {
    let mut cuts: Vec<usize> = core::iter::once(k0)
        .chain(jumps.filter(move |&j| j > k0 && j < k1))
        .collect();
    cuts.push(k1);
    (0..cuts.len() - 1).map(move |s| (cuts[s], cuts[s + 1]))
}

/// Simpson integral of `value(k, left)` over `[k0, k1]`; each segment between
/// jumps uses right values at its start and left values at its end.
pub(crate) fn piecewise_integral<F: Fn(usize, bool) -> f64>(
    grid: &Grid,
    jumps: impl Iterator<Item = usize>,
    k0: usize,
    k1: usize,
    value: F,
) -> f64 {
    if k1 <= k0 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut buf = Vec::new();
    for (a, b) in segments(jumps, k0, k1) {
        buf.clear();
        buf.extend((a..b).map(|k| value(k, false)));
        buf.push(value(b, true));
        total += quad::simpson(&buf, grid.step());
    }
    total
}

pub(crate) fn piecewise_cumulative<F: Fn(usize, bool) -> f64>(
    grid: &Grid,
    jumps: impl Iterator<Item = usize>,
    value: F,
) -> Vec<f64> {
    let n = grid.len();
    let mut out = alloc::vec![0.0; n];
    let mut buf = Vec::new();
    for (a, b) in segments(jumps, 0, n - 1) {
        buf.clear();
        buf.extend((a..b).map(|k| value(k, false)));
        buf.push(value(b, true));
        let base = out[a];
        for (off, v) in quad::cumulative_simpson(&buf, grid.step()).into_iter().enumerate() {
            out[a + off] = base + v;
        }
    }
    out
}
