//! Quadrature on uniform grids and adaptive quadrature for closed-form integrands.

use alloc::vec;
use alloc::vec::Vec;

/// Composite Simpson rule over uniformly spaced samples with spacing `h`.
///
/// An odd number of intervals closes with Simpson's 3/8 rule on the last
/// three; a single interval falls back to the trapezoid.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        _ if n % 2 == 0 => simpson_even(values, h),
        3 => simpson_38(values, h),
        _ => {
            let split = n - 3;
            simpson_even(&values[..=split], h) + simpson_38(&values[split..], h)
        }
    }
}

fn simpson_even(values: &[f64], h: f64) -> f64 {
    debug_assert!(values.len() % 2 == 1);
    let n = values.len() - 1;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (k, v) in values.iter().enumerate().take(n).skip(1) {
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + 4.0 * odd + 2.0 * even + values[n])
}

fn simpson_38(values: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3])
}

/// Running integral `out[k] = ∫ from sample 0 to sample k`.
///
/// Even indices are exact composite Simpson sums; odd indices add one
/// interval of the quadratic through the neighbouring three samples.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let len = values.len();
    let mut out = vec![0.0; len];
    if len < 2 {
        return out;
    }
    if len == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * values[0] + 8.0 * values[1] - values[2]);
    for k in 2..len {
        if k % 2 == 0 {
            out[k] = out[k - 2] + h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k]);
        } else {
            out[k] = out[k - 1] + h / 12.0 * (-values[k - 2] + 8.0 * values[k - 1] + 5.0 * values[k]);
        }
    }
    out
}

/// Adaptive Simpson quadrature of a smooth integrand on `[a, b]`.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Seed on a few panels so oscillatory integrands are not mistaken for flat ones.
    const SEED_PANELS: usize = 16;
    let width = (b - a) / SEED_PANELS as f64;
    let mut total = 0.0;
    for p in 0..SEED_PANELS {
        let lo = a + width * p as f64;
        let hi = if p + 1 == SEED_PANELS { b } else { lo + width };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += refine(&mut f, lo, hi, flo, fmid, fhi, whole, tol / SEED_PANELS as f64, 48);
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || libm::fabs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
