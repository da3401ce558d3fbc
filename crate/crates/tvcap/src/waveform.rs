//! Text form of waveforms as used in scenario files and on the command line.
//!
//! | kind               | params                        |
//! |--------------------|-------------------------------|
//! | `constant`         | `c`                           |
//! | `polynomial`       | `c0, c1, …` (ascending)       |
//! | `fourier`          | `ω; a0; a1, a2, …; b1, b2, …` |
//! | `piecewise_linear` | `t:v, t:v, …`                 |
//! | `steps`            | `t:v, t:v, …; end`            |
//! | `pulse`            | `start; stop; level`          |
//! | `sampled`          | `t0; dt; v, v, …`             |
//!
//! Numbers accept `pi` and products/quotients such as `4*pi/4096`.
//! Formatting uses Rust's shortest round-trip float output.

use std::fmt::Write as _;

use tvcap_core::signals::{Fourier, Sampled, Steps, Waveform};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct SpecError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError(msg.into()))
}

pub fn parse_number(s: &str) -> Result<f64, SpecError> {
    let s = s.trim();
    if s.is_empty() {
        return err("empty number");
    }
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = s;
    loop {
        let cut = rest.find(['*', '/']).unwrap_or(rest.len());
        let token = rest[..cut].trim();
        let x = match token {
            "pi" | "PI" | "π" => std::f64::consts::PI,
            "-pi" | "-PI" | "-π" => -std::f64::consts::PI,
            _ => token
                .parse::<f64>()
                .map_err(|_| SpecError(format!("`{s}` is not a number")))?,
        };
        value = if op == '*' { value * x } else { value / x };
        if cut == rest.len() {
            break;
        }
        op = rest.as_bytes()[cut] as char;
        rest = &rest[cut + 1..];
    }
    if !value.is_finite() {
        return err(format!("`{s}` is not finite"));
    }
    Ok(value)
}

fn numbers(s: &str) -> Result<Vec<f64>, SpecError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_number).collect()
}

fn pairs(s: &str) -> Result<Vec<(f64, f64)>, SpecError> {
    s.split(',')
        .map(|p| match p.split_once(':') {
            Some((t, v)) => Ok((parse_number(t)?, parse_number(v)?)),
            None => err(format!("`{}` is not a `t:v` pair", p.trim())),
        })
        .collect()
}

fn fields(params: &str, n: usize, kind: &str) -> Result<Vec<String>, SpecError> {
    let parts: Vec<String> = params.split(';').map(|p| p.trim().to_string()).collect();
    if parts.len() != n {
        return err(format!("{kind} expects {n} `;`-separated fields, got {}", parts.len()));
    }
    Ok(parts)
}

pub fn parse_waveform(kind: &str, params: &str) -> Result<Waveform, SpecError> {
    let core = |r: tvcap_core::Result<Waveform>| r.map_err(|e| SpecError(e.to_string()));
    match kind.trim() {
        "constant" => Ok(Waveform::Constant(parse_number(params)?)),
        "polynomial" => core(Waveform::polynomial(numbers(params)?)),
        "fourier" => {
            let f = fields(params, 4, "fourier")?;
            core(Waveform::fourier(
                parse_number(&f[0])?,
                parse_number(&f[1])?,
                numbers(&f[2])?,
                numbers(&f[3])?,
            ))
        }
        "piecewise_linear" => core(Waveform::piecewise_linear(pairs(params)?)),
        "steps" => {
            let f = fields(params, 2, "steps")?;
            let end = match f[1].as_str() {
                "inf" | "infinity" => f64::INFINITY,
                s => parse_number(s)?,
            };
            core(Waveform::steps(pairs(&f[0])?, end))
        }
        "pulse" => {
            let f = fields(params, 3, "pulse")?;
            core(Waveform::pulse(parse_number(&f[0])?, parse_number(&f[1])?, parse_number(&f[2])?))
        }
        "sampled" => {
            let f = fields(params, 3, "sampled")?;
            core(Waveform::sampled(parse_number(&f[0])?, parse_number(&f[1])?, numbers(&f[2])?))
        }
        other => err(format!("unknown waveform kind `{other}`")),
    }
}

/// `"kind: params"`, as taken by the command line.
pub fn parse_inline(s: &str) -> Result<Waveform, SpecError> {
    match s.split_once(':') {
        Some((kind, params)) => parse_waveform(kind, params),
        None => err(format!("expected `kind: params`, got `{s}`")),
    }
}

fn join(values: &[f64]) -> String {
    let mut out = String::new();
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write!(out, "{v}").unwrap();
    }
    out
}

fn join_pairs(points: &[(f64, f64)]) -> String {
    let mut out = String::new();
    for (k, (t, v)) in points.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write!(out, "{t}:{v}").unwrap();
    }
    out
}

/// `(kind, params)` for waveforms that have a text form. Sums and products
/// have none.
pub fn format_waveform(w: &Waveform) -> Result<(&'static str, String), SpecError> {
    Ok(match w {
        Waveform::Constant(c) => ("constant", format!("{c}")),
        Waveform::Polynomial(c) => ("polynomial", join(c)),
        Waveform::Fourier(Fourier {
            omega,
            offset,
            cos,
            sin,
        }) => ("fourier", format!("{omega}; {offset}; {}; {}", join(cos), join(sin))),
        Waveform::PiecewiseLinear(p) => ("piecewise_linear", join_pairs(p)),
        Waveform::Steps(Steps { levels, end }) => {
            let end = if end.is_infinite() { "inf".to_string() } else { format!("{end}") };
            ("steps", format!("{}; {end}", join_pairs(levels)))
        }
        Waveform::Sampled(Sampled { t0, dt, values }) => ("sampled", format!("{t0}; {dt}; {}", join(values))),
        Waveform::Sum(_) | Waveform::Product(..) => return err("composite waveforms have no text form"),
    })
}
