use core::fmt;

/// Errors raised by waveform evaluation and the device simulators.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `t` lies outside the support of a finite-support waveform.
    Domain { t: f64, start: f64, end: f64 },
    /// The requested operation is not defined for this waveform variant.
    Unsupported(&'static str),
    /// A waveform or model was constructed with inconsistent data.
    Invalid(&'static str),
    /// Capacitance (or inductance) reached zero or below.
    NonPositiveCapacitance { t: f64, value: f64 },
    /// Cycle endpoints do not match.
    NotCyclic { quantity: &'static str, start: f64, end: f64 },
    /// The capacitance profile does not repeat with the declared period.
    NotPeriodic { period: f64 },
    /// Two independent evaluations of the same quantity disagree.
    IdentityMismatch { lhs: f64, rhs: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { t, start, end } => {
                write!(f, "t = {t} outside waveform support [{start}, {end}]")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::Invalid(what) => write!(f, "invalid: {what}"),
            Error::NonPositiveCapacitance { t, value } => {
                write!(f, "capacitance {value} is not positive at t = {t}")
            }
            Error::NotCyclic {
                quantity,
                start,
                end,
            } => write!(
                f,
                "interval is not a cycle: {quantity} starts at {start} and ends at {end}"
            ),
            Error::NotPeriodic { period } => {
                write!(f, "capacitance is not periodic with period {period}")
            }
            Error::IdentityMismatch { lhs, rhs } => {
                write!(f, "cycle identity mismatch: {lhs} vs {rhs}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
