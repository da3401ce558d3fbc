//! Scenario files.
//!
//! INI-style text. Waveforms are given either as dotted keys at top level
//! (`C.kind = fourier`) or inside a section (`[C]` then `kind = fourier`).
//!
//! ```text
//! kind = oneport
//! t_end = 4*pi
//! dt = 4*pi/4096
//! Q0 = 0
//!
//! [C]
//! kind = fourier
//! params = 0.5; 2; ; 1
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use ini::{Ini, ParseOption};
use tvcap_core::signals::{CapacitanceProfile, Waveform};

use crate::waveform::{parse_number, parse_waveform};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    OnePort,
    TwoPort,
    Mechanical,
    InductorDual,
    Paradox,
}

impl ModelKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "oneport" => ModelKind::OnePort,
            "twoport" => ModelKind::TwoPort,
            "mechanical" => ModelKind::Mechanical,
            "inductor-dual" => ModelKind::InductorDual,
            "paradox" => ModelKind::Paradox,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::OnePort => "oneport",
            ModelKind::TwoPort => "twoport",
            ModelKind::Mechanical => "mechanical",
            ModelKind::InductorDual => "inductor-dual",
            ModelKind::Paradox => "paradox",
        }
    }

    /// Keys allowed beyond the common set.
    fn extra_keys(self) -> &'static [&'static str] {
        match self {
            ModelKind::Mechanical => &["J", "Theta0", "P0"],
            ModelKind::Paradox => &["k", "T"],
            _ => &[],
        }
    }
}

const COMMON_KEYS: [&str; 13] = [
    "kind", "C.kind", "C.params", "I.kind", "I.params", "U.kind", "U.params", "Q0", "C0", "V0",
    "t_end", "dt", "out",
];

/// Parse or validation failure, located by line and field where possible.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ModelKind,
    /// `C(t)`, `L(t)` for the inductor, `C(Θ)` for the mechanical kind.
    pub capacitance: Option<Waveform>,
    /// Current; terminal voltage for the inductor.
    pub input: Option<Waveform>,
    /// `U`; torque `τ` for the mechanical kind.
    pub rate: Option<Waveform>,
    pub q0: Option<f64>,
    pub c0: Option<f64>,
    pub v0: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub out: Option<PathBuf>,
    pub extra: BTreeMap<String, f64>,
    lines: BTreeMap<String, usize>,
}

struct Entry {
    value: String,
    line: usize,
}

/// Line of every `key` (qualified with its section) in the raw text.
fn key_lines(text: &str) -> Vec<(String, usize)> {
    let mut section: Option<String> = None;
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with(';') || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = Some(name.trim().to_string());
            continue;
        }
        let cut = line.find(['=', ':']).unwrap_or(line.len());
        let key = line[..cut].trim();
        let key = match &section {
            Some(s) => format!("{s}.{key}"),
            None => key.to_string(),
        };
        out.push((key, n + 1));
    }
    out
}

fn fail<T>(line: Option<usize>, field: Option<&str>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        field: field.map(str::to_string),
        message: message.into(),
    })
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let opts = ParseOption {
            enabled_quote: false,
            enabled_escape: false,
            ..ParseOption::default()
        };
        let ini = Ini::load_from_str_opt(text, opts).or_else(|e| fail(Some(e.line), None, e.msg))?;
        let mut lines = key_lines(text).into_iter();
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (section, props) in ini.iter() {
            if let Some(s) = section {
                if !matches!(s, "C" | "I" | "U") {
                    let line = text.lines().position(|l| l.trim() == format!("[{s}]")).map(|n| n + 1);
                    return fail(line, None, format!("unknown section [{s}]; expected [C], [I] or [U]"));
                }
            }
            for (key, value) in props.iter() {
                let full = match section {
                    Some(s) => format!("{s}.{key}"),
                    None => key.to_string(),
                };
                let line = lines.by_ref().find(|(k, _)| *k == full).map_or(0, |(_, n)| n);
                if let Some(prev) = entries.get(&full) {
                    return fail(Some(line), Some(&full), format!("duplicate key, first set on line {}", prev.line));
                }
                entries.insert(
                    full,
                    Entry {
                        value: value.to_string(),
                        line,
                    },
                );
            }
        }

        let kind_entry = entries
            .get("kind")
            .ok_or(ConfigError {
                line: None,
                field: Some("kind".into()),
                message: "missing model kind".into(),
            })?;
        let kind = ModelKind::parse(kind_entry.value.trim()).ok_or(ConfigError {
            line: Some(kind_entry.line),
            field: Some("kind".into()),
            message: format!(
                "unknown kind `{}`; expected oneport, twoport, mechanical, inductor-dual or paradox",
                kind_entry.value
            ),
        })?;
        for (key, e) in &entries {
            if !COMMON_KEYS.contains(&key.as_str()) && !kind.extra_keys().contains(&key.as_str()) {
                return fail(Some(e.line), Some(key), format!("unknown key for kind {}", kind.name()));
            }
        }

        let number = |key: &str| -> Result<Option<f64>, ConfigError> {
            match entries.get(key) {
                None => Ok(None),
                Some(e) => parse_number(&e.value)
                    .map(Some)
                    .or_else(|m| fail(Some(e.line), Some(key), m.0)),
            }
        };
        let wave = |name: &str| -> Result<Option<Waveform>, ConfigError> {
            let (k, p) = (format!("{name}.kind"), format!("{name}.params"));
            match (entries.get(&k), entries.get(&p)) {
                (None, None) => Ok(None),
                (Some(e), None) => fail(Some(e.line), Some(&p), "missing; set together with the kind"),
                (None, Some(e)) => fail(Some(e.line), Some(&k), "missing; set together with the params"),
                (Some(ek), Some(ep)) => parse_waveform(&ek.value, &ep.value).map(Some).or_else(|m| {
                    let line = if m.0.starts_with("unknown waveform kind") { ek.line } else { ep.line };
                    fail(Some(line), Some(name), m.0)
                }),
            }
        };

        let mut extra = BTreeMap::new();
        for key in kind.extra_keys() {
            if let Some(v) = number(key)? {
                extra.insert(key.to_string(), v);
            }
        }
        let config = Self {
            kind,
            capacitance: wave("C")?,
            input: wave("I")?,
            rate: wave("U")?,
            q0: number("Q0")?,
            c0: number("C0")?,
            v0: number("V0")?,
            t_end: number("t_end")?,
            dt: number("dt")?,
            out: entries.get("out").map(|e| PathBuf::from(e.value.trim())),
            extra,
            lines: entries.iter().map(|(k, e)| (k.clone(), e.line)).collect(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).or_else(|e| fail(None, None, format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Line on which `key` was set, if any.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.lines.get(key).copied()
    }

    fn error<T>(&self, key: &str, message: impl Into<String>) -> Result<T, ConfigError> {
        let line = self
            .line_of(key)
            .or_else(|| self.line_of(&format!("{key}.kind")));
        fail(line, Some(key), message)
    }

    fn require<T: Copy>(&self, value: Option<T>, key: &str) -> Result<T, ConfigError> {
        match value {
            Some(v) => Ok(v),
            None => self.error(key, format!("required for kind {}", self.kind.name())),
        }
    }

    fn forbid<T>(&self, value: &Option<T>, key: &str, why: &str) -> Result<(), ConfigError> {
        match value {
            Some(_) => self.error(key, format!("not used by kind {}: {why}", self.kind.name())),
            None => Ok(()),
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.q0.is_some() && self.v0.is_some() {
            return self.error("V0", "give either Q0 or V0, not both");
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return self.error("dt", "must be positive");
            }
        }
        if let Some(t) = self.t_end {
            if !(t >= 0.0) {
                return self.error("t_end", "must be nonnegative");
            }
        }
        match self.kind {
            ModelKind::OnePort | ModelKind::InductorDual if self.rate.is_none() => {
                self.require(self.capacitance.as_ref(), "C")?;
                self.forbid(&self.c0, "C0", "the initial value comes from C")?;
            }
            ModelKind::OnePort => {
                return self.error("U", "the one-port model has no mechanical input; use kind twoport");
            }
            ModelKind::TwoPort | ModelKind::InductorDual => match (&self.capacitance, &self.rate) {
                (Some(_), Some(_)) => return self.error("U", "give either C (U follows from it) or C0 with U"),
                (None, Some(_)) => {
                    self.require(self.c0, "C0")?;
                }
                (Some(_), None) => self.forbid(&self.c0, "C0", "the initial value comes from C")?,
                (None, None) => return self.error("C", "give C, or C0 with U"),
            },
            ModelKind::Mechanical => {
                self.require(self.capacitance.as_ref(), "C")?;
                self.require(self.extra.get("J").copied(), "J")?;
                self.forbid(&self.c0, "C0", "C is a function of the angle")?;
            }
            ModelKind::Paradox => {
                self.require(self.q0, "Q0")?;
                self.require(self.c0, "C0")?;
                self.require(self.extra.get("T").copied(), "T")?;
                self.forbid(&self.capacitance, "C", "the ramp is set by C0, k and T")?;
                self.forbid(&self.input, "I", "no current flows")?;
                self.forbid(&self.rate, "U", "the ramp is set by C0, k and T")?;
                self.forbid(&self.v0, "V0", "give the charge Q0")?;
                self.forbid(&self.t_end, "t_end", "the run covers 1.25·T")?;
                return Ok(());
            }
        }
        self.require(self.t_end, "t_end")?;
        self.require(self.dt, "dt")?;
        Ok(())
    }

    pub fn capacitance_profile(&self) -> Result<Option<CapacitanceProfile>, ConfigError> {
        match &self.capacitance {
            None => Ok(None),
            Some(w) => CapacitanceProfile::new(w.clone())
                .map(Some)
                .or_else(|e| self.error("C", e.to_string())),
        }
    }

    pub fn extra(&self, key: &str) -> Option<f64> {
        self.extra.get(key).copied()
    }
}
