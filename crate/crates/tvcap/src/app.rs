//! The three commands, callable without the argument parser.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use tvcap_core::energy::{energy_balance, energy_balance_per_cycle, EnergyReport};
use tvcap_core::extract::{
    lissajous, reference_profile_norm, synthesize_extraction_current, Extraction, ExtractionProblem,
    ExtractionVerdict,
};
use tvcap_core::oneport::OnePortModel;
use tvcap_core::paradox::{ParadoxOutcome, ParadoxScenario, DEFAULT_RAMP_STEPS};
use tvcap_core::signals::{CapacitanceProfile, Waveform};
use tvcap_core::trajectory::PortTrajectory;
use tvcap_core::twoport::{InductorOnePort, InductorTwoPort, MechanicalCapModel, TwoPortModel};

use crate::config::{ConfigError, ModelKind, ScenarioConfig};
use crate::csv_out;
use crate::waveform::{format_waveform, parse_inline};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("model: {0}")]
    Model(#[from] tvcap_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl AppError {
    /// 2 for usage and config problems, 3 for model and runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Usage(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, AppError>;

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Shortest round-trip form, in exponent notation when very small or large.
fn human(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Named results of a run, printed as an aligned block.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub title: String,
    pub values: Vec<(String, f64)>,
    pub lines: Vec<String>,
}

impl Summary {
    fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            values: Vec::new(),
            lines: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, value: f64) {
        self.values.push((name.to_string(), value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let width = self.values.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        for (name, value) in &self.values {
            writeln!(f, "  {name:<width$} = {}", human(*value))?;
        }
        for line in &self.lines {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

fn push_report(summary: &mut Summary, report: &EnergyReport) {
    summary.push("E_elec", report.e_elec);
    summary.push("E_mech", report.e_mech);
    summary.push("dS", report.delta_s);
    summary.push("residual", report.residual);
    for (n, c) in report.per_cycle.iter().enumerate() {
        summary.lines.push(format!(
            "cycle {} [{}, {}]: E_elec = {}, E_mech = {}",
            n + 1,
            human(c.start),
            human(c.end),
            human(c.e_elec),
            human(c.e_mech)
        ));
    }
}

/// Per-period breakdown when `C` is periodic and the grid lands on its periods.
fn report_for(traj: &PortTrajectory, profile: Option<&CapacitanceProfile>) -> EnergyReport {
    profile
        .and_then(|p| p.waveform().period())
        .and_then(|t| energy_balance_per_cycle(traj, t).ok())
        .unwrap_or_else(|| energy_balance(traj))
}

fn initial_charge(config: &ScenarioConfig, c0: f64) -> f64 {
    config.q0.or(config.v0.map(|v| v * c0)).unwrap_or(0.0)
}

pub struct SimulateOutput {
    pub summary: Summary,
    pub report: Option<EnergyReport>,
    pub written: Option<PathBuf>,
}

/// Run a scenario; write its CSV to `out` (or the file's `out` key).
pub fn simulate(config: &ScenarioConfig, out: Option<&Path>, report_path: Option<&Path>) -> Result<SimulateOutput> {
    let out = out.map(Path::to_path_buf).or_else(|| config.out.clone());
    let zero = Waveform::Constant(0.0);
    let input = config.input.as_ref().unwrap_or(&zero);
    let profile = config.capacitance_profile()?;
    let (t_end, dt) = (config.t_end.unwrap_or(0.0), config.dt.unwrap_or(1.0));
    let mut summary = Summary::new(format!("model: {}", config.kind.name()));
    let mut report = None;

    match config.kind {
        ModelKind::OnePort | ModelKind::TwoPort => {
            let traj = match (&profile, &config.rate, config.kind) {
                (Some(p), None, ModelKind::OnePort) => {
                    let q0 = initial_charge(config, p.value(0.0)?);
                    OnePortModel::with_charge(p.clone(), q0)?.simulate_current_driven(input, t_end, dt)?
                }
                (Some(p), None, _) => {
                    let c0 = p.value(0.0)?;
                    TwoPortModel::new(initial_charge(config, c0), c0)?.simulate_two_port(input, p.derivative(), t_end, dt)?
                }
                (_, Some(u), _) => {
                    let c0 = config.c0.unwrap_or(f64::NAN);
                    TwoPortModel::new(initial_charge(config, c0), c0)?.simulate_two_port(input, u, t_end, dt)?
                }
                _ => unreachable!("validated configuration"),
            };
            let r = report_for(&traj, profile.as_ref());
            summary.push("samples", traj.len() as f64);
            summary.push("t_end", traj.grid().end());
            push_report(&mut summary, &r);
            let last = traj.len() - 1;
            summary.push("Q_end", traj.q[last]);
            summary.push("V_end", traj.v[last]);
            if let Some(path) = &out {
                csv_out::write_trajectory(create(path)?, &traj)?;
            }
            report = Some(r);
        }
        ModelKind::InductorDual => {
            let traj = match (&profile, &config.rate) {
                (Some(l), None) => {
                    let phi0 = initial_charge(config, l.value(0.0)?);
                    InductorOnePort::with_flux(l.clone(), phi0)?.simulate_voltage_driven(input, t_end, dt)?
                }
                (_, Some(u)) => {
                    let l0 = config.c0.unwrap_or(f64::NAN);
                    InductorTwoPort::new(initial_charge(config, l0), l0)?.simulate(input, u, t_end, dt)?
                }
                _ => unreachable!("validated configuration"),
            };
            let r = report_for(traj.as_port(), profile.as_ref());
            summary.push("samples", traj.as_port().len() as f64);
            summary.push("t_end", traj.as_port().grid().end());
            push_report(&mut summary, &r);
            let last = traj.as_port().len() - 1;
            summary.push("Phi_end", traj.flux()[last]);
            summary.push("I_end", traj.current()[last]);
            if let Some(path) = &out {
                csv_out::write_inductor(create(path)?, &traj)?;
            }
            report = Some(r);
        }
        ModelKind::Mechanical => {
            let cap = profile.expect("validated configuration");
            let theta0 = config.extra("Theta0").unwrap_or(0.0);
            let q0 = initial_charge(config, cap.value(theta0)?);
            let model = MechanicalCapModel::new(
                config.extra("J").unwrap_or(f64::NAN),
                cap,
                q0,
                theta0,
                config.extra("P0").unwrap_or(0.0),
            )?;
            let torque = config.rate.as_ref().unwrap_or(&zero);
            let traj = model.simulate_state_modulated(input, torque, t_end, dt)?;
            let last = traj.len() - 1;
            let (e, m) = (traj.electrical_supply(), traj.mechanical_supply());
            let dh = traj.hamiltonian(last) - traj.hamiltonian(0);
            summary.push("samples", traj.len() as f64);
            summary.push("t_end", traj.grid().end());
            summary.push("E_elec", e);
            summary.push("E_mech", m);
            summary.push("dH", dh);
            summary.push("residual", e + m - dh);
            summary.push("field_work", traj.field_work());
            summary.push("Theta_end", traj.theta[last]);
            if let Some(path) = &out {
                csv_out::write_mechanical(create(path)?, &traj)?;
            }
        }
        ModelKind::Paradox => {
            let ramp = config.extra("T").unwrap_or(f64::NAN);
            let s = ParadoxScenario::new(
                config.q0.unwrap_or(0.0),
                config.c0.unwrap_or(f64::NAN),
                ramp,
                config.extra("k").unwrap_or(2.0),
            )?;
            let steps = config
                .dt
                .map(|dt| (ramp / dt).round().max(1.0) as usize)
                .unwrap_or(DEFAULT_RAMP_STEPS);
            let o = s.run(steps)?;
            summary.push("S_before", o.s_before);
            summary.push("S_after", o.s_after);
            summary.push("W_mech", o.w_mech);
            summary.push("W_limit", s.closed_form_limit());
            summary.push("residual", o.residual);
            if let Some(path) = &out {
                csv_out::write_paradox(create(path)?, &[o])?;
            }
        }
    }
    if let (Some(path), Some(r)) = (report_path, &report) {
        csv_out::write_energy_report(create(path)?, r)?;
    }
    Ok(SimulateOutput {
        summary,
        report,
        written: out,
    })
}

pub struct ExtractRequest<'a> {
    pub capacitance: &'a str,
    pub order: usize,
    pub period: Option<f64>,
    /// Coefficient norm of the reported current; defaults to the norm of
    /// the bundled harvesting profile.
    pub amplitude: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<&'a Path>,
    pub matrix: Option<&'a Path>,
    pub lissajous: Option<&'a Path>,
}

pub struct ExtractOutput {
    pub summary: Summary,
    pub extraction: Extraction,
    /// `I.kind`/`I.params` lines for a scenario file.
    pub config_snippet: String,
}

pub fn extract(req: &ExtractRequest) -> Result<ExtractOutput> {
    if req.order == 0 {
        return Err(AppError::Usage("--order must be at least 1".into()));
    }
    let wave = parse_inline(req.capacitance).map_err(|e| AppError::Usage(format!("--capacitance: {e}")))?;
    let profile = CapacitanceProfile::new(wave.clone()).map_err(|e| AppError::Usage(format!("--capacitance: {e}")))?;
    let period = match req.period.or(wave.period()) {
        Some(t) => t,
        None => return Err(AppError::Usage("capacitance is not periodic; pass --period".into())),
    };
    let usage = |e: tvcap_core::Error| match e {
        tvcap_core::Error::NotPeriodic { .. }
        | tvcap_core::Error::Invalid(_)
        | tvcap_core::Error::NonPositiveCapacitance { .. } => AppError::Usage(e.to_string()),
        other => AppError::Model(other),
    };
    let mut problem = ExtractionProblem::new(profile.clone(), period, req.order).map_err(usage)?;
    if let Some(n) = req.steps {
        problem = problem.with_resolution(n).map_err(usage)?;
    }
    let reference_norm = reference_profile_norm();
    let amplitude = req.amplitude.unwrap_or(reference_norm);
    let x = synthesize_extraction_current(&problem, amplitude)?;

    let mut summary = Summary::new(format!("extraction: order {}, period {period}", req.order));
    summary.lines.push(format!(
        "verdict: {}",
        match x.verdict {
            ExtractionVerdict::Extracting => "extracting",
            ExtractionVerdict::PassiveOverFamily => "passive over family",
        }
    ));
    summary.lines.push(format!("{:>3}  {:>24}  {:>24}", "k", "a_k", "b_k"));
    for (k, pair) in x.coefficients.chunks(2).enumerate() {
        summary.lines.push(format!("{:>3}  {:>24}  {:>24}", k + 1, pair[0], pair[1]));
    }
    summary.push("min_eigenvalue", x.min_eigenvalue);
    summary.push("energy_unit_norm", x.energy_unit_norm);
    summary.push("reference_norm", reference_norm);
    summary.push("energy_reference_norm", x.energy_unit_norm * reference_norm * reference_norm);
    summary.push("amplitude", amplitude);
    summary.push("energy_per_cycle", x.energy_per_cycle);

    let (kind, params) = format_waveform(&x.current).map_err(|e| AppError::Usage(e.0))?;
    let config_snippet = format!("[I]\nkind = {kind}\nparams = {params}\n");
    if let Some(path) = req.out {
        create(path)?
            .write_all(config_snippet.as_bytes())
            .map_err(|source| AppError::Io {
                path: path.to_path_buf(),
                source,
            })?;
    }
    if let Some(path) = req.matrix {
        csv_out::write_matrix(create(path)?, &x.form)?;
    }
    if let Some(path) = req.lissajous {
        let traj = problem.simulate(&x.current, 1)?;
        let curve = lissajous(&traj, period)?;
        summary.push("lissajous_area", curve.total_extrapolated());
        csv_out::write_lissajous(create(path)?, &curve)?;
    }
    Ok(ExtractOutput {
        summary,
        extraction: x,
        config_snippet,
    })
}

pub struct ParadoxRequest<'a> {
    pub charge: f64,
    pub c0: f64,
    pub factor: f64,
    pub ramps: &'a [f64],
    pub steps: usize,
    pub out: Option<&'a Path>,
}

pub fn paradox(req: &ParadoxRequest) -> Result<(Vec<ParadoxOutcome>, f64)> {
    if !(req.c0 > 0.0) {
        return Err(AppError::Usage(format!("--c0 must be positive, got {}", req.c0)));
    }
    if !(req.factor > 0.0) {
        return Err(AppError::Usage(format!("--k must be positive, got {}", req.factor)));
    }
    if req.ramps.is_empty() || req.ramps.iter().any(|t| !(*t > 0.0)) {
        return Err(AppError::Usage("--t-sweep needs positive ramp times".into()));
    }
    let rows = req
        .ramps
        .iter()
        .map(|&t| ParadoxScenario::new(req.charge, req.c0, t, req.factor)?.run(req.steps))
        .collect::<tvcap_core::Result<Vec<_>>>()?;
    let limit = ParadoxScenario::new(req.charge, req.c0, 0.0, req.factor)?.closed_form_limit();
    if let Some(path) = req.out {
        csv_out::write_paradox(create(path)?, &rows)?;
    }
    Ok((rows, limit))
}

/// Text table of a ramp-time sweep.
pub fn paradox_table(rows: &[ParadoxOutcome], limit: f64) -> String {
    let mut s = format!(
        "{:>10}  {:>22}  {:>22}  {:>22}  {:>10}\n",
        "T", "S_before", "S_after", "W_mech", "residual"
    );
    for r in rows {
        s.push_str(&format!(
            "{:>10}  {:>22}  {:>22}  {:>22}  {:>10.3e}\n",
            r.ramp, r.s_before, r.s_after, r.w_mech, r.residual
        ));
    }
    s.push_str(&format!("jump limit W_mech = {limit}\n"));
    s
}
