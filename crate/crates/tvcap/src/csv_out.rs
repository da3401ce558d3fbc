//! CSV writers. Numbers use Rust's shortest round-trip float output.

use std::io::Write;

use tvcap_core::energy::EnergyReport;
use tvcap_core::extract::{Lissajous, QuadraticEnergyForm};
use tvcap_core::paradox::ParadoxOutcome;
use tvcap_core::trajectory::PortTrajectory;
use tvcap_core::twoport::{InductorTrajectory, MechanicalTrajectory};

type Result = std::result::Result<(), csv::Error>;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn row<W: Write>(out: &mut csv::Writer<W>, values: &[f64]) -> Result {
    out.write_record(values.iter().map(|v| v.to_string()))
}

/// `t,Q,C,V,I`, plus `F,U` on two-port runs.
pub fn write_trajectory<W: Write>(w: W, traj: &PortTrajectory) -> Result {
    write_port(w, traj, &["t", "Q", "C", "V", "I"])
}

/// `t,Phi,L,I,V`, plus `F,U` on two-port runs.
pub fn write_inductor<W: Write>(w: W, traj: &InductorTrajectory) -> Result {
    write_port(w, traj.as_port(), &["t", "Phi", "L", "I", "V"])
}

fn write_port<W: Write>(w: W, traj: &PortTrajectory, names: &[&str; 5]) -> Result {
    let mut out = writer(w);
    let mut header: Vec<&str> = names.to_vec();
    if traj.is_two_port() {
        header.extend(["F", "U"]);
    }
    out.write_record(&header)?;
    for k in 0..traj.len() {
        let s = traj.sample(k);
        if traj.is_two_port() {
            row(&mut out, &[s.t, s.q, s.c, s.v, s.i, s.f, s.c_dot])?;
        } else {
            row(&mut out, &[s.t, s.q, s.c, s.v, s.i])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// `t,Q,C,V,I,Theta,P,tau`.
pub fn write_mechanical<W: Write>(w: W, traj: &MechanicalTrajectory) -> Result {
    let mut out = writer(w);
    out.write_record(["t", "Q", "C", "V", "I", "Theta", "P", "tau"])?;
    for k in 0..traj.len() {
        row(
            &mut out,
            &[
                traj.time(k),
                traj.q[k],
                traj.c[k],
                traj.v[k],
                traj.i[k],
                traj.theta[k],
                traj.p[k],
                traj.tau[k],
            ],
        )?;
    }
    out.flush()?;
    Ok(())
}

/// `Q,V`.
pub fn write_lissajous<W: Write>(w: W, curve: &Lissajous) -> Result {
    let mut out = writer(w);
    out.write_record(["Q", "V"])?;
    for (q, v) in &curve.points {
        row(&mut out, &[*q, *v])?;
    }
    out.flush()?;
    Ok(())
}

/// Energy-form matrix with `a1,b1,a2,b2,…` as header.
pub fn write_matrix<W: Write>(w: W, form: &QuadraticEnergyForm) -> Result {
    let mut out = writer(w);
    let names: Vec<String> = (1..=form.order)
        .flat_map(|k| [format!("a{k}"), format!("b{k}")])
        .collect();
    out.write_record(&names)?;
    for r in form.matrix.chunks(form.dim) {
        row(&mut out, r)?;
    }
    out.flush()?;
    Ok(())
}

/// One `quantity,value` row per total, then one row per cycle.
pub fn write_energy_report<W: Write>(w: W, report: &EnergyReport) -> Result {
    let mut out = writer(w);
    out.write_record(["cycle", "start", "end", "E_elec", "E_mech", "dS", "residual"])?;
    let (start, end) = match (report.per_cycle.first(), report.per_cycle.last()) {
        (Some(a), Some(b)) => (a.start.to_string(), b.end.to_string()),
        _ => (String::new(), String::new()),
    };
    out.write_record([
        "total".to_string(),
        start,
        end,
        report.e_elec.to_string(),
        report.e_mech.to_string(),
        report.delta_s.to_string(),
        report.residual.to_string(),
    ])?;
    for (n, c) in report.per_cycle.iter().enumerate() {
        out.write_record([
            (n + 1).to_string(),
            c.start.to_string(),
            c.end.to_string(),
            c.e_elec.to_string(),
            c.e_mech.to_string(),
            String::new(),
            String::new(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `T,S_before,S_after,W_mech,residual`.
pub fn write_paradox<W: Write>(w: W, rows: &[ParadoxOutcome]) -> Result {
    let mut out = writer(w);
    out.write_record(["T", "S_before", "S_after", "W_mech", "residual"])?;
    for r in rows {
        row(&mut out, &[r.ramp, r.s_before, r.s_after, r.w_mech, r.residual])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tvcap_core::oneport::OnePortModel;
    use tvcap_core::signals::{CapacitanceProfile, Waveform};

    #[test]
    fn trajectory_csv_is_exact() {
        let m = OnePortModel::with_charge(CapacitanceProfile::constant(3.0).unwrap(), 0.1).unwrap();
        let tr = m.simulate_current_driven(&Waveform::Constant(0.7), 1.0, 0.5).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &tr).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,Q,C,V,I");
        assert_eq!(lines.len(), 4);
        let last: Vec<f64> = lines[3].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(last[1], tr.q[2]);
        assert_eq!(last[3], tr.v[2]);
    }
}
