use std::path::PathBuf;
use std::process::{Command, Output};

use tvcap::app;
use tvcap::waveform::{format_waveform, parse_waveform};
use tvcap::ScenarioConfig;

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn tvcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvcap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn harvesting_writes_trajectory_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, report) = (dir.path().join("traj.csv"), dir.path().join("report.csv"));
    let o = tvcap(&[
        "simulate",
        example("harvesting.cfg").to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("E_elec   = -8.857699"), "{}", stdout(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,Q,C,V,I");
    assert_eq!(lines.len(), 4098);
    let report = std::fs::read_to_string(&report).unwrap();
    assert!(report.starts_with("cycle,start,end,E_elec,E_mech,dS,residual\ntotal,"));
    assert_eq!(report.lines().count(), 3);
}

#[test]
fn two_port_csv_has_force_and_rate() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("two.csv");
    let o = tvcap(&["simulate", example("idle.cfg").to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("t,Q,C,V,I,F,U"));
    assert_eq!(text.lines().last(), Some("5,1,2,0.5,0,-0.125,0"));
}

#[test]
fn idle_two_port_stays_put() {
    let cfg = ScenarioConfig::load(&example("idle.cfg")).unwrap();
    let run = app::simulate(&cfg, None, None).unwrap();
    let s = &run.summary;
    assert_eq!(s.get("E_elec"), Some(0.0));
    assert_eq!(s.get("E_mech"), Some(0.0));
    assert_eq!(s.get("dS"), Some(0.0));
    assert_eq!(s.get("Q_end"), Some(1.0));
    assert_eq!(s.get("V_end"), Some(0.5));
}

#[test]
fn ramp_ends_on_closed_form() {
    let cfg = ScenarioConfig::load(&example("ramp.cfg")).unwrap();
    let v = app::simulate(&cfg, None, None).unwrap().summary.get("V_end").unwrap();
    // a·t + C0·V(0)/C(t) at t = 1
    assert!((v - (1.0 + 2.0 / 2.0)).abs() < 1e-12, "{v}");
}

#[test]
fn other_bundled_scenarios_run() {
    for name in ["inductor_harvesting.cfg", "rotor.cfg", "paradox.cfg", "cosine_control.cfg"] {
        let o = tvcap(&["simulate", example(name).to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
    }
    let cfg = ScenarioConfig::load(&example("rotor.cfg")).unwrap();
    let s = app::simulate(&cfg, None, None).unwrap().summary;
    assert!(s.get("dH").unwrap().abs() < 1e-9);
}

#[test]
fn config_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "kind = oneport\nt_end = 1\ndt = zero\nC.kind = constant\nC.params = 1\n").unwrap();
    let o = tvcap(&["simulate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3: dt:"), "{}", stderr(&o));

    let o = tvcap(&["simulate", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vanishing_capacitance_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shrink.cfg");
    std::fs::write(
        &path,
        "kind = oneport\nt_end = 3\ndt = 0.01\nC.kind = polynomial\nC.params = 1, -0.5\n",
    )
    .unwrap();
    let o = tvcap(&["simulate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not positive at t = 2"), "{}", stderr(&o));
}

#[test]
fn extract_round_trips_its_waveform() {
    let dir = tempfile::tempdir().unwrap();
    let (out, matrix, curve) = (
        dir.path().join("i.cfg"),
        dir.path().join("m.csv"),
        dir.path().join("qv.csv"),
    );
    let o = tvcap(&[
        "extract",
        "--capacitance",
        "fourier: 0.5; 2; ; 1",
        "--order",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--matrix",
        matrix.to_str().unwrap(),
        "--lissajous",
        curve.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: extracting"));

    let text = std::fs::read_to_string(&out).unwrap();
    let field = |k: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(k))
            .map(|v| v.trim_start_matches([' ', '=']).to_string())
            .unwrap()
    };
    let (kind, params) = (field("kind"), field("params"));
    let wave = parse_waveform(&kind, &params).unwrap();
    let (k2, p2) = format_waveform(&wave).unwrap();
    assert_eq!((k2, p2.as_str()), (kind.as_str(), params.as_str()));

    let direct = app::extract(&app::ExtractRequest {
        capacitance: "fourier: 0.5; 2; ; 1",
        order: 4,
        period: None,
        amplitude: None,
        steps: None,
        out: None,
        matrix: None,
        lissajous: None,
    })
    .unwrap();
    assert_eq!(wave, direct.extraction.current);
    assert!(direct.extraction.energy_per_cycle <= -8.857);

    let m = std::fs::read_to_string(&matrix).unwrap();
    assert_eq!(m.lines().next(), Some("a1,b1,a2,b2,a3,b3,a4,b4"));
    assert_eq!(m.lines().count(), 9);
    assert_eq!(std::fs::read_to_string(&curve).unwrap().lines().next(), Some("Q,V"));
}

#[test]
fn extract_reports_passive_constant_capacitance() {
    let o = tvcap(&["extract", "--capacitance", "constant: 2", "--order", "2", "--period", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict: passive over family"));
    assert!(stdout(&o).contains("energy_per_cycle      = 0"));
}

#[test]
fn extract_usage_errors_exit_2() {
    for args in [
        &["extract", "--capacitance", "fourier: 0.5; 2; ; 1", "--order", "0"][..],
        &["extract", "--capacitance", "polynomial: 1, 1", "--order", "2"],
        &["extract", "--capacitance", "polynomial: 1, 1", "--order", "2", "--period", "1"],
        &["extract", "--capacitance", "fourier: 0.5; 2; ; 1", "--order", "1", "--period", "3"],
        &["extract", "--capacitance", "wobble: 1", "--order", "1"],
    ] {
        let o = tvcap(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn paradox_table_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let o = tvcap(&["paradox", "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("jump limit W_mech = -0.25"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("T,S_before,S_after,W_mech,residual"));
    for line in text.lines().skip(1) {
        let w: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((w + 0.25).abs() < 1e-8);
    }
    assert_eq!(text.lines().count(), 5);

    let (rows, limit) = app::paradox(&app::ParadoxRequest {
        charge: 1.0,
        c0: 1.0,
        factor: 1.0,
        ramps: &[1.0, 0.1],
        steps: 100,
        out: None,
    })
    .unwrap();
    assert_eq!(limit, 0.0);
    assert!(rows.iter().all(|r| r.w_mech == 0.0 && r.residual == 0.0));

    assert_eq!(tvcap(&["paradox", "--c0", "0"]).status.code(), Some(2));
    assert_eq!(tvcap(&["paradox", "--c0", "-1"]).status.code(), Some(2));
    assert_eq!(tvcap(&["paradox", "--t-sweep", "1,0"]).status.code(), Some(2));
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["simulate", "extract", "paradox"] {
        let o = tvcap(&[sub, "--help"]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("Usage: tvcap"));
    }
}
