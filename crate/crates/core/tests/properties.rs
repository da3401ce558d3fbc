use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tvcap_core::energy::{cycle_energy, energy_balance};
use tvcap_core::extract::lissajous;
use tvcap_core::oneport::OnePortModel;
use tvcap_core::signals::{CapacitanceProfile, Waveform};
use tvcap_core::twoport::TwoPortModel;

struct Scenario {
    cap: CapacitanceProfile,
    current: Waveform,
    q0: f64,
    period: f64,
}

/// Positive periodic `C` and a zero-mean current sharing its period.
fn scenario(rng: &mut StdRng) -> Scenario {
    let omega = rng.gen_range(0.3..2.0);
    let mean = rng.gen_range(1.0..4.0);
    let harmonics = rng.gen_range(1..4);
    let budget = 0.8 * mean / harmonics as f64;
    let mut ccos = vec![];
    let mut csin = vec![];
    for _ in 0..harmonics {
        let r = rng.gen_range(0.0..budget);
        let th: f64 = rng.gen_range(0.0..2.0 * PI);
        ccos.push(r * th.cos());
        csin.push(r * th.sin());
    }
    let n = rng.gen_range(1..5);
    let icos = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let isin = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    Scenario {
        cap: CapacitanceProfile::new(Waveform::fourier(omega, mean, ccos, csin).unwrap()).unwrap(),
        current: Waveform::fourier(omega, 0.0, icos, isin).unwrap(),
        q0: rng.gen_range(-1.0..1.0),
        period: 2.0 * PI / omega,
    }
}

/// Largest `|∫(VI − ½ĊV²) − ΔS|` over the run, relative to the peak storage.
fn one_port_balance_error(s: &Scenario, steps: usize) -> f64 {
    let m = OnePortModel::with_charge(s.cap.clone(), s.q0).unwrap();
    let tr = m.simulate_current_driven(&s.current, s.period, s.period / steps as f64).unwrap();
    let net = tr.cumulative(|p| p.v * p.i - 0.5 * p.c_dot * p.v * p.v);
    let peak = (0..tr.len()).map(|k| tr.storage(k)).fold(1.0, f64::max);
    (0..tr.len())
        .map(|k| (net[k] - (tr.storage(k) - tr.storage(0))).abs())
        .fold(0.0, f64::max)
        / peak
}

#[test]
fn power_balance_is_fourth_order() {
    let mut rng = StdRng::seed_from_u64(2024);
    for case in 0..20 {
        let s = scenario(&mut rng);
        let (coarse, fine) = (one_port_balance_error(&s, 64), one_port_balance_error(&s, 128));
        assert!(
            coarse / fine > 10.0 || fine < 1e-12,
            "case {case}: {coarse:e} -> {fine:e}"
        );
        let fine = one_port_balance_error(&s, 2048);
        assert!(fine < 1e-7, "case {case}: {fine:e}");
    }
}

#[test]
fn two_port_balance_is_fourth_order() {
    let mut rng = StdRng::seed_from_u64(77);
    for case in 0..20 {
        let s = scenario(&mut rng);
        let c0 = s.cap.value(0.0).unwrap();
        let model = TwoPortModel::new(s.q0, c0).unwrap();
        let residual = |steps: usize| {
            let tr = model
                .simulate_two_port(&s.current, s.cap.derivative(), s.period, s.period / steps as f64)
                .unwrap();
            energy_balance(&tr).residual.abs()
        };
        let (coarse, fine) = (residual(64), residual(128));
        assert!(coarse / fine > 10.0 || fine < 1e-12, "case {case}: {coarse:e} -> {fine:e}");
    }
}

#[test]
fn cycle_identity_and_shoelace_area() {
    let mut rng = StdRng::seed_from_u64(9);
    for case in 0..20 {
        let s = scenario(&mut rng);
        let m = OnePortModel::with_charge(s.cap.clone(), s.q0).unwrap();
        let tr = m.simulate_current_driven(&s.current, 2.0 * s.period, s.period / 4096.0).unwrap();
        for (a, b) in [(0.0, s.period), (s.period, 2.0 * s.period)] {
            let e = cycle_energy(&tr, a, b).unwrap();
            assert!((e.supplied - e.deficit).abs() < 1e-9 * (1.0 + e.supplied.abs()), "case {case}");
        }
        let total = tr.integral(0, tr.len() - 1, |p| p.v * p.i);
        let area = lissajous(&tr, s.period).unwrap().total_extrapolated();
        assert!(
            (area - total).abs() < 1e-6 * total.abs().max(1e-3),
            "case {case}: {area} vs {total}"
        );
    }
}

#[test]
fn rk4_matches_integrating_factor_solution() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..5 {
        let s = scenario(&mut rng);
        let m = OnePortModel::with_charge(s.cap.clone(), s.q0).unwrap();
        let tr = m.simulate_current_driven(&s.current, s.period, s.period / 2048.0).unwrap();
        for k in [0, 511, 1024, 2048] {
            let exact = m.solve_voltage_ode(&s.current, tr.time(k)).unwrap();
            assert!((tr.v[k] - exact).abs() < 1e-9 * (1.0 + exact.abs()));
        }
    }
}

#[test]
fn frozen_two_port_equals_one_port_energy() {
    let i = Waveform::fourier(0.5, 0.0, vec![1.0, 0.5], vec![-0.3]).unwrap();
    let one = OnePortModel::with_charge(CapacitanceProfile::constant(2.5).unwrap(), 0.4)
        .unwrap()
        .simulate_current_driven(&i, 4.0 * PI, 4.0 * PI / 1024.0)
        .unwrap();
    let two = TwoPortModel::new(0.4, 2.5)
        .unwrap()
        .simulate_two_port(&i, &Waveform::Constant(0.0), 4.0 * PI, 4.0 * PI / 1024.0)
        .unwrap();
    let (a, b) = (energy_balance(&one), energy_balance(&two));
    assert_eq!(a.e_elec, b.e_elec);
    assert_eq!(b.e_mech, 0.0);
}
