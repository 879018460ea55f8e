use super::*;
use crate::hydrostatic::ReducedState;
use crate::momentum::Params;
use crate::spectral::{make_basis, Basis, DomainSpec};

fn basis(n: usize) -> Basis {
    make_basis(DomainSpec::new(n, n, 9, 0.5).unwrap()).unwrap()
}

fn opts(dt: f64, t_end: f64) -> RunOptions {
    RunOptions {
        dt,
        t_end,
        ..RunOptions::default()
    }
}

#[test]
fn constant_preset_stays_flat() {
    let b = basis(16);
    let p = Params::default();
    let s0 = InitialData::preset(Preset::Constant).realize(&b, &p).unwrap();
    let out = run_simulation(&b, &p, &s0, &opts(1e-3, 0.02)).unwrap();
    assert_eq!(out.steps, 20);
    assert_eq!(out.records.len(), 21);
    let e0 = out.records[0].energy;
    for r in &out.records {
        assert!((r.energy - e0).abs() <= 1e-12, "{} {}", r.energy, e0);
        assert!((r.mass - out.records[0].mass).abs() <= 1e-12);
        assert!(r.energy_dissipation().abs() <= 1e-12);
    }
    assert_eq!(out.envelope_violations, 0);
}

#[test]
fn density_relaxation_loses_energy() {
    let b = basis(16);
    let p = Params::default();
    let s0 = InitialData::preset(Preset::DensityRelax).realize(&b, &p).unwrap();
    let out = run_simulation(&b, &p, &s0, &opts(1e-3, 0.02)).unwrap();
    for w in out.records.windows(2) {
        assert!(w[1].energy < w[0].energy, "{} {}", w[0].energy, w[1].energy);
        assert!(w[1].t > w[0].t);
    }
    assert!(out.max_mass_drift < 1e-12);
}

#[test]
fn record_stride_keeps_first_and_last() {
    let b = basis(16);
    let p = Params::default();
    let s0 = InitialData::preset(Preset::Constant).realize(&b, &p).unwrap();
    let o = RunOptions {
        record_stride: 4,
        ..opts(1e-3, 0.01)
    };
    let t: Vec<f64> = run_simulation(&b, &p, &s0, &o).unwrap().records.iter().map(|r| r.t).collect();
    assert_eq!(t.len(), 4);
    assert_eq!(t[0], 0.0);
    assert!((t[3] - 0.01).abs() < 1e-15);
}

#[test]
fn cfl_violation_fails_at_step_zero() {
    let b = basis(16);
    let p = Params::default();
    let init = InitialData {
        source: InitSource::Preset(PresetSpec {
            amplitude: Some(50.0),
            ..PresetSpec::new(Preset::Shear)
        }),
        varsigma: 0.1,
    };
    let s0 = init.realize(&b, &p).unwrap();
    let err = run_simulation(&b, &p, &s0, &opts(0.1, 1.0)).unwrap_err();
    assert_eq!(err.step, 0);
    assert!(matches!(err.error, crate::SolverError::CflViolation { .. }), "{err}");
    assert_eq!(err.partial.records.len(), 1);
}

#[test]
fn initial_data_is_checked() {
    let b = basis(16);
    let p = Params::default();
    let low = InitialData {
        source: InitSource::State(ReducedState::at_rest(&b, 0.05)),
        varsigma: 0.1,
    };
    assert!(matches!(low.realize(&b, &p), Err(HarnessError::InvalidInit(_))));
    let missing = InitialData {
        source: InitSource::Snapshot("/nonexistent/state.cpe".into()),
        varsigma: 0.1,
    };
    assert!(missing.realize(&b, &p).is_err());
}

#[test]
fn runs_are_deterministic() {
    let b = basis(16);
    let p = Params::default();
    let init = InitialData {
        source: InitSource::Preset(PresetSpec {
            noise: 0.01,
            seed: 9,
            ..PresetSpec::new(Preset::Column)
        }),
        varsigma: 0.1,
    };
    let s0 = init.realize(&b, &p).unwrap();
    let a = run_simulation(&b, &p, &s0, &opts(1e-3, 0.005)).unwrap();
    let c = run_simulation(&b, &p, &init.realize(&b, &p).unwrap(), &opts(1e-3, 0.005)).unwrap();
    assert_eq!(a.records, c.records);
}

#[test]
fn continuation_on_constant_state_has_zero_differences() {
    let b = basis(16);
    let p = Params::default();
    let s0 = InitialData::preset(Preset::Constant).realize(&b, &p).unwrap();
    let table = continuation_study(&b, &ContinuationSchedule::new(Stage::EpsMu, p), &s0, &opts(1e-3, 0.005)).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.rows[0].diff_xi.is_nan());
    for r in &table.rows[1..] {
        assert!(r.error.is_none());
        assert!(r.diff_xi <= 1e-13 && r.diff_sqrt_xi_u <= 1e-13, "{r:?}");
    }
}

#[test]
fn eta_monitor_follows_the_schedule() {
    let b = basis(16);
    let p = Params::default();
    let s0 = InitialData::preset(Preset::DensityRelax).realize(&b, &p).unwrap();
    let table = continuation_study(&b, &ContinuationSchedule::new(Stage::Eta, p), &s0, &opts(1e-3, 0.005)).unwrap();
    let m = table.column("eta_int_xi_m10");
    for w in m.windows(2) {
        assert!(w[1] < w[0], "{m:?}");
    }
    for r in &table.rows[1..] {
        assert!(r.diff_xi.is_finite() && r.diff_xi > 0.0);
    }
    assert_eq!(table.numeric_rows().len(), 4);
    assert_eq!(table.numeric_rows()[0].len(), ContinuationTable::columns().len());
}

#[test]
fn schedules_are_validated() {
    let p = Params::default();
    let b = basis(16);
    let s0 = InitialData::preset(Preset::Constant).realize(&b, &p).unwrap();
    let s = ContinuationSchedule {
        rungs: 2,
        ..ContinuationSchedule::new(Stage::Eta, p)
    };
    assert!(matches!(
        continuation_study(&b, &s, &s0, &opts(1e-3, 0.005)),
        Err(HarnessError::InvalidSchedule(_))
    ));
}

#[test]
fn stage_scaling_ties_coefficients() {
    let p = Params::default();
    let q = Stage::EpsMu.scaled(&p, 0.5);
    assert_eq!(q.eps, q.mu);
    assert_eq!(q.eta, p.eta);
    let q = Stage::KappaDeltaR0.scaled(&p, 0.25);
    assert_eq!(q.kappa, q.delta);
    assert_eq!(q.r0, 0.25 * p.r0);
    for s in Stage::ORDER {
        assert_eq!(Stage::from_name(s.name()), Some(s));
    }
}

#[test]
fn manufactured_solution_with_zero_amplitude_is_exact() {
    let spec = DomainSpec::new(16, 16, 9, 0.5).unwrap();
    let p = Params { r: 0.0, delta: 1e-8, ..Params::default() };
    let cfg = MmsConfig {
        b: 0.0,
        c: 0.0,
        t_end: 0.02,
        dt_list: vec![0.01, 0.005],
        dt_spatial: 0.01,
        n_fine: 24,
        n_ref: 32,
        ..MmsConfig::default()
    };
    let r = manufactured_solution_test(&spec, &p, &cfg).unwrap();
    for &(_, e) in &r.temporal {
        assert!(e <= 1e-12, "{r:?}");
    }
    for &(_, e) in &r.spatial {
        assert!(e <= 1e-12, "{r:?}");
    }
}

#[test]
fn manufactured_solution_converges() {
    let spec = DomainSpec::new(16, 16, 9, 0.5).unwrap();
    let p = Params { r: 0.0, delta: 1e-8, ..Params::default() };
    let cfg = MmsConfig {
        t_end: 0.08,
        dt_list: vec![0.008, 0.004],
        dt_spatial: 0.008,
        ..MmsConfig::default()
    };
    let r = manufactured_solution_test(&spec, &p, &cfg).unwrap();
    assert!(r.temporal_ratios()[0] > 1.6, "{r:?}");
    assert!(r.spatial_ratio() >= 10.0, "{r:?}");
}
