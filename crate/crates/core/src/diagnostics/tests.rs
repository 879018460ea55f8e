use super::*;
use crate::random::{band_limited3, density};
use crate::spectral::{make_basis, DomainSpec, Parity};
use proptest::prelude::*;
use std::f64::consts::PI;

fn basis(n: usize, nz: usize) -> Basis {
    make_basis(DomainSpec::new(n, n, nz, 0.5).unwrap()).unwrap()
}

fn sample2(b: &Basis, f: impl Fn(f64, f64) -> f64) -> Field2 {
    let (x1, x2) = (b.x1_grid(), b.x2_grid());
    let mut out = Field2::zeros(b.n2());
    for (i2, &y) in x2.iter().enumerate() {
        for (i1, &x) in x1.iter().enumerate() {
            out.data[i2 * x1.len() + i1] = f(x, y);
        }
    }
    out
}

fn still(b: &Basis) -> VectorField3 {
    [Field3::zeros(b.n3(), Parity::Even), Field3::zeros(b.n3(), Parity::Even)]
}

fn state(b: &Basis, xi: Field2, u: VectorField3) -> ReducedState {
    ReducedState::new(b, 0.0, xi, u).unwrap()
}

fn random_state(b: &Basis, seed: u64, decay: f64) -> ReducedState {
    let xi = density(b, seed, 1.0, 0.5, decay);
    let u = [
        band_limited3(b, Parity::Even, seed ^ 0x51, 1.0, decay),
        band_limited3(b, Parity::Even, seed ^ 0x77, 1.0, decay),
    ];
    state(b, xi, u)
}

fn bare() -> Params {
    Params {
        eta: 0.0,
        kappa: 0.0,
        delta: 0.0,
        ..Params::default()
    }
}

#[test]
fn energy_of_constant_states() {
    let b = basis(16, 9);
    let volume = 4.0 * PI * PI * 0.5;
    let rest = ReducedState::at_rest(&b, 1.0);
    assert!(energy(&b, &rest, &bare()).unwrap().abs() < 1e-15);
    let p = Params { eta: 0.11, ..bare() };
    assert!((energy(&b, &rest, &p).unwrap() - 0.01 * volume).abs() < 1e-13);
    let two = ReducedState::at_rest(&b, 2.0);
    let e = energy(&b, &two, &bare()).unwrap();
    assert!((e - volume * (2.0 * 2f64.ln() - 1.0)).abs() < 1e-12);
    assert!((e - 7.6250).abs() < 2e-4);
}

#[test]
fn dissipation_examples() {
    let b = basis(16, 9);
    let p = Params::default();
    let rest = ReducedState::at_rest(&b, 1.3);
    for (name, v) in dissipation(&b, &rest, &p).unwrap() {
        assert_eq!(v, 0.0, "{name}");
    }
    for (name, v) in bd_dissipation(&b, &rest, &p).unwrap() {
        assert_eq!(v, 0.0, "{name}");
    }

    let xi = Field2::constant(b.n2(), 1.0);
    let u1 = Field3::broadcast(&sample2(&b, |x, _| x.sin()), b.nz());
    let s = state(&b, xi.clone(), [u1, Field3::zeros(b.n3(), Parity::Even)]);
    let d = dissipation(&b, &s, &p).unwrap();
    let expect = p.nu1 * 4.0 * PI * PI * 0.5;
    assert!((d["horizontal_viscosity"] - expect).abs() < 1e-13);

    let c = -0.4;
    let s = state(&b, xi, [Field3::constant(b.n3(), c), Field3::zeros(b.n3(), Parity::Even)]);
    let d = dissipation(&b, &s, &p).unwrap();
    let volume = 4.0 * PI * PI * 0.5;
    assert!((d["damping_r"] - p.r * c.abs().powi(3) * volume).abs() < 1e-13);
    assert!((d["drag_r0"] - p.r0 * c * c * volume).abs() < 1e-15);
}

#[test]
fn bd_entropy_examples() {
    let b = basis(32, 9);
    let volume = 4.0 * PI * PI * 0.5;
    let p = Params::default();
    assert!(bd_entropy(&b, &ReducedState::at_rest(&b, 1.0), &p).unwrap().abs() < 1e-15);
    let c = 0.3;
    let xi = Field2::constant(b.n2(), 1.0);
    let s = state(&b, xi, [Field3::constant(b.n3(), c), Field3::zeros(b.n3(), Parity::Even)]);
    assert!((bd_entropy(&b, &s, &p).unwrap() - 0.5 * c * c * volume).abs() < 1e-13);

    // ½ξ|2∇lnξ|² = 2|ξ'|²/ξ, integrated by a fine 1D midpoint rule
    let q = Params { nu1: 1.0, r0: 0.0, ..p };
    let xi = sample2(&b, |x, _| 1.0 + 0.5 * x.cos());
    let got = bd_entropy(&b, &state(&b, xi, still(&b)), &q).unwrap();
    let n = 20000;
    let oracle: f64 = (0..n)
        .map(|i| {
            let x = (i as f64 + 0.5) * 2.0 * PI / n as f64;
            let d = 0.5 * x.sin();
            2.0 * d * d / (1.0 + 0.5 * x.cos())
        })
        .sum::<f64>()
        * (2.0 * PI / n as f64)
        * 2.0
        * PI
        * 0.5;
    assert!((got - oracle).abs() < 1e-8 * oracle, "{got} {oracle}");
}

#[test]
fn bd_effective_velocity_cancels() {
    let b = basis(16, 9);
    let p = Params { r0: 0.0, ..Params::default() };
    let xi = density(&b, 11, 1.0, 0.4, 0.6);
    let [g1, g2] = b.grad2(&xi.map(f64::ln));
    let u = [
        Field3::broadcast(&g1.scale(-2.0 * p.nu1), b.nz()),
        Field3::broadcast(&g2.scale(-2.0 * p.nu1), b.nz()),
    ];
    assert!(bd_entropy(&b, &state(&b, xi, u), &p).unwrap().abs() < 1e-12);
}

#[test]
fn constant_states_have_zero_residuals() {
    let b = basis(16, 9);
    let xi = Field2::constant(b.n2(), 1.4);
    let u = [Field3::constant(b.n3(), 0.3), Field3::constant(b.n3(), -0.2)];
    let r = identity_residuals(&b, &state(&b, xi, u), &Params::default()).unwrap();
    assert_eq!(r.len(), IDENTITY_NAMES.len());
    for (name, v) in r {
        assert!(v.abs() < 1e-14, "{name} {v}");
    }
}

#[test]
fn random_band_limited_states_satisfy_identities() {
    // the quantum identity involves √ξ and ln ξ, whose spectra extend past
    // the band; analytic fields with geometric decay keep their tails small
    let b = basis(64, 5);
    for seed in 0..5 {
        let s = random_state(&b, seed, 0.3);
        let r = identity_residuals(&b, &s, &Params::default()).unwrap();
        assert!(r["antisym_strain_flux"] <= 1e-9, "{seed} {r:?}");
        assert!(r["quantum_divergence_form"] <= 1e-8, "{seed} {r:?}");
        assert!(r["strain_norm_split"] <= 1e-12, "{seed} {r:?}");
        assert!(r["column_flux_closure"] <= 1e-12, "{seed} {r:?}");
    }
}

#[test]
fn antisym_flux_on_full_band_content() {
    // the discrete pairing is exactly skew, so aliasing cannot enter; both
    // the full-band field and its truncation sit at roundoff
    let b = basis(16, 9);
    let xi = density(&b, 3, 1.0, 0.4, 1.0);
    let full_u = [
        Field3 { data: (0..b.n3()).map(|i| ((i * 7919) % 13) as f64 / 13.0 - 0.5).collect(), parity: Parity::Even },
        Field3 { data: (0..b.n3()).map(|i| ((i * 104729) % 17) as f64 / 17.0 - 0.5).collect(), parity: Parity::Even },
    ];
    let full = antisym_strain_flux(&b, &xi, &full_u).unwrap();
    let cut = [b.project3(&full_u[0]), b.project3(&full_u[1])];
    let truncated = antisym_strain_flux(&b, &xi, &cut).unwrap();
    assert!(full <= 1e-12 && truncated <= 1e-12, "{full} {truncated}");
}

#[test]
fn quantum_residual_decays_with_resolution() {
    let shape = |x: f64, y: f64| 1.0 + 0.3 * (x.cos() * y.sin() + 0.5 * (2.0 * x).sin());
    let res = |n: usize| {
        let b = basis(n, 5);
        quantum_identity_residual(&b, &sample2(&b, shape)).unwrap()
    };
    let (coarse, fine) = (res(16), res(32));
    assert!(coarse >= 10.0 * fine, "{coarse} {fine}");
}

#[test]
fn energy_rate_matches_dissipation_for_smooth_state() {
    let b = basis(32, 9);
    let h = 0.5;
    let xi = sample2(&b, |x, _| 1.0 + 0.1 * x.cos());
    let zf = |f: &dyn Fn(f64, f64, f64) -> f64| {
        let mut out = Field3::zeros(b.n3(), Parity::Even);
        let mut q = 0;
        for &z in b.z_grid() {
            for &y in &b.x2_grid() {
                for &x in &b.x1_grid() {
                    out.data[q] = f(x, y, z);
                    q += 1;
                }
            }
        }
        out
    };
    let u = [
        zf(&|x, _, z| 0.2 * x.sin() * (PI * z / h).cos()),
        zf(&|x, _, z| 0.1 * x.cos() * (2.0 * PI * z / h).cos()),
    ];
    let s = state(&b, xi, u);
    let p = Params::default();
    let rate = energy_rate(&b, &s, &p).unwrap();
    let diss: f64 = dissipation(&b, &s, &p).unwrap().values().sum();
    assert!(rate < 0.0);
    assert!((rate + diss).abs() <= 1e-8 * diss, "{rate} {diss}");
}

fn constant_record(t: f64, e: f64) -> DiagnosticsRecord {
    DiagnosticsRecord {
        t,
        mass: 1.0,
        energy: e,
        bd_entropy: 0.0,
        min_xi: 1.0,
        max_xi: 1.0,
        bound_lower: 1.0,
        bound_upper: 1.0,
        dissipation: IndexMap::new(),
        identity_residuals: IndexMap::new(),
    }
}

#[test]
fn inequality_checker() {
    let flat: Vec<_> = (0..10).map(|i| constant_record(0.1 * i as f64, 0.0)).collect();
    let r = check_inequalities(&flat, 0.0, 0.0, InequalitySlack::default());
    assert!(r.passed());

    let b = basis(16, 9);
    let p = Params::default();
    let rest = ReducedState::at_rest(&b, 1.0);
    let bounds = DensityBounds::new(&rest.xi);
    let rec = record(&b, &rest, &p, &bounds).unwrap();
    assert_eq!(rec.dissipation.len(), 20);
    let mut recs = vec![rec.clone(), DiagnosticsRecord { t: 0.1, ..rec.clone() }];
    let e0 = 2.0;
    recs[1].energy = e0;
    recs[0].energy = e0;
    assert!(check_inequalities(&recs, e0, 0.0, InequalitySlack::default()).passed());
    recs[1].energy = 1.1 * e0;
    let r = check_inequalities(&recs, e0, 0.0, InequalitySlack::default());
    assert_eq!(r.energy_violations, 1);
    assert!((r.energy_max_violation - (0.1 * e0 - 1e-6 * e0)).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn functionals_are_nonnegative(seed in any::<u64>()) {
        let b = basis(16, 9);
        let s = random_state(&b, seed, 0.7);
        let p = Params::default();
        prop_assert!(energy(&b, &s, &p).unwrap() >= 0.0);
        for (_, v) in dissipation(&b, &s, &p).unwrap() {
            prop_assert!(v >= -1e-14);
        }
        for (_, v) in bd_dissipation(&b, &s, &p).unwrap() {
            prop_assert!(v >= -1e-14);
        }
    }

    #[test]
    fn norm_split_is_exact(seed in any::<u64>()) {
        let b = basis(16, 9);
        let s = random_state(&b, seed, 0.7);
        prop_assert!(strain_norm_split(&b, &s.xi, &s.u).unwrap() <= 1e-12);
    }
}

