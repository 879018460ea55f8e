use super::*;
use crate::random::{band_limited2, band_limited3};
use proptest::prelude::*;
use std::f64::consts::PI;

fn basis(n: usize, nz: usize, h: f64) -> Basis {
    make_basis(DomainSpec::new(n, n, nz, h).unwrap()).unwrap()
}

fn field3(b: &Basis, parity: Parity, f: impl Fn(f64, f64, f64) -> f64) -> Field3 {
    let (x1, x2, z) = (b.x1_grid(), b.x2_grid(), b.z_grid().to_vec());
    let mut out = Field3::zeros(b.n3(), parity);
    let mut p = 0;
    for &zz in &z {
        for &b2 in &x2 {
            for &a1 in &x1 {
                out.data[p] = f(a1, b2, zz);
                p += 1;
            }
        }
    }
    out
}

fn field2(b: &Basis, f: impl Fn(f64, f64) -> f64) -> Field2 {
    let (x1, x2) = (b.x1_grid(), b.x2_grid());
    let mut out = Field2::zeros(b.n2());
    for (i2, &b2) in x2.iter().enumerate() {
        for (i1, &a1) in x1.iter().enumerate() {
            out.data[i2 * x1.len() + i1] = f(a1, b2);
        }
    }
    out
}

fn max_diff3(a: &Field3, b: &Field3) -> f64 {
    a.data.iter().zip(&b.data).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn max_diff2(a: &Field2, b: &Field2) -> f64 {
    a.data.iter().zip(&b.data).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn basis_sizes_and_eigenvalues() {
    let b = basis(8, 5, 0.5);
    assert_eq!(b.mode_count(), 8 * 8 * 5);
    assert_eq!(b.eigenvalue(0, 0, 0), 0.0);
    assert_eq!(b.eigenvalue(1, 0, 0), 1.0);
    assert!((b.eigenvalue(0, 0, 1) - 4.0 * PI * PI).abs() < 1e-12);
    assert!(b.eigenvalues().iter().all(|&l| l >= 0.0));
    assert!((b.z_grid()[4] - 0.5).abs() < 1e-15);
    assert!((b.z_grid()[1] - 0.125).abs() < 1e-15);
}

#[test]
fn cosine_mode_is_an_eigenfunction_of_the_discrete_laplacian() {
    let b = basis(8, 9, 0.5);
    let f = field3(&b, Parity::Even, |_, _, z| (PI * z / 0.5).cos());
    let lap = b.diff3(&f, DiffOp::Laplace).unwrap();
    let lam = b.eigenvalue(0, 0, 1);
    let expected = f.scale(-lam);
    assert!(max_diff3(&lap, &expected) < 1e-10 * lam);
}

#[test]
fn eigenfunctions_are_orthonormal() {
    let b = basis(8, 5, 0.5);
    let modes = [(0, 0, 0), (1, 0, 0), (0, 2, 1), (1, -1, 2), (3, 1, 4), (-2, 3, 3)];
    for (i, &(a1, a2, am)) in modes.iter().enumerate() {
        let (ar, ai) = b.eigenfunction(a1, a2, am);
        for (j, &(c1, c2, cm)) in modes.iter().enumerate() {
            let (br, bi) = b.eigenfunction(c1, c2, cm);
            // complex inner product <psi_a, psi_b>
            let re = b.inner3(&ar, &br) + b.inner3(&ai, &bi);
            let im = b.inner3(&ai, &br) - b.inner3(&ar, &bi);
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((re - expect).abs() < 1e-12, "{i} {j} {re}");
            assert!(im.abs() < 1e-12);
        }
    }
}

#[test]
fn constant_and_single_mode_coefficients() {
    let b = basis(8, 5, 0.5);
    let c = b.to_spectral3(&Field3::constant(b.n3(), 3.0)).unwrap();
    for (p, v) in c.data.iter().enumerate() {
        if p == 0 {
            assert!((v.re - 3.0).abs() < 1e-14 && v.im.abs() < 1e-14);
        } else {
            assert!(v.norm() < 1e-14);
        }
    }
    let f = field2(&b, |x1, _| x1.cos());
    let c = b.to_spectral2(&f).unwrap();
    let plus = b.mode_index(1, 0);
    let minus = b.mode_index(-1, 0);
    for (p, v) in c.data.iter().enumerate() {
        if p == plus || p == minus {
            assert!((v.re - 0.5).abs() < 1e-14 && v.im.abs() < 1e-14);
        } else {
            assert!(v.norm() < 1e-14);
        }
    }
}

#[test]
fn shape_mismatch_is_reported() {
    let b = basis(8, 5, 0.5);
    assert!(matches!(
        b.to_spectral2(&Field2::zeros(10)),
        Err(SpectralError::ShapeMismatch { .. })
    ));
    assert!(matches!(
        b.to_spectral3(&Field3::zeros(64, Parity::Even)),
        Err(SpectralError::ShapeMismatch { .. })
    ));
    assert!(matches!(
        b.diff2(&Field2::zeros(64), DiffOp::Dz),
        Err(SpectralError::UnsupportedAxis)
    ));
}

#[test]
fn single_mode_derivatives() {
    let b = basis(16, 9, 0.5);
    let s = field2(&b, |x1, _| x1.sin());
    let c = field2(&b, |x1, _| x1.cos());
    assert!(max_diff2(&b.diff2(&s, DiffOp::Dx1).unwrap(), &c) < 1e-12);
    assert!(max_diff2(&b.diff2(&c, DiffOp::LaplaceX).unwrap(), &c.scale(-1.0)) < 1e-12);

    let c2 = field2(&b, |x1, _| (2.0 * x1).cos());
    let l5 = b.diff2(&c2, DiffOp::LaplaceX5).unwrap();
    // roundoff in the top modes is amplified by |k|^10
    assert!(max_diff2(&l5, &c2.scale(-1024.0)) < 1e-10 * 1024.0);
    let mut rep = c2.clone();
    for _ in 0..5 {
        rep = b.diff2(&rep, DiffOp::LaplaceX).unwrap();
    }
    assert!(max_diff2(&l5, &rep) < 1e-10 * 1024.0);
}

#[test]
fn vertical_derivative_maps_cosines_to_sines() {
    let h = 0.5;
    let b = basis(8, 9, h);
    let f = field3(&b, Parity::Even, |x1, _, z| x1.cos() * (2.0 * PI * z / h).cos());
    let d = b.diff3(&f, DiffOp::Dz).unwrap();
    assert_eq!(d.parity, Parity::Odd);
    let expect = field3(&b, Parity::Odd, |x1, _, z| {
        -2.0 * PI / h * x1.cos() * (2.0 * PI * z / h).sin()
    });
    assert!(max_diff3(&d, &expect) < 1e-11);
    let back = b.diff3(&d, DiffOp::Dz).unwrap();
    assert_eq!(back.parity, Parity::Even);
    let lam = (2.0 * PI / h).powi(2);
    assert!(max_diff3(&back, &f.scale(-lam)) < 1e-10 * lam);
}

#[test]
fn dealias_keeps_band_and_removes_nyquist() {
    let b = basis(12, 7, 0.5);
    let f = band_limited2(&b, 7, 1.0, 0.5);
    let mut c = b.to_spectral2(&f).unwrap();
    let before = c.clone();
    b.dealias2(&mut c);
    let moved = c.data.iter().zip(&before.data).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    assert!(moved < 1e-15);

    let nyq = field2(&b, |x1, _| (6.0 * x1).cos());
    let mut c = b.to_spectral2(&nyq).unwrap();
    b.dealias2(&mut c);
    assert!(c.data.iter().all(|v| v.norm() < 1e-15));
}

#[test]
fn dealiased_product_matches_fine_grid_projection() {
    // band edges that are not multiples of three keep the 2/3 rule alias-free
    let coarse = basis(16, 9, 0.5);
    let fine = basis(32, 17, 0.5);
    let f = band_limited3(&coarse, Parity::Even, 11, 1.0, 0.6);
    let g = band_limited3(&coarse, Parity::Even, 12, 1.0, 0.6);
    let mut pc = coarse.to_spectral3(&f.mul(&g)).unwrap();
    coarse.dealias3(&mut pc);

    let ff = fine.inverse3(&fine.resample3_from(&coarse, &coarse.to_spectral3(&f).unwrap()));
    let gf = fine.inverse3(&fine.resample3_from(&coarse, &coarse.to_spectral3(&g).unwrap()));
    let pf = fine.to_spectral3(&ff.mul(&gf)).unwrap();
    let mut exact = coarse.resample3_from(&fine, &pf);
    coarse.dealias3(&mut exact);
    let err = pc.sub(&exact).max_abs();
    assert!(err < 1e-12, "{err}");
}

#[test]
fn integrals_of_simple_fields() {
    let b = basis(8, 5, 0.5);
    let one = Field3::constant(b.n3(), 1.0);
    assert!((b.integrate3(&one) - 19.739_208_802_178_716).abs() < 1e-12);
    let c = field3(&b, Parity::Even, |x1, _, _| x1.cos());
    assert!(b.integrate3(&c).abs() < 1e-13);
    let cz = field3(&b, Parity::Even, |_, _, z| (PI * z / 0.5).cos());
    assert!(b.integrate3(&cz).abs() < 1e-12);
}

#[test]
fn integration_by_parts_in_z_with_vanishing_boundary_product() {
    let b = basis(8, 9, 0.5);
    let f = band_limited3(&b, Parity::Odd, 3, 1.0, 0.7);
    let g = band_limited3(&b, Parity::Even, 4, 1.0, 0.7);
    let lhs = b.inner3(&f, &b.diff3(&g, DiffOp::Dz).unwrap())
        + b.inner3(&g, &b.diff3(&f, DiffOp::Dz).unwrap());
    assert!(lhs.abs() < 1e-12 * b.norm3(&f) * b.norm3(&g) * 10.0, "{lhs}");
}

#[test]
fn evaluation_at_grid_heights_reproduces_samples() {
    let b = basis(8, 9, 0.5);
    let f = band_limited3(&b, Parity::Even, 5, 1.0, 0.7);
    let c = b.to_spectral3(&f).unwrap();
    let levels = b.evaluate_at_heights(&c, b.z_grid()).unwrap();
    for (j, lev) in levels.iter().enumerate() {
        let s = f.level(j, b.n2());
        let e = lev.data.iter().zip(s).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(e < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_and_parseval(seed in any::<u64>(), odd in any::<bool>()) {
        let b = basis(12, 9, 0.4);
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let f = band_limited3(&b, parity, seed, 1.0, 0.8);
        let g = band_limited3(&b, parity, seed ^ 0x5a5a, 1.0, 0.8);
        let cf = b.to_spectral3(&f).unwrap();
        let cg = b.to_spectral3(&g).unwrap();
        let back = b.from_spectral3(&cf).unwrap();
        prop_assert!(max_diff3(&back, &f) <= 1e-13 * f.max_abs());
        let grid = b.inner3(&f, &g);
        let spec = b.spectral_inner3(&cf, &cg);
        prop_assert!((grid - spec).abs() <= 1e-12 * b.norm3(&f) * b.norm3(&g));
    }

    #[test]
    fn integration_by_parts_in_x(seed in any::<u64>()) {
        let b = basis(16, 5, 0.5);
        let f = band_limited3(&b, Parity::Even, seed, 1.0, 0.8);
        let g = band_limited3(&b, Parity::Even, seed.wrapping_add(1), 1.0, 0.8);
        for op in [DiffOp::Dx1, DiffOp::Dx2] {
            let s = b.inner3(&f, &b.diff3(&g, op).unwrap()) + b.inner3(&g, &b.diff3(&f, op).unwrap());
            prop_assert!(s.abs() <= 1e-12 * b.norm3(&f) * b.norm3(&g) * 10.0);
        }
    }

    #[test]
    fn fifth_power_matches_repeated_laplacian(seed in any::<u64>()) {
        let b = basis(16, 5, 0.5);
        let f = band_limited2(&b, seed, 1.0, 0.8);
        let l5 = b.diff2(&f, DiffOp::LaplaceX5).unwrap();
        let mut rep = f.clone();
        for _ in 0..5 {
            rep = b.diff2(&rep, DiffOp::LaplaceX).unwrap();
        }
        prop_assert!(max_diff2(&l5, &rep) <= 1e-10 * l5.max_abs());
    }
}
