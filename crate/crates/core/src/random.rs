//! Seeded random band-limited fields for tests, initial-data noise and
//! property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::spectral::{Basis, Field2, Field3, Parity, Spec2, Spec3};

fn coefficient(rng: &mut ChaCha8Rng, weight: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * weight
}

/// Random real field inside the dealiasing band whose coefficients decay
/// like `decay^(|k1| + |k2|)`, rescaled so that `max |f| = amp`.
pub fn band_limited2(basis: &Basis, seed: u64, amp: f64, decay: f64) -> Field2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (k1, k2, _) = basis.wavenumbers();
    let n1 = k1.len();
    let mut c = Spec2::zeros(basis.n2());
    for (p, v) in c.data.iter_mut().enumerate() {
        let w = decay.powf(k1[p % n1].abs() + k2[p / n1].abs());
        let draw = coefficient(&mut rng, w);
        if basis.in_band2(p) {
            *v = draw;
        }
    }
    let f = basis.from_spectral2(&c).expect("sizes match");
    normalise2(f, amp)
}

/// Three-dimensional analogue of [`band_limited2`] with cosine (`Even`) or
/// sine (`Odd`) vertical structure.
pub fn band_limited3(basis: &Basis, parity: Parity, seed: u64, amp: f64, decay: f64) -> Field3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (k1, k2, _) = basis.wavenumbers();
    let n1 = k1.len();
    let n2 = basis.n2();
    let mut c = Spec3::zeros(basis.n3(), parity);
    for m in 0..basis.nz() {
        for p in 0..n2 {
            let w = decay.powf(k1[p % n1].abs() + k2[p / n1].abs() + m as f64);
            let draw = coefficient(&mut rng, w);
            let sine_null = parity == Parity::Odd && m == 0;
            if basis.in_band2(p) && basis.in_band_z(m) && !sine_null {
                c.data[m * n2 + p] = draw;
            }
        }
    }
    let f = basis.from_spectral3(&c).expect("sizes match");
    let scale = f.max_abs();
    if scale > 0.0 {
        f.scale(amp / scale)
    } else {
        f
    }
}

/// Positive band-limited density `mean + f` with `max |f| = amp`.
pub fn density(basis: &Basis, seed: u64, mean: f64, amp: f64, decay: f64) -> Field2 {
    band_limited2(basis, seed, amp, decay).map(|v| mean + v)
}

fn normalise2(f: Field2, amp: f64) -> Field2 {
    let scale = f.max_abs();
    if scale > 0.0 {
        f.scale(amp / scale)
    } else {
        f
    }
}
