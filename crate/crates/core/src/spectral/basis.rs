use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{DomainSpec, Field2, Field3, Parity, Spec2, Spec3, SpectralError};

/// Spectral operators available through [`Basis::diff2`] and [`Basis::diff3`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOp {
    Dx1,
    Dx2,
    Dz,
    LaplaceX,
    Laplace,
    Bilaplace,
    LaplaceX3,
    LaplaceX5,
}

/// Laplacian eigenbasis on `T² × (0, h)`: complex exponentials in `x` and
/// cosines (Neumann) in `z`, together with the transforms between grid
/// samples and coefficients and all derivative multipliers.
///
/// Immutable after construction; cloning is cheap (plans are shared).
#[derive(Clone)]
pub struct Basis {
    spec: DomainSpec,
    k1: Vec<f64>,
    k2: Vec<f64>,
    // first-derivative wavenumbers, Nyquist removed
    dk1: Vec<f64>,
    dk2: Vec<f64>,
    kz: Vec<f64>,
    kx_sq: Vec<f64>,
    band2: Vec<bool>,
    band_z: Vec<bool>,
    z: Vec<f64>,
    trap: Vec<f64>,
    fft1: Arc<dyn Fft<f64>>,
    ifft1: Arc<dyn Fft<f64>>,
    fft2: Arc<dyn Fft<f64>>,
    ifft2: Arc<dyn Fft<f64>>,
    cos_fwd: Vec<f64>,
    cos_inv: Vec<f64>,
    sin_fwd: Vec<f64>,
    sin_inv: Vec<f64>,
}

impl std::fmt::Debug for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Basis").field("spec", &self.spec).finish()
    }
}

fn signed_wavenumber(i: usize, n: usize) -> f64 {
    if i <= n / 2 {
        i as f64
    } else {
        i as f64 - n as f64
    }
}

/// `cos(π r / m)` and `sin(π r / m)` with exact values at multiples of `π/2`.
fn trig_exact(r: usize, m: usize) -> (f64, f64) {
    let r = r % (2 * m);
    if r == 0 {
        return (1.0, 0.0);
    }
    if r == m {
        return (-1.0, 0.0);
    }
    if 2 * r == m {
        return (0.0, 1.0);
    }
    if 2 * r == 3 * m {
        return (0.0, -1.0);
    }
    let a = PI * r as f64 / m as f64;
    (a.cos(), a.sin())
}

/// Builds the basis for a validated spec.
pub fn make_basis(spec: DomainSpec) -> Result<Basis, SpectralError> {
    Basis::new(spec)
}

impl Basis {
    pub fn new(spec: DomainSpec) -> Result<Self, SpectralError> {
        spec.validate()?;
        let (n1, n2, nz) = (spec.nx1, spec.nx2, spec.nz);
        let m = nz - 1;

        let k1: Vec<f64> = (0..n1).map(|i| signed_wavenumber(i, n1)).collect();
        let k2: Vec<f64> = (0..n2).map(|i| signed_wavenumber(i, n2)).collect();
        let dk1 = k1
            .iter()
            .enumerate()
            .map(|(i, &k)| if i == n1 / 2 { 0.0 } else { k })
            .collect();
        let dk2 = k2
            .iter()
            .enumerate()
            .map(|(i, &k)| if i == n2 / 2 { 0.0 } else { k })
            .collect();
        let kz = (0..nz).map(|j| PI * j as f64 / spec.h).collect();

        let mut kx_sq = vec![0.0; n1 * n2];
        let mut band2 = vec![false; n1 * n2];
        let lim1 = n1 as f64 / 3.0;
        let lim2 = n2 as f64 / 3.0;
        for i2 in 0..n2 {
            for i1 in 0..n1 {
                kx_sq[i2 * n1 + i1] = k1[i1] * k1[i1] + k2[i2] * k2[i2];
                band2[i2 * n1 + i1] = k1[i1].abs() <= lim1 && k2[i2].abs() <= lim2;
            }
        }
        let lim_z = 2.0 * m as f64 / 3.0;
        let band_z = (0..nz).map(|j| j as f64 <= lim_z).collect();

        let dz = spec.h / m as f64;
        let z = (0..nz).map(|j| spec.h * j as f64 / m as f64).collect();
        let trap = (0..nz)
            .map(|j| if j == 0 || j == m { 0.5 * dz } else { dz })
            .collect();

        let mut cos_fwd = vec![0.0; nz * nz];
        let mut cos_inv = vec![0.0; nz * nz];
        let mut sin_fwd = vec![0.0; nz * nz];
        let mut sin_inv = vec![0.0; nz * nz];
        for mode in 0..nz {
            for j in 0..nz {
                let (c, s) = trig_exact(mode * j, m);
                let wj = if j == 0 || j == m { 0.5 } else { 1.0 };
                let sm = if mode == 0 || mode == m { 0.5 } else { 1.0 };
                cos_fwd[mode * nz + j] = 2.0 / m as f64 * wj * sm * c;
                cos_inv[j * nz + mode] = c;
                let interior = (1..m).contains(&mode) && (1..m).contains(&j);
                if interior {
                    sin_fwd[mode * nz + j] = 2.0 / m as f64 * s;
                    sin_inv[j * nz + mode] = s;
                }
            }
        }

        let mut planner = FftPlanner::new();
        Ok(Basis {
            spec,
            k1,
            k2,
            dk1,
            dk2,
            kz,
            kx_sq,
            band2,
            band_z,
            z,
            trap,
            fft1: planner.plan_fft_forward(n1),
            ifft1: planner.plan_fft_inverse(n1),
            fft2: planner.plan_fft_forward(n2),
            ifft2: planner.plan_fft_inverse(n2),
            cos_fwd,
            cos_inv,
            sin_fwd,
            sin_inv,
        })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn n2(&self) -> usize {
        self.spec.n2()
    }

    pub fn n3(&self) -> usize {
        self.spec.n3()
    }

    pub fn nz(&self) -> usize {
        self.spec.nz
    }

    pub fn h(&self) -> f64 {
        self.spec.h
    }

    /// Total number of basis functions (`nx1 · nx2 · nz`).
    pub fn mode_count(&self) -> usize {
        self.n3()
    }

    pub fn z_grid(&self) -> &[f64] {
        &self.z
    }

    pub fn x1_grid(&self) -> Vec<f64> {
        let n = self.spec.nx1;
        (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
    }

    pub fn x2_grid(&self) -> Vec<f64> {
        let n = self.spec.nx2;
        (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
    }

    /// Trapezoid weights of the vertical grid (they include `dz`).
    pub fn trapezoid_weights(&self) -> &[f64] {
        &self.trap
    }

    pub fn wavenumbers(&self) -> (&[f64], &[f64], &[f64]) {
        (&self.k1, &self.k2, &self.kz)
    }

    /// Index of the Fourier mode with signed wavenumbers `(k1, k2)`.
    pub fn mode_index(&self, k1: i64, k2: i64) -> usize {
        let n1 = self.spec.nx1 as i64;
        let n2 = self.spec.nx2 as i64;
        let i1 = k1.rem_euclid(n1) as usize;
        let i2 = k2.rem_euclid(n2) as usize;
        i2 * self.spec.nx1 + i1
    }

    /// Eigenvalue of `-Δ` for mode `(k1, k2, m)`.
    pub fn eigenvalue(&self, k1: i64, k2: i64, m: usize) -> f64 {
        let idx = self.mode_index(k1, k2);
        self.kx_sq[idx] + self.kz[m] * self.kz[m]
    }

    /// All eigenvalues in storage order (vertical mode slowest).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n2 = self.n2();
        let mut out = Vec::with_capacity(self.n3());
        for m in 0..self.spec.nz {
            let kz2 = self.kz[m] * self.kz[m];
            out.extend((0..n2).map(|p| self.kx_sq[p] + kz2));
        }
        out
    }

    /// Discrete squared norm of `cos(mπz/h)` under the trapezoid rule,
    /// divided by `h`.
    pub fn cosine_weight(&self, m: usize) -> f64 {
        if m == 0 || m == self.spec.nz - 1 {
            1.0
        } else {
            0.5
        }
    }

    /// Samples the normalised eigenfunction `(k1, k2, m)` as real and
    /// imaginary parts.
    pub fn eigenfunction(&self, k1: i64, k2: i64, m: usize) -> (Field3, Field3) {
        let norm = 1.0 / (self.spec.volume() * self.cosine_weight(m)).sqrt();
        let x1 = self.x1_grid();
        let x2 = self.x2_grid();
        let (n1, n2) = (self.spec.nx1, self.spec.nx2);
        let mut re = Field3::zeros(self.n3(), Parity::Even);
        let mut im = Field3::zeros(self.n3(), Parity::Even);
        for j in 0..self.spec.nz {
            let (cz, _) = trig_exact(m * j, self.spec.nz - 1);
            for i2 in 0..n2 {
                for i1 in 0..n1 {
                    let phase = k1 as f64 * x1[i1] + k2 as f64 * x2[i2];
                    let p = (j * n2 + i2) * n1 + i1;
                    re.data[p] = norm * cz * phase.cos();
                    im.data[p] = norm * cz * phase.sin();
                }
            }
        }
        (re, im)
    }

    fn fft2_in_place(&self, buf: &mut [Complex64], inverse: bool) {
        let (n1, n2) = (self.spec.nx1, self.spec.nx2);
        let (f1, f2) = if inverse {
            (&self.ifft1, &self.ifft2)
        } else {
            (&self.fft1, &self.fft2)
        };
        f1.process(buf);
        let levels = buf.len() / (n1 * n2);
        let mut t = vec![Complex64::new(0.0, 0.0); buf.len()];
        for l in 0..levels {
            let off = l * n1 * n2;
            for i2 in 0..n2 {
                for i1 in 0..n1 {
                    t[off + i1 * n2 + i2] = buf[off + i2 * n1 + i1];
                }
            }
        }
        f2.process(&mut t);
        for l in 0..levels {
            let off = l * n1 * n2;
            for i2 in 0..n2 {
                for i1 in 0..n1 {
                    buf[off + i2 * n1 + i1] = t[off + i1 * n2 + i2];
                }
            }
        }
    }

    fn check2(&self, len: usize) -> Result<(), SpectralError> {
        if len != self.n2() {
            return Err(SpectralError::ShapeMismatch {
                expected: self.n2(),
                found: len,
            });
        }
        Ok(())
    }

    fn check3(&self, len: usize) -> Result<(), SpectralError> {
        if len != self.n3() {
            return Err(SpectralError::ShapeMismatch {
                expected: self.n3(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn to_spectral2(&self, f: &Field2) -> Result<Spec2, SpectralError> {
        self.check2(f.len())?;
        Ok(self.forward2(f))
    }

    pub fn from_spectral2(&self, c: &Spec2) -> Result<Field2, SpectralError> {
        self.check2(c.data.len())?;
        Ok(self.inverse2(c))
    }

    pub fn to_spectral3(&self, f: &Field3) -> Result<Spec3, SpectralError> {
        self.check3(f.len())?;
        if f.parity == Parity::Mixed {
            return Err(SpectralError::NotRepresentable);
        }
        Ok(self.forward3(f))
    }

    pub fn from_spectral3(&self, c: &Spec3) -> Result<Field3, SpectralError> {
        self.check3(c.data.len())?;
        if c.parity == Parity::Mixed {
            return Err(SpectralError::NotRepresentable);
        }
        Ok(self.inverse3(c))
    }

    /// Unchecked forward transform (lengths are trusted).
    pub(crate) fn forward2(&self, f: &Field2) -> Spec2 {
        let mut buf: Vec<Complex64> = f.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2_in_place(&mut buf, false);
        let s = 1.0 / self.n2() as f64;
        buf.iter_mut().for_each(|c| *c *= s);
        Spec2 { data: buf }
    }

    pub(crate) fn inverse2(&self, c: &Spec2) -> Field2 {
        let mut buf = c.data.clone();
        self.fft2_in_place(&mut buf, true);
        Field2 {
            data: buf.iter().map(|c| c.re).collect(),
        }
    }

    fn vertical_matrix(&self, parity: Parity, forward: bool) -> &[f64] {
        match (parity, forward) {
            (Parity::Odd, true) => &self.sin_fwd,
            (Parity::Odd, false) => &self.sin_inv,
            (_, true) => &self.cos_fwd,
            (_, false) => &self.cos_inv,
        }
    }

    fn apply_vertical(&self, mat: &[f64], input: &[Complex64]) -> Vec<Complex64> {
        let nz = self.spec.nz;
        let n2 = self.n2();
        let mut out = vec![Complex64::new(0.0, 0.0); input.len()];
        for row in 0..nz {
            let dst = &mut out[row * n2..(row + 1) * n2];
            for col in 0..nz {
                let a = mat[row * nz + col];
                if a == 0.0 {
                    continue;
                }
                let src = &input[col * n2..(col + 1) * n2];
                dst.iter_mut().zip(src).for_each(|(d, s)| *d += s * a);
            }
        }
        out
    }

    pub(crate) fn forward3(&self, f: &Field3) -> Spec3 {
        let mut buf: Vec<Complex64> = f.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2_in_place(&mut buf, false);
        let s = 1.0 / self.n2() as f64;
        buf.iter_mut().for_each(|c| *c *= s);
        let data = self.apply_vertical(self.vertical_matrix(f.parity, true), &buf);
        Spec3 {
            data,
            parity: f.parity,
        }
    }

    pub(crate) fn inverse3(&self, c: &Spec3) -> Field3 {
        let mut buf = self.apply_vertical(self.vertical_matrix(c.parity, false), &c.data);
        self.fft2_in_place(&mut buf, true);
        Field3 {
            data: buf.iter().map(|c| c.re).collect(),
            parity: c.parity,
        }
    }

    /// Horizontal multiplier of `op` at flat index `p`, or `None` when the
    /// operator acts on `z`.
    fn horizontal_multiplier(&self, op: DiffOp, p: usize) -> Complex64 {
        let n1 = self.spec.nx1;
        let (i1, i2) = (p % n1, p / n1);
        let ksq = self.kx_sq[p];
        match op {
            DiffOp::Dx1 => Complex64::new(0.0, self.dk1[i1]),
            DiffOp::Dx2 => Complex64::new(0.0, self.dk2[i2]),
            DiffOp::LaplaceX => Complex64::new(-ksq, 0.0),
            DiffOp::LaplaceX3 => Complex64::new(-ksq * ksq * ksq, 0.0),
            DiffOp::LaplaceX5 => Complex64::new(-ksq.powi(5), 0.0),
            // horizontal fields are z-independent
            DiffOp::Laplace => Complex64::new(-ksq, 0.0),
            DiffOp::Bilaplace => Complex64::new(ksq * ksq, 0.0),
            DiffOp::Dz => Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply2(&self, c: &Spec2, op: DiffOp) -> Result<Spec2, SpectralError> {
        if op == DiffOp::Dz {
            return Err(SpectralError::UnsupportedAxis);
        }
        Ok(Spec2 {
            data: c
                .data
                .iter()
                .enumerate()
                .map(|(p, v)| v * self.horizontal_multiplier(op, p))
                .collect(),
        })
    }

    pub fn apply3(&self, c: &Spec3, op: DiffOp) -> Result<Spec3, SpectralError> {
        if c.parity == Parity::Mixed {
            return Err(SpectralError::NotRepresentable);
        }
        let n2 = self.n2();
        let nz = self.spec.nz;
        let top = nz - 1;
        let mut out = Spec3::zeros(c.data.len(), c.parity);
        match op {
            DiffOp::Dz => {
                out.parity = c.parity.flipped();
                for m in 0..nz {
                    // cos -> -k sin (last cosine mode vanishes on the grid);
                    // sin -> k cos (no constant or top cosine produced)
                    let f = match c.parity {
                        Parity::Even if m > 0 && m < top => -self.kz[m],
                        Parity::Odd if m > 0 && m < top => self.kz[m],
                        _ => 0.0,
                    };
                    let src = &c.data[m * n2..(m + 1) * n2];
                    out.data[m * n2..(m + 1) * n2]
                        .iter_mut()
                        .zip(src)
                        .for_each(|(d, s)| *d = s * f);
                }
            }
            DiffOp::Laplace | DiffOp::Bilaplace => {
                for m in 0..nz {
                    let kz2 = self.kz[m] * self.kz[m];
                    for p in 0..n2 {
                        let lam = self.kx_sq[p] + kz2;
                        let f = if op == DiffOp::Laplace { -lam } else { lam * lam };
                        out.data[m * n2 + p] = c.data[m * n2 + p] * f;
                    }
                }
            }
            _ => {
                for m in 0..nz {
                    for p in 0..n2 {
                        out.data[m * n2 + p] =
                            c.data[m * n2 + p] * self.horizontal_multiplier(op, p);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn diff2(&self, f: &Field2, op: DiffOp) -> Result<Field2, SpectralError> {
        let c = self.to_spectral2(f)?;
        Ok(self.inverse2(&self.apply2(&c, op)?))
    }

    pub fn diff3(&self, f: &Field3, op: DiffOp) -> Result<Field3, SpectralError> {
        let c = self.to_spectral3(f)?;
        Ok(self.inverse3(&self.apply3(&c, op)?))
    }

    pub fn in_band2(&self, p: usize) -> bool {
        self.band2[p]
    }

    pub fn in_band_z(&self, m: usize) -> bool {
        self.band_z[m]
    }

    /// Zeroes every mode outside the 2/3-rule band.
    pub fn dealias2(&self, c: &mut Spec2) {
        c.data
            .iter_mut()
            .zip(&self.band2)
            .filter(|(_, &keep)| !keep)
            .for_each(|(v, _)| *v = Complex64::new(0.0, 0.0));
    }

    pub fn dealias3(&self, c: &mut Spec3) {
        let n2 = self.n2();
        for m in 0..self.spec.nz {
            let keep_z = self.band_z[m];
            for p in 0..n2 {
                if !(keep_z && self.band2[p]) {
                    c.data[m * n2 + p] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Projects a horizontal field onto the dealiased band.
    pub fn project2(&self, f: &Field2) -> Field2 {
        let mut c = self.forward2(f);
        self.dealias2(&mut c);
        self.inverse2(&c)
    }

    pub fn project3(&self, f: &Field3) -> Field3 {
        let mut c = self.forward3(f);
        self.dealias3(&mut c);
        self.inverse3(&c)
    }

    /// `∫_{T²} f dx`: rectangle rule, exact on trigonometric polynomials.
    pub fn integrate2(&self, f: &Field2) -> f64 {
        f.mean() * self.spec.torus_area()
    }

    /// `∫_Ω f dx dz`: rectangle rule in `x`, trapezoid in `z`.
    pub fn integrate3(&self, f: &Field3) -> f64 {
        let n2 = self.n2();
        let mut total = 0.0;
        for (j, w) in self.trap.iter().enumerate() {
            let s: f64 = f.data[j * n2..(j + 1) * n2].iter().sum();
            total += w * s;
        }
        total / n2 as f64 * self.spec.torus_area()
    }

    /// Weighted grid inner product `∫_Ω f g`.
    pub fn inner3(&self, f: &Field3, g: &Field3) -> f64 {
        let n2 = self.n2();
        let mut total = 0.0;
        for (j, w) in self.trap.iter().enumerate() {
            let s: f64 = f.data[j * n2..(j + 1) * n2]
                .iter()
                .zip(&g.data[j * n2..(j + 1) * n2])
                .map(|(a, b)| a * b)
                .sum();
            total += w * s;
        }
        total / n2 as f64 * self.spec.torus_area()
    }

    pub fn inner2(&self, f: &Field2, g: &Field2) -> f64 {
        let s: f64 = f.data.iter().zip(&g.data).map(|(a, b)| a * b).sum();
        s / self.n2() as f64 * self.spec.torus_area()
    }

    pub fn norm3(&self, f: &Field3) -> f64 {
        self.inner3(f, f).max(0.0).sqrt()
    }

    pub fn norm2(&self, f: &Field2) -> f64 {
        self.inner2(f, f).max(0.0).sqrt()
    }

    /// `∫_Ω f g` evaluated on coefficients (discrete Parseval).
    pub fn spectral_inner3(&self, a: &Spec3, b: &Spec3) -> f64 {
        let n2 = self.n2();
        let mut total = 0.0;
        for m in 0..self.spec.nz {
            let w = match a.parity {
                Parity::Odd => 0.5,
                _ => self.cosine_weight(m),
            };
            let s: f64 = a.data[m * n2..(m + 1) * n2]
                .iter()
                .zip(&b.data[m * n2..(m + 1) * n2])
                .map(|(x, y)| (x * y.conj()).re)
                .sum();
            total += w * s;
        }
        total * self.spec.volume()
    }

    pub fn spectral_inner2(&self, a: &Spec2, b: &Spec2) -> f64 {
        let s: f64 = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| (x * y.conj()).re)
            .sum();
        s * self.spec.torus_area()
    }

    /// Evaluates the vertical expansion of `c` at arbitrary heights, giving
    /// one horizontal level per requested `z`.
    pub fn evaluate_at_heights(&self, c: &Spec3, heights: &[f64]) -> Result<Vec<Field2>, SpectralError> {
        if c.parity == Parity::Mixed {
            return Err(SpectralError::NotRepresentable);
        }
        let n2 = self.n2();
        let nz = self.spec.nz;
        let mut out = Vec::with_capacity(heights.len());
        for &zq in heights {
            let mut level = Spec2::zeros(n2);
            for m in 0..nz {
                let arg = self.kz[m] * zq;
                let basis = match c.parity {
                    Parity::Odd => {
                        if m == 0 || m == nz - 1 {
                            0.0
                        } else {
                            arg.sin()
                        }
                    }
                    _ => arg.cos(),
                };
                if basis == 0.0 {
                    continue;
                }
                level
                    .data
                    .iter_mut()
                    .zip(&c.data[m * n2..(m + 1) * n2])
                    .for_each(|(d, s)| *d += s * basis);
            }
            out.push(self.inverse2(&level));
        }
        Ok(out)
    }

    /// Copies coefficients of `c` (defined on `from`) into the storage of
    /// this basis, truncating or zero-padding modes. The Nyquist modes are
    /// dropped in both directions.
    pub fn resample3_from(&self, from: &Basis, c: &Spec3) -> Spec3 {
        let mut out = Spec3::zeros(self.n3(), c.parity);
        let nz = self.spec.nz.min(from.spec.nz);
        let (fn1, fn2) = (from.spec.nx1 as i64, from.spec.nx2 as i64);
        let (n1, n2) = (self.spec.nx1 as i64, self.spec.nx2 as i64);
        let lim1 = (fn1.min(n1) / 2 - 1).max(0);
        let lim2 = (fn2.min(n2) / 2 - 1).max(0);
        for m in 0..nz {
            if c.parity == Parity::Odd && (m == 0 || m + 1 >= nz) {
                continue;
            }
            for k2 in -lim2..=lim2 {
                for k1 in -lim1..=lim1 {
                    let src = m * from.n2() + from.mode_index(k1, k2);
                    let dst = m * self.n2() + self.mode_index(k1, k2);
                    out.data[dst] = c.data[src];
                }
            }
        }
        out
    }

    pub fn resample2_from(&self, from: &Basis, c: &Spec2) -> Spec2 {
        let mut out = Spec2::zeros(self.n2());
        let (fn1, fn2) = (from.spec.nx1 as i64, from.spec.nx2 as i64);
        let (n1, n2) = (self.spec.nx1 as i64, self.spec.nx2 as i64);
        let lim1 = fn1.min(n1) / 2 - 1;
        let lim2 = fn2.min(n2) / 2 - 1;
        for k2 in -lim2..=lim2 {
            for k1 in -lim1..=lim1 {
                out.data[self.mode_index(k1, k2)] = c.data[from.mode_index(k1, k2)];
            }
        }
        out
    }

    /// Multiplier `1 + a·|k|²` style diagonal solves need the horizontal
    /// `|k|²` table.
    pub fn kx_squared(&self) -> &[f64] {
        &self.kx_sq
    }

    pub fn kz_values(&self) -> &[f64] {
        &self.kz
    }
}
