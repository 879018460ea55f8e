//! Reduced variables `(ξ, u)` on `T² × (0, h)`, the reconstructed vertical
//! velocity, and the map back to the stratified layer `T² × (0, H)`.

use crate::error::{check_density, Result, SolverError};
use crate::spectral::{Basis, Field2, Field3, Parity, Spec3, VectorField3};

/// Density and horizontal velocity of the reduced system at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub t: f64,
    pub xi: Field2,
    pub u: VectorField3,
}

impl ReducedState {
    pub fn new(basis: &Basis, t: f64, xi: Field2, u: VectorField3) -> Result<Self> {
        if xi.len() != basis.n2() {
            return Err(SolverError::GridMismatch(format!(
                "density has {} samples, grid has {}",
                xi.len(),
                basis.n2()
            )));
        }
        for c in &u {
            if c.len() != basis.n3() || c.parity != Parity::Even {
                return Err(SolverError::GridMismatch(
                    "velocity must be a cosine field on the full grid".into(),
                ));
            }
        }
        Ok(ReducedState { t, xi, u })
    }

    /// `ξ ≡ xi0`, `u ≡ 0`.
    pub fn at_rest(basis: &Basis, xi0: f64) -> Self {
        ReducedState {
            t: 0.0,
            xi: Field2::constant(basis.n2(), xi0),
            u: [
                Field3::zeros(basis.n3(), Parity::Even),
                Field3::zeros(basis.n3(), Parity::Even),
            ],
        }
    }

    pub fn min_xi(&self) -> f64 {
        self.xi.min()
    }

    pub fn max_xi(&self) -> f64 {
        self.xi.max()
    }

    pub fn max_speed(&self) -> f64 {
        self.u[0]
            .data
            .iter()
            .zip(&self.u[1].data)
            .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)))
    }

    pub fn is_finite(&self) -> bool {
        self.xi.is_finite() && self.u[0].is_finite() && self.u[1].is_finite()
    }
}

/// `(1/h) ∫₀ʰ u dz` by the trapezoid rule.
pub fn vertical_average(basis: &Basis, u: &Field3) -> Field2 {
    let n2 = basis.n2();
    let mut out = Field2::zeros(n2);
    for (j, w) in basis.trapezoid_weights().iter().enumerate() {
        out.data
            .iter_mut()
            .zip(u.level(j, n2))
            .for_each(|(o, v)| *o += w * v);
    }
    out.scale_in_place(1.0 / basis.h());
    out
}

pub fn vertical_average_vec(basis: &Basis, u: &VectorField3) -> [Field2; 2] {
    [vertical_average(basis, &u[0]), vertical_average(basis, &u[1])]
}

/// Sine part of the termwise antiderivative of a cosine series, i.e.
/// `∫₀ᶻ u − z ū`. It vanishes at both ends of the column.
pub fn cumulative_fluctuation(basis: &Basis, u: &Field3) -> Result<Field3> {
    let c = basis.to_spectral3(u)?;
    if c.parity != Parity::Even {
        return Err(SolverError::InvalidInput(
            "vertical antiderivative needs a cosine field".into(),
        ));
    }
    let n2 = basis.n2();
    let nz = basis.nz();
    let kz = basis.kz_values();
    let mut s = Spec3::zeros(c.data.len(), Parity::Odd);
    // the top cosine integrates to a sine that vanishes on every node
    for m in 1..nz - 1 {
        let f = 1.0 / kz[m];
        for p in 0..n2 {
            s.data[m * n2 + p] = c.data[m * n2 + p] * f;
        }
    }
    basis.from_spectral3(&s).map_err(Into::into)
}

/// `ũ(z) = ∫₀ᶻ u`, evaluated termwise on the cosine series.
pub fn vertical_cumulative(basis: &Basis, u: &Field3) -> Result<Field3> {
    let mut out = cumulative_fluctuation(basis, u)?;
    let ubar = vertical_average(basis, u);
    let n2 = basis.n2();
    for (j, &z) in basis.z_grid().iter().enumerate() {
        out.data[j * n2..(j + 1) * n2]
            .iter_mut()
            .zip(&ubar.data)
            .for_each(|(o, b)| *o += z * b);
    }
    out.parity = Parity::Mixed;
    Ok(out)
}

/// Vertical mass flux `ξw = −div(ξ(ũ − zū))`, a sine field.
pub fn vertical_flux(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<Field3> {
    let a = cumulative_fluctuation(basis, &u[0])?.mul2(xi);
    let b = cumulative_fluctuation(basis, &u[1])?.mul2(xi);
    Ok(basis.div3(&a, &b).scale(-1.0))
}

/// Vertical velocity `w = −div(ξũ)/ξ + z div(ξū)/ξ`.
pub fn reconstruct_w(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<Field3> {
    check_density(xi.min(), 0.0)?;
    Ok(vertical_flux(basis, xi, u)?.div2(xi))
}

/// `∂z w = −div(ξu)/ξ + div(ξū)/ξ`.
pub fn reconstruct_dz_w(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<Field3> {
    check_density(xi.min(), 0.0)?;
    let ubar = vertical_average_vec(basis, u);
    let mean_flux = basis.div2(&ubar[0].mul(xi), &ubar[1].mul(xi));
    let flux = basis.div3(&u[0].mul2(xi), &u[1].mul2(xi));
    let mut out = Field3::broadcast(&mean_flux, basis.nz()).sub(&flux);
    out.parity = Parity::Even;
    Ok(out.div2(xi))
}

/// Fields of the original stratified layer on a `y` grid over `[0, H]`.
///
/// Arrays are stored level by level in `y`, `x1` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedState {
    pub t: f64,
    pub height: f64,
    pub ys: Vec<f64>,
    pub nx1: usize,
    pub nx2: usize,
    pub rho: Vec<f64>,
    pub u: [Vec<f64>; 2],
    pub v: Vec<f64>,
    /// `e^H`, the largest factor applied to `w` when forming `v`.
    pub amplification: f64,
}

fn check_height(basis: &Basis, height: f64) -> Result<()> {
    let expected = -(-height).exp_m1();
    if !(height > 0.0) || (basis.h() - expected).abs() > 1e-12 {
        return Err(SolverError::HeightMismatch {
            h: basis.h(),
            expected,
        });
    }
    Ok(())
}

/// Lifts onto `ny` uniform points of `[0, H]`.
pub fn lift_to_original(
    basis: &Basis,
    state: &ReducedState,
    height: f64,
    ny: usize,
) -> Result<LiftedState> {
    if ny < 2 {
        return Err(SolverError::InvalidInput("ny must be at least 2".into()));
    }
    let ys: Vec<f64> = (0..ny)
        .map(|j| height * j as f64 / (ny - 1) as f64)
        .collect();
    lift_on_grid(basis, state, height, &ys)
}

/// Lifts onto arbitrary heights `ys ⊂ [0, H]` using `z = 1 − e^{−y}`,
/// `ρ = ξe^{−y}` and `v = e^{y}w`.
pub fn lift_on_grid(
    basis: &Basis,
    state: &ReducedState,
    height: f64,
    ys: &[f64],
) -> Result<LiftedState> {
    check_height(basis, height)?;
    check_density(state.min_xi(), 0.0)?;
    if ys.iter().any(|&y| !(0.0..=height * (1.0 + 1e-14)).contains(&y)) {
        return Err(SolverError::InvalidInput("y outside [0, H]".into()));
    }
    let zs: Vec<f64> = ys.iter().map(|&y| -(-y).exp_m1()).collect();
    let w = reconstruct_w(basis, &state.xi, &state.u)?;
    let levels = |f: &Field3| -> Result<Vec<f64>> {
        let c = basis.to_spectral3(f)?;
        Ok(basis
            .evaluate_at_heights(&c, &zs)?
            .into_iter()
            .flat_map(|l| l.data)
            .collect())
    };
    let u1 = levels(&state.u[0])?;
    let u2 = levels(&state.u[1])?;
    let mut v = levels(&w)?;
    let n2 = basis.n2();
    let mut rho = Vec::with_capacity(ys.len() * n2);
    for (j, &y) in ys.iter().enumerate() {
        let decay = (-y).exp();
        rho.extend(state.xi.data.iter().map(|x| x * decay));
        let grow = y.exp();
        v[j * n2..(j + 1) * n2].iter_mut().for_each(|x| *x *= grow);
    }
    let spec = basis.spec();
    Ok(LiftedState {
        t: state.t,
        height,
        ys: ys.to_vec(),
        nx1: spec.nx1,
        nx2: spec.nx2,
        rho,
        u: [u1, u2],
        v,
        amplification: height.exp(),
    })
}

/// Inverse of the lift on the preimage of the reduced grid; `ξ` is read at
/// `y = 0`.
pub fn reduce(basis: &Basis, lifted: &LiftedState) -> Result<ReducedState> {
    check_height(basis, lifted.height)?;
    let spec = basis.spec();
    if lifted.nx1 != spec.nx1 || lifted.nx2 != spec.nx2 || lifted.ys.len() != spec.nz {
        return Err(SolverError::GridMismatch(
            "lifted grid does not match the reduced grid".into(),
        ));
    }
    for (&y, &z) in lifted.ys.iter().zip(basis.z_grid()) {
        if (-(-y).exp_m1() - z).abs() > 1e-12 {
            return Err(SolverError::GridMismatch(format!(
                "y = {y} is not the preimage of z = {z}"
            )));
        }
    }
    let n2 = basis.n2();
    let xi = Field2 {
        data: lifted.rho[..n2].to_vec(),
    };
    let u = [
        Field3 {
            data: lifted.u[0].clone(),
            parity: Parity::Even,
        },
        Field3 {
            data: lifted.u[1].clone(),
            parity: Parity::Even,
        },
    ];
    ReducedState::new(basis, lifted.t, xi, u)
}

/// Preimage `y_j = −ln(1 − z_j)` of the reduced vertical grid.
pub fn preimage_grid(basis: &Basis) -> Vec<f64> {
    basis.z_grid().iter().map(|&z| -(-z).ln_1p()).collect()
}

/// Derivative weights of the Lagrange interpolant through `xs` at `x0`.
fn lagrange_derivative_weights(xs: &[f64], x0: f64) -> Vec<f64> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            let denom: f64 = (0..n).filter(|&k| k != i).map(|k| xs[i] - xs[k]).product();
            let mut num = 0.0;
            for skip in (0..n).filter(|&k| k != i) {
                num += (0..n)
                    .filter(|&k| k != i && k != skip)
                    .map(|k| x0 - xs[k])
                    .product::<f64>();
            }
            num / denom
        })
        .collect()
}

impl LiftedState {
    fn n2(&self) -> usize {
        self.nx1 * self.nx2
    }

    /// `max |∂y P + ρ| / max |ρ|` with `P = ρ`, differentiating in the
    /// integrating-factor form `e^{−y} ∂y(e^{y} ρ)` by five-point Lagrange
    /// stencils.
    pub fn hydrostatic_residual(&self) -> f64 {
        let ny = self.ys.len();
        let n2 = self.n2();
        if ny < 5 {
            return f64::NAN;
        }
        let scale = self.rho.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let mut worst = 0.0f64;
        for j in 0..ny {
            let start = j.saturating_sub(2).min(ny - 5);
            let xs = &self.ys[start..start + 5];
            let wts = lagrange_derivative_weights(xs, self.ys[j]);
            for p in 0..n2 {
                let d: f64 = wts
                    .iter()
                    .enumerate()
                    .map(|(k, w)| {
                        let jj = start + k;
                        w * self.rho[jj * n2 + p] * self.ys[jj].exp()
                    })
                    .sum();
                let res = (-self.ys[j]).exp() * d;
                worst = worst.max(res.abs());
            }
        }
        worst / scale
    }

    /// `∫ ρ dx dy`: rectangle rule in `x`, composite Simpson in `y` on a
    /// uniform grid (with a closing 3/8 panel for an even point count),
    /// trapezoid otherwise.
    pub fn mass(&self) -> f64 {
        let n2 = self.n2();
        let ny = self.ys.len();
        let col: Vec<f64> = (0..ny)
            .map(|j| self.rho[j * n2..(j + 1) * n2].iter().sum::<f64>() / n2 as f64)
            .collect();
        let area = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        area * integrate_column(&self.ys, &col)
    }
}

fn integrate_column(ys: &[f64], f: &[f64]) -> f64 {
    let n = ys.len();
    if n < 2 {
        return 0.0;
    }
    let dy = (ys[n - 1] - ys[0]) / (n - 1) as f64;
    let uniform = ys
        .iter()
        .enumerate()
        .all(|(j, &y)| (y - ys[0] - j as f64 * dy).abs() <= 1e-12 * (1.0 + y.abs()));
    if !uniform || n < 4 {
        return ys
            .windows(2)
            .zip(f.windows(2))
            .map(|(y, v)| 0.5 * (y[1] - y[0]) * (v[0] + v[1]))
            .sum();
    }
    let simpson = |a: usize, b: usize| -> f64 {
        let mut s = f[a] + f[b];
        for j in a + 1..b {
            s += if (j - a) % 2 == 1 { 4.0 * f[j] } else { 2.0 * f[j] };
        }
        s * dy / 3.0
    };
    if (n - 1) % 2 == 0 {
        simpson(0, n - 1)
    } else {
        let k = n - 4;
        simpson(0, k) + 3.0 * dy / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3])
    }
}

/// Residual of the column-integrated mass flux:
/// `‖∫₀ʰ [div(ξu) + ∂z(ξw)] dz − h div(ξū)‖_{L²(T²)}`.
pub fn column_flux_residual(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<f64> {
    let flux = basis.div3(&u[0].mul2(xi), &u[1].mul2(xi));
    let vertical = basis.dz(&vertical_flux(basis, xi, u)?);
    let total = flux.add(&vertical);
    let column = vertical_average(basis, &total).scale(basis.h());
    let ubar = vertical_average_vec(basis, u);
    let mean_flux = basis
        .div2(&ubar[0].mul(xi), &ubar[1].mul(xi))
        .scale(basis.h());
    Ok(basis.norm2(&column.sub(&mean_flux)))
}

/// Residual of `∂zz w = −∂z div(ξu)/ξ` in `L²(Ω)`.
pub fn vertical_closure_residual(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<f64> {
    let w = reconstruct_w(basis, xi, u)?;
    let wzz = basis.dz(&basis.dz(&w));
    let flux = basis.div3(&u[0].mul2(xi), &u[1].mul2(xi));
    let rhs = basis.dz(&flux).div2(xi).scale(-1.0);
    Ok(basis.norm3(&wzz.sub(&rhs)))
}
