//! The regularised mass equation `∂t ξ + div(ξū) = εΔξ` on the torus and
//! its comparison-principle envelope.

use crate::error::{check_density, Result, SolverError};
use crate::hydrostatic::vertical_average_vec;
use crate::spectral::{Basis, Field2, Spec2, VectorField3};

/// Exponential envelope `min ξ₀ e^{−A} ≤ ξ ≤ max ξ₀ e^{A}` with
/// `A = ∫ ‖div ū‖∞ dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityBounds {
    pub lower: f64,
    pub upper: f64,
    pub accumulated_divnorm: f64,
    pub initial_min: f64,
    pub initial_max: f64,
}

impl DensityBounds {
    pub fn new(xi0: &Field2) -> Self {
        let (lo, hi) = (xi0.min(), xi0.max());
        DensityBounds {
            lower: lo,
            upper: hi,
            accumulated_divnorm: 0.0,
            initial_min: lo,
            initial_max: hi,
        }
    }

    /// True when `ξ` lies inside the envelope up to `slack`.
    pub fn contains(&self, xi: &Field2, slack: f64) -> bool {
        xi.min() >= self.lower - slack && xi.max() <= self.upper + slack
    }
}

/// Advective step limit `0.5 Δx / speed`.
pub fn cfl_limit(basis: &Basis, speed: f64) -> f64 {
    if speed > 0.0 {
        0.5 * basis.spec().min_spacing() / speed
    } else {
        f64::INFINITY
    }
}

fn max_speed2(ubar: &[Field2; 2]) -> f64 {
    ubar[0]
        .data
        .iter()
        .zip(&ubar[1].data)
        .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)))
}

/// Dealiased coefficients of `div(ξū)`.
pub(crate) fn mass_flux_divergence(basis: &Basis, xi: &Field2, ubar: &[Field2; 2]) -> Spec2 {
    let mut c = basis.div2_spec(&xi.mul(&ubar[0]), &xi.mul(&ubar[1]));
    basis.dealias2(&mut c);
    c
}

/// `εΔξ − P div(ξū)`.
pub fn continuity_rhs(basis: &Basis, xi: &Field2, ubar: &[Field2; 2], eps: f64) -> Field2 {
    let c = basis.forward2(xi);
    let k2 = basis.kx_squared();
    let mut rate = mass_flux_divergence(basis, xi, ubar).scale(-1.0);
    for (r, (x, k)) in rate.data.iter_mut().zip(c.data.iter().zip(k2)) {
        *r -= x * (eps * k);
    }
    basis.inverse2(&rate)
}

/// Backward-Euler diffusion with the flux `flux_density · ū` taken as
/// given: `(1 + dt ε|k|²) ξ̂ = ξ̂_old + dt (−P div(flux_density ū) + S)`.
pub(crate) fn implicit_update(
    basis: &Basis,
    xi_old: &Field2,
    flux_density: &Field2,
    ubar: &[Field2; 2],
    eps: f64,
    dt: f64,
    source: Option<&Field2>,
) -> Field2 {
    let mut c = basis.forward2(xi_old);
    let div = mass_flux_divergence(basis, flux_density, ubar);
    c.axpy(-dt, &div);
    if let Some(s) = source {
        c.axpy(dt, &basis.forward2(s));
    }
    for (v, k) in c.data.iter_mut().zip(basis.kx_squared()) {
        *v /= 1.0 + dt * eps * k;
    }
    basis.inverse2(&c)
}

/// One IMEX step of the mass equation: implicit diffusion, explicit
/// advection by the column average of `u`.
pub fn continuity_step(
    basis: &Basis,
    xi: &Field2,
    u: &VectorField3,
    eps: f64,
    dt: f64,
    floor: f64,
) -> Result<Field2> {
    if !(dt > 0.0) {
        return Err(SolverError::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    check_density(xi.min(), 0.0)?;
    let ubar = vertical_average_vec(basis, u);
    let limit = cfl_limit(basis, max_speed2(&ubar));
    if dt > limit {
        return Err(SolverError::CflViolation { dt, limit });
    }
    let next = implicit_update(basis, xi, xi, &ubar, eps, dt, None);
    check_density(next.min(), floor)?;
    Ok(next)
}

/// Accumulates `dt · max |div ū|` and refreshes the envelope.
pub fn update_bounds(
    basis: &Basis,
    bounds: &DensityBounds,
    ubar: &[Field2; 2],
    dt: f64,
) -> DensityBounds {
    let divnorm = basis.div2(&ubar[0], &ubar[1]).max_abs();
    let acc = bounds.accumulated_divnorm + dt * divnorm;
    DensityBounds {
        lower: bounds.initial_min * (-acc).exp(),
        upper: bounds.initial_max * acc.exp(),
        accumulated_divnorm: acc,
        ..*bounds
    }
}
