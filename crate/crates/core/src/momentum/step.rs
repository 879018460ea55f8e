use crate::continuity::{cfl_limit, implicit_update};
use crate::error::{check_density, Result, SolverError};
use crate::hydrostatic::{vertical_average_vec, ReducedState};
use crate::spectral::{Basis, Field2, Spec3, VectorField3};

use super::forces::force_total_spec;
use super::mass::{solve_coupled, Coupling, DEFAULT_CG_MAX};
use super::params::Params;

/// Iteration controls of one time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub picard_tol: f64,
    pub picard_max: usize,
    pub cg_tol: f64,
    pub cg_max: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions {
            picard_tol: 1e-10,
            picard_max: 50,
            cg_tol: 1e-12,
            cg_max: DEFAULT_CG_MAX,
        }
    }
}

/// Counters of the last step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepReport {
    pub picard_iterations: usize,
    pub cg_iterations: usize,
}

/// External forcing added to the mass and momentum equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sources {
    pub xi: Field2,
    pub m: VectorField3,
}

/// Diagonal of the implicitly treated operator
/// `L = −μΔ² + ν̄₂ ξ̄ ∂zz + ν̄₁ ξ̄ Δx`, returned as `−dt·L ≥ 0`.
pub(crate) fn implicit_shift(basis: &Basis, p: &Params, mean_xi: f64, dt: f64) -> Vec<f64> {
    let n2 = basis.n2();
    let kx2 = basis.kx_squared();
    let kz = basis.kz_values();
    let mut out = Vec::with_capacity(basis.n3());
    for (m, &k) in kz.iter().enumerate() {
        // ∂z∂z annihilates the top cosine on the grid
        let kz2 = if m + 1 == kz.len() { 0.0 } else { k * k };
        for &kx in &kx2[..n2] {
            let lam = kx + k * k;
            out.push(dt * (p.mu * lam * lam + p.nu2 * mean_xi * kz2 + p.nu1 * mean_xi * kx));
        }
    }
    out
}

/// Linearised density feedback on the column-mean velocity.
///
/// Through the implicit flux, a column-mean perturbation `ū` changes the
/// density by `−dt ξ̄ div ū / (1 + dt ε|k|²)`, which the pressure-like terms
/// return as `−dt² ξ̄ |k|² c(k) k̂ k̂·ū` with
/// `c = 1 + 10ηξ̄⁻¹¹ + (κ/2)|k|² + δξ̄|k|¹⁰`. Treating this block implicitly
/// and lagging it on the right-hand side leaves the fixed point unchanged
/// and keeps the Picard map contractive for stiff `δ`.
pub(crate) fn acoustic_coupling(basis: &Basis, p: &Params, mean_xi: f64, dt: f64) -> Vec<Coupling> {
    let spec = basis.spec();
    let (k1, k2, _) = basis.wavenumbers();
    let kx2 = basis.kx_squared();
    let mut out = Vec::new();
    for (i2, &b) in k2.iter().enumerate() {
        for (i1, &a) in k1.iter().enumerate() {
            let q = i2 * spec.nx1 + i1;
            let k2 = kx2[q];
            if k2 == 0.0 || !basis.in_band2(q) {
                continue;
            }
            let c = 1.0
                + 10.0 * p.eta * mean_xi.powi(-11)
                + 0.5 * p.kappa * k2
                + p.delta * mean_xi * k2.powi(5);
            let s = dt * dt * mean_xi * c / (1.0 + dt * p.eps * k2);
            out.push((q, [s * a * a, s * a * b, s * b * b]));
        }
    }
    out
}

/// Largest step admitted by the sixth-order density coupling,
/// `dt² δ k⁽¹²⁾ max ξ ≤ 1` with `k` the largest retained wavenumber.
pub fn stiff_step_limit(basis: &Basis, p: &Params, max_xi: f64) -> f64 {
    let k = basis.spec().max_band_wavenumber();
    let a = p.delta * k.powi(12) * max_xi;
    if a > 0.0 {
        1.0 / a.sqrt()
    } else {
        f64::INFINITY
    }
}

/// Checks the explicit-term step restrictions for a state.
pub fn check_step(basis: &Basis, state: &ReducedState, p: &Params, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SolverError::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    let limit = cfl_limit(basis, state.max_speed());
    if dt > limit {
        return Err(SolverError::CflViolation { dt, limit });
    }
    let limit = stiff_step_limit(basis, p, state.max_xi());
    if dt > limit {
        return Err(SolverError::StiffStep { dt, limit });
    }
    Ok(())
}

fn norm_pair(basis: &Basis, a: &[Spec3; 2]) -> f64 {
    (basis.spectral_inner3(&a[0], &a[0]) + basis.spectral_inner3(&a[1], &a[1])).sqrt()
}

/// One backward-Euler step of the approximate system realised as a Picard
/// fixed point in `(ξ, u)`.
pub fn galerkin_step(
    basis: &Basis,
    state: &ReducedState,
    p: &Params,
    dt: f64,
    picard_tol: f64,
    picard_max: usize,
) -> Result<ReducedState> {
    let opts = StepOptions {
        picard_tol,
        picard_max,
        ..StepOptions::default()
    };
    galerkin_step_with(basis, state, p, dt, &opts, None).map(|(s, _)| s)
}

/// [`galerkin_step`] with explicit solver options and optional sources.
///
/// Iterate `k`: the density takes the implicit flux `ξ_k ū_k`,
/// `(1 + dt ε|k|²) ξ_{k+1} = ξⁿ − dt P div(ξ_k ū_k) + dt S_ξ`;
/// the velocity solves
/// `(M[ξ_{k+1}] − dt L) u_{k+1} = P(ξⁿuⁿ) + dt (F(ξ_{k+1}, u_k) − L u_k + S_m)`,
/// so a fixed point is the fully implicit step.
pub fn galerkin_step_with(
    basis: &Basis,
    state: &ReducedState,
    p: &Params,
    dt: f64,
    opts: &StepOptions,
    sources: Option<&Sources>,
) -> Result<(ReducedState, StepReport)> {
    check_density(state.min_xi(), p.density_floor)?;
    check_step(basis, state, p, dt)?;

    let project = |f: &crate::spectral::Field3| {
        let mut c = basis.forward3(f);
        basis.dealias3(&mut c);
        c
    };
    let m_old = [0, 1].map(|i| project(&state.u[i].mul2(&state.xi)));
    let s_m = sources.map(|s| [project(&s.m[0]), project(&s.m[1])]);
    let s_xi = sources.map(|s| &s.xi);

    let mut xi_k = state.xi.clone();
    let mut u_k = state.u.clone();
    let mut uh_k = [project(&u_k[0]), project(&u_k[1])];
    let mut report = StepReport::default();
    let mut first_update = None;

    for it in 1..=opts.picard_max {
        let ubar = vertical_average_vec(basis, &u_k);
        let xi_next = implicit_update(basis, &state.xi, &xi_k, &ubar, p.eps, dt, s_xi);
        if !xi_next.is_finite() {
            return Err(SolverError::PicardDiverged {
                iterations: it,
                residual: f64::NAN,
            });
        }
        check_density(xi_next.min(), p.density_floor)?;

        let mean = xi_next.mean();
        let shift = implicit_shift(basis, p, mean, dt);
        let force = force_total_spec(basis, &xi_next, &u_k, p)?;
        let coupling = acoustic_coupling(basis, p, mean, dt);
        let mut rhs = m_old.clone();
        for i in 0..2 {
            rhs[i].axpy(dt, &force[i]);
            for ((r, v), s) in rhs[i].data.iter_mut().zip(&uh_k[i].data).zip(&shift) {
                // + dt·(−L u_k) = + shift · u_k
                *r += v * s;
            }
            if let Some(s) = &s_m {
                rhs[i].axpy(dt, &s[i]);
            }
        }
        for &(q, [s11, s12, s22]) in &coupling {
            let (a, b) = (uh_k[0].data[q], uh_k[1].data[q]);
            rhs[0].data[q] += a * s11 + b * s12;
            rhs[1].data[q] += a * s12 + b * s22;
        }
        let (uh_next, iters) = solve_coupled(
            basis,
            &xi_next,
            &rhs,
            &shift,
            &coupling,
            Some(&uh_k),
            opts.cg_tol,
            opts.cg_max,
        )?;
        report.cg_iterations += iters;
        report.picard_iterations = it;

        let du = norm_pair(basis, &[uh_next[0].sub(&uh_k[0]), uh_next[1].sub(&uh_k[1])]);
        let nu = norm_pair(basis, &uh_k);
        let dxi = basis.norm2(&xi_next.sub(&xi_k));
        let nxi = basis.norm2(&xi_k);
        // one relative measure over (ξ, u): a velocity at roundoff level
        // would never settle under its own norm
        let scale = (nu + nxi).max(f64::MIN_POSITIVE);
        let update = (du + dxi) / scale;
        if !update.is_finite() {
            return Err(SolverError::PicardDiverged {
                iterations: it,
                residual: update,
            });
        }
        let converged = update <= opts.picard_tol;

        xi_k = xi_next;
        uh_k = uh_next;
        u_k = [basis.inverse3(&uh_k[0]), basis.inverse3(&uh_k[1])];

        if converged {
            let next = ReducedState {
                t: state.t + dt,
                xi: xi_k,
                u: u_k,
            };
            return Ok((next, report));
        }
        let reference = *first_update.get_or_insert(update);
        if it > 2 && update > 1e6 * reference {
            return Err(SolverError::PicardDiverged {
                iterations: it,
                residual: update,
            });
        }
        if it == opts.picard_max {
            return Err(SolverError::PicardDiverged {
                iterations: it,
                residual: update,
            });
        }
    }
    Err(SolverError::PicardDiverged {
        iterations: opts.picard_max,
        residual: f64::NAN,
    })
}
