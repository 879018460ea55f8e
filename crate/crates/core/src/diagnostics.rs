//! Energy, BD entropy, dissipation integrals, and residuals of the
//! structural identities, evaluated on discrete states.

use indexmap::IndexMap;

use crate::continuity::{continuity_rhs, DensityBounds};
use crate::error::{check_density, Result};
use crate::hydrostatic::{
    column_flux_residual, reconstruct_dz_w, vertical_average_vec, vertical_closure_residual,
    ReducedState,
};
use crate::momentum::{
    log_hessian, momentum_rhs, quantum_force_direct, strain, velocity_gradient, Params,
};
use crate::spectral::{Basis, DiffOp, Field2, Field3, VectorField3};

pub const ENERGY_DISSIPATION_NAMES: [&str; 9] = [
    "eps_density",
    "drag_r0",
    "damping_r",
    "horizontal_viscosity",
    "vertical_viscosity",
    "hyperviscosity_mu",
    "eta_eps",
    "kappa_eps",
    "delta_eps",
];

pub const BD_DISSIPATION_NAMES: [&str; 11] = [
    "bd_vertical_strain",
    "bd_density_gradient",
    "bd_damping_r",
    "bd_vertical_viscosity",
    "bd_eta",
    "bd_hyperviscosity_mu",
    "bd_kappa",
    "bd_drag_r0",
    "bd_delta",
    "bd_antisym_strain",
    "bd_eps_drag",
];

pub const IDENTITY_NAMES: [&str; 6] = [
    "antisym_strain_flux",
    "quantum_divergence_form",
    "strain_norm_split",
    "vertical_closure",
    "column_flux_closure",
    "energy_rate",
];

pub const ENERGY_PART_NAMES: [&str; 5] = ["kinetic", "entropy", "cold", "quantum", "highorder"];

/// One row of the diagnostics stream.
///
/// `dissipation` holds the energy dissipation integrals followed by the
/// `bd_`-prefixed BD dissipation integrals; `identity_residuals` are
/// relative to the natural scale of each identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub bd_entropy: f64,
    pub min_xi: f64,
    pub max_xi: f64,
    pub bound_lower: f64,
    pub bound_upper: f64,
    pub dissipation: IndexMap<String, f64>,
    pub identity_residuals: IndexMap<String, f64>,
}

impl DiagnosticsRecord {
    pub fn energy_dissipation(&self) -> f64 {
        ENERGY_DISSIPATION_NAMES
            .iter()
            .filter_map(|n| self.dissipation.get(*n))
            .sum()
    }

    pub fn bd_dissipation(&self) -> f64 {
        BD_DISSIPATION_NAMES
            .iter()
            .filter_map(|n| self.dissipation.get(*n))
            .sum()
    }
}

fn sq3(f: &Field3) -> Field3 {
    f.mul(f)
}

fn sq_sum2(a: &Field2, b: &Field2) -> Field2 {
    a.mul(a).add(&b.mul(b))
}

/// `∫_Ω` of a field that does not depend on `z`.
fn column_integral(basis: &Basis, f: &Field2) -> f64 {
    basis.h() * basis.integrate2(f)
}

fn grad_sq(basis: &Basis, f: &Field2) -> Field2 {
    let [a, b] = basis.grad2(f);
    sq_sum2(&a, &b)
}

fn speed_sq(u: &VectorField3) -> Field3 {
    sq3(&u[0]).add(&sq3(&u[1]))
}

/// The five parts of `E`: kinetic `∫½ξ|u|²`, entropy `∫ξlnξ − ξ + 1`, cold
/// `(η/11)∫ξ⁻¹⁰`, quantum `κ∫|∇√ξ|²`, highorder `(δ/2)∫|∇Δ²ξ|²`.
pub fn energy_parts(basis: &Basis, state: &ReducedState, p: &Params) -> Result<IndexMap<String, f64>> {
    let xi = &state.xi;
    check_density(xi.min(), 0.0)?;
    let kinetic = 0.5 * basis.integrate3(&speed_sq(&state.u).mul2(xi));
    let entropy = column_integral(basis, &xi.map(|v| v * v.ln() - v + 1.0));
    let cold = if p.eta != 0.0 {
        p.eta / 11.0 * column_integral(basis, &xi.map(|v| v.powi(-10)))
    } else {
        0.0
    };
    let quantum = if p.kappa != 0.0 {
        p.kappa * column_integral(basis, &grad_sq(basis, &xi.map(f64::sqrt)))
    } else {
        0.0
    };
    let highorder = if p.delta != 0.0 {
        let l2 = basis.op2(xi, DiffOp::Bilaplace);
        0.5 * p.delta * column_integral(basis, &grad_sq(basis, &l2))
    } else {
        0.0
    };
    Ok(ENERGY_PART_NAMES
        .iter()
        .zip([kinetic, entropy, cold, quantum, highorder])
        .map(|(n, v)| (n.to_string(), v))
        .collect())
}

/// `E(ξ, u)`.
pub fn energy(basis: &Basis, state: &ReducedState, p: &Params) -> Result<f64> {
    Ok(energy_parts(basis, state, p)?.values().sum())
}

/// Dissipation integrals of the energy balance, in
/// [`ENERGY_DISSIPATION_NAMES`] order.
pub fn dissipation(basis: &Basis, state: &ReducedState, p: &Params) -> Result<IndexMap<String, f64>> {
    let xi = &state.xi;
    let u = &state.u;
    check_density(xi.min(), 0.0)?;
    let root = xi.map(f64::sqrt);
    let (d, _) = strain(basis, u);
    let uz = [basis.dz(&u[0]), basis.dz(&u[1])];
    let lap = [basis.op3(&u[0], DiffOp::Laplace), basis.op3(&u[1], DiffOp::Laplace)];
    let speed = speed_sq(u).map(f64::sqrt);
    let values = [
        4.0 * p.eps * column_integral(basis, &grad_sq(basis, &root)),
        p.r0 * basis.integrate3(&speed_sq(u)),
        p.r * basis.integrate3(&speed.mul(&speed).mul(&speed).mul2(xi)),
        2.0 * p.nu1 * basis.integrate3(&d.contract(&d).mul2(xi)),
        p.nu2 * basis.integrate3(&speed_sq(&uz).mul2(xi)),
        p.mu * basis.integrate3(&speed_sq(&lap)),
        if p.eta * p.eps != 0.0 {
            0.4 * p.eta * p.eps * column_integral(basis, &grad_sq(basis, &xi.map(|v| v.powi(-5))))
        } else {
            0.0
        },
        if p.kappa * p.eps != 0.0 {
            0.5 * p.kappa * p.eps * column_integral(basis, &hessian_sq(basis, xi).mul(xi))
        } else {
            0.0
        },
        if p.delta * p.eps != 0.0 {
            let l3 = basis.op2(xi, DiffOp::LaplaceX3);
            p.delta * p.eps * column_integral(basis, &l3.mul(&l3))
        } else {
            0.0
        },
    ];
    Ok(named(&ENERGY_DISSIPATION_NAMES, &values))
}

fn named(names: &[&str], values: &[f64]) -> IndexMap<String, f64> {
    names.iter().zip(values).map(|(n, v)| (n.to_string(), *v)).collect()
}

/// `|∇² ln ξ|²` pointwise.
fn hessian_sq(basis: &Basis, xi: &Field2) -> Field2 {
    let [h11, h12, h22] = log_hessian(basis, xi);
    h11.mul(&h11).add(&h12.mul(&h12).scale(2.0)).add(&h22.mul(&h22))
}

/// Dissipation integrals of the BD entropy inequality, in
/// [`BD_DISSIPATION_NAMES`] order.
pub fn bd_dissipation(basis: &Basis, state: &ReducedState, p: &Params) -> Result<IndexMap<String, f64>> {
    let xi = &state.xi;
    let u = &state.u;
    check_density(xi.min(), 0.0)?;
    let nu1 = p.nu1;
    let wz = reconstruct_dz_w(basis, xi, u)?;
    let (_, a) = strain(basis, u);
    let uz = [basis.dz(&u[0]), basis.dz(&u[1])];
    let lap = [basis.op3(&u[0], DiffOp::Laplace), basis.op3(&u[1], DiffOp::Laplace)];
    let speed = speed_sq(u).map(f64::sqrt);
    let values = [
        2.0 * nu1 * basis.integrate3(&sq3(&wz).mul2(xi)),
        8.0 * nu1 * column_integral(basis, &grad_sq(basis, &xi.map(f64::sqrt))),
        p.r * basis.integrate3(&speed.mul(&speed).mul(&speed).mul2(xi)),
        p.nu2 * basis.integrate3(&speed_sq(&uz).mul2(xi)),
        if p.eta * nu1 != 0.0 {
            1.6 * p.eta * nu1 * column_integral(basis, &grad_sq(basis, &xi.map(|v| v.powi(-5))))
        } else {
            0.0
        },
        p.mu * basis.integrate3(&speed_sq(&lap)),
        if p.kappa * nu1 != 0.0 {
            p.kappa * nu1 * column_integral(basis, &hessian_sq(basis, xi).mul(xi))
        } else {
            0.0
        },
        p.r0 * basis.integrate3(&speed_sq(u)),
        if p.delta * nu1 != 0.0 {
            let l3 = basis.op2(xi, DiffOp::LaplaceX3);
            2.0 * p.delta * nu1 * column_integral(basis, &l3.mul(&l3))
        } else {
            0.0
        },
        2.0 * nu1 * basis.integrate3(&a.contract(&a).mul2(xi)),
        if nu1 * p.r0 * p.eps != 0.0 {
            let g = grad_sq(basis, xi);
            let q = Field2 {
                data: g.data.iter().zip(&xi.data).map(|(g, x)| g / (x * x)).collect(),
            };
            nu1 * p.r0 * p.eps * column_integral(basis, &q)
        } else {
            0.0
        },
    ];
    Ok(named(&BD_DISSIPATION_NAMES, &values))
}

/// `∫[½ξ|u + 2ν̄₁∇lnξ|² − 2ν̄₁r₀ lnξ]`, with `∇lnξ` formed spectrally.
pub fn bd_entropy(basis: &Basis, state: &ReducedState, p: &Params) -> Result<f64> {
    let xi = &state.xi;
    check_density(xi.min(), 0.0)?;
    let ln = xi.map(f64::ln);
    let [g1, g2] = basis.grad2(&ln);
    let nz = basis.nz();
    let eff = [
        state.u[0].add(&Field3::broadcast(&g1.scale(2.0 * p.nu1), nz)),
        state.u[1].add(&Field3::broadcast(&g2.scale(2.0 * p.nu1), nz)),
    ];
    let kinetic = 0.5 * basis.integrate3(&speed_sq(&eff).mul2(xi));
    Ok(kinetic - 2.0 * p.nu1 * p.r0 * column_integral(basis, &ln))
}

fn ratio(value: f64, scale: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else if scale > 0.0 {
        value / scale
    } else {
        value
    }
}

fn h1_norm2(basis: &Basis, f: &Field2) -> f64 {
    (basis.h() * (basis.inner2(f, f) + basis.integrate2(&grad_sq(basis, f)))).sqrt()
}

fn h1_norm3(basis: &Basis, f: &Field3) -> f64 {
    let [a, b] = basis.grad3(f);
    (basis.inner3(f, f) + basis.inner3(&a, &a) + basis.inner3(&b, &b)).sqrt()
}

/// `|∫P div(ξA(u))·∇lnξ|` relative to `‖ξ‖_{H¹}‖u‖_{H¹}`.
pub fn antisym_strain_flux(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<f64> {
    check_density(xi.min(), 0.0)?;
    let (_, a) = strain(basis, u);
    let [g1, g2] = basis.grad2(&xi.map(f64::ln));
    let grad_ln = [g1, g2];
    let mut total = 0.0;
    for j in 0..2 {
        let mut c = basis.div3_spec(&a.c[0][j].mul2(xi), &a.c[1][j].mul2(xi));
        basis.dealias3(&mut c);
        total += basis.integrate3(&basis.inverse3(&c).mul2(&grad_ln[j]));
    }
    let scale = h1_norm2(basis, xi) * (h1_norm3(basis, &u[0]).powi(2) + h1_norm3(basis, &u[1]).powi(2)).sqrt();
    Ok(ratio(total.abs(), scale))
}

/// `‖2ξ∇(Δ√ξ/√ξ) − div(ξ∇²lnξ)‖` relative to `‖div(ξ∇²lnξ)‖`.
pub fn quantum_identity_residual(basis: &Basis, xi: &Field2) -> Result<f64> {
    let direct = quantum_force_direct(basis, xi, 2.0)?;
    let [h11, h12, h22] = log_hessian(basis, xi);
    let div = [
        basis.div2(&h11.mul(xi), &h12.mul(xi)),
        basis.div2(&h12.mul(xi), &h22.mul(xi)),
    ];
    let diff = basis.norm2(&direct[0].sub(&div[0])).hypot(basis.norm2(&direct[1].sub(&div[1])));
    let scale = basis.norm2(&div[0]).hypot(basis.norm2(&div[1]));
    Ok(ratio(diff, scale))
}

/// `|‖√ξ∇u‖² − ‖√ξD‖² − ‖√ξA‖²|` relative to `‖√ξ∇u‖²`.
pub fn strain_norm_split(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<f64> {
    check_density(xi.min(), 0.0)?;
    let g = velocity_gradient(basis, u);
    let (d, a) = strain(basis, u);
    let full = basis.integrate3(&g.contract(&g).mul2(xi));
    let sym = basis.integrate3(&d.contract(&d).mul2(xi));
    let anti = basis.integrate3(&a.contract(&a).mul2(xi));
    Ok(ratio((full - sym - anti).abs(), full))
}

/// Semi-discrete `dE/dt` from the right-hand sides of both equations.
pub fn energy_rate(basis: &Basis, state: &ReducedState, p: &Params) -> Result<f64> {
    let xi = &state.xi;
    let u = &state.u;
    let force = momentum_rhs(basis, xi, u, p)?.total();
    let ubar = vertical_average_vec(basis, u);
    let f_xi = continuity_rhs(basis, xi, &ubar, p.eps);
    let work = basis.inner3(&u[0], &force[0]) + basis.inner3(&u[1], &force[1]);
    let kinetic = 0.5 * basis.integrate3(&speed_sq(u).mul2(&f_xi));
    let mut potential = xi.map(f64::ln);
    if p.eta != 0.0 {
        potential.axpy(1.0, &xi.map(|v| -10.0 / 11.0 * p.eta * v.powi(-11)));
    }
    if p.kappa != 0.0 {
        let root = xi.map(f64::sqrt);
        let lap = basis.op2(&root, DiffOp::LaplaceX);
        for ((q, l), r) in potential.data.iter_mut().zip(&lap.data).zip(&root.data) {
            *q -= p.kappa * l / r;
        }
    }
    if p.delta != 0.0 {
        potential.axpy(-p.delta, &basis.op2(xi, DiffOp::LaplaceX5));
    }
    Ok(work - kinetic + column_integral(basis, &potential.mul(&f_xi)))
}

/// Residuals of the structural identities, in [`IDENTITY_NAMES`] order.
pub fn identity_residuals(basis: &Basis, state: &ReducedState, p: &Params) -> Result<IndexMap<String, f64>> {
    let xi = &state.xi;
    let u = &state.u;
    check_density(xi.min(), 0.0)?;
    let flux_scale = {
        let f = basis.div3(&u[0].mul2(xi), &u[1].mul2(xi));
        basis.norm3(&f)
    };
    let closure_scale = {
        let f = basis.div3(&u[0].mul2(xi), &u[1].mul2(xi));
        basis.norm3(&basis.dz(&f).div2(xi))
    };
    let rate = energy_rate(basis, state, p)?;
    let diss: f64 = dissipation(basis, state, p)?.values().sum();
    let values = [
        antisym_strain_flux(basis, xi, u)?,
        quantum_identity_residual(basis, xi)?,
        strain_norm_split(basis, xi, u)?,
        ratio(vertical_closure_residual(basis, xi, u)?, closure_scale),
        ratio(column_flux_residual(basis, xi, u)?, flux_scale * basis.h()),
        ratio((rate + diss).abs(), diss.max(rate.abs())),
    ];
    Ok(named(&IDENTITY_NAMES, &values))
}

/// Evaluates every diagnostic of a state.
pub fn record(basis: &Basis, state: &ReducedState, p: &Params, bounds: &DensityBounds) -> Result<DiagnosticsRecord> {
    let mut diss = dissipation(basis, state, p)?;
    diss.extend(bd_dissipation(basis, state, p)?);
    Ok(DiagnosticsRecord {
        t: state.t,
        mass: basis.h() * basis.integrate2(&state.xi),
        energy: energy(basis, state, p)?,
        bd_entropy: bd_entropy(basis, state, p)?,
        min_xi: state.min_xi(),
        max_xi: state.max_xi(),
        bound_lower: bounds.lower,
        bound_upper: bounds.upper,
        dissipation: diss,
        identity_residuals: identity_residuals(basis, state, p)?,
    })
}

/// Outcome of [`check_inequalities`]. Violations are
/// `lhs − rhs` maximised over the trajectory, so a negative value is the
/// smallest margin.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub energy_max_violation: f64,
    pub bd_max_violation: f64,
    pub energy_violations: usize,
    pub bd_violations: usize,
    /// Largest `E(t) + ∫Σdissipation − E₀` over the trajectory.
    pub energy_excess: f64,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.energy_violations == 0 && self.bd_violations == 0
    }
}

/// Slack settings for [`check_inequalities`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalitySlack {
    /// Relative slack on `E₀`.
    pub energy_rel: f64,
    /// Additive constant on the right of the BD inequality.
    pub bd_const: f64,
}

impl Default for InequalitySlack {
    fn default() -> Self {
        InequalitySlack {
            energy_rel: 1e-6,
            bd_const: 0.0,
        }
    }
}

/// Checks `E(t) + ∫₀ᵗ ΣD ≤ E₀(1 + s)` and
/// `BD(t) + ∫₀ᵗ ΣD_BD ≤ BD₀ + E₀ + C` along a recorded trajectory. Time
/// integrals use the right-endpoint rule on the records, which matches the
/// backward-Euler balance when every step is recorded.
pub fn check_inequalities(
    records: &[DiagnosticsRecord],
    e0: f64,
    bd0: f64,
    slack: InequalitySlack,
) -> InequalityReport {
    let mut report = InequalityReport {
        energy_max_violation: f64::NEG_INFINITY,
        bd_max_violation: f64::NEG_INFINITY,
        energy_violations: 0,
        bd_violations: 0,
        energy_excess: f64::NEG_INFINITY,
    };
    let (mut int_e, mut int_bd) = (0.0, 0.0);
    let mut prev_t = records.first().map(|r| r.t);
    for r in records {
        if let Some(t0) = prev_t {
            let dt = r.t - t0;
            int_e += dt * r.energy_dissipation();
            int_bd += dt * r.bd_dissipation();
        }
        prev_t = Some(r.t);
        let lhs = r.energy + int_e;
        let ve = lhs - e0 * (1.0 + slack.energy_rel);
        let vb = r.bd_entropy + int_bd - (bd0 + e0 + slack.bd_const);
        report.energy_excess = report.energy_excess.max(lhs - e0);
        report.energy_max_violation = report.energy_max_violation.max(ve);
        report.bd_max_violation = report.bd_max_violation.max(vb);
        report.energy_violations += usize::from(!(ve <= 0.0));
        report.bd_violations += usize::from(!(vb <= 0.0));
    }
    report
}

/// Per-step balance residual `E(tₙ₊₁) − E(tₙ) + (tₙ₊₁ − tₙ) ΣD(tₙ₊₁)` for
/// consecutive records.
pub fn balance_residuals(records: &[DiagnosticsRecord]) -> Vec<f64> {
    records
        .windows(2)
        .map(|w| w[1].energy - w[0].energy + (w[1].t - w[0].t) * w[1].energy_dissipation())
        .collect()
}

#[cfg(test)]
mod tests;
