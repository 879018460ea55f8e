use std::f64::consts::PI;

use crate::continuity::continuity_rhs;
use crate::hydrostatic::{vertical_average_vec, ReducedState};
use crate::momentum::{check_step, galerkin_step_with, momentum_rhs, Params, Sources, StepOptions};
use crate::spectral::{make_basis, Basis, DomainSpec, Field2, VectorField3};

use super::HarnessError;

/// When the injected sources are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceTiming {
    /// `S = ∂t X* − F(X*)` at the new time level; the discrete solution
    /// then carries the first-order time error of the scheme.
    Continuous,
    /// `S = (X*(t + dt) − X*(t))/dt − F(X*(t + dt))`, which makes the target
    /// an exact solution of the time-discrete scheme, so that only the
    /// spatial error remains.
    StepConsistent,
}

/// Target `ξ* = a + b e^{−t} cos x1`, `u* = (c e^{−t} sin x1 cos(πz/h), 0)`
/// and the refinement ladders.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t_end: f64,
    /// Steps of the temporal study, run on the `n_fine` grid.
    pub dt_list: Vec<f64>,
    /// Step of the spatial study.
    pub dt_spatial: f64,
    pub n_coarse: usize,
    pub n_fine: usize,
    /// Grid on which sources are evaluated before restriction.
    pub n_ref: usize,
    pub step: StepOptions,
}

impl Default for MmsConfig {
    fn default() -> Self {
        MmsConfig {
            a: 1.0,
            b: 0.5,
            c: 0.1,
            t_end: 0.08,
            dt_list: vec![0.008, 0.004, 0.002],
            dt_spatial: 0.008,
            n_coarse: 16,
            n_fine: 32,
            n_ref: 64,
            step: StepOptions {
                picard_tol: 1e-13,
                cg_tol: 1e-14,
                ..StepOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmsReport {
    /// `(dt, L² error at t_end)` on the fine grid.
    pub temporal: Vec<(f64, f64)>,
    /// `(n, L² error at t_end)` for the coarse and fine grids.
    pub spatial: Vec<(usize, f64)>,
}

impl MmsReport {
    /// Error ratios of successive halvings.
    pub fn temporal_ratios(&self) -> Vec<f64> {
        self.temporal.windows(2).map(|w| w[0].1 / w[1].1).collect()
    }

    pub fn spatial_ratio(&self) -> f64 {
        self.spatial[0].1 / self.spatial[1].1
    }
}

struct Target<'a> {
    cfg: &'a MmsConfig,
    h: f64,
}

impl Target<'_> {
    fn state(&self, basis: &Basis, t: f64) -> ReducedState {
        let (a, b, c, k) = (self.cfg.a, self.cfg.b, self.cfg.c, PI / self.h);
        let e = (-t).exp();
        ReducedState {
            t,
            xi: basis.sample2(|x, _| a + b * e * x.cos()),
            u: [
                basis.sample3(|x, _, z| c * e * x.sin() * (k * z).cos()),
                basis.sample3(|_, _, _| 0.0),
            ],
        }
    }

    /// `(∂t ξ*, ∂t(ξ* u*))` at time `t`.
    fn rates(&self, basis: &Basis, t: f64) -> (Field2, VectorField3) {
        let (a, b, c, k) = (self.cfg.a, self.cfg.b, self.cfg.c, PI / self.h);
        let e = (-t).exp();
        let dxi = basis.sample2(|x, _| -b * e * x.cos());
        // ξu = c e^{−t}(a + b e^{−t} cos x1) sin x1 cos(kz)
        let dm = basis.sample3(|x, _, z| {
            -c * e * (a + 2.0 * b * e * x.cos()) * x.sin() * (k * z).cos()
        });
        (dxi, [dm, basis.sample3(|_, _, _| 0.0)])
    }
}

/// `(F_ξ, F_m)` of the target on the reference grid.
fn rhs(basis: &Basis, s: &ReducedState, p: &Params) -> Result<(Field2, VectorField3), HarnessError> {
    let ubar = vertical_average_vec(basis, &s.u);
    let f_xi = continuity_rhs(basis, &s.xi, &ubar, p.eps);
    let f_m = momentum_rhs(basis, &s.xi, &s.u, p)?.total();
    Ok((f_xi, f_m))
}

fn restrict(coarse: &Basis, fine: &Basis, xi: &Field2, m: &VectorField3) -> Sources {
    let xi = coarse.inverse2(&coarse.resample2_from(fine, &fine.forward2(xi)));
    let m = [0, 1].map(|i| coarse.inverse3(&coarse.resample3_from(fine, &fine.forward3(&m[i]))));
    Sources { xi, m }
}

fn sources(
    target: &Target,
    solver: &Basis,
    reference: &Basis,
    p: &Params,
    t: f64,
    dt: f64,
    timing: SourceTiming,
) -> Result<Sources, HarnessError> {
    let new = target.state(reference, t + dt);
    let (f_xi, f_m) = rhs(reference, &new, p)?;
    let (mut s_xi, mut s_m) = match timing {
        SourceTiming::Continuous => target.rates(reference, t + dt),
        SourceTiming::StepConsistent => {
            let old = target.state(reference, t);
            let dxi = new.xi.sub(&old.xi).scale(1.0 / dt);
            let dm = [0, 1].map(|i| {
                let a = reference.project3(&new.u[i].mul2(&new.xi));
                let b = reference.project3(&old.u[i].mul2(&old.xi));
                a.sub(&b).scale(1.0 / dt)
            });
            (dxi, dm)
        }
    };
    s_xi.axpy(-1.0, &f_xi);
    for i in 0..2 {
        s_m[i].axpy(-1.0, &f_m[i]);
    }
    Ok(restrict(solver, reference, &s_xi, &s_m))
}

fn error(basis: &Basis, a: &ReducedState, b: &ReducedState) -> f64 {
    let e_xi = basis.h() * basis.inner2(&a.xi.sub(&b.xi), &a.xi.sub(&b.xi));
    let e_u: f64 = (0..2).map(|i| basis.norm3(&a.u[i].sub(&b.u[i])).powi(2)).sum();
    (e_xi + e_u).sqrt()
}

fn run_one(
    spec: &DomainSpec,
    n: usize,
    p: &Params,
    cfg: &MmsConfig,
    dt: f64,
    timing: SourceTiming,
) -> Result<f64, HarnessError> {
    let solver = make_basis(DomainSpec::new(n, n, spec.nz, spec.h).map_err(crate::SolverError::from)?)
        .map_err(crate::SolverError::from)?;
    let reference = make_basis(
        DomainSpec::new(cfg.n_ref.max(n), cfg.n_ref.max(n), spec.nz, spec.h).map_err(crate::SolverError::from)?,
    )
    .map_err(crate::SolverError::from)?;
    let target = Target { cfg, h: spec.h };
    let steps = (cfg.t_end / dt).round() as usize;
    if steps == 0 || ((steps as f64) * dt - cfg.t_end).abs() > 1e-9 * cfg.t_end {
        return Err(HarnessError::InvalidSchedule(format!(
            "t_end = {} is not a positive multiple of dt = {dt}",
            cfg.t_end
        )));
    }
    let mut state = target.state(&solver, 0.0);
    check_step(&solver, &state, p, dt)?;
    for k in 0..steps {
        let t = k as f64 * dt;
        let s = sources(&target, &solver, &reference, p, t, dt, timing)?;
        state = galerkin_step_with(&solver, &state, p, dt, &cfg.step, Some(&s))?.0;
    }
    Ok(error(&solver, &state, &target.state(&solver, steps as f64 * dt)))
}

/// Runs the temporal ladder with [`SourceTiming::Continuous`] on the fine
/// grid and the spatial pair with [`SourceTiming::StepConsistent`].
/// `spec` supplies `nz` and `h`.
pub fn manufactured_solution_test(
    spec: &DomainSpec,
    params: &Params,
    cfg: &MmsConfig,
) -> Result<MmsReport, HarnessError> {
    if !(cfg.a > cfg.b && cfg.b >= 0.0 && cfg.c >= 0.0) {
        return Err(HarnessError::InvalidSchedule("need a > b ≥ 0 and c ≥ 0".into()));
    }
    let temporal = cfg
        .dt_list
        .iter()
        .map(|&dt| run_one(spec, cfg.n_fine, params, cfg, dt, SourceTiming::Continuous).map(|e| (dt, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let spatial = [cfg.n_coarse, cfg.n_fine]
        .iter()
        .map(|&n| run_one(spec, n, params, cfg, cfg.dt_spatial, SourceTiming::StepConsistent).map(|e| (n, e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MmsReport { temporal, spatial })
}
