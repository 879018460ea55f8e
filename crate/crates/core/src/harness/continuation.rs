use indexmap::IndexMap;
use rayon::prelude::*;

use crate::diagnostics::{dissipation, energy_parts};
use crate::hydrostatic::ReducedState;
use crate::momentum::Params;
use crate::spectral::Basis;

use super::run::{run_observed, RunOptions};
use super::HarnessError;

/// Parameter group sent to zero by a continuation study, in the order the
/// limits are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// `ε = μ → 0`.
    EpsMu,
    /// `η → 0`.
    Eta,
    /// `κ = δ → 0` together with `r₀ → 0`.
    KappaDeltaR0,
}

impl Stage {
    pub const NAMES: [&'static str; 3] = ["eps_mu", "eta", "kappa_delta_r0"];
    pub const ORDER: [Stage; 3] = [Stage::EpsMu, Stage::Eta, Stage::KappaDeltaR0];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Self::NAMES.iter().position(|n| *n == name).map(|i| Self::ORDER[i])
    }

    /// `base` with this stage's parameters multiplied by `scale`. Tied
    /// parameters take the value of the first of the pair.
    pub fn scaled(self, base: &Params, scale: f64) -> Params {
        let mut p = *base;
        match self {
            Stage::EpsMu => {
                p.eps = base.eps * scale;
                p.mu = base.eps * scale;
            }
            Stage::Eta => p.eta = base.eta * scale,
            Stage::KappaDeltaR0 => {
                p.kappa = base.kappa * scale;
                p.delta = base.kappa * scale;
                p.r0 = base.r0 * scale;
            }
        }
        p
    }
}

/// Time-integrated vanishing quantities recorded per rung.
pub const MONITOR_NAMES: [&str; 6] = [
    "eta_int_xi_m10",
    "mu_int_lap_u",
    "eps_int_grad_sqrt_xi",
    "r0_int_u2",
    "kappa_int_grad_sqrt_xi",
    "delta_int_grad_bilap_xi",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationSchedule {
    pub stage: Stage,
    /// Ratio between successive rungs.
    pub factor: f64,
    pub rungs: usize,
    pub base_params: Params,
}

impl ContinuationSchedule {
    pub fn new(stage: Stage, base_params: Params) -> Self {
        ContinuationSchedule {
            stage,
            factor: 2.0,
            rungs: 4,
            base_params,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.rungs < 3 {
            return Err(HarnessError::InvalidSchedule(format!("need at least 3 rungs, got {}", self.rungs)));
        }
        if !(self.factor > 1.0 && self.factor.is_finite()) {
            return Err(HarnessError::InvalidSchedule(format!("factor must exceed 1, got {}", self.factor)));
        }
        self.base_params
            .validate()
            .map_err(|e| HarnessError::InvalidSchedule(format!("params.{e}")))
    }

    /// Parameters of rung `p`, scaled by `factor^{-p}`.
    pub fn rung_params(&self, p: usize) -> Params {
        self.stage.scaled(&self.base_params, self.factor.powi(-(p as i32)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RungResult {
    pub rung: usize,
    pub scale: f64,
    pub params: Params,
    /// `‖ξ_p − ξ_{p−1}‖_{L²}` at the horizon; NaN for the first rung or
    /// next to a failed rung.
    pub diff_xi: f64,
    /// `‖(√ξ u)_p − (√ξ u)_{p−1}‖_{L²}` at the horizon.
    pub diff_sqrt_xi_u: f64,
    pub monitors: IndexMap<String, f64>,
    pub error: Option<String>,
    pub final_state: Option<ReducedState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationTable {
    pub stage: Stage,
    pub rows: Vec<RungResult>,
}

impl ContinuationTable {
    pub fn columns() -> Vec<String> {
        let mut c: Vec<String> = ["rung", "scale", "diff_xi", "diff_sqrt_xi_u"].map(String::from).to_vec();
        c.extend(MONITOR_NAMES.iter().map(|s| s.to_string()));
        c.push("failed".into());
        c
    }

    pub fn numeric_rows(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![r.rung as f64, r.scale, r.diff_xi, r.diff_sqrt_xi_u];
                v.extend(MONITOR_NAMES.iter().map(|n| r.monitors.get(*n).copied().unwrap_or(f64::NAN)));
                v.push(if r.error.is_some() { 1.0 } else { 0.0 });
                v
            })
            .collect()
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = Self::columns().iter().position(|c| c == name).expect("known column");
        self.numeric_rows().into_iter().map(|r| r[i]).collect()
    }
}

fn monitors_at(basis: &Basis, state: &ReducedState, p: &Params) -> [f64; 6] {
    let parts = energy_parts(basis, state, p).expect("density checked by the stepper");
    let diss = dissipation(basis, state, p).expect("density checked by the stepper");
    [
        11.0 * parts["cold"],
        diss["hyperviscosity_mu"],
        0.25 * diss["eps_density"],
        diss["drag_r0"],
        parts["quantum"],
        2.0 * parts["highorder"],
    ]
}

fn run_rung(
    basis: &Basis,
    schedule: &ContinuationSchedule,
    initial: &ReducedState,
    opts: &RunOptions,
    rung: usize,
) -> RungResult {
    let params = schedule.rung_params(rung);
    let mut totals = [0.0; 6];
    let mut first = true;
    let mut observe = |s: &ReducedState| {
        // right-endpoint rule: the initial state carries no weight
        if first {
            first = false;
            return;
        }
        for (t, m) in totals.iter_mut().zip(monitors_at(basis, s, &params)) {
            *t += opts.dt * m;
        }
    };
    let quiet = RunOptions {
        record_stride: usize::MAX,
        ..*opts
    };
    let result = run_observed(basis, &params, initial, &quiet, &mut observe);
    let (error, final_state) = match result {
        Ok(out) => (None, Some(out.final_state)),
        Err(f) => (Some(f.to_string()), None),
    };
    RungResult {
        rung,
        scale: schedule.factor.powi(-(rung as i32)),
        params,
        diff_xi: f64::NAN,
        diff_sqrt_xi_u: f64::NAN,
        monitors: MONITOR_NAMES.iter().map(|n| n.to_string()).zip(totals).collect(),
        error,
        final_state,
    }
}

/// Runs every rung of `schedule` from `initial` to `opts.t_end` and
/// tabulates successive-rung differences and time-integrated monitors.
/// Rungs run concurrently; failures are recorded and the study goes on.
pub fn continuation_study(
    basis: &Basis,
    schedule: &ContinuationSchedule,
    initial: &ReducedState,
    opts: &RunOptions,
) -> Result<ContinuationTable, HarnessError> {
    schedule.validate()?;
    opts.steps()?;
    let mut rows: Vec<RungResult> = (0..schedule.rungs)
        .into_par_iter()
        .map(|p| run_rung(basis, schedule, initial, opts, p))
        .collect();
    let sqrt_h = basis.h().sqrt();
    for p in 1..rows.len() {
        let (prev, cur) = rows.split_at_mut(p);
        let (Some(a), Some(b)) = (&prev[p - 1].final_state, &cur[0].final_state) else {
            continue;
        };
        cur[0].diff_xi = sqrt_h * basis.norm2(&b.xi.sub(&a.xi));
        let (ra, rb) = (a.xi.map(f64::sqrt), b.xi.map(f64::sqrt));
        let d: f64 = (0..2)
            .map(|i| basis.norm3(&b.u[i].mul2(&rb).sub(&a.u[i].mul2(&ra))).powi(2))
            .sum();
        cur[0].diff_sqrt_xi_u = d.sqrt();
    }
    Ok(ContinuationTable {
        stage: schedule.stage,
        rows,
    })
}
