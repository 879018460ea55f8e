use crate::continuity::{update_bounds, DensityBounds};
use crate::diagnostics::{record, DiagnosticsRecord};
use crate::error::{Result, SolverError};
use crate::hydrostatic::{vertical_average_vec, ReducedState};
use crate::momentum::{check_step, galerkin_step_with, Params, StepOptions};
use crate::spectral::Basis;

/// Time stepping and recording controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Records every `record_stride` steps, plus the initial and final state.
    pub record_stride: usize,
    pub step: StepOptions,
    /// Slack of the per-step density envelope check.
    pub envelope_slack: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            dt: 1e-3,
            t_end: 0.5,
            record_stride: 1,
            step: StepOptions::default(),
            envelope_slack: 1e-10,
        }
    }
}

impl RunOptions {
    /// Number of steps, requiring `t_end` to be a multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) || !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(SolverError::InvalidInput(format!(
                "need dt > 0 and t_end >= 0, got dt = {}, t_end = {}",
                self.dt, self.t_end
            )));
        }
        let n = (self.t_end / self.dt).round();
        if (n * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(self.dt) {
            return Err(SolverError::InvalidInput(format!(
                "t_end = {} is not a multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        if self.record_stride == 0 {
            return Err(SolverError::InvalidInput("record_stride must be at least 1".into()));
        }
        Ok(n as usize)
    }
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub final_state: ReducedState,
    pub records: Vec<DiagnosticsRecord>,
    pub bounds: DensityBounds,
    pub steps: usize,
    /// Steps at which `ξ` left the envelope by more than the slack.
    pub envelope_violations: usize,
    /// Largest excursion of `ξ` beyond the envelope, negative if always inside.
    pub max_envelope_excess: f64,
    /// Largest `|mass(t) − mass(0)| / mass(0)` over all steps.
    pub max_mass_drift: f64,
    pub picard_iterations: usize,
    pub cg_iterations: usize,
}

/// A run that stopped early, with everything up to the failing step.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    /// Index of the step that failed (0 for the first).
    pub step: usize,
    pub error: SolverError,
    pub partial: RunOutput,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "step {}: {}", self.step, self.error)
    }
}

impl std::error::Error for RunFailure {}

/// Steps `initial` to `t_end` with [`galerkin_step_with`], recording
/// diagnostics and tracking the density envelope and mass at every step.
pub fn run_simulation(
    basis: &Basis,
    params: &Params,
    initial: &ReducedState,
    opts: &RunOptions,
) -> std::result::Result<RunOutput, Box<RunFailure>> {
    run_observed(basis, params, initial, opts, &mut |_| {})
}

/// [`run_simulation`] calling `observe` on the initial state and after
/// every accepted step.
pub fn run_observed(
    basis: &Basis,
    params: &Params,
    initial: &ReducedState,
    opts: &RunOptions,
    observe: &mut dyn FnMut(&ReducedState),
) -> std::result::Result<RunOutput, Box<RunFailure>> {
    let mut out = RunOutput {
        final_state: initial.clone(),
        records: Vec::new(),
        bounds: DensityBounds::new(&initial.xi),
        steps: 0,
        envelope_violations: 0,
        max_envelope_excess: f64::NEG_INFINITY,
        max_mass_drift: 0.0,
        picard_iterations: 0,
        cg_iterations: 0,
    };
    let fail = |step: usize, error: SolverError, partial: RunOutput| Box::new(RunFailure { step, error, partial });

    let steps = match opts.steps().and_then(|n| params_ok(params).map(|_| n)) {
        Ok(n) => n,
        Err(e) => return Err(fail(0, e, out)),
    };
    match record(basis, initial, params, &out.bounds) {
        Ok(r) => out.records.push(r),
        Err(e) => return Err(fail(0, e, out)),
    }
    if steps > 0 {
        if let Err(e) = check_step(basis, initial, params, opts.dt) {
            return Err(fail(0, e, out));
        }
    }
    observe(initial);
    let mass0 = basis.integrate2(&initial.xi);
    let t0 = initial.t;
    let mut state = initial.clone();
    for n in 0..steps {
        let (mut next, report) = match galerkin_step_with(basis, &state, params, opts.dt, &opts.step, None) {
            Ok(v) => v,
            Err(e) => {
                out.final_state = state;
                return Err(fail(n, e, out));
            }
        };
        // pin the clock to t0 + n·dt so records do not accumulate drift
        next.t = t0 + (n + 1) as f64 * opts.dt;
        out.picard_iterations += report.picard_iterations;
        out.cg_iterations += report.cg_iterations;
        let ubar = vertical_average_vec(basis, &next.u);
        out.bounds = update_bounds(basis, &out.bounds, &ubar, opts.dt);
        let excess = (out.bounds.lower - next.min_xi()).max(next.max_xi() - out.bounds.upper);
        out.max_envelope_excess = out.max_envelope_excess.max(excess);
        if excess > opts.envelope_slack {
            out.envelope_violations += 1;
        }
        let drift = (basis.integrate2(&next.xi) - mass0).abs() / mass0;
        out.max_mass_drift = out.max_mass_drift.max(drift);
        out.steps = n + 1;
        observe(&next);
        state = next;
        if (n + 1) % opts.record_stride == 0 || n + 1 == steps {
            match record(basis, &state, params, &out.bounds) {
                Ok(r) => out.records.push(r),
                Err(e) => {
                    out.final_state = state;
                    return Err(fail(n, e, out));
                }
            }
        }
    }
    out.final_state = state;
    Ok(out)
}

fn params_ok(p: &Params) -> Result<()> {
    p.validate()
        .map_err(|e| SolverError::InvalidInput(format!("params.{e}")))
}
