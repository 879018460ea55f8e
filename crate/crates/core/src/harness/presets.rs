use std::path::PathBuf;

use crate::diagnostics::{bd_entropy, energy};
use crate::hydrostatic::ReducedState;
use crate::io::snapshot::read_snapshot;
use crate::momentum::Params;
use crate::random::{band_limited2, band_limited3};
use crate::spectral::{Basis, Field3, Parity};

use super::HarnessError;

/// Built-in initial states, all band-limited on grids with `nx ≥ 8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `ξ ≡ 1`, `u ≡ 0`.
    Constant,
    /// `ξ = 1 + A cos x1`, `u ≡ 0`; `A = 0.1` by default.
    DensityRelax,
    /// `ξ ≡ 1`, `u1` a smoothed square wave in `x2` of height `A = 0.5`.
    Shear,
    /// `ξ = 1 + 0.1 cos x2`,
    /// `u = A (sin x1 cos(πz/h), ½ cos x1 cos(2πz/h))`; `A = 0.2` by default.
    Column,
}

impl Preset {
    pub const NAMES: [&'static str; 4] = ["constant", "density_relax", "shear", "column"];
    pub const ALL: [Preset; 4] = [Preset::Constant, Preset::DensityRelax, Preset::Shear, Preset::Column];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Self::NAMES.iter().position(|n| *n == name).map(|i| Self::ALL[i])
    }

    pub fn default_amplitude(self) -> f64 {
        match self {
            Preset::Constant => 0.0,
            Preset::DensityRelax => 0.1,
            Preset::Shear => 0.5,
            Preset::Column => 0.2,
        }
    }

    /// Noise-free state on `basis`.
    pub fn build(self, basis: &Basis, amplitude: f64) -> ReducedState {
        let h = basis.h();
        let zero = || Field3::zeros(basis.n3(), Parity::Even);
        let (xi, u) = match self {
            Preset::Constant => (basis.sample2(|_, _| 1.0), [zero(), zero()]),
            Preset::DensityRelax => (basis.sample2(|x, _| 1.0 + amplitude * x.cos()), [zero(), zero()]),
            Preset::Shear => {
                let top = (basis.spec().nx2 / 3).min(5);
                let modes: Vec<usize> = (1..=top).step_by(2).collect();
                let shape = |y: f64| modes.iter().map(|&n| (n as f64 * y).sin() / n as f64).sum::<f64>();
                let peak = basis.x2_grid().iter().fold(0.0f64, |m, &y| m.max(shape(y).abs()));
                let u1 = basis.sample3(|_, y, _| amplitude * shape(y) / peak);
                (basis.sample2(|_, _| 1.0), [u1, zero()])
            }
            Preset::Column => {
                let k = std::f64::consts::PI / h;
                (
                    basis.sample2(|_, y| 1.0 + 0.1 * y.cos()),
                    [
                        basis.sample3(|x, _, z| amplitude * x.sin() * (k * z).cos()),
                        basis.sample3(|x, _, z| 0.5 * amplitude * x.cos() * (2.0 * k * z).cos()),
                    ],
                )
            }
        };
        ReducedState { t: 0.0, xi, u }
    }
}

/// A preset with its knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetSpec {
    pub preset: Preset,
    /// Overrides [`Preset::default_amplitude`].
    pub amplitude: Option<f64>,
    /// Amplitude of seeded band-limited noise added to `ξ` and `u`.
    pub noise: f64,
    pub seed: u64,
}

impl PresetSpec {
    pub fn new(preset: Preset) -> Self {
        PresetSpec {
            preset,
            amplitude: None,
            noise: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSource {
    Preset(PresetSpec),
    Snapshot(PathBuf),
    State(ReducedState),
}

/// Initial data with the lower density bound `ς` it must respect.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub source: InitSource,
    pub varsigma: f64,
}

impl InitialData {
    pub fn preset(preset: Preset) -> Self {
        InitialData {
            source: InitSource::Preset(PresetSpec::new(preset)),
            varsigma: 0.1,
        }
    }

    /// Builds the state on `basis` and checks `min ξ₀ ≥ ς` and finite
    /// `E₀`, `BD₀`.
    pub fn realize(&self, basis: &Basis, params: &Params) -> Result<ReducedState, HarnessError> {
        let state = match &self.source {
            InitSource::Preset(p) => {
                let amp = p.amplitude.unwrap_or_else(|| p.preset.default_amplitude());
                let mut s = p.preset.build(basis, amp);
                if p.noise > 0.0 {
                    s.xi.axpy(1.0, &band_limited2(basis, p.seed, p.noise, 0.6));
                    for (i, c) in s.u.iter_mut().enumerate() {
                        c.axpy(1.0, &band_limited3(basis, Parity::Even, p.seed + 1 + i as u64, p.noise, 0.6));
                    }
                }
                s
            }
            InitSource::Snapshot(path) => {
                let snap = read_snapshot(path)?;
                if snap.spec != *basis.spec() {
                    return Err(HarnessError::InvalidInit(format!(
                        "snapshot grid {:?} differs from the configured grid",
                        snap.spec
                    )));
                }
                snap.state
            }
            InitSource::State(s) => ReducedState::new(basis, s.t, s.xi.clone(), s.u.clone())?,
        };
        if !state.is_finite() {
            return Err(HarnessError::InvalidInit("state is not finite".into()));
        }
        if state.min_xi() < self.varsigma {
            return Err(HarnessError::InvalidInit(format!(
                "min ξ₀ = {} is below ς = {}",
                state.min_xi(),
                self.varsigma
            )));
        }
        let e0 = energy(basis, &state, params)?;
        let bd0 = bd_entropy(basis, &state, params)?;
        if !(e0.is_finite() && bd0.is_finite()) {
            return Err(HarnessError::InvalidInit("initial energy or BD entropy is not finite".into()));
        }
        Ok(state)
    }
}
