//! Flat `section.key = value` configuration.
//!
//! Every key is optional; missing keys take the defaults of
//! [`RunConfig::default`]. `grid.nx2` defaults to `grid.nx1`. Comments start
//! with `#` and run to the end of the line.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::diagnostics::InequalitySlack;
use crate::harness::{
    ContinuationSchedule, InitSource, InitialData, MmsConfig, Preset, PresetSpec, RunOptions, Stage,
};
use crate::momentum::{Params, StepOptions, PARAM_NAMES};
use crate::spectral::DomainSpec;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{key}: {reason}")]
    Validation { key: String, reason: String },
    #[error("cannot read config: {0}")]
    Io(String),
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Snapshot,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Snapshot => "snapshot",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "snapshot" => Some(OutputFormat::Snapshot),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_end: f64,
    pub record_stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitConfig {
    pub preset: Preset,
    pub amplitude: Option<f64>,
    pub noise: f64,
    /// Takes precedence over the preset when set.
    pub snapshot: Option<PathBuf>,
    pub varsigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsConfig {
    pub energy_slack: f64,
    /// Relative: the absolute slack is `bd_slack·(BD₀ + E₀ + 1)`.
    pub bd_slack: f64,
    pub envelope_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationConfig {
    pub stage: Stage,
    pub factor: f64,
    pub rungs: usize,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: DomainSpec,
    pub params: Params,
    pub time: TimeConfig,
    pub init: InitConfig,
    pub output: OutputConfig,
    pub solver: StepOptions,
    pub diagnostics: DiagnosticsConfig,
    pub continuation: ContinuationConfig,
    pub mms: MmsConfig,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: DomainSpec {
                nx1: 16,
                nx2: 16,
                nz: 9,
                h: 0.5,
            },
            params: Params::default(),
            time: TimeConfig {
                dt: 1e-3,
                t_end: 0.5,
                record_stride: 1,
            },
            init: InitConfig {
                preset: Preset::Constant,
                amplitude: None,
                noise: 0.0,
                snapshot: None,
                varsigma: 0.1,
            },
            output: OutputConfig {
                directory: PathBuf::from("out"),
                formats: vec![OutputFormat::Csv, OutputFormat::Snapshot],
            },
            solver: StepOptions::default(),
            diagnostics: DiagnosticsConfig {
                energy_slack: 1e-6,
                bd_slack: 1e-3,
                envelope_slack: 1e-10,
            },
            continuation: ContinuationConfig {
                stage: Stage::EpsMu,
                factor: 2.0,
                rungs: 4,
                t_end: 0.5,
            },
            mms: MmsConfig::default(),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            dt: self.time.dt,
            t_end: self.time.t_end,
            record_stride: self.time.record_stride,
            step: self.solver,
            envelope_slack: self.diagnostics.envelope_slack,
        }
    }

    pub fn initial_data(&self) -> InitialData {
        let source = match &self.init.snapshot {
            Some(p) => InitSource::Snapshot(p.clone()),
            None => InitSource::Preset(PresetSpec {
                preset: self.init.preset,
                amplitude: self.init.amplitude,
                noise: self.init.noise,
                seed: self.seed,
            }),
        };
        InitialData {
            source,
            varsigma: self.init.varsigma,
        }
    }

    pub fn schedule(&self) -> ContinuationSchedule {
        ContinuationSchedule {
            stage: self.continuation.stage,
            factor: self.continuation.factor,
            rungs: self.continuation.rungs,
            base_params: self.params,
        }
    }

    /// Absolute inequality slacks given the initial energy and BD entropy.
    pub fn slack(&self, e0: f64, bd0: f64) -> InequalitySlack {
        InequalitySlack {
            energy_rel: self.diagnostics.energy_slack,
            bd_const: self.diagnostics.bd_slack * (bd0 + e0 + 1.0),
        }
    }

    pub fn writes(&self, f: OutputFormat) -> bool {
        self.output.formats.contains(&f)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.grid.validate().map_err(|e| invalid("grid", e.to_string()))?;
        self.params
            .validate()
            .map_err(|e| invalid(&format!("params.{}", e.key), e.reason))?;
        let t = &self.time;
        positive("time.dt", t.dt)?;
        positive("time.t_end", t.t_end)?;
        if t.t_end < t.dt {
            return Err(invalid("time.t_end", "shorter than one step"));
        }
        if t.record_stride == 0 {
            return Err(invalid("time.record_stride", "must be at least 1"));
        }
        if let Some(a) = self.init.amplitude {
            if !a.is_finite() {
                return Err(invalid("init.amplitude", "must be finite"));
            }
        }
        nonnegative("init.noise", self.init.noise)?;
        positive("init.varsigma", self.init.varsigma)?;
        if let Some(p) = &self.init.snapshot {
            if !p.is_file() {
                return Err(invalid("init.snapshot", format!("{} does not exist", p.display())));
            }
        }
        if self.output.formats.is_empty() {
            return Err(invalid("output.formats", "empty"));
        }
        let s = &self.solver;
        positive("solver.picard_tol", s.picard_tol)?;
        positive("solver.cg_tol", s.cg_tol)?;
        if s.picard_max == 0 {
            return Err(invalid("solver.picard_max", "must be at least 1"));
        }
        if s.cg_max == 0 {
            return Err(invalid("solver.cg_max", "must be at least 1"));
        }
        nonnegative("diagnostics.energy_slack", self.diagnostics.energy_slack)?;
        nonnegative("diagnostics.bd_slack", self.diagnostics.bd_slack)?;
        nonnegative("diagnostics.envelope_slack", self.diagnostics.envelope_slack)?;
        let c = &self.continuation;
        if !(c.factor > 1.0 && c.factor.is_finite()) {
            return Err(invalid("continuation.factor", "must exceed 1"));
        }
        if c.rungs < 3 {
            return Err(invalid("continuation.rungs", "must be at least 3"));
        }
        positive("continuation.t_end", c.t_end)?;
        let m = &self.mms;
        nonnegative("mms.b", m.b)?;
        nonnegative("mms.c", m.c)?;
        if m.a <= m.b {
            return Err(invalid("mms.a", "must exceed mms.b so the density stays positive"));
        }
        positive("mms.t_end", m.t_end)?;
        positive("mms.dt_spatial", m.dt_spatial)?;
        if m.dt_list.len() < 2 {
            return Err(invalid("mms.dt_list", "need at least two steps"));
        }
        for &dt in &m.dt_list {
            positive("mms.dt_list", dt)?;
        }
        for (key, n) in [("mms.n_coarse", m.n_coarse), ("mms.n_fine", m.n_fine), ("mms.n_ref", m.n_ref)] {
            if n < 8 || n % 2 != 0 {
                return Err(invalid(key, "must be even and >= 8"));
            }
        }
        if m.n_fine <= m.n_coarse {
            return Err(invalid("mms.n_fine", "must exceed mms.n_coarse"));
        }
        Ok(())
    }
}

fn positive(key: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, "must be positive"))
    }
}

fn nonnegative(key: &str, v: f64) -> Result<(), ConfigError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, "must be nonnegative"))
    }
}

const KEYS: &[&str] = &[
    "seed",
    "grid.nx1",
    "grid.nx2",
    "grid.nz",
    "grid.h",
    "params.nu1",
    "params.nu2",
    "params.r",
    "params.r0",
    "params.eps",
    "params.mu",
    "params.eta",
    "params.kappa",
    "params.delta",
    "params.density_floor",
    "time.dt",
    "time.t_end",
    "time.record_stride",
    "init.preset",
    "init.amplitude",
    "init.noise",
    "init.snapshot",
    "init.varsigma",
    "output.directory",
    "output.formats",
    "solver.picard_tol",
    "solver.picard_max",
    "solver.cg_tol",
    "solver.cg_max",
    "diagnostics.energy_slack",
    "diagnostics.bd_slack",
    "diagnostics.envelope_slack",
    "continuation.stage",
    "continuation.factor",
    "continuation.rungs",
    "continuation.t_end",
    "mms.a",
    "mms.b",
    "mms.c",
    "mms.t_end",
    "mms.dt_list",
    "mms.dt_spatial",
    "mms.n_coarse",
    "mms.n_fine",
    "mms.n_ref",
];

struct Entries {
    map: HashMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn value<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| ConfigError::Parse {
                line,
                reason: format!("{key}: expected {what}, got {v:?}"),
            }),
        }
    }

    fn f64(&mut self, key: &str, slot: &mut f64) -> Result<(), ConfigError> {
        if let Some(v) = self.value(key, "a number")? {
            *slot = v;
        }
        Ok(())
    }

    fn usize(&mut self, key: &str, slot: &mut usize) -> Result<(), ConfigError> {
        if let Some(v) = self.value(key, "a nonnegative integer")? {
            *slot = v;
        }
        Ok(())
    }

    fn named<T>(&mut self, key: &str, slot: &mut T, names: &[&str], f: impl Fn(&str) -> Option<T>) -> Result<(), ConfigError> {
        if let Some((line, v)) = self.raw(key) {
            *slot = f(&v).ok_or_else(|| ConfigError::Parse {
                line,
                reason: format!("{key}: expected one of {}, got {v:?}", names.join(", ")),
            })?;
        }
        Ok(())
    }
}

fn split_lines(text: &str) -> Result<Entries, ConfigError> {
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            reason: "expected `section.key = value`".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::Parse {
                line,
                reason: format!("unknown key {key:?}"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                reason: format!("{key}: empty value"),
            });
        }
        if let Some((first, _)) = map.insert(key.to_string(), (line, value.to_string())) {
            return Err(ConfigError::Parse {
                line,
                reason: format!("{key} already set on line {first}"),
            });
        }
    }
    Ok(Entries { map })
}

/// Parses and validates `text`; relative snapshot paths resolve against the
/// working directory.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_in(text, None)
}

/// Reads a config file; relative snapshot paths resolve against its directory.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    parse_config_in(&text, path.parent())
}

fn parse_config_in(text: &str, base: Option<&Path>) -> Result<RunConfig, ConfigError> {
    let mut e = split_lines(text)?;
    let mut c = RunConfig::default();
    if let Some(v) = e.value("seed", "an unsigned integer")? {
        c.seed = v;
    }

    let g = &mut c.grid;
    e.usize("grid.nx1", &mut g.nx1)?;
    g.nx2 = g.nx1;
    e.usize("grid.nx2", &mut g.nx2)?;
    e.usize("grid.nz", &mut g.nz)?;
    e.f64("grid.h", &mut g.h)?;

    for name in PARAM_NAMES {
        let mut v = c.params.get(name).expect("known parameter");
        e.f64(&format!("params.{name}"), &mut v)?;
        c.params.set(name, v);
    }

    e.f64("time.dt", &mut c.time.dt)?;
    e.f64("time.t_end", &mut c.time.t_end)?;
    e.usize("time.record_stride", &mut c.time.record_stride)?;

    e.named("init.preset", &mut c.init.preset, &Preset::NAMES, Preset::from_name)?;
    c.init.amplitude = e.value("init.amplitude", "a number")?;
    e.f64("init.noise", &mut c.init.noise)?;
    if let Some((_, p)) = e.raw("init.snapshot") {
        let p = PathBuf::from(p);
        c.init.snapshot = Some(match base {
            Some(b) if p.is_relative() => b.join(p),
            _ => p,
        });
    }
    e.f64("init.varsigma", &mut c.init.varsigma)?;

    if let Some((_, d)) = e.raw("output.directory") {
        c.output.directory = PathBuf::from(d);
    }
    if let Some((line, v)) = e.raw("output.formats") {
        let mut formats = Vec::new();
        for item in v.split(',').map(str::trim) {
            let f = OutputFormat::from_name(item).ok_or_else(|| ConfigError::Parse {
                line,
                reason: format!("output.formats: unknown format {item:?}"),
            })?;
            if !formats.contains(&f) {
                formats.push(f);
            }
        }
        c.output.formats = formats;
    }

    e.f64("solver.picard_tol", &mut c.solver.picard_tol)?;
    e.usize("solver.picard_max", &mut c.solver.picard_max)?;
    e.f64("solver.cg_tol", &mut c.solver.cg_tol)?;
    e.usize("solver.cg_max", &mut c.solver.cg_max)?;

    e.f64("diagnostics.energy_slack", &mut c.diagnostics.energy_slack)?;
    e.f64("diagnostics.bd_slack", &mut c.diagnostics.bd_slack)?;
    e.f64("diagnostics.envelope_slack", &mut c.diagnostics.envelope_slack)?;

    e.named("continuation.stage", &mut c.continuation.stage, &Stage::NAMES, Stage::from_name)?;
    e.f64("continuation.factor", &mut c.continuation.factor)?;
    e.usize("continuation.rungs", &mut c.continuation.rungs)?;
    e.f64("continuation.t_end", &mut c.continuation.t_end)?;

    let m = &mut c.mms;
    e.f64("mms.a", &mut m.a)?;
    e.f64("mms.b", &mut m.b)?;
    e.f64("mms.c", &mut m.c)?;
    e.f64("mms.t_end", &mut m.t_end)?;
    if let Some((line, v)) = e.raw("mms.dt_list") {
        m.dt_list = v
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ConfigError::Parse {
                line,
                reason: format!("mms.dt_list: expected comma-separated numbers, got {v:?}"),
            })?;
    }
    e.f64("mms.dt_spatial", &mut m.dt_spatial)?;
    e.usize("mms.n_coarse", &mut m.n_coarse)?;
    e.usize("mms.n_fine", &mut m.n_fine)?;
    e.usize("mms.n_ref", &mut m.n_ref)?;
    m.step = c.solver;

    debug_assert!(e.map.is_empty(), "every known key is consumed");
    c.validate()?;
    Ok(c)
}

/// Shortest text that parses back to `v`, in exponent form for small and
/// large magnitudes.
fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e6).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// Writes every key in a fixed order; floats use the shortest text that
/// parses back to the same value.
pub fn serialize_config(c: &RunConfig) -> String {
    let mut s = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    put("seed", c.seed.to_string());
    put("grid.nx1", c.grid.nx1.to_string());
    put("grid.nx2", c.grid.nx2.to_string());
    put("grid.nz", c.grid.nz.to_string());
    put("grid.h", num(c.grid.h));
    for (name, v) in PARAM_NAMES.iter().zip(c.params.to_array()) {
        put(&format!("params.{name}"), num(v));
    }
    put("time.dt", num(c.time.dt));
    put("time.t_end", num(c.time.t_end));
    put("time.record_stride", c.time.record_stride.to_string());
    put("init.preset", c.init.preset.name().to_string());
    if let Some(a) = c.init.amplitude {
        put("init.amplitude", num(a));
    }
    put("init.noise", num(c.init.noise));
    if let Some(p) = &c.init.snapshot {
        put("init.snapshot", p.display().to_string());
    }
    put("init.varsigma", num(c.init.varsigma));
    put("output.directory", c.output.directory.display().to_string());
    put(
        "output.formats",
        c.output.formats.iter().map(|f| f.name()).collect::<Vec<_>>().join(","),
    );
    put("solver.picard_tol", num(c.solver.picard_tol));
    put("solver.picard_max", c.solver.picard_max.to_string());
    put("solver.cg_tol", num(c.solver.cg_tol));
    put("solver.cg_max", c.solver.cg_max.to_string());
    put("diagnostics.energy_slack", num(c.diagnostics.energy_slack));
    put("diagnostics.bd_slack", num(c.diagnostics.bd_slack));
    put("diagnostics.envelope_slack", num(c.diagnostics.envelope_slack));
    put("continuation.stage", c.continuation.stage.name().to_string());
    put("continuation.factor", num(c.continuation.factor));
    put("continuation.rungs", c.continuation.rungs.to_string());
    put("continuation.t_end", num(c.continuation.t_end));
    put("mms.a", num(c.mms.a));
    put("mms.b", num(c.mms.b));
    put("mms.c", num(c.mms.c));
    put("mms.t_end", num(c.mms.t_end));
    put(
        "mms.dt_list",
        c.mms.dt_list.iter().map(|&v| num(v)).collect::<Vec<_>>().join(","),
    );
    put("mms.dt_spatial", num(c.mms.dt_spatial));
    put("mms.n_coarse", c.mms.n_coarse.to_string());
    put("mms.n_fine", c.mms.n_fine.to_string());
    put("mms.n_ref", c.mms.n_ref.to_string());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn floats_round_trip_through_text(eta in 0.0f64..1e9, dt in 1e-12f64..1e-2, seed in any::<u64>()) {
            let mut c = parse_config("").unwrap();
            c.params.eta = eta;
            c.time.dt = dt;
            c.seed = seed;
            prop_assert_eq!(parse_config(&serialize_config(&c)).unwrap(), c);
        }
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let c = parse_config("grid.nx1 = 16\n").unwrap();
        assert_eq!(c.grid.nx2, 16);
        let mut d = RunConfig::default();
        d.mms.step = d.solver;
        assert_eq!(c, d);
        let c = parse_config("# comment\ngrid.nx1 = 32   # trailing\n\n").unwrap();
        assert_eq!((c.grid.nx1, c.grid.nx2), (32, 32));
    }

    #[test]
    fn validation_names_the_key() {
        assert_eq!(
            parse_config("params.eta = -1").unwrap_err(),
            ConfigError::Validation {
                key: "params.eta".into(),
                reason: "must be nonnegative".into()
            }
        );
        assert!(matches!(
            parse_config("init.snapshot = /nonexistent/x.cpe"),
            Err(ConfigError::Validation { key, .. }) if key == "init.snapshot"
        ));
        assert!(matches!(
            parse_config("grid.nx1 = 15"),
            Err(ConfigError::Validation { key, .. }) if key == "grid"
        ));
    }

    #[test]
    fn syntax_errors_carry_the_line() {
        for (text, line) in [
            ("grid.nx1 = 16\nnonsense\n", 2),
            ("grid.bogus = 1", 1),
            ("\n\ngrid.h = abc", 3),
            ("grid.nx1 = 16\ngrid.nx1 = 32", 2),
            ("grid.h =", 1),
            ("init.preset = vortex", 1),
        ] {
            match parse_config(text) {
                Err(ConfigError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn serialization_round_trips() {
        let text = "grid.nx1 = 32\ngrid.nz = 17\nparams.eta = 0.1234567890123\n\
                    init.preset = shear\ninit.amplitude = 0.3\ntime.dt = 3e-4\n\
                    output.formats = csv\ncontinuation.stage = kappa_delta_r0\nmms.dt_list = 0.1,0.05\nseed = 42\n";
        let c = parse_config(text).unwrap();
        let again = parse_config(&serialize_config(&c)).unwrap();
        assert_eq!(c, again);
        assert_eq!(serialize_config(&c), serialize_config(&again));
        let d = parse_config("").unwrap();
        assert_eq!(parse_config(&serialize_config(&d)).unwrap(), d);
    }
}
