//! The `cpe` command line.
//!
//! Exit codes: 0 on success, 1 when an input fails validation (config,
//! snapshot, CSV, arguments), 2 when the solver stops. Every successful or
//! solver-failed command prints one `key=value` summary line on stdout;
//! human-readable messages go to stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use cpe_core::diagnostics::{check_inequalities, record, InequalityReport};
use cpe_core::continuity::DensityBounds;
use cpe_core::harness::{
    continuation_study, manufactured_solution_test, run_simulation, HarnessError, RunOptions, Stage,
};
use cpe_core::io::config::{load_config, OutputFormat, RunConfig};
use cpe_core::io::csv::{
    format_value, read_diagnostics, read_table, table_to_string, write_diagnostics, write_table,
};
use cpe_core::io::snapshot::{read_snapshot, write_snapshot, MAGIC};
use cpe_core::spectral::{make_basis, Basis};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cpe", version, about = "Pseudo-spectral solver for the reduced compressible primitive equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a simulation and write diagnostics and the final snapshot.
    Run { config: PathBuf },
    /// Recompute diagnostics and identity residuals of a snapshot.
    Check { snapshot: PathBuf },
    /// Run a vanishing-parameter continuation study.
    Continuation {
        config: PathBuf,
        #[arg(long)]
        stage: String,
        #[arg(long)]
        rungs: Option<usize>,
    },
    /// Manufactured-solution convergence study.
    Mms { config: PathBuf },
    /// Describe a snapshot or diagnostics CSV.
    Info { file: PathBuf },
}

/// A failed command: exit code and the message for stderr.
struct Failure {
    code: i32,
    message: String,
    summary: Option<String>,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
            summary: None,
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let code = match e {
            HarnessError::Solver(_) => EXIT_SOLVER,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
            summary: None,
        }
    }
}

type Outcome = Result<String, Failure>;

/// Parses `argv` (program name first) and runs the command.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Check { snapshot } => cmd_check(&snapshot),
        Command::Continuation { config, stage, rungs } => cmd_continuation(&config, &stage, rungs),
        Command::Mms { config } => cmd_mms(&config),
        Command::Info { file } => cmd_info(&file),
    };
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(s) = f.summary {
                println!("{s}");
            }
            f.code
        }
    }
}

fn config(path: &Path) -> Result<RunConfig, Failure> {
    load_config(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn basis_for(c: &RunConfig) -> Result<Basis, Failure> {
    make_basis(c.grid).map_err(|e| Failure::invalid(e.to_string()))
}

fn io_fail(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::invalid(format!("{}: {e}", path.display()))
}

fn summary(command: &str, status: &str, fields: &[(&str, String)]) -> String {
    let mut s = format!("cpe command={command} status={status}");
    for (k, v) in fields {
        let _ = write!(s, " {k}={v}");
    }
    s
}

fn inequality_fields(r: &InequalityReport) -> Vec<(&'static str, String)> {
    vec![
        ("energy_violations", r.energy_violations.to_string()),
        ("energy_max_violation", format_value(r.energy_max_violation)),
        ("bd_violations", r.bd_violations.to_string()),
        ("bd_max_violation", format_value(r.bd_max_violation)),
    ]
}

fn cmd_run(path: &Path) -> Outcome {
    let c = config(path)?;
    let basis = basis_for(&c)?;
    let s0 = c.initial_data().realize(&basis, &c.params)?;
    let dir = &c.output.directory;
    let (out, failure) = match run_simulation(&basis, &c.params, &s0, &c.run_options()) {
        Ok(out) => (out, None),
        Err(f) => {
            let msg = format!("solver stopped at step {}: {}", f.step, f.error);
            (f.partial, Some((f.step, msg)))
        }
    };
    if c.writes(OutputFormat::Csv) {
        let p = dir.join("diagnostics.csv");
        write_diagnostics(&out.records, &p).map_err(|e| io_fail(&p, e))?;
    }
    if c.writes(OutputFormat::Snapshot) {
        let p = dir.join("final.cpe");
        write_snapshot(&p, &c.grid, &out.final_state, &c.params).map_err(|e| io_fail(&p, e))?;
    }
    let first = &out.records[0];
    let report = check_inequalities(&out.records, first.energy, first.bd_entropy, c.slack(first.energy, first.bd_entropy));
    let last = out.records.last().expect("initial record");
    let mut fields = vec![
        ("steps", out.steps.to_string()),
        ("t", format_value(out.final_state.t)),
        ("energy", format_value(last.energy)),
        ("mass_drift", format_value(out.max_mass_drift)),
        ("envelope_violations", out.envelope_violations.to_string()),
    ];
    fields.extend(inequality_fields(&report));
    fields.push(("output", dir.display().to_string()));
    match failure {
        None => Ok(summary("run", "ok", &fields)),
        Some((step, message)) => {
            fields.insert(0, ("failed_step", step.to_string()));
            Err(Failure {
                code: EXIT_SOLVER,
                message,
                summary: Some(summary("run", "solver_error", &fields)),
            })
        }
    }
}

fn cmd_check(path: &Path) -> Outcome {
    let snap = read_snapshot(path).map_err(|e| io_fail(path, e))?;
    let basis = make_basis(snap.spec).map_err(|e| io_fail(path, e))?;
    let bounds = DensityBounds::new(&snap.state.xi);
    let rec = record(&basis, &snap.state, &snap.params, &bounds).map_err(|e| Failure {
        code: EXIT_SOLVER,
        message: e.to_string(),
        summary: None,
    })?;
    for (k, v) in rec.dissipation.iter().chain(&rec.identity_residuals) {
        eprintln!("{k:>28} {}", format_value(*v));
    }
    let worst = rec.identity_residuals.values().fold(0.0f64, |a, &b| a.max(b));
    let mut fields = vec![
        ("t", format_value(snap.state.t)),
        ("mass", format_value(rec.mass)),
        ("energy", format_value(rec.energy)),
        ("bd_entropy", format_value(rec.bd_entropy)),
        ("min_xi", format_value(rec.min_xi)),
        ("max_xi", format_value(rec.max_xi)),
    ];
    fields.push(("max_identity_residual", format_value(worst)));
    Ok(summary("check", "ok", &fields))
}

fn cmd_continuation(path: &Path, stage: &str, rungs: Option<usize>) -> Outcome {
    let mut c = config(path)?;
    c.continuation.stage = Stage::from_name(stage)
        .ok_or_else(|| Failure::invalid(format!("unknown stage {stage:?}; expected one of {}", Stage::NAMES.join(", "))))?;
    if let Some(n) = rungs {
        c.continuation.rungs = n;
    }
    let basis = basis_for(&c)?;
    let s0 = c.initial_data().realize(&basis, &c.params)?;
    let opts = RunOptions {
        t_end: c.continuation.t_end,
        ..c.run_options()
    };
    let table = continuation_study(&basis, &c.schedule(), &s0, &opts)?;
    let p = c.output.directory.join(format!("continuation_{}.csv", table.stage.name()));
    write_table(&p, &cpe_core::harness::ContinuationTable::columns(), &table.numeric_rows()).map_err(|e| io_fail(&p, e))?;
    let failed: Vec<_> = table.rows.iter().filter(|r| r.error.is_some()).collect();
    let fields = vec![
        ("stage", table.stage.name().to_string()),
        ("rungs", table.rows.len().to_string()),
        ("failed_rungs", failed.len().to_string()),
        ("table", p.display().to_string()),
    ];
    if failed.is_empty() {
        Ok(summary("continuation", "ok", &fields))
    } else {
        let message = failed
            .iter()
            .map(|r| format!("rung {}: {}", r.rung, r.error.as_deref().unwrap_or("")))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Failure {
            code: EXIT_SOLVER,
            message,
            summary: Some(summary("continuation", "solver_error", &fields)),
        })
    }
}

fn cmd_mms(path: &Path) -> Outcome {
    let c = config(path)?;
    let report = manufactured_solution_test(&c.grid, &c.params, &c.mms)?;
    let mut rows: Vec<Vec<f64>> = report.temporal.iter().map(|&(dt, e)| vec![0.0, c.mms.n_fine as f64, dt, e]).collect();
    rows.extend(report.spatial.iter().map(|&(n, e)| vec![1.0, n as f64, c.mms.dt_spatial, e]));
    let p = c.output.directory.join("mms.csv");
    write_table(&p, &["spatial", "n", "dt", "error"], &rows).map_err(|e| io_fail(&p, e))?;
    let ratios = report.temporal_ratios().iter().map(|r| format_value(*r)).collect::<Vec<_>>().join(",");
    Ok(summary(
        "mms",
        "ok",
        &[
            ("temporal_ratios", ratios),
            ("spatial_ratio", format_value(report.spatial_ratio())),
            ("table", p.display().to_string()),
        ],
    ))
}

fn cmd_info(path: &Path) -> Outcome {
    let bytes = fs::read(path).map_err(|e| io_fail(path, e))?;
    if bytes.starts_with(MAGIC) {
        let snap = read_snapshot(path).map_err(|e| io_fail(path, e))?;
        let s = snap.spec;
        return Ok(summary(
            "info",
            "ok",
            &[
                ("kind", "snapshot".into()),
                ("nx1", s.nx1.to_string()),
                ("nx2", s.nx2.to_string()),
                ("nz", s.nz.to_string()),
                ("h", format_value(s.h)),
                ("t", format_value(snap.state.t)),
            ],
        ));
    }
    if let Ok(records) = read_diagnostics(path) {
        let t = |i: usize| records.get(i).map_or("nan".to_string(), |r| format_value(r.t));
        return Ok(summary(
            "info",
            "ok",
            &[
                ("kind", "diagnostics".into()),
                ("rows", records.len().to_string()),
                ("t_first", t(0)),
                ("t_last", t(records.len().saturating_sub(1))),
            ],
        ));
    }
    let (columns, rows) = read_table(path).map_err(|e| io_fail(path, e))?;
    eprintln!("{}", table_to_string(&columns, &[]).trim_end());
    Ok(summary(
        "info",
        "ok",
        &[
            ("kind", "table".into()),
            ("rows", rows.len().to_string()),
            ("columns", columns.len().to_string()),
        ],
    ))
}
