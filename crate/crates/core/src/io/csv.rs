//! Diagnostics and result tables as CSV. Every value is printed with 17
//! significant digits, which round-trips any `f64` exactly.

use std::path::Path;

use indexmap::IndexMap;
use thiserror::Error;

use crate::diagnostics::{
    DiagnosticsRecord, BD_DISSIPATION_NAMES, ENERGY_DISSIPATION_NAMES, IDENTITY_NAMES,
};

pub const BASE_COLUMNS: [&str; 8] = [
    "t",
    "mass",
    "energy",
    "bd_entropy",
    "min_xi",
    "max_xi",
    "bound_lower",
    "bound_upper",
];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("unexpected column set: {0}")]
    Schema(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Column order of the diagnostics file.
pub fn diagnostics_columns() -> Vec<&'static str> {
    BASE_COLUMNS
        .iter()
        .chain(&ENERGY_DISSIPATION_NAMES)
        .chain(&BD_DISSIPATION_NAMES)
        .chain(&IDENTITY_NAMES)
        .copied()
        .collect()
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn row_values(r: &DiagnosticsRecord) -> Result<Vec<f64>, CsvError> {
    let mut out = vec![
        r.t,
        r.mass,
        r.energy,
        r.bd_entropy,
        r.min_xi,
        r.max_xi,
        r.bound_lower,
        r.bound_upper,
    ];
    let expected = ENERGY_DISSIPATION_NAMES.len() + BD_DISSIPATION_NAMES.len();
    if r.dissipation.len() != expected || r.identity_residuals.len() != IDENTITY_NAMES.len() {
        return Err(CsvError::Schema("record maps do not match the standard names".into()));
    }
    for name in ENERGY_DISSIPATION_NAMES.iter().chain(&BD_DISSIPATION_NAMES) {
        out.push(*r.dissipation.get(*name).ok_or_else(|| CsvError::Schema(format!("missing {name}")))?);
    }
    for name in IDENTITY_NAMES {
        out.push(*r.identity_residuals.get(name).ok_or_else(|| CsvError::Schema(format!("missing {name}")))?);
    }
    Ok(out)
}

/// Renders records as CSV text.
pub fn diagnostics_to_string(records: &[DiagnosticsRecord]) -> Result<String, CsvError> {
    let rows = records.iter().map(row_values).collect::<Result<Vec<_>, _>>()?;
    Ok(table_to_string(&diagnostics_columns(), &rows))
}

pub fn write_diagnostics(records: &[DiagnosticsRecord], path: &Path) -> Result<(), CsvError> {
    let text = diagnostics_to_string(records)?;
    super::write_atomic(path, text.as_bytes())?;
    Ok(())
}

/// Parses CSV text produced by [`diagnostics_to_string`].
pub fn diagnostics_from_str(text: &str) -> Result<Vec<DiagnosticsRecord>, CsvError> {
    let columns = diagnostics_columns();
    let (header, rows) = table_from_str(text)?;
    if header != columns {
        return Err(CsvError::Schema(header.join(",")));
    }
    let nb = BASE_COLUMNS.len();
    let nd = ENERGY_DISSIPATION_NAMES.len() + BD_DISSIPATION_NAMES.len();
    Ok(rows
        .into_iter()
        .map(|v| {
            let dissipation: IndexMap<String, f64> = columns[nb..nb + nd]
                .iter()
                .zip(&v[nb..nb + nd])
                .map(|(n, x)| (n.to_string(), *x))
                .collect();
            let identity_residuals = columns[nb + nd..]
                .iter()
                .zip(&v[nb + nd..])
                .map(|(n, x)| (n.to_string(), *x))
                .collect();
            DiagnosticsRecord {
                t: v[0],
                mass: v[1],
                energy: v[2],
                bd_entropy: v[3],
                min_xi: v[4],
                max_xi: v[5],
                bound_lower: v[6],
                bound_upper: v[7],
                dissipation,
                identity_residuals,
            }
        })
        .collect())
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRecord>, CsvError> {
    diagnostics_from_str(&std::fs::read_to_string(path)?)
}

/// Renders a numeric table with a header row.
pub fn table_to_string<S: AsRef<str>>(columns: &[S], rows: &[Vec<f64>]) -> String {
    let mut out = columns.iter().map(|c| c.as_ref()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_table<S: AsRef<str>>(path: &Path, columns: &[S], rows: &[Vec<f64>]) -> Result<(), CsvError> {
    super::write_atomic(path, table_to_string(columns, rows).as_bytes())?;
    Ok(())
}

/// Parses a numeric table; every row must have as many fields as the header.
pub fn table_from_str(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CsvError> {
    let mut lines = text.lines();
    let header: Vec<String> = match lines.next() {
        Some(h) if !h.trim().is_empty() => h.split(',').map(|s| s.trim().to_string()).collect(),
        _ => return Err(CsvError::Schema("missing header".into())),
    };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(CsvError::Parse {
                line: i + 2,
                reason: format!("expected {} fields, found {}", header.len(), fields.len()),
            });
        }
        let row = fields
            .iter()
            .map(|f| {
                f.trim().parse::<f64>().map_err(|e| CsvError::Parse {
                    line: i + 2,
                    reason: format!("{f:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CsvError> {
    table_from_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64) -> DiagnosticsRecord {
        let mut k = 0.0;
        let mut next = || {
            k += 1.0;
            (t + k).sqrt() / 3.0 * 1e-7f64.powf(k / 10.0)
        };
        DiagnosticsRecord {
            t,
            mass: next(),
            energy: next(),
            bd_entropy: -next(),
            min_xi: next(),
            max_xi: next(),
            bound_lower: next(),
            bound_upper: next(),
            dissipation: ENERGY_DISSIPATION_NAMES
                .iter()
                .chain(&BD_DISSIPATION_NAMES)
                .map(|n| (n.to_string(), next()))
                .collect(),
            identity_residuals: IDENTITY_NAMES.iter().map(|n| (n.to_string(), next())).collect(),
        }
    }

    #[test]
    fn empty_list_gives_header_only() {
        let text = diagnostics_to_string(&[]).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("t,mass,energy,bd_entropy,min_xi,max_xi,bound_lower,bound_upper,eps_density,"));
        assert!(diagnostics_from_str(&text).unwrap().is_empty());
    }

    #[test]
    fn records_round_trip_bit_exactly() {
        let recs: Vec<_> = (0..5).map(|i| record(0.1 * i as f64 + 1e-3)).collect();
        let text = diagnostics_to_string(&recs).unwrap();
        let back = diagnostics_from_str(&text).unwrap();
        assert_eq!(back, recs);
        for (a, b) in back.iter().zip(&recs) {
            assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        }
        assert_eq!(diagnostics_to_string(&back).unwrap(), text);
    }

    #[test]
    fn unknown_columns_are_rejected() {
        let text = diagnostics_to_string(&[record(0.0)]).unwrap();
        let renamed = text.replacen("energy", "enrgy", 1);
        assert!(matches!(diagnostics_from_str(&renamed), Err(CsvError::Schema(_))));
        let mut bad = record(0.0);
        bad.dissipation.insert("extra".into(), 1.0);
        assert!(matches!(diagnostics_to_string(&[bad]), Err(CsvError::Schema(_))));
    }

    #[test]
    fn special_values_round_trip() {
        let cols = ["a", "b"];
        let rows = vec![vec![f64::MIN_POSITIVE, -0.0], vec![f64::MAX, 1.0 / 3.0], vec![f64::NAN, f64::INFINITY]];
        let (h, back) = table_from_str(&table_to_string(&cols, &rows)).unwrap();
        assert_eq!(h, cols);
        assert_eq!(back[0][0].to_bits(), rows[0][0].to_bits());
        assert_eq!(back[0][1].to_bits(), rows[0][1].to_bits());
        assert_eq!(back[1], rows[1]);
        assert!(back[2][0].is_nan() && back[2][1] == f64::INFINITY);
    }
}
