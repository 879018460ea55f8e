//! The "CPE1" binary snapshot.
//!
//! Layout, little-endian throughout:
//!
//! | bytes | content |
//! |---|---|
//! | 4 | magic `CPE1` |
//! | 4 | format version, u32 = 1 |
//! | 12 | `nx1`, `nx2`, `nz` as u32 |
//! | 16 | `h`, `t` as f64 |
//! | 80 | parameters as f64 in [`PARAM_NAMES`](crate::momentum::PARAM_NAMES) order |
//! | 8·n2 | `ξ`, `x1` fastest |
//! | 2·8·n3 | `u1` then `u2`, `x1` fastest then `x2` then `z` |
//! | 4 | CRC32 of the payload (`ξ`, `u1`, `u2`) |

use std::path::Path;

use thiserror::Error;

use crate::hydrostatic::ReducedState;
use crate::momentum::Params;
use crate::spectral::{DomainSpec, Field2, Field3, Parity};

pub const MAGIC: &[u8; 4] = b"CPE1";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 12 + 16 + 80;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("not a snapshot: bad magic bytes")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    VersionUnsupported(u32),
    #[error("snapshot checksum mismatch (file truncated or corrupted)")]
    ChecksumMismatch,
    #[error("snapshot header invalid: {0}")]
    InvalidHeader(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Contents of a snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub spec: DomainSpec,
    pub params: Params,
    pub state: ReducedState,
}

/// Serialises a snapshot to bytes.
pub fn encode(spec: &DomainSpec, state: &ReducedState, params: &Params) -> Vec<u8> {
    let n2 = spec.n2();
    let n3 = spec.n3();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * (n2 + 2 * n3) + 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for n in [spec.nx1, spec.nx2, spec.nz] {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    out.extend_from_slice(&spec.h.to_le_bytes());
    out.extend_from_slice(&state.t.to_le_bytes());
    for v in params.to_array() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let start = out.len();
    for v in state.xi.data.iter().chain(&state.u[0].data).chain(&state.u[1].data) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let crc = crc32fast::hash(&out[start..]);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().expect("four bytes"))
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("eight bytes"))
}

/// Parses snapshot bytes, validating magic, version, length and checksum.
pub fn decode(bytes: &[u8]) -> Result<Snapshot, SnapshotError> {
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let version = u32_at(bytes, 4);
    if version != VERSION {
        return Err(SnapshotError::VersionUnsupported(version));
    }
    if bytes.len() < HEADER_LEN {
        return Err(SnapshotError::ChecksumMismatch);
    }
    let dims = [u32_at(bytes, 8), u32_at(bytes, 12), u32_at(bytes, 16)].map(|v| v as usize);
    let h = f64_at(bytes, 20);
    let t = f64_at(bytes, 28);
    let mut pa = [0.0; 10];
    for (i, v) in pa.iter_mut().enumerate() {
        *v = f64_at(bytes, 36 + 8 * i);
    }
    let spec = DomainSpec::new(dims[0], dims[1], dims[2], h)
        .map_err(|e| SnapshotError::InvalidHeader(e.to_string()))?;
    let (n2, n3) = (spec.n2(), spec.n3());
    let payload_len = 8 * (n2 + 2 * n3);
    if bytes.len() != HEADER_LEN + payload_len + 4 {
        return Err(SnapshotError::ChecksumMismatch);
    }
    let payload = &bytes[HEADER_LEN..HEADER_LEN + payload_len];
    if crc32fast::hash(payload) != u32_at(bytes, HEADER_LEN + payload_len) {
        return Err(SnapshotError::ChecksumMismatch);
    }
    let values: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("eight bytes")))
        .collect();
    let xi = Field2 { data: values[..n2].to_vec() };
    let u1 = Field3 { data: values[n2..n2 + n3].to_vec(), parity: Parity::Even };
    let u2 = Field3 { data: values[n2 + n3..].to_vec(), parity: Parity::Even };
    Ok(Snapshot {
        spec,
        params: Params::from_array(pa),
        state: ReducedState { t, xi, u: [u1, u2] },
    })
}

/// Writes a snapshot atomically.
pub fn write_snapshot(
    path: &Path,
    spec: &DomainSpec,
    state: &ReducedState,
    params: &Params,
) -> Result<(), SnapshotError> {
    if state.xi.len() != spec.n2() || state.u.iter().any(|c| c.len() != spec.n3()) {
        return Err(SnapshotError::InvalidHeader("state does not match the grid".into()));
    }
    super::write_atomic(path, &encode(spec, state, params))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot, SnapshotError> {
    decode(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{band_limited3, density};
    use crate::spectral::make_basis;

    fn sample() -> (DomainSpec, ReducedState, Params) {
        let spec = DomainSpec::new(16, 8, 5, 0.5).unwrap();
        let b = make_basis(spec).unwrap();
        let xi = density(&b, 1, 1.0, 0.3, 0.6);
        let u = [
            band_limited3(&b, Parity::Even, 2, 0.4, 0.6),
            band_limited3(&b, Parity::Even, 3, 0.4, 0.6),
        ];
        (spec, ReducedState { t: 0.125, xi, u }, Params::default())
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (spec, state, params) = sample();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.cpe");
        write_snapshot(&path, &spec, &state, &params).unwrap();
        let snap = read_snapshot(&path).unwrap();
        assert_eq!(snap.spec, spec);
        assert_eq!(snap.params, params);
        assert_eq!(snap.state, state);
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[..4], b"CPE1");
        assert_eq!(bytes.len(), HEADER_LEN + 8 * (spec.n2() + 2 * spec.n3()) + 4);
        assert_eq!(bytes, encode(&spec, &state, &params));
    }

    #[test]
    fn damaged_files_are_rejected() {
        let (spec, state, params) = sample();
        let bytes = encode(&spec, &state, &params);
        for cut in [bytes.len() - 1, bytes.len() / 2, HEADER_LEN, 20] {
            assert!(matches!(decode(&bytes[..cut]), Err(SnapshotError::ChecksumMismatch)), "{cut}");
        }
        let mut flipped = bytes.clone();
        flipped[HEADER_LEN + 3] ^= 0x10;
        assert!(matches!(decode(&flipped), Err(SnapshotError::ChecksumMismatch)));
        let mut magic = bytes.clone();
        magic[0] = b'X';
        assert!(matches!(decode(&magic), Err(SnapshotError::BadMagic)));
        let mut version = bytes;
        version[4] = 2;
        assert!(matches!(decode(&version), Err(SnapshotError::VersionUnsupported(2))));
    }
}
