//! Binary channel trace files.
//!
//! Layout (all integers `u32` little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "SNCT"
//! 4       4     version (= 1)
//! 8       4     m_rx
//! 12      4     m_tx
//! 16      4     k_up
//! 20      4     k_down
//! 24      4     n_subcarriers
//! 28      ...   per subcarrier: h_self (m_rx×m_tx), h_up (m_rx×k_up),
//!               h_down (k_down×m_tx), h_usr (k_down×k_up)
//! ```
//!
//! Matrices are row-major; each entry is two IEEE-754 little-endian `f64`
//! (real, imaginary). An absent `h_usr` is written as zeros and an all-zero
//! `h_usr` reads back as absent.
//!
//! A sidecar with the same stem and a `.meta` extension may hold free-form
//! `key = value` metadata.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ChannelSet;
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

pub const MAGIC: [u8; 4] = *b"SNCT";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 28;
const ENTRY_LEN: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("bad magic at byte 0: expected \"SNCT\", found {found:?}")]
    BadMagic { found: Vec<u8> },

    #[error("unsupported trace version {version} at byte 4")]
    UnsupportedVersion { version: u32 },

    #[error("truncated trace: needed {needed} bytes, file ends at byte {offset}")]
    Truncated { offset: usize, needed: usize },

    #[error("dimension mismatch at byte {offset}: {detail}")]
    DimensionMismatch { offset: usize, detail: String },

    #[error("non-finite matrix entry at byte {offset}")]
    NonFinite { offset: usize },
}

/// Serializes a list of per-subcarrier channel sets. All sets must share
/// dimensions.
pub fn encode_trace(sets: &[ChannelSet]) -> Result<Vec<u8>> {
    let first = sets
        .first()
        .ok_or_else(|| Error::Argument("cannot write an empty trace".into()))?;
    let dims = (first.m_rx(), first.m_tx(), first.k_up(), first.k_down());
    for (i, s) in sets.iter().enumerate() {
        s.validate()?;
        let d = (s.m_rx(), s.m_tx(), s.k_up(), s.k_down());
        if d != dims {
            return Err(Error::Dimension(format!(
                "subcarrier {i} has dimensions {d:?}, expected {dims:?}"
            )));
        }
    }
    let to_u32 = |v: usize, what: &str| {
        u32::try_from(v).map_err(|_| Error::Argument(format!("{what} = {v} does not fit in u32")))
    };

    let mut out = Vec::with_capacity(HEADER_LEN + sets.len() * subcarrier_len(dims).unwrap_or(0));
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&to_u32(dims.0, "m_rx")?.to_le_bytes());
    out.extend_from_slice(&to_u32(dims.1, "m_tx")?.to_le_bytes());
    out.extend_from_slice(&to_u32(dims.2, "k_up")?.to_le_bytes());
    out.extend_from_slice(&to_u32(dims.3, "k_down")?.to_le_bytes());
    out.extend_from_slice(&to_u32(sets.len(), "n_subcarriers")?.to_le_bytes());
    for s in sets {
        write_matrix(&mut out, &s.h_self);
        write_matrix(&mut out, &s.h_up);
        write_matrix(&mut out, &s.h_down);
        write_matrix(&mut out, &s.h_usr_or_zero());
    }
    Ok(out)
}

fn write_matrix(out: &mut Vec<u8>, m: &ComplexMatrix) {
    for z in m.as_slice() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
}

fn subcarrier_len((m_rx, m_tx, k_up, k_down): (usize, usize, usize, usize)) -> Option<usize> {
    let entries = m_rx
        .checked_mul(m_tx)?
        .checked_add(m_rx.checked_mul(k_up)?)?
        .checked_add(k_down.checked_mul(m_tx)?)?
        .checked_add(k_down.checked_mul(k_up)?)?;
    entries.checked_mul(ENTRY_LEN)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> std::result::Result<&[u8], TraceError> {
        if self.buf.len() - self.pos < n {
            return Err(TraceError::Truncated {
                offset: self.buf.len(),
                needed: self.pos + n,
            });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> std::result::Result<u32, TraceError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> std::result::Result<ComplexMatrix, TraceError> {
        let start = self.pos;
        let bytes = self.take(rows * cols * ENTRY_LEN)?;
        let mut data = Vec::with_capacity(rows * cols);
        for (i, chunk) in bytes.chunks_exact(ENTRY_LEN).enumerate() {
            let re = f64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(chunk[8..].try_into().expect("8 bytes"));
            if !re.is_finite() || !im.is_finite() {
                return Err(TraceError::NonFinite {
                    offset: start + i * ENTRY_LEN,
                });
            }
            data.push(Complex64::new(re, im));
        }
        Ok(ComplexMatrix::from_vec(rows, cols, data).expect("length and finiteness checked"))
    }
}

pub fn decode_trace(buf: &[u8]) -> std::result::Result<Vec<ChannelSet>, TraceError> {
    let mut rd = Reader { buf, pos: 0 };
    let magic = rd.take(4).map_err(|_| TraceError::BadMagic {
        found: buf[..buf.len().min(4)].to_vec(),
    })?;
    if magic != MAGIC {
        return Err(TraceError::BadMagic { found: magic.to_vec() });
    }
    let version = rd.u32()?;
    if version != VERSION {
        return Err(TraceError::UnsupportedVersion { version });
    }
    let m_rx = rd.u32()? as usize;
    let m_tx = rd.u32()? as usize;
    let k_up = rd.u32()? as usize;
    let k_down = rd.u32()? as usize;
    let n_sub = rd.u32()? as usize;

    for (name, v, off) in [("m_rx", m_rx, 8), ("m_tx", m_tx, 12), ("n_subcarriers", n_sub, 24)] {
        if v == 0 {
            return Err(TraceError::DimensionMismatch {
                offset: off,
                detail: format!("{name} must be positive"),
            });
        }
    }
    let per_sub = subcarrier_len((m_rx, m_tx, k_up, k_down)).ok_or_else(|| TraceError::DimensionMismatch {
        offset: 8,
        detail: "declared dimensions overflow".into(),
    })?;
    let expected = per_sub
        .checked_mul(n_sub)
        .and_then(|p| p.checked_add(HEADER_LEN))
        .ok_or_else(|| TraceError::DimensionMismatch {
            offset: 24,
            detail: "declared payload size overflows".into(),
        })?;
    if buf.len() < expected {
        return Err(TraceError::Truncated {
            offset: buf.len(),
            needed: expected,
        });
    }
    if buf.len() > expected {
        return Err(TraceError::DimensionMismatch {
            offset: expected,
            detail: format!(
                "{} trailing bytes after {n_sub} declared subcarriers",
                buf.len() - expected
            ),
        });
    }

    let mut sets = Vec::with_capacity(n_sub);
    for idx in 0..n_sub {
        let h_self = rd.matrix(m_rx, m_tx)?;
        let h_up = rd.matrix(m_rx, k_up)?;
        let h_down = rd.matrix(k_down, m_tx)?;
        let h_usr = rd.matrix(k_down, k_up)?;
        let all_zero = h_usr
            .as_slice()
            .iter()
            .all(|z| z.re.to_bits() == 0 && z.im.to_bits() == 0);
        sets.push(ChannelSet {
            h_self,
            h_up,
            h_down,
            h_usr: if all_zero { None } else { Some(h_usr) },
            subcarrier_index: idx,
        });
    }
    Ok(sets)
}

pub fn save_trace(path: impl AsRef<Path>, sets: &[ChannelSet]) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_trace(sets)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Vec<ChannelSet>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(decode_trace(&bytes)?)
}

pub fn sidecar_path(path: impl AsRef<Path>) -> PathBuf {
    path.as_ref().with_extension("meta")
}

pub fn write_sidecar(trace_path: impl AsRef<Path>, meta: &BTreeMap<String, String>) -> Result<()> {
    let path = sidecar_path(trace_path);
    let mut text = String::new();
    for (k, v) in meta {
        if k.contains(['=', '\n']) || k.trim() != k || k.is_empty() || v.contains('\n') {
            return Err(Error::Argument(format!("metadata entry {k:?} cannot be represented")));
        }
        text.push_str(&format!("{k} = {v}\n"));
    }
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

/// Reads the sidecar next to a trace, or `None` when there is none.
pub fn read_sidecar(trace_path: impl AsRef<Path>) -> Result<Option<BTreeMap<String, String>>> {
    let path = sidecar_path(trace_path);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(&path, e)),
    };
    let mut meta = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{}:{}: expected key = value", path.display(), n + 1)))?;
        meta.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(Some(meta))
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl MatrixRecord {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        }
    }

    fn into_matrix(self) -> Result<ComplexMatrix> {
        if self.re.len() != self.im.len() {
            return Err(Error::Dimension(format!(
                "{} real parts but {} imaginary parts",
                self.re.len(),
                self.im.len()
            )));
        }
        let data = self.re.into_iter().zip(self.im).map(|(r, i)| Complex64::new(r, i)).collect();
        ComplexMatrix::from_vec(self.rows, self.cols, data)
    }
}

#[derive(Serialize, Deserialize)]
struct SetRecord {
    subcarrier_index: usize,
    h_self: MatrixRecord,
    h_up: MatrixRecord,
    h_down: MatrixRecord,
    h_usr: Option<MatrixRecord>,
}

/// JSON mirror of a trace: an array of per-subcarrier records whose
/// matrices are `{rows, cols, re, im}` with row-major component arrays.
/// Floats round-trip exactly.
pub fn trace_to_json(sets: &[ChannelSet]) -> String {
    let records: Vec<SetRecord> = sets
        .iter()
        .map(|s| SetRecord {
            subcarrier_index: s.subcarrier_index,
            h_self: MatrixRecord::from_matrix(&s.h_self),
            h_up: MatrixRecord::from_matrix(&s.h_up),
            h_down: MatrixRecord::from_matrix(&s.h_down),
            h_usr: s.h_usr.as_ref().map(MatrixRecord::from_matrix),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&records).expect("trace records serialize");
    text.push('\n');
    text
}

pub fn trace_from_json(text: &str) -> Result<Vec<ChannelSet>> {
    let records: Vec<SetRecord> =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON trace: {e}")))?;
    records
        .into_iter()
        .map(|r| {
            let mut set = ChannelSet::new(
                r.h_self.into_matrix()?,
                r.h_up.into_matrix()?,
                r.h_down.into_matrix()?,
                r.h_usr.map(MatrixRecord::into_matrix).transpose()?,
            )?;
            set.subcarrier_index = r.subcarrier_index;
            Ok(set)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random_complex_gaussian;

    fn sample(seed: u64, usr: bool) -> ChannelSet {
        ChannelSet::new(
            random_complex_gaussian(3, 2, 1.0, seed),
            random_complex_gaussian(3, 1, 1.0, seed + 1),
            random_complex_gaussian(2, 2, 1.0, seed + 2),
            usr.then(|| random_complex_gaussian(2, 1, 1.0, seed + 3)),
        )
        .unwrap()
    }

    #[test]
    fn header_layout_is_exact() {
        let bytes = encode_trace(&[sample(1, false)]).unwrap();
        assert_eq!(&bytes[..4], b"SNCT");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &3u32.to_le_bytes());
        assert_eq!(&bytes[12..16], &2u32.to_le_bytes());
        assert_eq!(&bytes[16..20], &1u32.to_le_bytes());
        assert_eq!(&bytes[20..24], &2u32.to_le_bytes());
        assert_eq!(&bytes[24..28], &1u32.to_le_bytes());
        assert_eq!(bytes.len(), 28 + (6 + 3 + 4 + 2) * 16);
        let s = sample(1, false);
        assert_eq!(&bytes[28..36], &s.h_self[(0, 0)].re.to_le_bytes());
        assert_eq!(&bytes[36..44], &s.h_self[(0, 0)].im.to_le_bytes());
    }

    #[test]
    fn round_trip() {
        let sets: Vec<ChannelSet> = (0..3)
            .map(|i| {
                let mut s = sample(10 * i, i % 2 == 0);
                s.subcarrier_index = i as usize;
                s
            })
            .collect();
        let back = decode_trace(&encode_trace(&sets).unwrap()).unwrap();
        assert_eq!(back, sets);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut sets = vec![sample(3, true), sample(4, false)];
        sets[1].subcarrier_index = 1;
        sets[0].h_self[(0, 0)] = Complex64::new(0.1 + 0.2, -1e-300);
        let back = trace_from_json(&trace_to_json(&sets)).unwrap();
        assert_eq!(back, sets);
        assert!(trace_from_json("[{}]").is_err());
    }

    #[test]
    fn wrong_magic() {
        let mut bytes = encode_trace(&[sample(1, false)]).unwrap();
        bytes[0] = b'X';
        assert!(matches!(decode_trace(&bytes), Err(TraceError::BadMagic { .. })));
        assert!(matches!(decode_trace(b"SN"), Err(TraceError::BadMagic { .. })));
    }

    #[test]
    fn declared_two_subcarriers_with_one_payload() {
        let mut bytes = encode_trace(&[sample(1, true)]).unwrap();
        bytes[24..28].copy_from_slice(&2u32.to_le_bytes());
        let len = bytes.len();
        match decode_trace(&bytes) {
            Err(TraceError::Truncated { offset, needed }) => {
                assert_eq!(offset, len);
                assert_eq!(needed, 28 + 2 * (len - 28));
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn trailing_bytes_and_version() {
        let mut bytes = encode_trace(&[sample(1, false)]).unwrap();
        bytes.push(0);
        assert!(matches!(decode_trace(&bytes), Err(TraceError::DimensionMismatch { .. })));
        let mut bytes = encode_trace(&[sample(1, false)]).unwrap();
        bytes[4] = 2;
        assert_eq!(decode_trace(&bytes), Err(TraceError::UnsupportedVersion { version: 2 }));
        let mut bytes = encode_trace(&[sample(1, false)]).unwrap();
        bytes[8..12].copy_from_slice(&0u32.to_le_bytes());
        assert!(matches!(
            decode_trace(&bytes),
            Err(TraceError::DimensionMismatch { offset: 8, .. })
        ));
    }

    #[test]
    fn non_finite_payload_names_offset() {
        let mut bytes = encode_trace(&[sample(1, false)]).unwrap();
        bytes[28 + 16..28 + 24].copy_from_slice(&f64::NAN.to_le_bytes());
        assert_eq!(decode_trace(&bytes), Err(TraceError::NonFinite { offset: 44 }));
    }

    #[test]
    fn mixed_dimensions_refused() {
        let a = sample(1, false);
        let b = ChannelSet::new(
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::zeros(2, 1),
            ComplexMatrix::zeros(2, 2),
            None,
        )
        .unwrap();
        assert!(encode_trace(&[a, b]).is_err());
        assert!(encode_trace(&[]).is_err());
    }

    #[test]
    fn sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let trace = dir.path().join("run1.snct");
        assert_eq!(read_sidecar(&trace).unwrap(), None);
        let mut meta = BTreeMap::new();
        meta.insert("site".to_string(), "anechoic chamber".to_string());
        meta.insert("carrier_hz".to_string(), "2.437e9".to_string());
        write_sidecar(&trace, &meta).unwrap();
        assert_eq!(sidecar_path(&trace), dir.path().join("run1.meta"));
        assert_eq!(read_sidecar(&trace).unwrap(), Some(meta));
    }
}
