//! `FGS1` snapshot files.
//!
//! Layout, all little-endian: magic `FGS1`, `u32 N_x`, `u32 N_y`,
//! `f64 a, b, c, d, alpha, t`, then `(N_x-1)(N_y-1)` row-major `f64` values of
//! `U` followed by the same for `V`.

use crate::error::{Error, Result};
use crate::solver::{Domain2D, FieldPair};
use ndarray::Array2;
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"FGS1";
const HEADER_LEN: usize = 4 + 2 * 4 + 6 * 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub domain: Domain2D,
    pub alpha: f64,
    pub t: f64,
    pub state: FieldPair,
}

impl Snapshot {
    pub fn encode(&self) -> Vec<u8> {
        let (a, b, c, d) = self.domain.bounds();
        let cells = self.state.u.len();
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * cells);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.domain.nx() as u32).to_le_bytes());
        out.extend_from_slice(&(self.domain.ny() as u32).to_le_bytes());
        for v in [a, b, c, d, self.alpha, self.t] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for field in [&self.state.u, &self.state.v] {
            for v in field.iter() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let bad = |reason: String| Error::Snapshot {
            path: Default::default(),
            reason,
        };
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated {
                expected: HEADER_LEN,
                actual: bytes.len(),
            });
        }
        if &bytes[..4] != MAGIC {
            return Err(bad(format!("bad magic {:?}, expected \"FGS1\"", &bytes[..4])));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let nx = u32_at(4);
        let ny = u32_at(8);
        let vals: Vec<f64> = (0..6).map(|k| f64_at(12 + 8 * k)).collect();
        let domain = Domain2D::new(vals[0], vals[1], vals[2], vals[3], nx, ny)
            .map_err(|e| bad(format!("invalid header: {e}")))?;
        let (rows, cols) = domain.interior_shape();
        let cells = rows * cols;
        let expected = HEADER_LEN + 16 * cells;
        if bytes.len() < expected {
            return Err(Error::Truncated {
                expected,
                actual: bytes.len(),
            });
        }
        if bytes.len() > expected {
            return Err(bad(format!(
                "payload of {} bytes does not match the {}x{} interior declared in the header ({expected} bytes)",
                bytes.len(),
                rows,
                cols
            )));
        }
        let read_field = |start: usize| {
            let data: Vec<f64> = (0..cells).map(|k| f64_at(start + 8 * k)).collect();
            Array2::from_shape_vec((rows, cols), data).expect("length checked")
        };
        let u = read_field(HEADER_LEN);
        let v = read_field(HEADER_LEN + 8 * cells);
        Ok(Snapshot {
            domain,
            alpha: vals[4],
            t: vals[5],
            state: FieldPair { u, v },
        })
    }
}

pub fn write_snapshot(path: &Path, snapshot: &Snapshot) -> Result<()> {
    std::fs::write(path, snapshot.encode()).map_err(|e| Error::Snapshot {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let bytes = std::fs::read(path).map_err(|e| Error::Snapshot {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    Snapshot::decode(&bytes).map_err(|e| match e {
        Error::Snapshot { reason, .. } => Error::Snapshot {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    })
}
