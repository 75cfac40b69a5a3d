//! Binary operator dumps: one JSON header line `{"N":…,"K":…,"eps":…}`
//! followed by the `N x N` matrix in column-major order, each entry as two
//! little-endian `f64` (real, imaginary).

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::TruncatedOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DumpHeader {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub eps: f64,
}

pub fn write_dump(op: &TruncatedOperator, path: &Path) -> Result<()> {
    let header = DumpHeader {
        n: op.n(),
        k: op.probe_dim(),
        eps: op.tail_bound(),
    };
    let mut bytes = serde_json::to_vec(&header).map_err(|e| Error::Dump(e.to_string()))?;
    bytes.push(b'\n');
    bytes.reserve(16 * op.n() * op.n());
    for x in op.matrix().iter() {
        bytes.extend_from_slice(&x.re.to_le_bytes());
        bytes.extend_from_slice(&x.im.to_le_bytes());
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_dump(path: &Path) -> Result<(DumpHeader, DMatrix<Complex64>)> {
    let bytes = fs::read(path)?;
    let split = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Dump("missing header line".into()))?;
    let header: DumpHeader = serde_json::from_slice(&bytes[..split]).map_err(|e| Error::Dump(e.to_string()))?;
    let body = &bytes[split + 1..];
    let expected = 16 * header.n * header.n;
    if body.len() != expected {
        return Err(Error::Dump(format!(
            "expected {expected} payload bytes for N = {}, found {}",
            header.n,
            body.len()
        )));
    }
    let values: Vec<Complex64> = body
        .chunks_exact(16)
        .map(|ch| {
            let re = f64::from_le_bytes(ch[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(ch[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Ok((header, DMatrix::from_vec(header.n, header.n, values)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_function::InnerSymbol;

    #[test]
    fn dump_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bin");
        let sym = InnerSymbol::blaschke(&[Complex64::new(0.3, -0.4)]).unwrap();
        let op = TruncatedOperator::mult_operator(&sym, 12);
        write_dump(&op, &path).unwrap();
        let (header, m) = read_dump(&path).unwrap();
        assert_eq!(header.n, 12);
        assert_eq!(header.k, op.probe_dim());
        assert_eq!(&m, op.matrix());
        let mut raw = fs::read(&path).unwrap();
        raw.truncate(raw.len() - 3);
        fs::write(&path, raw).unwrap();
        assert!(matches!(read_dump(&path), Err(Error::Dump(_))));
    }
}
