//! Binary container for dense f64 matrices: a fixed header (magic,
//! version, dimensions, dtype) followed by row-major little-endian
//! payload. Callers pair the file with a JSON sidecar carrying
//! provenance.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"SNMF";
const VERSION: u32 = 1;
const DTYPE_F64: u8 = 1;

pub fn write_matrix(path: &Path, m: &Array2<f64>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    w.write_all(&[DTYPE_F64])?;
    for &x in m.iter() {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<Array2<f64>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::MatrixFormat(format!("bad magic {magic:?}")));
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf)?;
    let version = u32::from_le_bytes(u32buf);
    if version != VERSION {
        return Err(Error::MatrixFormat(format!("unsupported version {version}")));
    }
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u64buf)?;
    let rows = u64::from_le_bytes(u64buf) as usize;
    r.read_exact(&mut u64buf)?;
    let cols = u64::from_le_bytes(u64buf) as usize;
    let mut dtype = [0u8; 1];
    r.read_exact(&mut dtype)?;
    if dtype[0] != DTYPE_F64 {
        return Err(Error::MatrixFormat(format!("unsupported dtype {}", dtype[0])));
    }
    let mut data = vec![0f64; rows * cols];
    let mut f64buf = [0u8; 8];
    for x in data.iter_mut() {
        r.read_exact(&mut f64buf).map_err(|_| {
            Error::MatrixFormat(format!("payload shorter than {rows} x {cols}"))
        })?;
        *x = f64::from_le_bytes(f64buf);
    }
    if r.read(&mut f64buf)? != 0 {
        return Err(Error::MatrixFormat("trailing bytes after payload".into()));
    }
    Array2::from_shape_vec((rows, cols), data)
        .map_err(|e| Error::MatrixFormat(e.to_string()))
}

/// Conventional sidecar path: `foo.qmat` -> `foo.qmat.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

/// Writes the matrix plus a JSON sidecar next to it.
pub fn write_matrix_with_sidecar<T: Serialize>(
    path: &Path,
    m: &Array2<f64>,
    meta: &T,
) -> Result<()> {
    write_matrix(path, m)?;
    let json = serde_json::to_vec_pretty(meta)
        .map_err(|e| Error::MatrixFormat(format!("sidecar serialization: {e}")))?;
    std::fs::write(sidecar_path(path), json)?;
    Ok(())
}
