//! Little-endian binary snapshots: `"QGSW"`, version `u32`, `n` `u32`, length `f64`, then `n²` values.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField};

const MAGIC: &[u8; 4] = b"QGSW";
const VERSION: u32 = 1;

pub fn write_snapshot_to(mut w: impl Write, field: &ScalarField) -> Result<()> {
    let grid = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&grid.length().to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot_from(mut r: impl Read) -> Result<ScalarField> {
    let mut head = [0u8; 20];
    r.read_exact(&mut head)
        .map_err(|_| Error::Format("snapshot header is truncated".into()))?;
    if &head[..4] != MAGIC {
        return Err(Error::Format("not a snapshot file (bad magic)".into()));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Format(format!("unsupported snapshot version {version}")));
    }
    let n = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
    let length = f64::from_le_bytes(head[12..20].try_into().unwrap());
    let grid = Grid::new(n, length)?;
    let mut bytes = vec![0u8; grid.len() * 8];
    r.read_exact(&mut bytes)
        .map_err(|_| Error::Format(format!("snapshot body is shorter than {n}x{n} values")))?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after snapshot body".into()));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ScalarField::from_values(&grid, values)
}

pub fn write_snapshot(path: impl AsRef<Path>, field: &ScalarField) -> Result<()> {
    write_snapshot_to(BufWriter::new(File::create(path)?), field)
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<ScalarField> {
    read_snapshot_from(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bitwise() {
        let g = Grid::new(16, 3.5).unwrap();
        let f = ScalarField::from_fn(&g, |x, y| (x * 1.7).sin() * y.exp());
        let mut buf = Vec::new();
        write_snapshot_to(&mut buf, &f).unwrap();
        assert_eq!(buf.len(), 20 + 16 * 16 * 8);
        let back = read_snapshot_from(buf.as_slice()).unwrap();
        assert_eq!(back.grid(), &g);
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn corrupt_input_is_reported() {
        let g = Grid::periodic(8).unwrap();
        let mut buf = Vec::new();
        write_snapshot_to(&mut buf, &ScalarField::zeros(&g)).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_snapshot_from(bad.as_slice()), Err(Error::Format(_))));
        assert!(matches!(
            read_snapshot_from(&buf[..buf.len() - 3]),
            Err(Error::Format(_))
        ));
        let mut long = buf;
        long.push(0);
        assert!(matches!(read_snapshot_from(long.as_slice()), Err(Error::Format(_))));
    }
}
