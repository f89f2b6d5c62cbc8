//! Writes a vorticity snapshot in the binary layout read by `qgsw norms`, then reads it back.
//!
//! `cargo run --example snapshot_io -- [path]`

use qgsw::spectral::{Grid, ScalarField};
use qgsw::transport::{read_snapshot, write_snapshot};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("qgsw_example.qgsw").display().to_string());
    let grid = Grid::periodic(64)?;
    let field = ScalarField::from_fn(&grid, |x, y| (2.0 * x).sin() * y.cos());
    write_snapshot(&path, &field)?;
    let back = read_snapshot(&path)?;
    let bytes = std::fs::metadata(&path)?.len();
    println!("{path}: {bytes} bytes, n = {}, length = {:.6}", back.grid().n(), back.grid().length());
    println!("bitwise identical: {}", back.values() == field.values());
    Ok(())
}
