//! Wave-function file formats.
//!
//! Binary dump layout (all little-endian):
//!
//! ```text
//! offset  size  field
//!      0     4  magic "ONTO"
//!      4     4  version (u32, currently 1)
//!      8     4  n_particles (u32)
//!     12     4  space_dim (u32)
//!     16     4  points_per_axis (u32)
//!     20     8  extent_min (f64)
//!     28     8  extent_max (f64)
//!     36   16G  amplitudes, interleaved re/im f64, row-major flat order
//! ```
//!
//! The dump stores geometry and amplitudes only; the time stamp is run
//! metadata and lives in the manifest. CSV export writes one row per grid
//! point: the coordinate of each axis, re, im, and `|psi|^2`, printed with 17
//! significant digits so every f64 round-trips exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::grid::{GridError, GridSpec, WaveFunction};

pub const DUMP_MAGIC: [u8; 4] = *b"ONTO";
pub const DUMP_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("bad magic {got:?} at offset 0 (expected \"ONTO\")")]
    BadMagic { got: [u8; 4] },
    #[error("unsupported dump version {0}")]
    UnsupportedVersion(u32),
    #[error("file truncated at offset {offset}: needed {needed} more bytes")]
    Truncated { offset: u64, needed: usize },
    #[error("trailing garbage after {expected} amplitudes")]
    TrailingData { expected: usize },
    #[error("csv parse error at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Write the binary dump format.
pub fn write_dump(path: &Path, psi: &WaveFunction) -> Result<(), DumpError> {
    let grid = psi.grid();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&DUMP_MAGIC)?;
    w.write_all(&DUMP_VERSION.to_le_bytes())?;
    w.write_all(&(grid.n_particles() as u32).to_le_bytes())?;
    w.write_all(&(grid.space_dim() as u32).to_le_bytes())?;
    w.write_all(&(grid.points_per_axis() as u32).to_le_bytes())?;
    w.write_all(&grid.extent_min().to_le_bytes())?;
    w.write_all(&grid.extent_max().to_le_bytes())?;
    for a in psi.amplitudes() {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Read the binary dump format. The loaded state carries time 0.
pub fn read_dump(path: &Path) -> Result<WaveFunction, DumpError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut offset = 0u64;

    let read_exact =
        |r: &mut BufReader<File>, buf: &mut [u8], offset: &mut u64| -> Result<(), DumpError> {
            let mut filled = 0;
            while filled < buf.len() {
                let n = r.read(&mut buf[filled..])?;
                if n == 0 {
                    return Err(DumpError::Truncated {
                        offset: *offset + filled as u64,
                        needed: buf.len() - filled,
                    });
                }
                filled += n;
            }
            *offset += buf.len() as u64;
            Ok(())
        };

    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic, &mut offset)?;
    if magic != DUMP_MAGIC {
        return Err(DumpError::BadMagic { got: magic });
    }
    let mut u32buf = [0u8; 4];
    read_exact(&mut r, &mut u32buf, &mut offset)?;
    let version = u32::from_le_bytes(u32buf);
    if version != DUMP_VERSION {
        return Err(DumpError::UnsupportedVersion(version));
    }
    read_exact(&mut r, &mut u32buf, &mut offset)?;
    let n_particles = u32::from_le_bytes(u32buf) as usize;
    read_exact(&mut r, &mut u32buf, &mut offset)?;
    let space_dim = u32::from_le_bytes(u32buf) as usize;
    read_exact(&mut r, &mut u32buf, &mut offset)?;
    let points = u32::from_le_bytes(u32buf) as usize;
    let mut f64buf = [0u8; 8];
    read_exact(&mut r, &mut f64buf, &mut offset)?;
    let extent_min = f64::from_le_bytes(f64buf);
    read_exact(&mut r, &mut f64buf, &mut offset)?;
    let extent_max = f64::from_le_bytes(f64buf);

    if space_dim != 1 {
        return Err(DumpError::Grid(GridError::GridMismatch));
    }
    let grid = GridSpec::new_1d(n_particles, extent_min, extent_max, points)?;
    let mut amplitudes = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        read_exact(&mut r, &mut f64buf, &mut offset)?;
        let re = f64::from_le_bytes(f64buf);
        read_exact(&mut r, &mut f64buf, &mut offset)?;
        let im = f64::from_le_bytes(f64buf);
        amplitudes.push(Complex64::new(re, im));
    }
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(DumpError::TrailingData {
            expected: grid.len(),
        });
    }
    Ok(WaveFunction::new(grid, amplitudes, 0.0)?)
}

/// Format an f64 with 17 significant digits (lossless round trip).
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV export: header `x1,..,xN,re,im,abs2`, one row per grid point in flat
/// row-major order.
pub fn write_csv(path: &Path, psi: &WaveFunction) -> Result<(), DumpError> {
    let grid = psi.grid();
    let mut w = BufWriter::new(File::create(path)?);
    let mut header = String::new();
    for a in 0..grid.dim() {
        header.push_str(&format!("x{},", a + 1));
    }
    header.push_str("re,im,abs2");
    writeln!(w, "{header}")?;
    for (flat, amp) in psi.amplitudes().iter().enumerate() {
        let coords = grid.flat_to_coordinates(flat);
        for c in coords {
            write!(w, "{},", format_f64(c))?;
        }
        writeln!(
            w,
            "{},{},{}",
            format_f64(amp.re),
            format_f64(amp.im),
            format_f64(amp.norm_sqr())
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Rebuild a wave function from a CSV produced by [`write_csv`]. The grid is
/// reconstructed from the coordinate columns; amplitudes round-trip exactly.
pub fn read_csv(path: &Path) -> Result<WaveFunction, DumpError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DumpError::Csv {
        line: 1,
        message: "empty file".into(),
    })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 4 || cols[cols.len() - 3] != "re" || cols[cols.len() - 2] != "im" {
        return Err(DumpError::Csv {
            line: 1,
            message: format!("unexpected header {header:?}"),
        });
    }
    let dim = cols.len() - 3;

    let mut fast_axis_coords: Vec<f64> = Vec::new();
    let mut amplitudes: Vec<Complex64> = Vec::new();
    let mut first_coords: Vec<f64> = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(DumpError::Csv {
                line: i + 1,
                message: format!("expected {} fields, got {}", cols.len(), fields.len()),
            });
        }
        let parse = |s: &str, line: usize| -> Result<f64, DumpError> {
            s.parse::<f64>().map_err(|e| DumpError::Csv {
                line,
                message: format!("bad float {s:?}: {e}"),
            })
        };
        if amplitudes.is_empty() {
            for f in &fields[..dim] {
                first_coords.push(parse(f, i + 1)?);
            }
        }
        // Track the last axis to recover M (it varies fastest).
        fast_axis_coords.push(parse(fields[dim - 1], i + 1)?);
        let re = parse(fields[dim], i + 1)?;
        let im = parse(fields[dim + 1], i + 1)?;
        amplitudes.push(Complex64::new(re, im));
    }
    if amplitudes.is_empty() {
        return Err(DumpError::Csv {
            line: 2,
            message: "no data rows".into(),
        });
    }

    let total = amplitudes.len();
    let m = (total as f64).powf(1.0 / dim as f64).round() as usize;
    if m.pow(dim as u32) != total {
        return Err(DumpError::Csv {
            line: 2,
            message: format!("{total} rows is not an M^{dim} grid"),
        });
    }
    // Spacing from the fastest axis; extent from the first node.
    if m < 2 {
        return Err(DumpError::Csv {
            line: 2,
            message: "grid too small".into(),
        });
    }
    let x0 = fast_axis_coords[0];
    let dx = fast_axis_coords[1] - x0;
    if !(dx > 0.0) {
        return Err(DumpError::Csv {
            line: 3,
            message: "coordinates not increasing".into(),
        });
    }
    let extent_min = first_coords[dim - 1];
    let extent_max = extent_min + dx * m as f64;
    let grid = GridSpec::new_1d(dim, extent_min, extent_max, m)?;
    Ok(WaveFunction::new(grid, amplitudes, 0.0)?)
}
