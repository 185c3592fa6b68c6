use std::fs;
use std::io::Write;
use std::path::Path;

use crate::blockdct::{BlockGrid, CoefficientPlane};
use crate::error::{Error, Result};
use crate::scan::DcPlane;

pub const MAGIC: &[u8; 4] = b"DCF1";
/// Header flag: every block's DC coefficient is exactly zero.
pub const FLAG_DC_STRIPPED: u32 = 1;

const HEADER_LEN: usize = 4 + 4 * 4;

/// Block-DCT coefficients on disk.
///
/// Layout, all little-endian: `"DCF1"`, `u32` width, `u32` height, `u32`
/// block size, `u32` flags, then `f64` coefficients: blocks in row-major
/// order, each block's coefficients row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFile {
    pub flags: u32,
    pub plane: CoefficientPlane,
}

impl CoefficientFile {
    /// Wraps a plane whose DC terms have been removed.
    pub fn dc_stripped(plane: CoefficientPlane) -> Result<Self> {
        if !plane.is_dc_free() {
            return Err(Error::InvalidValue("plane still carries DC coefficients".into()));
        }
        Ok(Self { flags: FLAG_DC_STRIPPED, plane })
    }

    pub fn is_dc_stripped(&self) -> bool {
        self.flags & FLAG_DC_STRIPPED != 0
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let grid = self.plane.grid;
        let field =
            |v: usize, name: &str| u32::try_from(v).map_err(|_| Error::InvalidValue(format!("{name} {v} exceeds u32")));
        let mut out = Vec::with_capacity(HEADER_LEN + self.plane.coeffs.len() * 8);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&field(grid.width(), "width")?.to_le_bytes());
        out.extend_from_slice(&field(grid.height(), "height")?.to_le_bytes());
        out.extend_from_slice(&field(grid.n, "block size")?.to_le_bytes());
        out.extend_from_slice(&self.flags.to_le_bytes());
        for c in &self.plane.coeffs {
            out.extend_from_slice(&c.to_le_bytes());
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Parse(format!("coefficient file too short: {} bytes", bytes.len())));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Parse(format!("bad coefficient magic {:?}", &bytes[..4])));
        }
        let word = |i: usize| {
            let at = 4 + 4 * i;
            u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes")) as usize
        };
        let (width, height, n, flags) = (word(0), word(1), word(2), word(3) as u32);
        let grid = BlockGrid::for_image(width, height, n).map_err(|e| Error::Parse(e.to_string()))?;
        let payload = &bytes[HEADER_LEN..];
        let expected = grid.block_count() * n * n * 8;
        if payload.len() != expected {
            return Err(Error::Parse(format!("payload is {} bytes, header implies {expected}", payload.len())));
        }
        let coeffs = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        let plane = CoefficientPlane::new(grid, coeffs)?;
        let file = Self { flags, plane };
        if file.is_dc_stripped() && !file.plane.is_dc_free() {
            return Err(Error::Parse("DC-stripped flag set but a DC coefficient is non-zero".into()));
        }
        Ok(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

/// Writes per-block DC values as CSV (`row,col,dc`), each value in
/// shortest round-trip form so reading it back is exact.
pub fn write_dc_sidecar(path: impl AsRef<Path>, dcs: &DcPlane) -> Result<()> {
    let grid = dcs.grid();
    let mut out = fs::File::create(path)?;
    writeln!(out, "# width={} height={} n={}", grid.width(), grid.height(), grid.n)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "dc"])?;
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            w.write_record([row.to_string(), col.to_string(), format!("{:?}", dcs.get(row, col))])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_dc_sidecar(path: impl AsRef<Path>) -> Result<DcPlane> {
    let text = fs::read_to_string(path)?;
    let (first, rest) = text.split_once('\n').ok_or_else(|| Error::Parse("empty DC sidecar".into()))?;
    let mut dims = [0usize; 3];
    for (slot, key) in ["width=", "height=", "n="].iter().enumerate() {
        let value = first
            .split_whitespace()
            .find_map(|t| t.strip_prefix(key))
            .ok_or_else(|| Error::Parse(format!("DC sidecar header lacks {key}")))?;
        dims[slot] = value.parse().map_err(|_| Error::Parse(format!("bad {key}{value}")))?;
    }
    let grid = BlockGrid::for_image(dims[0], dims[1], dims[2])?;
    let mut values = vec![f64::NAN; grid.block_count()];
    let mut reader = csv::Reader::from_reader(rest.as_bytes());
    for record in reader.records() {
        let record = record?;
        let parse = |i: usize| record.get(i).ok_or_else(|| Error::Parse("short sidecar row".into()));
        let row: usize = parse(0)?.parse().map_err(|_| Error::Parse("bad row".into()))?;
        let col: usize = parse(1)?.parse().map_err(|_| Error::Parse("bad col".into()))?;
        let dc: f64 = parse(2)?.parse().map_err(|_| Error::Parse("bad dc".into()))?;
        if row >= grid.rows || col >= grid.cols {
            return Err(Error::Parse(format!("block ({row}, {col}) outside grid")));
        }
        values[grid.index(row, col)] = dc;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Parse("DC sidecar does not cover every block".into()));
    }
    DcPlane::new(grid, values)
}
