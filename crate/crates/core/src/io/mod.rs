//! File formats: 8-bit binary PGM images, the `DCF1` coefficient container
//! and the true-DC sidecar.

mod coeff;
mod pgm;

pub use coeff::{read_dc_sidecar, write_dc_sidecar, CoefficientFile, FLAG_DC_STRIPPED, MAGIC};
pub use pgm::{encode_pgm, load_pgm, parse_pgm, save_pgm};
