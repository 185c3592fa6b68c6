//! Recovery of block-DCT DC coefficients from AC coefficients alone.
//!
//! Given only the AC coefficients of an 8x8 block-DCT image (the "DC-free"
//! plane), two recovery methods rebuild the missing DC terms:
//!
//! * [`uso`]: relative scans from each corner driven by cross-boundary
//!   smoothness, a global brightness fit, four-scan averaging and a final
//!   range correction.
//! * [`frm`]: scans that project every DC estimate onto its valid interval
//!   as they go, with the corner block's DC picked to minimize how often
//!   that projection is needed.
//!
//! Around them sit the block transform ([`blockdct`]), the shared scan
//! engine ([`scan`]), quality metrics ([`iqa`]), file formats ([`io`]), a
//! corpus benchmark ([`bench`]) and the command implementations behind the
//! `dcrec` binary ([`cli`]).
//!
//! ```
//! use dc_recovery::{blockdct, frm, iqa, synth};
//!
//! let original = synth::piecewise_smooth(synth::SynthParams::new(64, 64), 1);
//! let plane = blockdct::strip_dc(&original, 8)?;
//! let recovered = frm::recover_frm(&plane, &frm::SearchConfig::default())?;
//! assert!(iqa::psnr(&original, &recovered)? > 10.0);
//! # Ok::<(), dc_recovery::Error>(())
//! ```

pub mod bench;
pub mod blockdct;
pub mod cli;
pub mod error;
pub mod frm;
pub mod io;
pub mod iqa;
pub mod scan;
pub mod synth;
pub mod uso;

pub use blockdct::{
    apply_dc, dc_bounds, finalize, strip_dc, BlockGrid, CoefficientPlane, DcBounds, DcFreePlane, PixelImage,
    PixelRange, RealImage,
};
pub use error::{Error, Result};
pub use frm::{recover_frm, SearchConfig, SearchMode, SearchTrace};
pub use iqa::QualityReport;
pub use scan::{Corner, DcPlane, FlowStats};
pub use uso::recover_uso;
