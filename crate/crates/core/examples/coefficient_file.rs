//! Write a DC-stripped coefficient file and a DC sidecar, read both back and
//! rebuild the original image exactly.

use dc_recovery::blockdct::true_dcs;
use dc_recovery::cli::dc_free_coefficients;
use dc_recovery::io::{read_dc_sidecar, write_dc_sidecar, CoefficientFile};
use dc_recovery::synth::{piecewise_smooth, SynthParams};
use dc_recovery::{apply_dc, finalize, DcFreePlane};

fn main() -> dc_recovery::Result<()> {
    let dir = std::env::temp_dir().join("dcrec-coefficient-file");
    std::fs::create_dir_all(&dir)?;
    let image = piecewise_smooth(SynthParams::new(64, 48), 6);

    let file = CoefficientFile::dc_stripped(dc_free_coefficients(&image, 8)?)?;
    let coeff_path = dir.join("image.dcf");
    let sidecar_path = dir.join("image_dc.csv");
    file.save(&coeff_path)?;
    write_dc_sidecar(&sidecar_path, &true_dcs(&image, 8)?)?;

    let loaded = CoefficientFile::load(&coeff_path)?;
    let bytes = std::fs::read(&coeff_path)?;
    println!(
        "{} bytes, magic {:?}, dc-stripped {}",
        bytes.len(),
        std::str::from_utf8(&bytes[..4]).unwrap(),
        loaded.is_dc_stripped()
    );
    println!("bit-exact reload: {}", loaded.to_bytes()? == bytes);

    let plane = DcFreePlane::from_coefficients(&loaded.plane, image.range())?;
    let rebuilt = finalize(&apply_dc(&plane, &read_dc_sidecar(&sidecar_path)?)?, image.range());
    println!("rebuilt equals original: {}", rebuilt == image);
    println!("files in {}", dir.display());
    Ok(())
}
