use std::fs;
use std::path::Path;

use crate::blockdct::{BlockGrid, PixelImage, PixelRange};
use crate::error::{Error, Result};

/// Parses a binary (P5) PGM with maxval 255.
pub fn parse_pgm(bytes: &[u8]) -> Result<PixelImage> {
    let mut cursor = Header { bytes, pos: 0 };
    let magic = cursor.token()?;
    match magic.as_str() {
        "P5" => {}
        "P2" => return Err(Error::Unsupported("ASCII PGM (P2) is not supported".into())),
        "P1" | "P3" | "P4" | "P6" => return Err(Error::Unsupported(format!("{magic} is not a grayscale binary PGM"))),
        _ => return Err(Error::Parse(format!("bad PGM magic {magic:?}"))),
    }
    let width = cursor.number("width")?;
    let height = cursor.number("height")?;
    let maxval = cursor.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Unsupported(format!("maxval {maxval}, only 255 is supported")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => return Err(Error::Parse("missing whitespace after maxval".into())),
    }
    let needed = width.checked_mul(height).ok_or_else(|| Error::Parse("image dimensions overflow".into()))?;
    let raster = &bytes[cursor.pos..];
    if raster.len() < needed {
        return Err(Error::Parse(format!("truncated raster: expected {needed} bytes, found {}", raster.len())));
    }
    let data = raster[..needed].iter().map(|&b| i32::from(b)).collect();
    PixelImage::new(width, height, data, PixelRange::default())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<String> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse("unexpected end of PGM header".into()));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        tok.parse().map_err(|_| Error::Parse(format!("bad {what} {tok:?} in PGM header")))
    }
}

/// Canonical encoding: `P5\n<w> <h>\n255\n` followed by the raster.
pub fn encode_pgm(image: &PixelImage) -> Result<Vec<u8>> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.reserve(image.data().len());
    for &v in image.data() {
        let byte = u8::try_from(v).map_err(|_| Error::InvalidValue(format!("pixel {v} does not fit an 8-bit PGM")))?;
        out.push(byte);
    }
    Ok(out)
}

/// Reads a PGM whose dimensions must be multiples of `block_size`.
pub fn load_pgm(path: impl AsRef<Path>, block_size: usize) -> Result<PixelImage> {
    let image = parse_pgm(&fs::read(path)?)?;
    BlockGrid::for_image(image.width(), image.height(), block_size)?;
    Ok(image)
}

pub fn save_pgm(path: impl AsRef<Path>, image: &PixelImage) -> Result<()> {
    fs::write(path, encode_pgm(image)?)?;
    Ok(())
}
