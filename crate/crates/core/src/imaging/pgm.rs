//! Netpbm graymap (PGM) reading and writing.
//!
//! Both the plain (`P2`) and raw (`P5`) variants are accepted with
//! `maxval <= 255`. Comments (`#` to end of line) may appear anywhere in the
//! header after the magic token. Samples are rescaled to 0–255 when
//! `maxval < 255`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::RawImage;

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pgm(format!("{what} out of range")))
    }
}

pub fn decode(data: &[u8]) -> Result<RawImage> {
    if data.len() < 2 || data[0] != b'P' {
        return Err(Error::Pgm("missing magic number".into()));
    }
    let plain = match data[1] {
        b'2' => true,
        b'5' => false,
        other => return Err(Error::Pgm(format!("unsupported magic P{}", other as char))),
    };
    let mut h = Header { data, pos: 2 };
    if h.pos < data.len() && !data[h.pos].is_ascii_whitespace() && data[h.pos] != b'#' {
        return Err(Error::Pgm("missing whitespace after magic".into()));
    }
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Pgm(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::Pgm(format!("maxval {maxval} not in 1..=255")));
    }
    let count = width.checked_mul(height).ok_or_else(|| Error::Pgm("dimensions overflow".into()))?;

    let mut samples = Vec::with_capacity(count);
    if plain {
        for _ in 0..count {
            let v = h.number("sample")?;
            if v > maxval {
                return Err(Error::Pgm(format!("sample {v} exceeds maxval {maxval}")));
            }
            samples.push(v as u8);
        }
    } else {
        // exactly one whitespace byte separates maxval from the raster
        if h.pos >= data.len() || !data[h.pos].is_ascii_whitespace() {
            return Err(Error::Pgm("missing raster separator".into()));
        }
        let start = h.pos + 1;
        let raster = data
            .get(start..start + count)
            .ok_or_else(|| Error::Pgm(format!("truncated raster: expected {count} bytes")))?;
        if let Some(&v) = raster.iter().find(|&&v| v as usize > maxval) {
            return Err(Error::Pgm(format!("sample {v} exceeds maxval {maxval}")));
        }
        samples.extend_from_slice(raster);
    }

    if maxval != 255 {
        for s in &mut samples {
            *s = ((*s as usize * 255 + maxval / 2) / maxval) as u8;
        }
    }
    RawImage::new(width, height, samples)
}

pub fn read(path: &Path) -> Result<RawImage> {
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&data).map_err(|e| match e {
        Error::Pgm(msg) => Error::Pgm(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Encodes as binary `P5` with `maxval` 255.
pub fn encode(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

pub fn write(path: &Path, width: usize, height: usize, pixels: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::Write { path: path.into(), source: e })?;
    f.write_all(&encode(width, height, pixels)).map_err(|e| Error::Write { path: path.into(), source: e })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_with_comments() {
        let src = b"P2\n# made by hand\n3 2 # trailing\n15\n0 15 7\n# mid\n15 0 3\n";
        let img = decode(src).unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.pixels(), &[0, 255, 119, 255, 0, 51]);
    }

    #[test]
    fn raw_round_trip() {
        let px = [0u8, 10, 200, 255, 128, 7];
        let img = decode(&encode(2, 3, &px)).unwrap();
        assert_eq!((img.width(), img.height()), (2, 3));
        assert_eq!(img.pixels(), &px);
    }

    #[test]
    fn raw_raster_may_start_with_whitespace_byte() {
        let mut data = b"P5 2 1 255\n".to_vec();
        data.extend_from_slice(b"\n ");
        assert_eq!(decode(&data).unwrap().pixels(), b"\n ");
    }

    #[test]
    fn malformed_headers() {
        assert!(decode(b"P6\n1 1\n255\n\0\0\0").is_err());
        assert!(decode(b"P5\n2 2\n255\n\0\0").is_err()); // truncated
        assert!(decode(b"P2\n1 1\n65535\n7\n").is_err()); // maxval too large
        assert!(decode(b"P2\n2 1\n9\n3\n").is_err()); // missing sample
        assert!(decode(b"P2\n1 1\n9\n10\n").is_err()); // exceeds maxval
        assert!(decode(b"").is_err());
        assert!(decode(b"P2\nx 1\n9\n1\n").is_err());
    }
}
