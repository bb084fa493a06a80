//! Image ingestion and the fixed 32×32 working frame.
//!
//! Everything downstream of the loaders sees [`NormImage`]: a 32×32 grid of
//! intensities in `[0, 1]` where ink is 1. Raw scans are cropped to their ink
//! bounding box and resampled into that frame by [`normalize`].

mod dataset;
pub mod idx;
pub mod pgm;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Label;

pub use dataset::{load_dataset, DatasetFormat, LabeledSet, LoaderOptions};

/// Side length of the normalized frame.
pub const FRAME: usize = 32;
const FRAME_PIXELS: usize = FRAME * FRAME;

/// Binarization threshold used to locate the ink bounding box.
pub const INK_THRESHOLD: u8 = 128;

/// An 8-bit grayscale image as read from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RawImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!("zero dimension {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

/// A 32×32 frame of intensities in `[0, 1]`, ink = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormImage {
    pixels: Vec<f64>,
}

impl NormImage {
    /// Builds a frame from 1024 row-major intensities. Values outside `[0, 1]`
    /// or non-finite values are rejected.
    pub fn from_pixels(pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != FRAME_PIXELS {
            return Err(Error::InvalidImage(format!("expected {FRAME_PIXELS} intensities, got {}", pixels.len())));
        }
        if let Some(v) = pixels.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidImage(format!("intensity {v} outside [0, 1]")));
        }
        Ok(Self { pixels })
    }

    /// A frame with every pixel set to `value` (clamped into `[0, 1]`).
    pub fn filled(value: f64) -> Self {
        Self { pixels: vec![value.clamp(0.0, 1.0); FRAME_PIXELS] }
    }

    pub fn blank() -> Self {
        Self::filled(0.0)
    }

    /// Builds a frame by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(FRAME_PIXELS);
        for r in 0..FRAME {
            for c in 0..FRAME {
                pixels.push(f(r, c).clamp(0.0, 1.0));
            }
        }
        Self { pixels }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * FRAME + col]
    }

    /// Sets a pixel, clamping into `[0, 1]`.
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.pixels[row * FRAME + col] = value.clamp(0.0, 1.0);
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    /// Quantizes to 8-bit, 1.0 → 255.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels.iter().map(|v| (v * 255.0).round() as u8).collect()
    }
}

/// Inclusive pixel rectangle inside the 32×32 frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 4]", into = "[usize; 4]")]
pub struct Rect {
    top: usize,
    left: usize,
    bottom: usize,
    right: usize,
}

impl Rect {
    pub const FULL: Rect = Rect { top: 0, left: 0, bottom: FRAME - 1, right: FRAME - 1 };

    pub fn new(top: usize, left: usize, bottom: usize, right: usize) -> Result<Self> {
        if top > bottom || left > right {
            return Err(Error::InvalidRect(format!("corners ({top},{left}) and ({bottom},{right}) are out of order")));
        }
        if bottom >= FRAME || right >= FRAME {
            return Err(Error::InvalidRect(format!("({bottom},{right}) lies outside the {FRAME}x{FRAME} frame")));
        }
        Ok(Self { top, left, bottom, right })
    }

    pub fn full() -> Self {
        Self::FULL
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }

    pub fn width(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.top..=self.bottom).contains(&row) && (self.left..=self.right).contains(&col)
    }
}

impl TryFrom<[usize; 4]> for Rect {
    type Error = Error;

    fn try_from([t, l, b, r]: [usize; 4]) -> Result<Self> {
        Rect::new(t, l, b, r)
    }
}

impl From<Rect> for [usize; 4] {
    fn from(r: Rect) -> Self {
        [r.top, r.left, r.bottom, r.right]
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.top, self.left, self.bottom, self.right)
    }
}

impl FromStr for Rect {
    type Err = Error;

    /// Parses `top,left,bottom,right`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidRect(format!("cannot parse {s:?}")))?;
        match parts.as_slice() {
            &[t, l, b, r] => Rect::new(t, l, b, r),
            _ => Err(Error::InvalidRect(format!("expected 4 coordinates in {s:?}"))),
        }
    }
}

/// Maps a raw scan into the normalized frame.
///
/// Pixels at or above [`INK_THRESHOLD`] (after optional inversion) are
/// foreground. The foreground bounding box is cropped and resampled to 32×32
/// with bilinear interpolation; aspect ratio is not preserved.
pub fn normalize(img: &RawImage, invert: bool) -> Result<NormImage> {
    let ink = |r: usize, c: usize| {
        let v = img.get(r, c);
        if invert {
            255 - v
        } else {
            v
        }
    };

    let mut bbox: Option<(usize, usize, usize, usize)> = None;
    for r in 0..img.height() {
        for c in 0..img.width() {
            if ink(r, c) >= INK_THRESHOLD {
                bbox = Some(match bbox {
                    None => (r, c, r, c),
                    Some((t, l, b, rt)) => (t.min(r), l.min(c), b.max(r), rt.max(c)),
                });
            }
        }
    }
    let (top, left, bottom, right) = bbox.ok_or(Error::BlankSample)?;
    let src_h = bottom - top + 1;
    let src_w = right - left + 1;

    // Corner-aligned mapping: output 0 and 31 land exactly on the box edges.
    let sample_axis = |i: usize, src: usize| -> (usize, usize, f64) {
        if src == 1 {
            return (0, 0, 0.0);
        }
        let pos = i as f64 * (src - 1) as f64 / (FRAME - 1) as f64;
        let lo = (pos.floor() as usize).min(src - 1);
        let hi = (lo + 1).min(src - 1);
        (lo, hi, pos - lo as f64)
    };

    let value = |r: usize, c: usize| ink(top + r, left + c) as f64 / 255.0;
    let out = NormImage::from_fn(|r, c| {
        let (r0, r1, fr) = sample_axis(r, src_h);
        let (c0, c1, fc) = sample_axis(c, src_w);
        let upper = value(r0, c0) * (1.0 - fc) + value(r0, c1) * fc;
        let lower = value(r1, c0) * (1.0 - fc) + value(r1, c1) * fc;
        upper * (1.0 - fr) + lower * fr
    });
    Ok(out)
}

/// Pixel-wise mean of one class's samples, contrast-stretched to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapImage {
    pub class_id: Label,
    pub image: NormImage,
    pub sample_count: usize,
}

pub fn overlap_image(samples: &[&NormImage], class_id: Label) -> Result<OverlapImage> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.len() as f64;
    let mut mean = vec![0.0; FRAME_PIXELS];
    for s in samples {
        for (m, v) in mean.iter_mut().zip(s.pixels()) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }

    let (lo, hi) = mean.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi > lo {
        let span = hi - lo;
        for m in &mut mean {
            *m = (*m - lo) / span;
        }
    }
    for m in &mut mean {
        *m = m.clamp(0.0, 1.0);
    }
    Ok(OverlapImage { class_id, image: NormImage { pixels: mean }, sample_count: samples.len() })
}

/// A rectangular window cut out of a frame; no resampling.
#[derive(Debug, Clone, PartialEq)]
pub struct SubFrame {
    pub height: usize,
    pub width: usize,
    pub pixels: Vec<f64>,
}

impl SubFrame {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }
}

pub fn crop(img: &NormImage, region: Rect) -> SubFrame {
    let mut pixels = Vec::with_capacity(region.height() * region.width());
    for r in region.top()..=region.bottom() {
        for c in region.left()..=region.right() {
            pixels.push(img.get(r, c));
        }
    }
    SubFrame { height: region.height(), width: region.width(), pixels }
}
