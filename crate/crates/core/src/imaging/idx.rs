//! IDX (MNIST-style) image and label files.
//!
//! Headers are big-endian: a `u32` magic (`0x00000803` for `u8` images with
//! three dimensions, `0x00000801` for `u8` labels with one) followed by one
//! `u32` per dimension.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::RawImage;

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

fn be_u32(data: &[u8], at: usize) -> Result<u32> {
    data.get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::Idx("truncated header".into()))
}

fn check_magic(data: &[u8], expected: u32) -> Result<()> {
    let magic = be_u32(data, 0)?;
    if magic != expected {
        return Err(Error::Idx(format!("magic mismatch: expected {expected:#010x}, found {magic:#010x}")));
    }
    Ok(())
}

pub fn decode_images(data: &[u8]) -> Result<Vec<RawImage>> {
    check_magic(data, IMAGE_MAGIC)?;
    let count = be_u32(data, 4)? as usize;
    let rows = be_u32(data, 8)? as usize;
    let cols = be_u32(data, 12)? as usize;
    let size = rows * cols;
    let body = &data[16..];
    if body.len() < count * size {
        return Err(Error::Idx(format!("truncated: {count} images of {rows}x{cols} need {} bytes", count * size)));
    }
    body.chunks_exact(size.max(1)).take(count).map(|px| RawImage::new(cols, rows, px.to_vec())).collect()
}

pub fn decode_labels(data: &[u8]) -> Result<Vec<u8>> {
    check_magic(data, LABEL_MAGIC)?;
    let count = be_u32(data, 4)? as usize;
    let body = &data[8..];
    if body.len() < count {
        return Err(Error::Idx(format!("truncated: expected {count} labels")));
    }
    Ok(body[..count].to_vec())
}

/// Encodes same-sized images as an IDX image file.
pub fn encode_images(images: &[RawImage]) -> Vec<u8> {
    let (rows, cols) = images.first().map_or((0, 0), |i| (i.height(), i.width()));
    let mut out = Vec::with_capacity(16 + images.len() * rows * cols);
    for v in [IMAGE_MAGIC, images.len() as u32, rows as u32, cols as u32] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    for img in images {
        out.extend_from_slice(img.pixels());
    }
    out
}

pub fn encode_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

/// Reads an image/label file pair, checking that the counts agree.
pub fn read_pair(images: &Path, labels: &Path) -> Result<Vec<(RawImage, u8)>> {
    let img_data = fs::read(images).map_err(|e| Error::io(images, e))?;
    let lbl_data = fs::read(labels).map_err(|e| Error::io(labels, e))?;
    let imgs = decode_images(&img_data)?;
    let lbls = decode_labels(&lbl_data)?;
    if imgs.len() != lbls.len() {
        return Err(Error::Idx(format!("{} images but {} labels", imgs.len(), lbls.len())));
    }
    Ok(imgs.into_iter().zip(lbls).collect())
}
