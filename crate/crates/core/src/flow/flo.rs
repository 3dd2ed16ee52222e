//! Middlebury `.flo` files: the ASCII tag `PIEH`, width and height as
//! little-endian `i32`, then row-major interleaved `(u, v)` as little-endian
//! `f32`.

use std::path::Path;

use super::FlowField;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"PIEH";

pub fn encode_flo(flow: &FlowField) -> Vec<u8> {
    let n = flow.width() * flow.height();
    let mut out = Vec::with_capacity(12 + 8 * n);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(flow.width() as i32).to_le_bytes());
    out.extend_from_slice(&(flow.height() as i32).to_le_bytes());
    for (u, v) in flow.u().iter().zip(flow.v()) {
        out.extend_from_slice(&(*u as f32).to_le_bytes());
        out.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    out
}

pub fn decode_flo(bytes: &[u8]) -> Result<FlowField> {
    if bytes.len() < 12 {
        return Err(Error::Flo(format!(
            "truncated header ({} bytes)",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Flo(format!("bad magic {:?}", &bytes[..4])));
    }
    let read_i32 = |at: usize| i32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
    let (width, height) = (read_i32(4), read_i32(8));
    if width <= 0 || height <= 0 {
        return Err(Error::Flo(format!("invalid dimensions {width}x{height}")));
    }
    let n = width as usize * height as usize;
    let payload = &bytes[12..];
    if payload.len() < 8 * n {
        return Err(Error::Flo(format!(
            "truncated payload: {} bytes for {width}x{height} flow, need {}",
            payload.len(),
            8 * n
        )));
    }
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for px in payload[..8 * n].chunks_exact(8) {
        u.push(f32::from_le_bytes(px[..4].try_into().expect("4 bytes")) as f64);
        v.push(f32::from_le_bytes(px[4..].try_into().expect("4 bytes")) as f64);
    }
    FlowField::new(width as usize, height as usize, u, v)
}

pub fn write_flo(flow: &FlowField, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_flo(flow)).map_err(|e| Error::io(path, e))
}

pub fn read_flo(path: impl AsRef<Path>) -> Result<FlowField> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_flo(&bytes)
}
