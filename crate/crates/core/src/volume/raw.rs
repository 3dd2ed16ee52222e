//! Headerless sample dump plus a JSON sidecar describing its layout.
//!
//! The sidecar lives next to the payload with `.json` appended to the full
//! file name (`stack.raw` -> `stack.raw.json`):
//!
//! ```json
//! {"depth":D,"height":H,"width":W,"bit_depth":B,"endianness":"little"}
//! ```
//!
//! `endianness` defaults to `"little"` and is ignored for 8-bit data. An
//! optional `voxel_size` array `[z, y, x]` is carried through untouched.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{BitDepth, Volume};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endianness {
    #[default]
    Little,
    Big,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawSidecar {
    pub depth: usize,
    pub height: usize,
    pub width: usize,
    pub bit_depth: u32,
    #[serde(default)]
    pub endianness: Endianness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voxel_size: Option<[f64; 3]>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = OsString::from(path.as_os_str());
    name.push(".json");
    PathBuf::from(name)
}

pub(super) fn read_sidecar(path: &Path) -> Result<RawSidecar> {
    let side = sidecar_path(path);
    let text = std::fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Raw(format!("bad sidecar {}: {e}", side.display())))
}

pub(super) fn read_raw(path: &Path) -> Result<Volume> {
    let meta = read_sidecar(path)?;
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&meta, &bytes)
}

pub(super) fn decode(meta: &RawSidecar, bytes: &[u8]) -> Result<Volume> {
    let bd = BitDepth::from_bits(meta.bit_depth)?;
    let count = meta.depth * meta.height * meta.width;
    let expected = count * (meta.bit_depth as usize / 8);
    if bytes.len() != expected {
        return Err(Error::Raw(format!(
            "payload is {} bytes but sidecar dimensions {}x{}x{} at {}-bit need {expected}",
            bytes.len(),
            meta.depth,
            meta.height,
            meta.width,
            meta.bit_depth
        )));
    }
    let data: Vec<f64> = match bd {
        BitDepth::Eight => bytes.iter().map(|&b| bd.normalize(b as u16)).collect(),
        BitDepth::Sixteen => bytes
            .chunks_exact(2)
            .map(|c| {
                let s = match meta.endianness {
                    Endianness::Little => u16::from_le_bytes([c[0], c[1]]),
                    Endianness::Big => u16::from_be_bytes([c[0], c[1]]),
                };
                bd.normalize(s)
            })
            .collect(),
    };
    Ok(
        Volume::new(meta.depth, meta.height, meta.width, data, bd)?
            .with_voxel_size(meta.voxel_size),
    )
}

pub(super) fn encode(volume: &Volume) -> (RawSidecar, Vec<u8>) {
    let bd = volume.source_bit_depth();
    let samples = volume.data().iter().map(|&v| bd.quantize(v));
    let bytes = match bd {
        BitDepth::Eight => samples.map(|s| s as u8).collect(),
        BitDepth::Sixteen => samples.flat_map(u16::to_le_bytes).collect(),
    };
    let meta = RawSidecar {
        depth: volume.depth(),
        height: volume.height(),
        width: volume.width(),
        bit_depth: bd.bits(),
        endianness: Endianness::Little,
        voxel_size: volume.voxel_size(),
    };
    (meta, bytes)
}

pub(super) fn write_raw(volume: &Volume, path: &Path) -> Result<()> {
    let (meta, bytes) = encode(volume);
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let side = sidecar_path(path);
    std::fs::write(&side, serde_json::to_string_pretty(&meta)?).map_err(|e| Error::io(&side, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_bit_ramp_normalizes_per_sample() {
        let meta: RawSidecar =
            serde_json::from_str(r#"{"depth":2,"height":2,"width":2,"bit_depth":16}"#).unwrap();
        assert_eq!(meta.endianness, Endianness::Little);
        let bytes: Vec<u8> = (0u16..8).flat_map(u16::to_le_bytes).collect();
        let v = decode(&meta, &bytes).unwrap();
        for (k, &x) in v.data().iter().enumerate() {
            assert_eq!(x, k as f64 / 65535.0);
        }
    }

    #[test]
    fn big_endian_sidecar_is_honored() {
        let meta = RawSidecar {
            depth: 1,
            height: 1,
            width: 1,
            bit_depth: 16,
            endianness: Endianness::Big,
            voxel_size: None,
        };
        let v = decode(&meta, &[0x01, 0x00]).unwrap();
        assert_eq!(v.data()[0], 256.0 / 65535.0);
    }

    #[test]
    fn payload_size_must_match_dimensions() {
        let meta = RawSidecar {
            depth: 2,
            height: 2,
            width: 2,
            bit_depth: 8,
            endianness: Endianness::Little,
            voxel_size: None,
        };
        assert!(matches!(decode(&meta, &[0u8; 7]), Err(Error::Raw(_))));
    }

    #[test]
    fn sidecar_name_appends_json() {
        assert_eq!(
            sidecar_path(Path::new("/tmp/a.raw")),
            PathBuf::from("/tmp/a.raw.json")
        );
    }
}
