use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Seek, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use tiff::decoder::{Decoder, DecodingResult, Limits};
use tiff::encoder::{colortype, TiffEncoder};
use tiff::tags::Tag;
use tiff::ColorType;

use super::{BitDepth, Volume};
use crate::error::{Error, Result};

/// Stored in the first page's ImageDescription tag.
#[derive(Serialize, Deserialize)]
struct Description {
    voxel_size: [f64; 3],
}

fn page_err(page: usize) -> impl Fn(tiff::TiffError) -> Error {
    move |e| Error::Tiff {
        page,
        message: e.to_string(),
    }
}

pub(super) fn read_tiff(path: &Path) -> Result<Volume> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    decode(BufReader::new(file))
}

pub(super) fn decode<R: Read + Seek>(reader: R) -> Result<Volume> {
    let mut decoder = Decoder::new(reader)
        .map_err(page_err(0))?
        .with_limits(Limits::unlimited());

    let mut voxel_size = None;
    let mut dims: Option<(u32, u32)> = None;
    let mut bit_depth: Option<BitDepth> = None;
    let mut data = Vec::new();
    let mut page = 0usize;

    loop {
        let err = page_err(page);
        let (w, h) = decoder.dimensions().map_err(&err)?;
        match dims {
            None => dims = Some((w, h)),
            Some(d) if d != (w, h) => {
                return Err(Error::Tiff {
                    page,
                    message: format!("page is {w}x{h} but earlier pages are {}x{}", d.0, d.1),
                })
            }
            _ => {}
        }

        let color = decoder.colortype().map_err(&err)?;
        if !matches!(color, ColorType::Gray(8) | ColorType::Gray(16)) {
            return Err(Error::Tiff {
                page,
                message: format!(
                    "unsupported sample format {color:?}, expected 8/16-bit grayscale"
                ),
            });
        }

        if page == 0 {
            if let Ok(Some(tiff::decoder::ifd::Value::Ascii(text))) =
                decoder.find_tag(Tag::ImageDescription)
            {
                voxel_size = serde_json::from_str::<Description>(&text)
                    .ok()
                    .map(|d| d.voxel_size);
            }
        }

        let (page_depth, samples): (BitDepth, Vec<u16>) = match decoder
            .read_image()
            .map_err(&err)?
        {
            DecodingResult::U8(buf) => (BitDepth::Eight, buf.into_iter().map(u16::from).collect()),
            DecodingResult::U16(buf) => (BitDepth::Sixteen, buf),
            _ => {
                return Err(Error::Tiff {
                    page,
                    message: "unsupported sample format (float or signed samples)".into(),
                })
            }
        };
        match bit_depth {
            None => bit_depth = Some(page_depth),
            Some(b) if b != page_depth => {
                return Err(Error::Tiff {
                    page,
                    message: format!(
                        "page is {}-bit but earlier pages are {}-bit",
                        page_depth.bits(),
                        b.bits()
                    ),
                })
            }
            _ => {}
        }
        if samples.len() != (w as usize) * (h as usize) {
            return Err(Error::Tiff {
                page,
                message: format!(
                    "decoded {} samples, expected {}",
                    samples.len(),
                    w as usize * h as usize
                ),
            });
        }
        data.extend(samples.into_iter().map(|s| page_depth.normalize(s)));

        page += 1;
        if !decoder.more_images() {
            break;
        }
        decoder.next_image().map_err(page_err(page))?;
    }

    let (w, h) = dims.expect("at least one page decoded");
    let volume = Volume::new(
        page,
        h as usize,
        w as usize,
        data,
        bit_depth.expect("at least one page decoded"),
    )?;
    Ok(volume.with_voxel_size(voxel_size))
}

pub(super) fn write_tiff(volume: &Volume, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    encode(volume, &mut writer)?;
    writer.flush().map_err(|e| Error::io(path, e))
}

pub(super) fn encode<W: Write + Seek>(volume: &Volume, writer: W) -> Result<()> {
    let mut encoder = TiffEncoder::new(writer).map_err(page_err(0))?;
    let (w, h) = (volume.width() as u32, volume.height() as u32);
    let description = volume
        .voxel_size()
        .map(|voxel_size| serde_json::to_string(&Description { voxel_size }))
        .transpose()?;
    let bd = volume.source_bit_depth();

    for z in 0..volume.depth() {
        let err = page_err(z);
        let samples = volume.slice_data(z).iter().map(|&v| bd.quantize(v));
        match bd {
            BitDepth::Eight => {
                let buf: Vec<u8> = samples.map(|s| s as u8).collect();
                let mut image = encoder.new_image::<colortype::Gray8>(w, h).map_err(&err)?;
                if let (0, Some(text)) = (z, description.as_deref()) {
                    image
                        .encoder()
                        .write_tag(Tag::ImageDescription, text)
                        .map_err(&err)?;
                }
                image.write_data(&buf).map_err(&err)?;
            }
            BitDepth::Sixteen => {
                let buf: Vec<u16> = samples.collect();
                let mut image = encoder.new_image::<colortype::Gray16>(w, h).map_err(&err)?;
                if let (0, Some(text)) = (z, description.as_deref()) {
                    image
                        .encoder()
                        .write_tag(Tag::ImageDescription, text)
                        .map_err(&err)?;
                }
                image.write_data(&buf).map_err(&err)?;
            }
        }
    }
    Ok(())
}
