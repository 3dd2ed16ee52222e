use std::sync::mpsc::Sender;

use rayon::prelude::*;

use super::midframe::synthesize_midframe;
use super::SynthesisConfig;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::volume::Volume;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProgressEvent {
    RoundStarted {
        round: usize,
        rounds: usize,
        pairs: usize,
    },
    PairDone {
        round: usize,
        pair: usize,
    },
    RoundFinished {
        round: usize,
        depth: usize,
    },
}

/// Receives progress from worker threads.
pub trait ProgressSink: Sync {
    fn report(&self, event: ProgressEvent);
}

pub struct NoProgress;

impl ProgressSink for NoProgress {
    fn report(&self, _event: ProgressEvent) {}
}

impl ProgressSink for Sender<ProgressEvent> {
    fn report(&self, event: ProgressEvent) {
        // A dropped receiver only means nobody is listening.
        let _ = self.send(event);
    }
}

/// Upsamples `volume` along z by `factor = 2^n` using `n` rounds of
/// midpoint synthesis.
///
/// Every round finishes for the whole stack before the next starts, so round
/// `k` interpolates between slices produced by round `k - 1`. Pairs within a
/// round run on the current rayon pool; results are assembled by index, so
/// the output does not depend on the thread count. Input slices are copied
/// through unchanged and land at indices `k * factor`.
pub fn upscale_volume(
    volume: &Volume,
    factor: usize,
    config: &SynthesisConfig,
    progress: &dyn ProgressSink,
) -> Result<Volume> {
    if !crate::is_upsampling_factor(factor) {
        return Err(Error::InvalidArgument(format!(
            "upsampling factor must be a power of two (2^n, n >= 1), got {factor}"
        )));
    }
    if volume.depth() < 2 {
        return Err(Error::InvalidArgument(format!(
            "upsampling needs depth >= 2, got {}",
            volume.depth()
        )));
    }
    config.validate()?;

    let rounds = factor.trailing_zeros() as usize;
    let mut slices = volume.slices();
    for round in 0..rounds {
        let pairs = slices.len() - 1;
        progress.report(ProgressEvent::RoundStarted {
            round,
            rounds,
            pairs,
        });
        let mids = (0..pairs)
            .into_par_iter()
            .map(|i| {
                let r = synthesize_midframe(&slices[i], &slices[i + 1], config)?;
                progress.report(ProgressEvent::PairDone { round, pair: i });
                Ok(r.slice)
            })
            .collect::<Result<Vec<Image>>>()?;

        let mut next = Vec::with_capacity(2 * slices.len() - 1);
        let mut mids = mids.into_iter();
        for s in slices {
            if !next.is_empty() {
                next.push(mids.next().expect("one midpoint per pair"));
            }
            next.push(s);
        }
        slices = next;
        progress.report(ProgressEvent::RoundFinished {
            round,
            depth: slices.len(),
        });
    }

    let voxel_size = volume
        .voxel_size()
        .map(|[z, y, x]| [z / factor as f64, y, x]);
    Ok(Volume::from_slices(&slices, volume.source_bit_depth())?.with_voxel_size(voxel_size))
}
