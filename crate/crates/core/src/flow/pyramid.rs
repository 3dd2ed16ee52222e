use crate::error::{Error, Result};
use crate::image::Image;

/// Both dimensions of the coarsest level stay at or above this.
pub const MIN_LEVEL_DIM: usize = 4;

const BINOMIAL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Coarse-to-fine stack; `levels[0]` is the input itself.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePyramid {
    pub levels: Vec<Image>,
}

impl ImagePyramid {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn finest(&self) -> &Image {
        &self.levels[0]
    }

    pub fn coarsest(&self) -> &Image {
        self.levels.last().expect("pyramid has at least one level")
    }
}

/// Number of levels a `height x width` image supports, capped at `max_levels`.
pub(crate) fn level_count(height: usize, width: usize, max_levels: usize) -> usize {
    let (mut h, mut w, mut n) = (height, width, 1);
    while n < max_levels {
        let (nh, nw) = (h.div_ceil(2), w.div_ceil(2));
        if nh < MIN_LEVEL_DIM || nw < MIN_LEVEL_DIM {
            break;
        }
        (h, w, n) = (nh, nw, n + 1);
    }
    n
}

/// Builds a binomial pyramid: each level is the previous one blurred with the
/// separable (1, 4, 6, 4, 1)/16 kernel under replicate borders, then sampled
/// at even indices.
pub fn build_pyramid(slice: &Image, max_levels: usize) -> Result<ImagePyramid> {
    if slice.width() < 2 * MIN_LEVEL_DIM || slice.height() < 2 * MIN_LEVEL_DIM {
        return Err(Error::InvalidArgument(format!(
            "pyramid input must be at least 8x8, got {}x{}",
            slice.height(),
            slice.width()
        )));
    }
    if max_levels == 0 {
        return Err(Error::InvalidArgument("max_levels must be >= 1".into()));
    }
    let n = level_count(slice.height(), slice.width(), max_levels);
    let mut levels = Vec::with_capacity(n);
    levels.push(slice.clone());
    for _ in 1..n {
        let next = downsample(levels.last().expect("non-empty"));
        levels.push(next);
    }
    Ok(ImagePyramid { levels })
}

fn downsample(src: &Image) -> Image {
    let blurred = blur_binomial(src);
    let (w, h) = (src.width().div_ceil(2), src.height().div_ceil(2));
    Image::from_fn(w, h, |x, y| blurred.get(2 * x, 2 * y))
}

pub(crate) fn blur_binomial(src: &Image) -> Image {
    let (w, h) = (src.width(), src.height());
    let horizontal = Image::from_fn(w, h, |x, y| {
        BINOMIAL
            .iter()
            .enumerate()
            .map(|(k, c)| c * src.get_clamped(x as isize + k as isize - 2, y as isize))
            .sum()
    });
    Image::from_fn(w, h, |x, y| {
        BINOMIAL
            .iter()
            .enumerate()
            .map(|(k, c)| c * horizontal.get_clamped(x as isize, y as isize + k as isize - 2))
            .sum()
    })
}
