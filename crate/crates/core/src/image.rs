//! Bi-level raster images of labels.
//!
//! Pixels are stored row-major with the origin at the top-left corner and
//! `y` growing downward. A value of `1` is ink (foreground), `0` background.

use std::path::Path;

use image::{GrayImage, ImageFormat, Luma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Luma values at or above this level are light.
pub const LIGHT_THRESHOLD: u8 = 128;

/// Which luminance polarity represents ink.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InkPolarity {
    /// Dark ink on a light ground.
    #[default]
    Dark,
    /// Light ink on a dark ground.
    Light,
}

impl std::str::FromStr for InkPolarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dark" => Ok(InkPolarity::Dark),
            "light" => Ok(InkPolarity::Light),
            other => Err(Error::InvalidParameter(format!(
                "ink polarity must be `dark` or `light`, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(bad) = pixels.iter().find(|&&p| p > 1) {
            return Err(Error::NotBinary(format!("pixel value {bad} is not 0 or 1")));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// An all-background image.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0; width * height])
    }

    /// Builds an image from rows of `'#'` (ink) and `'.'` (background).
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut pixels = Vec::with_capacity(width * height);
        for row in rows {
            if row.len() != width {
                return Err(Error::InvalidImage("ragged ascii rows".into()));
            }
            for c in row.chars() {
                pixels.push(match c {
                    '#' => 1,
                    '.' => 0,
                    other => {
                        return Err(Error::InvalidImage(format!(
                            "unexpected character {other:?}"
                        )))
                    }
                });
            }
        }
        Self::new(width, height, pixels)
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

    #[inline]
    pub fn is_ink(&self, x: usize, y: usize) -> bool {
        self.pixels[y * self.width + x] == 1
    }

    pub fn set(&mut self, x: usize, y: usize, ink: bool) {
        self.pixels[y * self.width + x] = u8::from(ink);
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn ink_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 1).count()
    }

    /// Surrounds the image with background margins.
    pub fn padded(&self, left: usize, top: usize, right: usize, bottom: usize) -> Self {
        let width = self.width + left + right;
        let height = self.height + top + bottom;
        let mut out = vec![0u8; width * height];
        for y in 0..self.height {
            let dst = (y + top) * width + left;
            out[dst..dst + self.width].copy_from_slice(self.row(y));
        }
        Self {
            width,
            height,
            pixels: out,
        }
    }

    /// Nearest-neighbour upscaling by an integer factor.
    pub fn upscaled(&self, factor: usize) -> Self {
        assert!(factor >= 1, "scale factor must be positive");
        let width = self.width * factor;
        let height = self.height * factor;
        let mut out = vec![0u8; width * height];
        for y in 0..height {
            for x in 0..width {
                out[y * width + x] = self.pixels[(y / factor) * self.width + x / factor];
            }
        }
        Self {
            width,
            height,
            pixels: out,
        }
    }

    /// Converts an 8-bit grayscale raster. The raster must be bi-level: at
    /// most two distinct luma values, so that thresholding is lossless.
    pub fn from_gray(gray: &GrayImage, ink: InkPolarity) -> Result<Self> {
        let mut seen = [false; 256];
        let mut distinct = 0usize;
        for p in gray.pixels() {
            if !seen[p.0[0] as usize] {
                seen[p.0[0] as usize] = true;
                distinct += 1;
            }
        }
        if distinct > 2 {
            return Err(Error::NotBinary(format!(
                "{distinct} distinct gray levels; binarize the image first"
            )));
        }
        let pixels = gray
            .pixels()
            .map(|p| {
                let light = p.0[0] >= LIGHT_THRESHOLD;
                match ink {
                    InkPolarity::Dark => u8::from(!light),
                    InkPolarity::Light => u8::from(light),
                }
            })
            .collect();
        Self::new(gray.width() as usize, gray.height() as usize, pixels)
    }

    /// Loads a PGM (P2/P5) or PNG file.
    pub fn load(path: &Path, ink: InkPolarity) -> Result<Self> {
        let dynamic = image::open(path).map_err(|e| Error::format(path, e.to_string()))?;
        Self::from_gray(&dynamic.to_luma8(), ink).map_err(|e| Error::format(path, e.to_string()))
    }

    /// Renders as dark ink on white.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_fn(self.width as u32, self.height as u32, |x, y| {
            Luma([if self.is_ink(x as usize, y as usize) {
                0
            } else {
                255
            }])
        })
    }

    /// Writes a binary PGM (P5) file, dark ink on white.
    pub fn save_pgm(&self, path: &Path) -> Result<()> {
        self.to_gray()
            .save_with_format(path, ImageFormat::Pnm)
            .map_err(|e| Error::format(path, e.to_string()))
    }
}
