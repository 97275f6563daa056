//! Text-line segmentation by horizontal projection and blob extraction by
//! 8-connected component labelling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::BinaryImage;

/// A horizontal band of rows holding one text line. Rows are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineBand {
    pub y_top: usize,
    pub y_bottom: usize,
}

impl LineBand {
    pub fn y_mid(&self) -> f64 {
        (self.y_top + self.y_bottom) as f64 / 2.0
    }

    pub fn height(&self) -> usize {
        self.y_bottom - self.y_top + 1
    }

    pub fn contains(&self, y: f64) -> bool {
        y >= self.y_top as f64 && y <= self.y_bottom as f64
    }
}

/// Inclusive pixel bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x_min: usize,
    pub y_min: usize,
    pub x_max: usize,
    pub y_max: usize,
}

impl BoundingBox {
    pub fn height(&self) -> usize {
        self.y_max - self.y_min + 1
    }

    pub fn width(&self) -> usize {
        self.x_max - self.x_min + 1
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.x_min + self.x_max) as f64 / 2.0,
            (self.y_min + self.y_max) as f64 / 2.0,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Blob {
    pub bbox: BoundingBox,
    /// Number of ink pixels in the component.
    pub area: usize,
    pub line_index: usize,
}

impl Blob {
    pub fn height(&self) -> usize {
        self.bbox.height()
    }

    pub fn center(&self) -> (f64, f64) {
        self.bbox.center()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmentParams {
    /// Zero-gaps shorter than this many rows are bridged into one band.
    pub min_gap: usize,
    /// Components with fewer ink pixels are discarded as speckle.
    pub min_blob_area: usize,
}

impl Default for SegmentParams {
    fn default() -> Self {
        Self {
            min_gap: 1,
            min_blob_area: 4,
        }
    }
}

/// Bands and blobs of one page, blobs in reading order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    pub bands: Vec<LineBand>,
    pub blobs: Vec<Blob>,
}

/// Ink count of every row.
pub fn horizontal_projection(img: &BinaryImage) -> Vec<usize> {
    (0..img.height())
        .map(|y| img.row(y).iter().filter(|&&p| p == 1).count())
        .collect()
}

/// Splits a projection profile into maximal runs of inked rows. Zero-gaps of
/// fewer than `min_gap` rows between two inked runs are bridged.
pub fn segment_lines(profile: &[usize], min_gap: usize) -> Result<Vec<LineBand>> {
    if min_gap == 0 {
        return Err(Error::InvalidParameter("min_gap must be at least 1".into()));
    }
    let mut bands: Vec<LineBand> = Vec::new();
    let mut y = 0;
    while y < profile.len() {
        if profile[y] == 0 {
            y += 1;
            continue;
        }
        let start = y;
        while y < profile.len() && profile[y] > 0 {
            y += 1;
        }
        let end = y - 1;
        match bands.last_mut() {
            Some(last) if start - last.y_bottom - 1 < min_gap => last.y_bottom = end,
            _ => bands.push(LineBand {
                y_top: start,
                y_bottom: end,
            }),
        }
    }
    if bands.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(bands)
}

/// Labels 8-connected ink components. Returns the bounding box and area of
/// each component in raster order of its first pixel.
pub fn connected_components(img: &BinaryImage) -> Vec<(BoundingBox, usize)> {
    let (w, h) = (img.width(), img.height());
    let mut visited = vec![false; w * h];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    for sy in 0..h {
        for sx in 0..w {
            if visited[sy * w + sx] || !img.is_ink(sx, sy) {
                continue;
            }
            visited[sy * w + sx] = true;
            stack.push((sx, sy));
            let mut bbox = BoundingBox {
                x_min: sx,
                y_min: sy,
                x_max: sx,
                y_max: sy,
            };
            let mut area = 0;
            while let Some((x, y)) = stack.pop() {
                area += 1;
                bbox.x_min = bbox.x_min.min(x);
                bbox.x_max = bbox.x_max.max(x);
                bbox.y_min = bbox.y_min.min(y);
                bbox.y_max = bbox.y_max.max(y);
                for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                    for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                        let idx = ny * w + nx;
                        if !visited[idx] && img.is_ink(nx, ny) {
                            visited[idx] = true;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
            out.push((bbox, area));
        }
    }
    out
}

fn assign_band(bands: &[LineBand], y_c: f64) -> usize {
    if let Some(i) = bands.iter().position(|b| b.contains(y_c)) {
        return i;
    }
    // Nearest midpoint; the earlier band wins on equal distance.
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (i, b) in bands.iter().enumerate() {
        let d = (b.y_mid() - y_c).abs();
        if d < best_dist {
            best = i;
            best_dist = d;
        }
    }
    best
}

/// Extracts blobs and assigns each to a line band. The result is in reading
/// order: bands top to bottom, blobs left to right within a band.
pub fn extract_blobs(
    img: &BinaryImage,
    bands: &[LineBand],
    min_blob_area: usize,
) -> Result<Vec<Blob>> {
    if bands.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let mut blobs: Vec<Blob> = connected_components(img)
        .into_iter()
        .filter(|(_, area)| *area >= min_blob_area)
        .map(|(bbox, area)| Blob {
            bbox,
            area,
            line_index: assign_band(bands, bbox.center().1),
        })
        .collect();
    if blobs.is_empty() {
        return Err(Error::EmptyDocument);
    }
    blobs.sort_by_key(|b| (b.line_index, b.bbox.x_min, b.bbox.y_min));
    Ok(blobs)
}

/// Projection, line segmentation and blob extraction in one call.
pub fn segment(img: &BinaryImage, params: &SegmentParams) -> Result<Segmentation> {
    let profile = horizontal_projection(img);
    let bands = segment_lines(&profile, params.min_gap)?;
    let blobs = extract_blobs(img, &bands, params.min_blob_area)?;
    Ok(Segmentation { bands, blobs })
}
