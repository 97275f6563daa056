//! Typographic classification of blobs and the coded-text representation.
//!
//! Every letter is reduced to one of four script types from its height and
//! from where its center sits inside the text line:
//!
//! | code | type       | rule                                       |
//! |------|------------|--------------------------------------------|
//! | 0    | base       | short                                      |
//! | 1    | ascender   | medium height, center in the upper half    |
//! | 2    | descender  | medium height, center in the lower half    |
//! | 3    | full       | tall                                       |
//!
//! The codes of all lines, concatenated in reading order, form a 1-D image
//! with four gray levels.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment::{Blob, LineBand, Segmentation};

/// Number of gray levels of a coded sequence.
pub const LEVELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum ScriptType {
    Base = 0,
    Ascender = 1,
    Descender = 2,
    Full = 3,
}

impl ScriptType {
    pub const ALL: [ScriptType; 4] = [
        ScriptType::Base,
        ScriptType::Ascender,
        ScriptType::Descender,
        ScriptType::Full,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }
}

/// A document as a sequence of script-type codes in `0..4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodedSequence(Vec<u8>);

impl CodedSequence {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= LEVELS) {
            return Err(Error::InvalidSymbol(char::from(b'0'.wrapping_add(bad))));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses ASCII digits `0`..`3`; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0'..='3' => Ok(c as u8 - b'0'),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::format(path, e.to_string()))
    }

    /// Writes the sequence as a single line.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, format!("{self}\n")).map_err(|e| Error::io(path, e))
    }
}

impl fmt::Display for CodedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Height cut points: `height <= t_low` is short, `height > t_high` is tall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightThresholds {
    pub t_low: f64,
    pub t_high: f64,
}

impl HeightThresholds {
    /// Thresholds that mark every blob short.
    pub fn degenerate() -> Self {
        Self {
            t_low: f64::INFINITY,
            t_high: f64::INFINITY,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.t_low.is_infinite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MapperParams {
    /// Relative height spread `(max - min) / max` below which a document has
    /// no typographic contrast.
    pub flat_tolerance: f64,
    /// Center tolerance as a fraction of the band height.
    pub eps_fraction: f64,
}

impl Default for MapperParams {
    fn default() -> Self {
        Self {
            flat_tolerance: 0.1,
            eps_fraction: 0.05,
        }
    }
}

/// Heights are integers, so centroids and cut points are ratios that can
/// land exactly on a height or midway between centroids. Such ties are
/// resolved identically at every scale by ignoring rounding residue.
fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Splits blob heights into short, medium and tall groups with a 1-D
/// 3-means seeded at the minimum, median and maximum.
pub fn height_thresholds(heights: &[usize], flat_tolerance: f64) -> HeightThresholds {
    if heights.is_empty() {
        return HeightThresholds::degenerate();
    }
    let mut sorted: Vec<f64> = heights.iter().map(|&h| h as f64).collect();
    sorted.sort_by(f64::total_cmp);
    let min = sorted[0];
    let max = sorted[sorted.len() - 1];
    if max <= 0.0 || (max - min) / max < flat_tolerance {
        return HeightThresholds::degenerate();
    }

    let mut median = sorted[(sorted.len() - 1) / 2];
    if median == min || median == max {
        // A dominant extreme group would collapse two seeds; seed from the
        // distinct heights instead.
        let mut distinct = sorted.clone();
        distinct.dedup();
        median = distinct[(distinct.len() - 1) / 2];
    }
    let mut centroids = [min, median, max];
    let mut assignment = vec![usize::MAX; sorted.len()];
    loop {
        let mut changed = false;
        for (h, slot) in sorted.iter().zip(assignment.iter_mut()) {
            let mut best = 0;
            for c in 1..3 {
                let (d, best_d) = ((h - centroids[c]).abs(), (h - centroids[best]).abs());
                if d < best_d && !nearly_equal(d, best_d) {
                    best = c;
                }
            }
            if *slot != best {
                *slot = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (c, centroid) in centroids.iter_mut().enumerate() {
            let (sum, count) = sorted
                .iter()
                .zip(&assignment)
                .filter(|(_, &a)| a == c)
                .fold((0.0, 0usize), |(s, n), (h, _)| (s + h, n + 1));
            // An emptied cluster keeps its previous centroid.
            if count > 0 {
                *centroid = sum / count as f64;
            }
        }
    }
    centroids.sort_by(f64::total_cmp);
    HeightThresholds {
        t_low: (centroids[0] + centroids[1]) / 2.0,
        t_high: (centroids[1] + centroids[2]) / 2.0,
    }
}

/// Assigns a script type to one blob of `band`. `eps` is the center
/// tolerance in pixels; a medium blob centered within `eps` of the band
/// midpoint counts as an ascender.
pub fn classify_blob(blob: &Blob, band: &LineBand, th: &HeightThresholds, eps: f64) -> ScriptType {
    let height = blob.height() as f64;
    if height > th.t_high && !nearly_equal(height, th.t_high) {
        return ScriptType::Full;
    }
    if height <= th.t_low || nearly_equal(height, th.t_low) {
        return ScriptType::Base;
    }
    let offset = blob.center().1 - band.y_mid();
    if offset > eps {
        ScriptType::Descender
    } else {
        ScriptType::Ascender
    }
}

/// Concatenates classified blobs (already in reading order) into one coded
/// sequence without line separators.
pub fn encode_document(types: &[ScriptType]) -> Result<CodedSequence> {
    if types.is_empty() {
        return Err(Error::EmptyDocument);
    }
    CodedSequence::new(types.iter().map(|t| t.code()).collect())
}

/// Classifies every blob of a segmented page with per-document thresholds.
pub fn classify_segmentation(seg: &Segmentation, params: &MapperParams) -> Vec<ScriptType> {
    let heights: Vec<usize> = seg.blobs.iter().map(Blob::height).collect();
    let th = height_thresholds(&heights, params.flat_tolerance);
    seg.blobs
        .iter()
        .map(|blob| {
            let band = &seg.bands[blob.line_index];
            let eps = params.eps_fraction * band.height() as f64;
            classify_blob(blob, band, &th, eps)
        })
        .collect()
}

pub fn encode_segmentation(seg: &Segmentation, params: &MapperParams) -> Result<CodedSequence> {
    encode_document(&classify_segmentation(seg, params))
}
