//! Synthetic labelled corpora of coded documents, and rendering of coded
//! text as binary page images.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::BinaryImage;
use crate::typography::{CodedSequence, ScriptType, LEVELS};

/// Generative model of one script class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticProfile {
    pub class: String,
    /// Categorical distribution over codes `0..4`.
    pub distribution: [f64; LEVELS],
    /// Probability of repeating the previous symbol instead of drawing a
    /// fresh one.
    pub persistence: f64,
    /// Inclusive document length range.
    pub min_len: usize,
    pub max_len: usize,
}

impl SyntheticProfile {
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidProfile {
            name: self.class.clone(),
            reason: reason.to_string(),
        };
        if self.distribution.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(invalid("probabilities must be finite and non-negative"));
        }
        if (self.distribution.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(invalid("probabilities must sum to 1"));
        }
        if !(0.0..1.0).contains(&self.persistence) {
            return Err(invalid("persistence must lie in [0, 1)"));
        }
        if self.min_len == 0 || self.min_len > self.max_len {
            return Err(invalid("length range must satisfy 1 <= min <= max"));
        }
        Ok(())
    }

    /// Linear blend: `t = 0` gives `self`, `t = 1` gives `other`.
    pub fn interpolate(&self, other: &SyntheticProfile, t: f64, class: &str) -> SyntheticProfile {
        let lerp = |a: f64, b: f64| (1.0 - t) * a + t * b;
        let mut distribution = [0.0; LEVELS];
        for (d, (a, b)) in distribution
            .iter_mut()
            .zip(self.distribution.iter().zip(&other.distribution))
        {
            *d = lerp(*a, *b);
        }
        SyntheticProfile {
            class: class.to_string(),
            distribution,
            persistence: lerp(self.persistence, other.persistence),
            min_len: lerp(self.min_len as f64, other.min_len as f64).round() as usize,
            max_len: lerp(self.max_len as f64, other.max_len as f64).round() as usize,
        }
    }

    /// Draws one document.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> CodedSequence {
        let len = rng.gen_range(self.min_len..=self.max_len);
        let categorical = WeightedIndex::new(self.distribution).expect("validated distribution");
        let mut symbols = Vec::with_capacity(len);
        let mut prev = categorical.sample(rng) as u8;
        symbols.push(prev);
        while symbols.len() < len {
            if !rng.gen_bool(self.persistence) {
                prev = categorical.sample(rng) as u8;
            }
            symbols.push(prev);
        }
        CodedSequence::new(symbols).expect("nonempty sequence over 0..4")
    }
}

/// Three well-separated profiles standing in for old Cyrillic, angular and
/// round Glagolitic labels.
pub fn script_profiles() -> Vec<SyntheticProfile> {
    vec![
        SyntheticProfile {
            class: "cyrillic".into(),
            distribution: [0.70, 0.10, 0.10, 0.10],
            persistence: 0.10,
            min_len: 50,
            max_len: 90,
        },
        SyntheticProfile {
            class: "angular".into(),
            distribution: [0.15, 0.10, 0.15, 0.60],
            persistence: 0.50,
            min_len: 50,
            max_len: 90,
        },
        SyntheticProfile {
            class: "round".into(),
            distribution: [0.20, 0.40, 0.35, 0.05],
            persistence: 0.0,
            min_len: 50,
            max_len: 90,
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDocument {
    pub id: String,
    pub class: String,
    pub sequence: CodedSequence,
}

/// Draws `counts[i]` documents from `profiles[i]`, grouped by profile in the
/// given order. Document ids are `doc_000`, `doc_001`, ...
pub fn generate_synthetic(
    profiles: &[SyntheticProfile],
    counts: &[usize],
    seed: u64,
) -> Result<Vec<SyntheticDocument>> {
    if profiles.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one profile is required".into(),
        ));
    }
    if profiles.len() != counts.len() {
        return Err(Error::InvalidParameter(format!(
            "{} counts for {} profiles",
            counts.len(),
            profiles.len()
        )));
    }
    for (p, &c) in profiles.iter().zip(counts) {
        p.validate()?;
        if c == 0 {
            return Err(Error::InvalidProfile {
                name: p.class.clone(),
                reason: "document count must be at least 1".into(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for (p, &c) in profiles.iter().zip(counts) {
        for _ in 0..c {
            docs.push(SyntheticDocument {
                id: format!("doc_{:03}", docs.len()),
                class: p.class.clone(),
                sequence: p.sample(&mut rng),
            });
        }
    }
    Ok(docs)
}

/// Glyph geometry for [`render_page`], in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlyphGeometry {
    /// Height of a base letter.
    pub x_height: usize,
    /// How far ascenders rise above and descenders drop below the base zone.
    pub extender: usize,
    pub glyph_width: usize,
    pub spacing: usize,
    /// Blank rows between the extents of consecutive lines.
    pub leading: usize,
    pub margin: usize,
}

impl Default for GlyphGeometry {
    fn default() -> Self {
        Self {
            x_height: 10,
            extender: 5,
            glyph_width: 6,
            spacing: 3,
            leading: 6,
            margin: 4,
        }
    }
}

/// Draws each line of script types as solid rectangles: base letters fill
/// the base zone, ascenders extend above it, descenders below, and full
/// letters both ways.
///
/// Segmentation recovers the codes exactly when every line holds at least
/// one full letter, or both an ascender and a descender, so that each line
/// band spans the whole extender range.
pub fn render_page(lines: &[Vec<ScriptType>], geom: &GlyphGeometry) -> Result<BinaryImage> {
    let longest = lines.iter().map(Vec::len).max().unwrap_or(0);
    if longest == 0 {
        return Err(Error::EmptyDocument);
    }
    let line_pitch = geom.x_height + 2 * geom.extender + geom.leading;
    let width = 2 * geom.margin + longest * (geom.glyph_width + geom.spacing);
    let height = 2 * geom.margin + lines.len() * line_pitch;
    let mut img = BinaryImage::blank(width, height)?;
    for (l, line) in lines.iter().enumerate() {
        let base_top = geom.margin + l * line_pitch + geom.extender;
        let base_bottom = base_top + geom.x_height - 1;
        for (c, &kind) in line.iter().enumerate() {
            let (top, bottom) = match kind {
                ScriptType::Base => (base_top, base_bottom),
                ScriptType::Ascender => (base_top - geom.extender, base_bottom),
                ScriptType::Descender => (base_top, base_bottom + geom.extender),
                ScriptType::Full => (base_top - geom.extender, base_bottom + geom.extender),
            };
            let left = geom.margin + c * (geom.glyph_width + geom.spacing);
            for y in top..=bottom {
                for x in left..left + geom.glyph_width {
                    img.set(x, y, true);
                }
            }
        }
    }
    Ok(img)
}

/// Wraps a coded sequence into lines of at most `per_line` letters.
pub fn wrap_lines(seq: &CodedSequence, per_line: usize) -> Vec<Vec<ScriptType>> {
    seq.symbols()
        .chunks(per_line.max(1))
        .map(|chunk| {
            chunk
                .iter()
                .map(|&s| ScriptType::from_code(s).expect("valid code"))
                .collect()
        })
        .collect()
}
