//! Texture descriptors of a coded sequence viewed as a 1-D four-level image.
//!
//! Two descriptor families are combined into a 27-value feature vector:
//! eleven run-length statistics and a 16-bin adjacent local binary pattern
//! (ALBP) histogram.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::typography::{CodedSequence, LEVELS};

pub const RUN_LENGTH_FEATURES: usize = 11;
pub const ALBP_BINS: usize = 16;
pub const FEATURE_DIM: usize = RUN_LENGTH_FEATURES + ALBP_BINS;

pub const RUN_LENGTH_NAMES: [&str; RUN_LENGTH_FEATURES] = [
    "sre", "lre", "gln", "rln", "rp", "lgre", "hgre", "srlge", "srhge", "lrlge", "lrhge",
];

/// Counts of runs by gray level (row) and run length (column).
///
/// Gray level `g` lives in row `g`; formulas weight it as `i = g + 1`, and
/// column `j - 1` holds runs of length `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLengthMatrix {
    counts: Vec<u64>,
    max_run: usize,
    n_runs: u64,
    n_symbols: u64,
}

impl RunLengthMatrix {
    pub fn levels(&self) -> usize {
        LEVELS
    }

    /// Longest observed run.
    pub fn max_run(&self) -> usize {
        self.max_run
    }

    pub fn n_runs(&self) -> u64 {
        self.n_runs
    }

    pub fn n_symbols(&self) -> u64 {
        self.n_symbols
    }

    /// Runs of gray level `level` (0-based) with length `length` (1-based).
    pub fn count(&self, level: usize, length: usize) -> u64 {
        if length == 0 || length > self.max_run || level >= LEVELS {
            return 0;
        }
        self.counts[level * self.max_run + length - 1]
    }

    /// Nonzero entries as `(level, length, count)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(idx, &c)| (idx / self.max_run, idx % self.max_run + 1, c))
    }
}

/// Counts maximal runs of identical symbols. Runs never wrap past the end.
pub fn run_length_matrix(seq: &CodedSequence) -> Result<RunLengthMatrix> {
    let symbols = seq.symbols();
    if symbols.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut runs = Vec::new();
    let mut start = 0;
    for pos in 1..=symbols.len() {
        if pos == symbols.len() || symbols[pos] != symbols[start] {
            runs.push((symbols[start] as usize, pos - start));
            start = pos;
        }
    }
    let max_run = runs.iter().map(|&(_, len)| len).max().unwrap_or(1);
    let mut counts = vec![0u64; LEVELS * max_run];
    for &(level, len) in &runs {
        counts[level * max_run + len - 1] += 1;
    }
    Ok(RunLengthMatrix {
        counts,
        max_run,
        n_runs: runs.len() as u64,
        n_symbols: symbols.len() as u64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunLengthFeatures {
    /// Short run emphasis.
    pub sre: f64,
    /// Long run emphasis.
    pub lre: f64,
    /// Gray-level non-uniformity.
    pub gln: f64,
    /// Run-length non-uniformity.
    pub rln: f64,
    /// Run percentage.
    pub rp: f64,
    /// Low gray-level run emphasis.
    pub lgre: f64,
    /// High gray-level run emphasis.
    pub hgre: f64,
    pub srlge: f64,
    pub srhge: f64,
    pub lrlge: f64,
    pub lrhge: f64,
}

impl RunLengthFeatures {
    pub fn to_array(&self) -> [f64; RUN_LENGTH_FEATURES] {
        [
            self.sre, self.lre, self.gln, self.rln, self.rp, self.lgre, self.hgre, self.srlge,
            self.srhge, self.lrlge, self.lrhge,
        ]
    }
}

/// The eleven run-length statistics, each normalized by the run count.
pub fn run_length_features(rlm: &RunLengthMatrix) -> RunLengthFeatures {
    let n_runs = rlm.n_runs as f64;
    let mut f = RunLengthFeatures {
        sre: 0.0,
        lre: 0.0,
        gln: 0.0,
        rln: 0.0,
        rp: n_runs / rlm.n_symbols as f64,
        lgre: 0.0,
        hgre: 0.0,
        srlge: 0.0,
        srhge: 0.0,
        lrlge: 0.0,
        lrhge: 0.0,
    };
    let mut level_totals = [0.0f64; LEVELS];
    let mut length_totals = vec![0.0f64; rlm.max_run];
    for (level, length, count) in rlm.entries() {
        let p = count as f64;
        let i2 = ((level + 1) * (level + 1)) as f64;
        let j2 = (length * length) as f64;
        f.sre += p / j2;
        f.lre += p * j2;
        f.lgre += p / i2;
        f.hgre += p * i2;
        f.srlge += p / (i2 * j2);
        f.srhge += p * i2 / j2;
        f.lrlge += p * j2 / i2;
        f.lrhge += p * i2 * j2;
        level_totals[level] += p;
        length_totals[length - 1] += p;
    }
    f.gln = level_totals.iter().map(|t| t * t).sum();
    f.rln = length_totals.iter().map(|t| t * t).sum();
    for v in [
        &mut f.sre,
        &mut f.lre,
        &mut f.gln,
        &mut f.rln,
        &mut f.lgre,
        &mut f.hgre,
        &mut f.srlge,
        &mut f.srhge,
        &mut f.lrlge,
        &mut f.lrhge,
    ] {
        *v /= n_runs;
    }
    f
}

#[inline]
fn threshold(neighbour: u8, center: u8) -> u8 {
    u8::from(neighbour >= center)
}

/// 1-D local binary pattern at `pos`: the left neighbour sets bit 0, the
/// right neighbour bit 1. A bit is set when the neighbour is not below the
/// center.
pub fn lbp_1d(seq: &CodedSequence, pos: usize) -> Result<u8> {
    let s = seq.symbols();
    if pos == 0 || pos + 1 >= s.len() {
        return Err(Error::OutOfRange { pos, len: s.len() });
    }
    let c = s[pos];
    Ok(threshold(s[pos - 1], c) | threshold(s[pos + 1], c) << 1)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlbpMode {
    Counts,
    #[default]
    Normalized,
}

impl std::str::FromStr for AlbpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counts" => Ok(AlbpMode::Counts),
            "normalized" => Ok(AlbpMode::Normalized),
            other => Err(Error::InvalidParameter(format!(
                "albp mode must be `counts` or `normalized`, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlbpHistogram {
    pub counts: [u64; ALBP_BINS],
    /// Number of adjacent position pairs with full neighbourhoods.
    pub valid_positions: usize,
}

impl AlbpHistogram {
    pub fn normalized(&self) -> [f64; ALBP_BINS] {
        let mut bins = [0.0; ALBP_BINS];
        if self.valid_positions > 0 {
            let total = self.valid_positions as f64;
            for (b, &c) in bins.iter_mut().zip(&self.counts) {
                *b = c as f64 / total;
            }
        }
        bins
    }

    pub fn bins(&self, mode: AlbpMode) -> [f64; ALBP_BINS] {
        match mode {
            AlbpMode::Normalized => self.normalized(),
            AlbpMode::Counts => self.counts.map(|c| c as f64),
        }
    }
}

/// Histogram of 4-bit labels formed by the 1-D LBPs of each adjacent pair of
/// positions; the first position gives the low two bits. Sequences shorter
/// than 4 have no such pair and give an empty histogram.
pub fn albp_histogram(seq: &CodedSequence) -> AlbpHistogram {
    let n = seq.len();
    let mut hist = AlbpHistogram {
        counts: [0; ALBP_BINS],
        valid_positions: n.saturating_sub(3),
    };
    if n < 4 {
        return hist;
    }
    let lbps: Vec<u8> = (1..n - 1)
        .map(|pos| lbp_1d(seq, pos).expect("interior position"))
        .collect();
    for pair in lbps.windows(2) {
        hist.counts[(pair[0] | pair[1] << 2) as usize] += 1;
    }
    hist
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; FEATURE_DIM]);

impl FeatureVector {
    pub fn values(&self) -> &[f64; FEATURE_DIM] {
        &self.0
    }

    pub fn run_length(&self) -> &[f64] {
        &self.0[..RUN_LENGTH_FEATURES]
    }

    pub fn albp(&self) -> &[f64] {
        &self.0[RUN_LENGTH_FEATURES..]
    }
}

/// Column names of a feature vector, in order.
pub fn feature_names() -> Vec<String> {
    RUN_LENGTH_NAMES
        .iter()
        .map(|s| s.to_string())
        .chain((0..ALBP_BINS).map(|b| format!("albp_{b:02}")))
        .collect()
}

/// Features of one document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DocumentFeatures {
    pub vector: FeatureVector,
    /// The sequence is too short for any ALBP pair.
    pub degenerate: bool,
}

pub fn feature_vector(seq: &CodedSequence, mode: AlbpMode) -> Result<DocumentFeatures> {
    let rlm = run_length_matrix(seq)?;
    let rl = run_length_features(&rlm).to_array();
    let albp = albp_histogram(seq);
    let mut values = [0.0; FEATURE_DIM];
    values[..RUN_LENGTH_FEATURES].copy_from_slice(&rl);
    values[RUN_LENGTH_FEATURES..].copy_from_slice(&albp.bins(mode));
    Ok(DocumentFeatures {
        vector: FeatureVector(values),
        degenerate: albp.valid_positions == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &[u8]) -> CodedSequence {
        CodedSequence::new(s.to_vec()).unwrap()
    }

    #[test]
    fn matrix_examples() {
        let m = run_length_matrix(&seq(&[0, 0, 1, 2, 2, 2])).unwrap();
        assert_eq!(m.count(0, 2), 1);
        assert_eq!(m.count(1, 1), 1);
        assert_eq!(m.count(2, 3), 1);
        assert_eq!(m.entries().count(), 3);
        assert_eq!((m.n_runs(), m.n_symbols()), (3, 6));

        let m = run_length_matrix(&seq(&[0])).unwrap();
        assert_eq!((m.count(0, 1), m.n_runs(), m.n_symbols()), (1, 1, 1));

        let m = run_length_matrix(&seq(&[3, 3, 3, 3])).unwrap();
        assert_eq!((m.count(3, 4), m.n_runs(), m.n_symbols()), (1, 1, 4));
    }

    #[test]
    fn features_of_mixed_runs() {
        // Runs (i=1, j=2), (i=2, j=1), (i=3, j=3).
        let f = run_length_features(&run_length_matrix(&seq(&[0, 0, 1, 2, 2, 2])).unwrap());
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(f.sre, (0.25 + 1.0 + 1.0 / 9.0) / 3.0));
        assert!(close(f.lre, 14.0 / 3.0));
        assert!(close(f.gln, 1.0));
        assert!(close(f.rln, 1.0));
        assert!(close(f.rp, 0.5));
        assert!(close(f.lgre, (1.0 + 0.25 + 1.0 / 9.0) / 3.0));
        assert!(close(f.hgre, 14.0 / 3.0));
        assert!((f.sre - 0.45370).abs() < 1e-5);
        assert!((f.lgre - 0.45370).abs() < 1e-5);
    }

    #[test]
    fn single_symbol_has_unit_features() {
        let f = run_length_features(&run_length_matrix(&seq(&[0])).unwrap());
        for v in f.to_array() {
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn single_run_of_length_k() {
        for k in 1..20usize {
            let f = run_length_features(&run_length_matrix(&seq(&vec![2; k])).unwrap());
            let k = k as f64;
            assert!((f.rp - 1.0 / k).abs() < 1e-15);
            assert!((f.lre - k * k).abs() < 1e-9);
            assert!((f.sre - 1.0 / (k * k)).abs() < 1e-15);
        }
    }

    #[test]
    fn lbp_examples() {
        assert_eq!(lbp_1d(&seq(&[0, 0, 0]), 1).unwrap(), 3);
        assert_eq!(lbp_1d(&seq(&[0, 1, 0]), 1).unwrap(), 0);
        assert_eq!(lbp_1d(&seq(&[1, 0, 3]), 1).unwrap(), 3);
        assert_eq!(lbp_1d(&seq(&[2, 1, 0]), 1).unwrap(), 1);
        assert!(matches!(
            lbp_1d(&seq(&[0, 1, 0]), 0),
            Err(Error::OutOfRange { pos: 0, len: 3 })
        ));
        assert!(lbp_1d(&seq(&[0, 1, 0]), 2).is_err());
    }

    #[test]
    fn albp_examples() {
        let h = albp_histogram(&seq(&[0, 0, 0, 0, 0]));
        assert_eq!(h.valid_positions, 2);
        let bins = h.normalized();
        assert_eq!(bins[15], 1.0);
        assert_eq!(bins.iter().sum::<f64>(), 1.0);

        let h = albp_histogram(&seq(&[0, 1, 0, 1, 0, 1]));
        let bins = h.normalized();
        assert!((bins[3] + bins[12] - 1.0).abs() < 1e-12);
        assert_eq!(h.counts[3], 1);
        assert_eq!(h.counts[12], 2);

        // Positions 1 and 2 of [0,0,0,1] both see neighbours >= center.
        let h = albp_histogram(&seq(&[0, 0, 0, 1]));
        assert_eq!(h.valid_positions, 1);
        assert_eq!(h.counts[15], 1);
        let h = albp_histogram(&seq(&[0, 0, 1, 0]));
        // LBP at 1 is 3; at 2 the center 1 exceeds both neighbours.
        assert_eq!(h.counts[3], 1);
    }

    #[test]
    fn short_sequences_are_degenerate() {
        for s in [&[1u8][..], &[1, 2], &[1, 2, 3]] {
            let f = feature_vector(&seq(s), AlbpMode::Normalized).unwrap();
            assert!(f.degenerate);
            assert!(f.vector.albp().iter().all(|&b| b == 0.0));
        }
        assert!(
            !feature_vector(&seq(&[1, 2, 3, 0]), AlbpMode::Normalized)
                .unwrap()
                .degenerate
        );
    }

    #[test]
    fn feature_vector_layout() {
        let s = seq(&[0, 0, 1, 2, 2, 2, 3, 1, 0]);
        let f = feature_vector(&s, AlbpMode::Normalized).unwrap();
        assert_eq!(f.vector.values().len(), 27);
        assert_eq!(f, feature_vector(&s, AlbpMode::Normalized).unwrap());
        let rl = run_length_features(&run_length_matrix(&s).unwrap()).to_array();
        assert_eq!(f.vector.run_length(), &rl);
        let counts = feature_vector(&s, AlbpMode::Counts).unwrap();
        assert_eq!(counts.vector.albp().iter().sum::<f64>(), 6.0);
        assert_eq!(feature_names().len(), 27);
        assert_eq!(feature_names()[11], "albp_00");
        assert_eq!(feature_names()[26], "albp_15");
    }
}
