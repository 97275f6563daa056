//! Document clustering: the genetic graph clustering with bandwidth-filtered
//! neighbourhood graphs and merge refinement, plus K-Means and
//! average-linkage baselines.

mod ga;
mod gaicda;
mod graph;
mod kmeans;
mod linkage;
mod refine;

pub use ga::{decode, ga_cluster, modularity, GaOutcome, GaParams};
pub use gaicda::{gaicda, GaicdaOutcome, GaicdaParams, Preset};
pub use graph::{build_graph, DocumentGraph, NodeOrdering};
pub use kmeans::{kmeans, kmeans_objective, KMeansOutcome};
pub use linkage::{average_linkage, Dendrogram, Merge};
pub use refine::{complete_linkage_distance, refine_merge};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense row-major matrix of documents by features.
pub type FeatureMatrix = Vec<Vec<f64>>;

/// A partition of documents into `k` nonempty clusters with ids `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clustering {
    assignment: Vec<usize>,
    k: usize,
}

impl Clustering {
    /// Relabels arbitrary cluster labels to contiguous ids in order of first
    /// appearance.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut seen: Vec<&T> = Vec::new();
        let assignment = labels
            .iter()
            .map(|l| match seen.iter().position(|s| *s == l) {
                Some(id) => id,
                None => {
                    seen.push(l);
                    seen.len() - 1
                }
            })
            .collect();
        Self {
            assignment,
            k: seen.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            k: n,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Members of every cluster, each list in ascending order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (doc, &c) in self.assignment.iter().enumerate() {
            out[c].push(doc);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Z-scores every column with the population standard deviation.
/// Zero-variance columns become all zeros.
pub fn standardize(features: &[Vec<f64>]) -> Result<FeatureMatrix> {
    let n = features.len();
    if n < 2 {
        return Err(Error::TooFewDocuments(n));
    }
    let dim = features[0].len();
    if features.iter().any(|row| row.len() != dim) {
        return Err(Error::InvalidParameter("ragged feature matrix".into()));
    }
    let mut out = vec![vec![0.0; dim]; n];
    for col in 0..dim {
        let mean = features.iter().map(|r| r[col]).sum::<f64>() / n as f64;
        let var = features
            .iter()
            .map(|r| (r[col] - mean) * (r[col] - mean))
            .sum::<f64>()
            / n as f64;
        let sd = var.sqrt();
        // Constant columns can leave rounding residue in the variance.
        if sd <= 1e-12 * mean.abs().max(1.0) {
            continue;
        }
        for (dst, row) in out.iter_mut().zip(features) {
            dst[col] = (row[col] - mean) / sd;
        }
    }
    Ok(out)
}
