//! External evaluation of a clustering against ground-truth script classes.
//!
//! Each found cluster is labelled with the class most frequent inside it;
//! precision, recall and f-measure are then computed per class. NMI uses
//! natural-log entropies normalized by their arithmetic mean.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cluster::Clustering;
use crate::error::{Error, Result};

/// Counts of documents by true class (rows) and found cluster (columns).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if classes.len() != counts.len() {
            return Err(Error::InvalidParameter(format!(
                "{} class names for {} rows",
                classes.len(),
                counts.len()
            )));
        }
        let width = counts.first().map_or(0, Vec::len);
        if counts.iter().any(|row| row.len() != width) {
            return Err(Error::InvalidParameter("ragged confusion matrix".into()));
        }
        Ok(Self { classes, counts })
    }

    /// Cross-tabulates true labels against a clustering. Classes are ordered
    /// by first appearance in `truth`.
    pub fn new<S: AsRef<str>>(truth: &[S], found: &Clustering) -> Result<Self> {
        if truth.len() != found.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} clustered documents",
                truth.len(),
                found.len()
            )));
        }
        let mut classes: Vec<String> = Vec::new();
        let mut rows = Vec::with_capacity(truth.len());
        for label in truth {
            let label = label.as_ref();
            let row = match classes.iter().position(|c| c == label) {
                Some(r) => r,
                None => {
                    classes.push(label.to_string());
                    classes.len() - 1
                }
            };
            rows.push(row);
        }
        let mut counts = vec![vec![0u64; found.k()]; classes.len()];
        for (&row, &col) in rows.iter().zip(found.assignment()) {
            counts[row][col] += 1;
        }
        Ok(Self { classes, counts })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn cluster_count(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    fn class_index(&self, class: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c == class)
            .ok_or_else(|| Error::UnknownClass(class.to_string()))
    }
}

/// Maps every cluster to the index of its most frequent class; ties go to
/// the lower class index.
pub fn majority_map(cm: &ConfusionMatrix) -> Result<Vec<usize>> {
    (0..cm.cluster_count())
        .map(|col| {
            let mut best = 0;
            let mut total = 0;
            for (row, counts) in cm.counts.iter().enumerate() {
                total += counts[col];
                if counts[col] > cm.counts[best][col] {
                    best = row;
                }
            }
            if total == 0 {
                Err(Error::EmptyCluster(col))
            } else {
                Ok(best)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

/// Precision, recall and f-measure of `class` once clusters are mapped to
/// classes. Clusters mapped to the same class are pooled; vanishing
/// denominators give zero.
pub fn precision_recall_f(
    cm: &ConfusionMatrix,
    mapping: &[usize],
    class: &str,
) -> Result<ClassScores> {
    let row = cm.class_index(class)?;
    if mapping.len() != cm.cluster_count() {
        return Err(Error::InvalidParameter(format!(
            "mapping covers {} of {} clusters",
            mapping.len(),
            cm.cluster_count()
        )));
    }
    let mut tp = 0u64;
    let mut predicted = 0u64;
    for (col, &mapped) in mapping.iter().enumerate() {
        if mapped == row {
            tp += cm.counts[row][col];
            predicted += cm.counts.iter().map(|r| r[col]).sum::<u64>();
        }
    }
    let actual: u64 = cm.counts[row].iter().sum();
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, predicted);
    let recall = ratio(tp, actual);
    let f_measure = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(ClassScores {
        precision,
        recall,
        f_measure,
    })
}

fn entropy(marginal: &[u64], total: f64) -> f64 {
    marginal
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// NMI of a contingency table, `2 I / (H_rows + H_cols)`.
pub fn nmi_from_counts(counts: &[Vec<u64>]) -> f64 {
    let total: u64 = counts.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let rows: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
    let width = counts.first().map_or(0, Vec::len);
    let cols: Vec<u64> = (0..width)
        .map(|c| counts.iter().map(|r| r[c]).sum())
        .collect();
    let h_rows = entropy(&rows, n);
    let h_cols = entropy(&cols, n);
    if h_rows + h_cols == 0.0 {
        // Both partitions are a single block.
        return 1.0;
    }
    let mut mi = 0.0;
    for (r, row) in counts.iter().enumerate() {
        for (c, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let nij = nij as f64;
                mi += nij / n * (nij * n / (rows[r] as f64 * cols[c] as f64)).ln();
            }
        }
    }
    (2.0 * mi / (h_rows + h_cols)).clamp(0.0, 1.0)
}

pub fn nmi(truth: &Clustering, found: &Clustering) -> f64 {
    assert_eq!(
        truth.len(),
        found.len(),
        "partitions of different document sets"
    );
    let mut counts = vec![vec![0u64; found.k()]; truth.k()];
    for (&t, &f) in truth.assignment().iter().zip(found.assignment()) {
        counts[t][f] += 1;
    }
    nmi_from_counts(&counts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_class: BTreeMap<String, ClassScores>,
    pub nmi: f64,
    pub classes: Vec<String>,
    pub confusion: Vec<Vec<u64>>,
    /// Cluster id to majority class.
    pub mapping: BTreeMap<String, String>,
}

impl EvalReport {
    pub fn scores(&self, class: &str) -> Option<&ClassScores> {
        self.per_class.get(class)
    }
}

pub fn evaluate<S: AsRef<str>>(truth: &[S], found: &Clustering) -> Result<EvalReport> {
    let cm = ConfusionMatrix::new(truth, found)?;
    let mapping = majority_map(&cm)?;
    let per_class = cm
        .classes()
        .iter()
        .map(|c| Ok((c.clone(), precision_recall_f(&cm, &mapping, c)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(EvalReport {
        per_class,
        nmi: nmi_from_counts(cm.counts()),
        classes: cm.classes().to_vec(),
        mapping: mapping
            .iter()
            .enumerate()
            .map(|(cluster, &class)| (cluster.to_string(), cm.classes()[class].clone()))
            .collect(),
        confusion: cm.counts,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Plain-text table of per-class scores and NMI, as mean ± standard
/// deviation over repeated runs of each method.
pub fn summary_table(classes: &[String], methods: &[(String, Vec<EvalReport>)]) -> String {
    let mut out = String::new();
    let cell = |values: &[f64]| {
        let (m, s) = mean_std(values);
        format!("{m:.4} ± {s:.4}")
    };
    for (method, reports) in methods {
        if reports.is_empty() {
            continue;
        }
        let _ = writeln!(out, "{method} ({} runs)", reports.len());
        let _ = writeln!(
            out,
            "  {:<20} {:>17} {:>17} {:>17}",
            "class", "precision", "recall", "f-measure"
        );
        for class in classes {
            let pick = |f: fn(&ClassScores) -> f64| -> Vec<f64> {
                reports
                    .iter()
                    .map(|r| r.per_class.get(class).map_or(0.0, f))
                    .collect()
            };
            let _ = writeln!(
                out,
                "  {:<20} {:>17} {:>17} {:>17}",
                class,
                cell(&pick(|s| s.precision)),
                cell(&pick(|s| s.recall)),
                cell(&pick(|s| s.f_measure)),
            );
        }
        let nmis: Vec<f64> = reports.iter().map(|r| r.nmi).collect();
        let _ = writeln!(out, "  {:<20} {:>17}", "NMI", cell(&nmis));
        out.push('\n');
    }
    out
}
