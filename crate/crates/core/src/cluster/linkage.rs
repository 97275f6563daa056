use super::{l1, Clustering};
use crate::error::{Error, Result};

/// One agglomeration step. Clusters are named by their smallest member, so
/// `a < b` and the union is named `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

/// Merge history of an average-linkage (UPGMA) agglomeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    /// Agglomerates all documents into one cluster using the unweighted
    /// average of pairwise L1 distances. Ties go to the lowest `(a, b)`.
    pub fn build(features: &[Vec<f64>]) -> Self {
        let n = features.len();
        let mut dist = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let d = l1(&features[a], &features[b]);
                dist[a][b] = d;
                dist[b][a] = d;
            }
        }
        let mut size = vec![1usize; n];
        let mut active = vec![true; n];
        let mut merges = Vec::with_capacity(n.saturating_sub(1));
        for _ in 1..n {
            let mut best: Option<(usize, usize)> = None;
            for a in (0..n).filter(|&a| active[a]) {
                for b in (a + 1..n).filter(|&b| active[b]) {
                    if best.is_none_or(|(x, y)| dist[a][b] < dist[x][y]) {
                        best = Some((a, b));
                    }
                }
            }
            let (a, b) = best.expect("two active clusters");
            merges.push(Merge {
                a,
                b,
                distance: dist[a][b],
            });
            let (sa, sb) = (size[a] as f64, size[b] as f64);
            for c in (0..n).filter(|&c| active[c] && c != a && c != b) {
                let d = (sa * dist[a][c] + sb * dist[b][c]) / (sa + sb);
                dist[a][c] = d;
                dist[c][a] = d;
            }
            size[a] += size[b];
            active[b] = false;
        }
        Self { n, merges }
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// The partition after all but the last `k - 1` merges.
    pub fn cut(&self, k: usize) -> Result<Clustering> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidK { k, n: self.n });
        }
        let mut label: Vec<usize> = (0..self.n).collect();
        for m in &self.merges[..self.n - k] {
            for l in label.iter_mut() {
                if *l == m.b {
                    *l = m.a;
                }
            }
        }
        Ok(Clustering::from_labels(&label))
    }
}

pub fn average_linkage(features: &[Vec<f64>], k: usize) -> Result<Clustering> {
    let n = features.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Dendrogram::build(features).cut(k)
}
