use super::{l1, Clustering};
use crate::error::{Error, Result};

/// L1 distance between the two farthest members of clusters `a` and `b`.
pub fn complete_linkage_distance(features: &[Vec<f64>], a: &[usize], b: &[usize]) -> f64 {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| l1(&features[x], &features[y])))
        .fold(0.0, f64::max)
}

/// Repeatedly merges the globally closest pair of clusters, measured by
/// [`complete_linkage_distance`], until `k_target` clusters remain. Ties go
/// to the lowest `(a, b)` pair. The merged cluster takes the lower id and
/// ids are compacted after every merge.
pub fn refine_merge(
    clustering: &Clustering,
    features: &[Vec<f64>],
    k_target: usize,
) -> Result<Clustering> {
    if k_target == 0 || k_target > clustering.k() {
        return Err(Error::InvalidTarget {
            target: k_target,
            current: clustering.k(),
        });
    }
    if features.len() != clustering.len() {
        return Err(Error::InvalidParameter(format!(
            "{} feature rows for {} documents",
            features.len(),
            clustering.len()
        )));
    }
    let mut clusters = clustering.members();
    let k = clusters.len();
    let mut dist = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let d = complete_linkage_distance(features, &clusters[a], &clusters[b]);
            dist[a][b] = d;
            dist[b][a] = d;
        }
    }
    while clusters.len() > k_target {
        let mut best = (0, 1);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                if dist[a][b] < dist[best.0][best.1] {
                    best = (a, b);
                }
            }
        }
        let (a, b) = best;
        let absorbed = clusters.remove(b);
        clusters[a].extend(absorbed);
        clusters[a].sort_unstable();
        // The farthest pair across a union is the farther of the two parts.
        let merged: Vec<f64> = dist[a]
            .iter()
            .zip(&dist[b])
            .map(|(x, y)| x.max(*y))
            .collect();
        for (c, d) in merged.into_iter().enumerate() {
            dist[a][c] = d;
            dist[c][a] = d;
        }
        dist[a][a] = 0.0;
        dist.remove(b);
        for row in &mut dist {
            row.remove(b);
        }
    }
    let mut labels = vec![0; clustering.len()];
    for (id, members) in clusters.iter().enumerate() {
        for &doc in members {
            labels[doc] = id;
        }
    }
    Ok(Clustering::from_labels(&labels))
}
