use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{squared_euclidean, Clustering};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansOutcome {
    pub clustering: Clustering,
    /// Sum of squared distances to cluster means.
    pub objective: f64,
}

/// Within-cluster sum of squared Euclidean distances to the cluster means.
pub fn kmeans_objective(features: &[Vec<f64>], clustering: &Clustering) -> f64 {
    clustering
        .members()
        .iter()
        .map(|members| {
            let mean = centroid(features, members);
            members
                .iter()
                .map(|&d| squared_euclidean(&features[d], &mean))
                .sum::<f64>()
        })
        .sum()
}

fn centroid(features: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let mut mean = vec![0.0; features[0].len()];
    for &d in members {
        for (m, x) in mean.iter_mut().zip(&features[d]) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= members.len() as f64;
    }
    mean
}

fn plus_plus_seeds(features: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = features.len();
    let mut chosen = vec![rng.gen_range(0..n)];
    let mut nearest: Vec<f64> = features
        .iter()
        .map(|x| squared_euclidean(x, &features[chosen[0]]))
        .collect();
    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in nearest.iter().enumerate() {
                if d > 0.0 && target < d {
                    pick = i;
                    break;
                }
                target -= d;
            }
            pick
        } else {
            // Every point coincides with a seed; take any unchosen one.
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.gen_range(0..free.len())]
        };
        chosen.push(next);
        for (d, x) in nearest.iter_mut().zip(features) {
            *d = d.min(squared_euclidean(x, &features[next]));
        }
    }
    chosen.iter().map(|&i| features[i].clone()).collect()
}

fn lloyd(features: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> Vec<usize> {
    let n = features.len();
    let k = centroids.len();
    let mut labels = vec![usize::MAX; n];
    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for (x, label) in features.iter().zip(labels.iter_mut()) {
            let mut best = 0;
            let mut best_d = squared_euclidean(x, &centroids[0]);
            for (c, centroid) in centroids.iter().enumerate().skip(1) {
                let d = squared_euclidean(x, centroid);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            if *label != best {
                *label = best;
                changed = true;
            }
        }
        // Refill empty clusters with the point farthest from its centroid.
        for c in 0..k {
            if labels.contains(&c) {
                continue;
            }
            let mut sizes = vec![0usize; k];
            for &l in &labels {
                sizes[l] += 1;
            }
            let far = (0..n)
                .filter(|&i| sizes[labels[i]] > 1)
                .max_by(|&i, &j| {
                    squared_euclidean(&features[i], &centroids[labels[i]])
                        .total_cmp(&squared_euclidean(&features[j], &centroids[labels[j]]))
                        .then(j.cmp(&i))
                })
                .expect("k <= n leaves a cluster with at least two points");
            labels[far] = c;
            changed = true;
        }
        if !changed {
            break;
        }
        for (c, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
            *centroid = self::centroid(features, &members);
        }
    }
    labels
}

/// Lloyd's algorithm with k-means++ seeding, keeping the best of `restarts`
/// runs. Restart `r` draws from stream `r` of the seeded generator, so the
/// result does not depend on thread scheduling.
pub fn kmeans(
    features: &[Vec<f64>],
    k: usize,
    seed: u64,
    restarts: usize,
) -> Result<KMeansOutcome> {
    let n = features.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let restarts = restarts.max(1);
    let runs: Vec<KMeansOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let seeds = plus_plus_seeds(features, k, &mut rng);
            let clustering = Clustering::from_labels(&lloyd(features, seeds));
            let objective = kmeans_objective(features, &clustering);
            KMeansOutcome {
                clustering,
                objective,
            }
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, run| {
            if run.objective < best.objective {
                run
            } else {
                best
            }
        })
        .expect("at least one restart");
    Ok(best)
}
