//! Independent reference implementations used as test oracles. None of
//! these call into the library's algorithms.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::Rng;

/// Dense `4 x max_len` run-count matrix by a forward scan from every run
/// start.
pub fn brute_run_matrix(s: &[u8]) -> (Vec<Vec<u64>>, u64, u64) {
    let n = s.len();
    let mut p = vec![vec![0u64; n + 1]; 4];
    let mut runs = 0;
    for start in 0..n {
        if start > 0 && s[start - 1] == s[start] {
            continue;
        }
        let mut len = 0;
        while start + len < n && s[start + len] == s[start] {
            len += 1;
        }
        p[s[start] as usize][len] += 1;
        runs += 1;
    }
    (p, runs, n as u64)
}

/// The eleven run-length statistics by a double loop over the dense matrix,
/// with gray row `i` and run length `j` both starting at 1.
pub fn brute_run_features(s: &[u8]) -> [f64; 11] {
    let (p, n_r, n_p) = brute_run_matrix(s);
    let n_r = n_r as f64;
    let m = 4;
    let n = s.len();
    let mut sre = 0.0;
    let mut lre = 0.0;
    let mut lgre = 0.0;
    let mut hgre = 0.0;
    let mut srlge = 0.0;
    let mut srhge = 0.0;
    let mut lrlge = 0.0;
    let mut lrhge = 0.0;
    for i in 1..=m {
        for j in 1..=n {
            let v = p[i - 1][j] as f64;
            let (fi, fj) = (i as f64, j as f64);
            sre += v / (fj * fj);
            lre += v * fj * fj;
            lgre += v / (fi * fi);
            hgre += v * fi * fi;
            srlge += v / (fi * fi * fj * fj);
            srhge += v * fi * fi / (fj * fj);
            lrlge += v * fj * fj / (fi * fi);
            lrhge += v * fi * fi * fj * fj;
        }
    }
    let mut gln = 0.0;
    for i in 1..=m {
        let row: f64 = (1..=n).map(|j| p[i - 1][j] as f64).sum();
        gln += row * row;
    }
    let mut rln = 0.0;
    for j in 1..=n {
        let col: f64 = (1..=m).map(|i| p[i - 1][j] as f64).sum();
        rln += col * col;
    }
    [
        sre / n_r,
        lre / n_r,
        gln / n_r,
        rln / n_r,
        n_r / n_p as f64,
        lgre / n_r,
        hgre / n_r,
        srlge / n_r,
        srhge / n_r,
        lrlge / n_r,
        lrhge / n_r,
    ]
}

fn sign(x: i32) -> u32 {
    if x >= 0 {
        1
    } else {
        0
    }
}

/// ALBP label counts by direct per-position evaluation of the thresholded
/// neighbour sum.
pub fn brute_albp_counts(s: &[u8]) -> [u64; 16] {
    let mut counts = [0u64; 16];
    if s.len() < 4 {
        return counts;
    }
    let lbp = |c: usize| {
        let center = s[c] as i32;
        sign(s[c - 1] as i32 - center) + 2 * sign(s[c + 1] as i32 - center)
    };
    for pos in 1..s.len() - 2 {
        counts[(lbp(pos) + 4 * lbp(pos + 1)) as usize] += 1;
    }
    counts
}

/// Modularity from a dense symmetric weight matrix.
pub fn dense_modularity(a: &[Vec<f64>], labels: &[usize]) -> f64 {
    let n = a.len();
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Calls `f` with every partition of `0..n` into at most `max_blocks`
/// blocks, as restricted growth strings.
pub fn for_each_partition(n: usize, max_blocks: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(
        labels: &mut Vec<usize>,
        n: usize,
        used: usize,
        max_blocks: usize,
        f: &mut impl FnMut(&[usize]),
    ) {
        if labels.len() == n {
            f(labels);
            return;
        }
        let limit = (used + 1).min(max_blocks);
        for b in 0..limit {
            labels.push(b);
            rec(labels, n, used.max(b + 1), max_blocks, f);
            labels.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, 0, max_blocks, f);
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Complete-linkage agglomeration recomputing every inter-cluster distance
/// from member pairs at each step. Returns canonical labels.
pub fn naive_complete_linkage(points: &[Vec<f64>], start: &[usize], k_target: usize) -> Vec<usize> {
    let k = start.iter().max().unwrap() + 1;
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &c) in start.iter().enumerate() {
        clusters[c].push(i);
    }
    while clusters.len() > k_target {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut d: f64 = 0.0;
                for &x in &clusters[a] {
                    for &y in &clusters[b] {
                        d = d.max(l1(&points[x], &points[y]));
                    }
                }
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let moved = clusters.remove(best.2);
        clusters[best.1].extend(moved);
    }
    let mut labels = vec![0; points.len()];
    for (c, members) in clusters.iter().enumerate() {
        for &m in members {
            labels[m] = c;
        }
    }
    canonical(&labels)
}

/// Unweighted-average agglomeration computing each average from raw point
/// pairs. Clusters are named by their smallest member. Returns the merge
/// sequence `(a, b, distance)`.
pub fn naive_average_linkage(points: &[Vec<f64>]) -> Vec<(usize, usize, f64)> {
    let n = points.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut merges = Vec::new();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut sum = 0.0;
                for &x in &clusters[a] {
                    for &y in &clusters[b] {
                        sum += l1(&points[x], &points[y]);
                    }
                }
                let d = sum / (clusters[a].len() * clusters[b].len()) as f64;
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let moved = clusters.remove(best.2);
        let name_a = clusters[best.1][0];
        let name_b = moved[0];
        clusters[best.1].extend(moved);
        clusters[best.1].sort();
        merges.push((name_a.min(name_b), name_a.max(name_b), best.0));
        clusters.sort_by_key(|c| c[0]);
    }
    merges
}

/// Minimum k-means objective over all 2-partitions.
pub fn exhaustive_two_means(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let mut best = f64::INFINITY;
    // Point 0 always in block 0; block 1 nonempty.
    for mask in 1u32..(1 << (n - 1)) {
        let labels: Vec<usize> = (0..n)
            .map(|i| {
                if i > 0 && mask >> (i - 1) & 1 == 1 {
                    1
                } else {
                    0
                }
            })
            .collect();
        let mut obj = 0.0;
        for c in 0..2 {
            let members: Vec<&Vec<f64>> = (0..n)
                .filter(|&i| labels[i] == c)
                .map(|i| &points[i])
                .collect();
            let dim = points[0].len();
            let mean: Vec<f64> = (0..dim)
                .map(|d| members.iter().map(|p| p[d]).sum::<f64>() / members.len() as f64)
                .collect();
            obj += members
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&mean)
                        .map(|(x, m)| (x - m) * (x - m))
                        .sum::<f64>()
                })
                .sum::<f64>();
        }
        best = best.min(obj);
    }
    best
}

/// Relabels to ids in order of first appearance.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = Vec::new();
    labels
        .iter()
        .map(|&l| match map.iter().find(|(from, _)| *from == l) {
            Some(&(_, to)) => to,
            None => {
                map.push((l, map.len()));
                map.len() - 1
            }
        })
        .collect()
}

/// NMI with arithmetic-mean normalization, computed from label lists.
pub fn brute_nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut joint = vec![vec![0.0; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        joint[x][y] += 1.0;
    }
    let pa: Vec<f64> = joint.iter().map(|r| r.iter().sum::<f64>() / n).collect();
    let pb: Vec<f64> = (0..kb)
        .map(|j| joint.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect();
    let h = |p: &[f64]| {
        -p.iter()
            .filter(|&&x| x > 0.0)
            .map(|x| x * x.ln())
            .sum::<f64>()
    };
    let (ha, hb) = (h(&pa), h(&pb));
    if ha + hb == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let pij = joint[i][j] / n;
            if pij > 0.0 {
                mi += pij * (pij / (pa[i] * pb[j])).ln();
            }
        }
    }
    2.0 * mi / (ha + hb)
}

/// Inclusive `(x0, y0, x1, y1)` corners.
pub type Rect = (usize, usize, usize, usize);

/// Planted non-touching rectangles on a blank canvas. Rectangles keep at
/// least one background pixel between each other in every direction.
pub fn plant_rectangles<R: Rng>(
    rng: &mut R,
    width: usize,
    height: usize,
    attempts: usize,
) -> (Vec<u8>, Vec<Rect>) {
    let mut pixels = vec![0u8; width * height];
    let mut rects: Vec<Rect> = Vec::new();
    for _ in 0..attempts {
        let w = rng.gen_range(2..=6.min(width));
        let h = rng.gen_range(2..=8.min(height));
        let x0 = rng.gen_range(0..=width - w);
        let y0 = rng.gen_range(0..=height - h);
        let (x1, y1) = (x0 + w - 1, y0 + h - 1);
        let clear = rects.iter().all(|&(ax0, ay0, ax1, ay1)| {
            x1 + 1 < ax0 || ax1 + 1 < x0 || y1 + 1 < ay0 || ay1 + 1 < y0
        });
        if !clear {
            continue;
        }
        for y in y0..=y1 {
            for x in x0..=x1 {
                pixels[y * width + x] = 1;
            }
        }
        rects.push((x0, y0, x1, y1));
    }
    (pixels, rects)
}

/// Random symmetric planted-block weight matrix.
pub fn planted_blocks<R: Rng>(rng: &mut R, sizes: &[usize]) -> Vec<Vec<f64>> {
    let n: usize = sizes.iter().sum();
    let block: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = if block[i] == block[j] {
                if rng.gen_bool(0.9) {
                    rng.gen_range(0.6..1.0)
                } else {
                    0.0
                }
            } else if rng.gen_bool(0.15) {
                rng.gen_range(0.05..0.3)
            } else {
                0.0
            };
            a[i][j] = w;
            a[j][i] = w;
        }
    }
    a
}
