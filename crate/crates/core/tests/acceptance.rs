//! Acceptance criteria. Every test prints one `[PASS]`/`[FAIL]` line; run
//! with `cargo test -p scriptid --test acceptance -- --nocapture` to see them.

#![allow(clippy::needless_range_loop)]

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scriptid::cluster::{
    average_linkage, ga_cluster, gaicda, kmeans, kmeans_objective, modularity, refine_merge,
    Clustering, DocumentGraph, GaParams, GaicdaParams, Preset,
};
use scriptid::eval::{majority_map, nmi, nmi_from_counts, precision_recall_f, ConfusionMatrix};
use scriptid::image::BinaryImage;
use scriptid::segment::{extract_blobs, horizontal_projection, segment_lines};
use scriptid::synth::{generate_synthetic, script_profiles, SyntheticDocument};
use scriptid::texture::{
    albp_histogram, feature_vector, run_length_features, run_length_matrix, AlbpMode,
};
use scriptid::typography::CodedSequence;

fn report(id: &str, name: &str, pass: bool, detail: String) {
    println!(
        "[{}] {id} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn check(
    id: &str,
    name: &str,
    failures: &[String],
    elapsed: Duration,
    limit: Duration,
    extra: String,
) {
    let pass = failures.is_empty() && elapsed < limit;
    report(
        id,
        name,
        pass,
        format!(
            "{extra}; {:.2?} (limit {limit:?}); {} failure(s)",
            elapsed,
            failures.len()
        ),
    );
    assert!(
        failures.is_empty(),
        "{id}: {:?}",
        &failures[..failures.len().min(5)]
    );
    assert!(elapsed < limit, "{id}: took {elapsed:?}, limit {limit:?}");
}

/// Confusion matrix with rows Cyrillic/angular/round: true sizes 5/10/5,
/// found clusters 5/12/3, two round labels in the angular cluster.
fn table3() -> ConfusionMatrix {
    ConfusionMatrix::from_counts(
        vec!["cyrillic".into(), "angular".into(), "round".into()],
        vec![vec![5, 0, 0], vec![0, 10, 0], vec![0, 2, 3]],
    )
    .unwrap()
}

#[test]
fn ac1_run_length_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for case in 0..10_000 {
        let len = rng.gen_range(1..=200);
        let s: Vec<u8> = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let seq = CodedSequence::new(s.clone()).unwrap();
        let m = run_length_matrix(&seq).unwrap();
        let (dense, n_r, n_p) = common::brute_run_matrix(&s);
        let same_matrix = m.n_runs() == n_r
            && m.n_symbols() == n_p
            && (0..4).all(|g| (1..=len).all(|j| m.count(g, j) == dense[g][j]));
        if !same_matrix {
            failures.push(format!("case {case}: matrix differs"));
            continue;
        }
        let got = run_length_features(&m).to_array();
        let want = common::brute_run_features(&s);
        for (k, (g, w)) in got.iter().zip(&want).enumerate() {
            let err = (g - w).abs() / w.abs().max(1.0);
            worst = worst.max(err);
            if err > 1e-12 {
                failures.push(format!("case {case} feature {k}: {g} vs {w}"));
            }
        }
    }
    check(
        "AC1",
        "run-length oracle equivalence",
        &failures,
        start.elapsed(),
        Duration::from_secs(10),
        format!("10000 sequences, max rel err {worst:.1e}"),
    );
}

#[test]
fn ac2_albp_exhaustive() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for code in 0..1024u32 {
        let s: Vec<u8> = (0..5).map(|p| ((code >> (2 * p)) & 3) as u8).collect();
        let h = albp_histogram(&CodedSequence::new(s.clone()).unwrap());
        let want = common::brute_albp_counts(&s);
        if h.counts != want || h.valid_positions != 2 {
            failures.push(format!("{s:?}: {:?} vs {want:?}", h.counts));
        }
        let bins = h.normalized();
        if (bins.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            failures.push(format!("{s:?}: bins do not sum to 1"));
        }
        if s.iter().all(|&x| x == s[0]) && bins[15] != 1.0 {
            failures.push(format!(
                "{s:?}: constant sequence not concentrated in bin 15"
            ));
        }
    }
    check(
        "AC2",
        "ALBP exhaustive check",
        &failures,
        start.elapsed(),
        Duration::from_secs(1),
        "1024 length-5 sequences".into(),
    );
}

#[test]
fn ac3_nmi_anchor() {
    let value = nmi_from_counts(table3().counts());
    let pass = (value - 0.7782).abs() <= 1e-4;
    report(
        "AC3",
        "NMI anchor",
        pass,
        format!("NMI = {value:.6} (target 0.7782 ± 0.0001)"),
    );
    assert!(pass);
}

#[test]
fn ac4_precision_recall_anchors() {
    let cm = table3();
    let mapping = majority_map(&cm).unwrap();
    let expected = [
        ("cyrillic", 1.0, 1.0, 1.0),
        ("angular", 0.8333, 1.0, 0.9091),
        ("round", 1.0, 0.6, 0.75),
    ];
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for (class, p, r, f) in expected {
        let s = precision_recall_f(&cm, &mapping, class).unwrap();
        detail.push(format!(
            "{class} ({:.4}, {:.4}, {:.4})",
            s.precision, s.recall, s.f_measure
        ));
        for (got, want) in [(s.precision, p), (s.recall, r), (s.f_measure, f)] {
            if (got - want).abs() > 1e-4 {
                failures.push(format!("{class}: {got} vs {want}"));
            }
        }
    }
    report(
        "AC4",
        "precision/recall/f anchors",
        failures.is_empty(),
        detail.join(", "),
    );
    assert!(failures.is_empty(), "{failures:?}");
}

fn features_of(docs: &[SyntheticDocument]) -> Vec<Vec<f64>> {
    docs.iter()
        .map(|d| {
            feature_vector(&d.sequence, AlbpMode::Normalized)
                .unwrap()
                .vector
                .values()
                .to_vec()
        })
        .collect()
}

fn truth_of(docs: &[SyntheticDocument]) -> Clustering {
    let classes: Vec<&str> = docs.iter().map(|d| d.class.as_str()).collect();
    Clustering::from_labels(&classes)
}

#[test]
fn ac5_separated_profiles_recovered() {
    let start = Instant::now();
    let mut perfect = 0;
    let mut total = 0.0;
    for seed in 0..50u64 {
        let docs = generate_synthetic(&script_profiles(), &[5, 5, 5], 1000 + seed).unwrap();
        let mut params = GaicdaParams::from_preset(Preset::Db1);
        params.ga.rng_seed = seed;
        let out = gaicda(&features_of(&docs), &params).unwrap();
        let score = nmi(&truth_of(&docs), &out.clustering);
        total += score;
        if (score - 1.0).abs() < 1e-12 {
            perfect += 1;
        }
    }
    let mean = total / 50.0;
    let elapsed = start.elapsed();
    let pass = perfect >= 45 && mean >= 0.98 && elapsed < Duration::from_secs(60);
    report(
        "AC5",
        "desk-scale perfect separation",
        pass,
        format!("NMI = 1 in {perfect}/50 runs, mean NMI {mean:.4}, {elapsed:.2?} (limit 60s)"),
    );
    assert!(pass);
}

#[test]
fn ac6_transitional_profile_comparison() {
    let start = Instant::now();
    let base = script_profiles();
    let transitional = base[1].interpolate(&base[2], 0.5, "angular");
    let profiles = vec![
        base[0].clone(),
        base[1].clone(),
        transitional,
        base[2].clone(),
    ];
    let (mut ga, mut km, mut al) = (0.0, 0.0, 0.0);
    for seed in 0..50u64 {
        let docs = generate_synthetic(&profiles, &[5, 5, 5, 5], 2000 + seed).unwrap();
        let truth = truth_of(&docs);
        let features = features_of(&docs);
        let mut params = GaicdaParams::from_preset(Preset::Db2);
        params.ga.rng_seed = seed;
        ga += nmi(&truth, &gaicda(&features, &params).unwrap().clustering);
        let z = scriptid::cluster::standardize(&features).unwrap();
        km += nmi(&truth, &kmeans(&z, 3, seed, 10).unwrap().clustering);
        al += nmi(&truth, &average_linkage(&z, 3).unwrap());
    }
    let (ga, km, al) = (ga / 50.0, km / 50.0, al / 50.0);
    let elapsed = start.elapsed();
    let pass = ga > km && ga > al && elapsed < Duration::from_secs(120);
    report(
        "AC6",
        "transitional profile comparison",
        pass,
        format!(
            "mean NMI GA-ICDA {ga:.4}, K-Means {km:.4}, average linkage {al:.4}; {elapsed:.2?} (limit 120s)"
        ),
    );
    assert!(pass);
}

#[test]
fn ac7_clustering_oracles() {
    let start = Instant::now();
    let mut failures = Vec::new();

    // Genetic search against exhaustive modularity at n = 12.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let weights = common::planted_blocks(&mut rng, &[4, 4, 4]);
    let mut edges = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            if weights[i][j] > 0.0 {
                edges.push((i, j, weights[i][j]));
            }
        }
    }
    let graph = DocumentGraph::from_edges(12, &edges).unwrap();
    let mut optimum = f64::NEG_INFINITY;
    common::for_each_partition(12, 4, &mut |labels| {
        optimum = optimum.max(common::dense_modularity(&weights, labels));
    });
    let mut hits = 0;
    for seed in 0..50 {
        let out = ga_cluster(
            &graph,
            &GaParams {
                rng_seed: seed,
                ..GaParams::default()
            },
        )
        .unwrap();
        let q = common::dense_modularity(&weights, out.clustering.assignment());
        if (q - out.fitness).abs() > 1e-12 {
            failures.push(format!(
                "seed {seed}: reported fitness {} vs {q}",
                out.fitness
            ));
        }
        if q >= optimum - 1e-9 {
            hits += 1;
        }
    }
    if hits < 45 {
        failures.push(format!("modularity optimum reached in {hits}/50 seeds"));
    }

    // Refinement against naive complete-linkage agglomeration.
    let mut refine_ok = 0;
    for case in 0..20 {
        let n = 24;
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let mut start_labels: Vec<usize> = (0..8).collect();
        start_labels.extend((8..n).map(|_| rng.gen_range(0..8)));
        let start_labels = common::canonical(&start_labels);
        let refined = refine_merge(&Clustering::from_labels(&start_labels), &points, 3).unwrap();
        let oracle = common::naive_complete_linkage(&points, &start_labels, 3);
        if refined.assignment() == oracle.as_slice() {
            refine_ok += 1;
        } else {
            failures.push(format!("refine case {case} differs from oracle"));
        }
    }

    // K-Means against exhaustive 2-partitions.
    let mut kmeans_ok = 0;
    for case in 0..30 {
        let n = rng.gen_range(3..=8);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect())
            .collect();
        let out = kmeans(&points, 2, case, 1000).unwrap();
        let best = common::exhaustive_two_means(&points);
        let objective = kmeans_objective(&points, &out.clustering);
        if (objective - best).abs() <= 1e-9 && (out.objective - best).abs() <= 1e-9 {
            kmeans_ok += 1;
        } else {
            failures.push(format!(
                "kmeans case {case}: {objective} vs {best} on {points:?}"
            ));
        }
    }

    check(
        "AC7",
        "clustering oracles",
        &failures,
        start.elapsed(),
        Duration::from_secs(600),
        format!(
            "GA optimum {hits}/50 (Q* = {optimum:.6}, modularity check {:.6}), refine {refine_ok}/20, k-means {kmeans_ok}/30",
            modularity(&graph, &Clustering::from_labels(&[0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]))
        ),
    );
}

#[test]
fn ac8_segmentation_properties() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    for case in 0..1000 {
        let (w, h) = (rng.gen_range(8..40), rng.gen_range(8..40));
        let (pixels, rects) = common::plant_rectangles(&mut rng, w, h, 8);
        let img = BinaryImage::new(w, h, pixels).unwrap();

        let profile = horizontal_projection(&img);
        if profile.iter().sum::<usize>() != img.ink_count() {
            failures.push(format!("case {case}: projection sum"));
        }
        let bands = segment_lines(&profile, 1).unwrap();
        for (y, &c) in profile.iter().enumerate() {
            if c > 0 && !bands.iter().any(|b| b.y_top <= y && y <= b.y_bottom) {
                failures.push(format!("case {case}: row {y} uncovered"));
            }
        }

        let blobs = extract_blobs(&img, &bands, 1).unwrap();
        let mut found: Vec<_> = blobs
            .iter()
            .map(|b| (b.bbox.x_min, b.bbox.y_min, b.bbox.x_max, b.bbox.y_max))
            .collect();
        found.sort();
        let mut planted = rects.clone();
        planted.sort();
        if found != planted {
            failures.push(format!(
                "case {case}: blobs {found:?} vs planted {planted:?}"
            ));
        }
        let area: usize = blobs.iter().map(|b| b.area).sum();
        if area != img.ink_count() {
            failures.push(format!("case {case}: component areas do not cover the ink"));
        }

        let (l, t, r, b) = (
            rng.gen_range(0..5),
            rng.gen_range(0..5),
            rng.gen_range(0..5),
            rng.gen_range(0..5),
        );
        let padded = img.padded(l, t, r, b);
        let padded_bands = segment_lines(&horizontal_projection(&padded), 1).unwrap();
        let padded_blobs = extract_blobs(&padded, &padded_bands, 1).unwrap();
        let shifted: Vec<_> = padded_blobs
            .iter()
            .map(|p| {
                (
                    p.bbox.x_min - l,
                    p.bbox.y_min - t,
                    p.bbox.x_max - l,
                    p.bbox.y_max - t,
                    p.line_index,
                )
            })
            .collect();
        let original: Vec<_> = blobs
            .iter()
            .map(|p| {
                (
                    p.bbox.x_min,
                    p.bbox.y_min,
                    p.bbox.x_max,
                    p.bbox.y_max,
                    p.line_index,
                )
            })
            .collect();
        if shifted != original {
            failures.push(format!("case {case}: padding changed blobs or order"));
        }
    }
    check(
        "AC8",
        "segmentation property suite",
        &failures,
        start.elapsed(),
        Duration::from_secs(10),
        "1000 random images".into(),
    );
}

fn run_cli(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_scriptid"))
        .args(args)
        .status()
        .expect("run scriptid");
    assert!(status.success(), "scriptid {args:?} failed: {status}");
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn ac9_end_to_end_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let data_s = data.to_str().unwrap();
    run_cli(&["synth", "--out", data_s, "--counts", "5,5,5", "--seed", "3"]);
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        format!(
            r#"{{"input": {data_s:?}, "input_type": "coded", "seed": 11, "clustering": {{"h": 15, "T": 4, "k_target": 3}}}}"#
        ),
    )
    .unwrap();
    let outs: Vec<_> = ["a", "b"].iter().map(|n| dir.path().join(n)).collect();
    for out in &outs {
        run_cli(&[
            "pipeline",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
    }
    let mut mismatched = Vec::new();
    for file in [
        "features.csv",
        "clustering.json",
        "report.json",
        "report.txt",
    ] {
        if read(&outs[0].join(file)) != read(&outs[1].join(file)) {
            mismatched.push(file);
        }
    }
    report(
        "AC9",
        "end-to-end determinism",
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "features.csv, clustering.json, report.json, report.txt byte-identical".into()
        } else {
            format!("differing outputs: {mismatched:?}")
        },
    );
    assert!(mismatched.is_empty());
}
