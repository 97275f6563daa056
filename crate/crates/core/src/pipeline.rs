//! End-to-end orchestration: documents in, features, clustering and
//! evaluation reports out.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{average_linkage, gaicda, kmeans, standardize, Clustering, GaicdaParams};
use crate::dataset::{
    discover, read_features, read_labels, write_features, write_json, ClusteringRecord, FeatureRow,
    InputType,
};
use crate::error::{Error, Result};
use crate::eval::{evaluate, summary_table, EvalReport};
use crate::image::{BinaryImage, InkPolarity};
use crate::segment::{segment, SegmentParams, Segmentation};
use crate::texture::{feature_vector, AlbpMode};
use crate::typography::{encode_segmentation, CodedSequence, MapperParams};

pub const FEATURES_FILE: &str = "features.csv";
pub const CLUSTERING_FILE: &str = "clustering.json";
pub const REPORT_FILE: &str = "report.json";
pub const SUMMARY_FILE: &str = "report.txt";
pub const LABELS_FILE: &str = "labels.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub input_type: InputType,
    /// Ground truth; defaults to `labels.csv` inside `input` when present.
    pub labels: Option<PathBuf>,
    pub out: PathBuf,
    pub ink: InkPolarity,
    pub segment: SegmentParams,
    pub mapper: MapperParams,
    pub albp: AlbpMode,
    pub clustering: GaicdaParams,
    /// Seeds the genetic search and the K-Means baseline.
    pub seed: u64,
    /// K-Means restarts.
    pub restarts: usize,
    /// Cluster documents too short to form any ALBP pair.
    pub include_degenerate: bool,
    /// Also score the K-Means and average-linkage baselines.
    pub baselines: bool,
    /// Seeds `seed..seed + repeats` are summarized in the text report.
    pub repeats: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::new(),
            input_type: InputType::Coded,
            labels: None,
            out: PathBuf::from("out"),
            ink: InkPolarity::Dark,
            segment: SegmentParams::default(),
            mapper: MapperParams::default(),
            albp: AlbpMode::Normalized,
            clustering: GaicdaParams::default(),
            seed: 0,
            restarts: 10,
            include_degenerate: false,
            baselines: false,
            repeats: 1,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.input.is_dir() {
            return Err(Error::InvalidParameter(format!(
                "input directory {} does not exist",
                self.input.display()
            )));
        }
        if let Some(labels) = &self.labels {
            if !labels.is_file() {
                return Err(Error::InvalidParameter(format!(
                    "labels file {} does not exist",
                    labels.display()
                )));
            }
        }
        if self.segment.min_gap == 0 {
            return Err(Error::InvalidParameter("min_gap must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.mapper.flat_tolerance) || self.mapper.eps_fraction < 0.0 {
            return Err(Error::InvalidParameter(
                "flat_tolerance must lie in [0, 1) and eps_fraction be non-negative".into(),
            ));
        }
        if self.clustering.h == 0 || self.clustering.bandwidth == 0 || self.clustering.k_target == 0
        {
            return Err(Error::InvalidParameter(
                "h, T and k must be at least 1".into(),
            ));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidParameter("repeats must be at least 1".into()));
        }
        self.clustering.ga.validate()
    }

    fn labels_path(&self) -> Option<PathBuf> {
        self.labels.clone().or_else(|| {
            let default = self.input.join(LABELS_FILE);
            default.is_file().then_some(default)
        })
    }
}

/// Loads, segments and encodes one page image.
pub fn encode_image(
    path: &Path,
    ink: InkPolarity,
    segment_params: &SegmentParams,
    mapper: &MapperParams,
) -> Result<(Segmentation, CodedSequence)> {
    let img = BinaryImage::load(path, ink)?;
    let seg = segment(&img, segment_params)?;
    let seq = encode_segmentation(&seg, mapper)?;
    Ok((seg, seq))
}

/// Coded sequences of every document under `config.input`, in input order.
pub fn load_sequences(config: &PipelineConfig) -> Result<Vec<(String, CodedSequence)>> {
    let docs = discover(&config.input, config.input_type)?;
    docs.par_iter()
        .map(|(id, path)| {
            let seq = match config.input_type {
                InputType::Coded => CodedSequence::load(path).map_err(|e| e.in_stage("encode", id)),
                InputType::Images => {
                    encode_image(path, config.ink, &config.segment, &config.mapper)
                        .map(|(_, seq)| seq)
                        .map_err(|e| e.in_stage("segment", id))
                }
            }?;
            Ok((id.clone(), seq))
        })
        .collect()
}

pub fn compute_features(
    docs: &[(String, CodedSequence)],
    albp: AlbpMode,
) -> Result<Vec<FeatureRow>> {
    docs.par_iter()
        .map(|(id, seq)| {
            let f = feature_vector(seq, albp).map_err(|e| e.in_stage("features", id))?;
            Ok(FeatureRow {
                doc_id: id.clone(),
                vector: f.vector,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Gaicda,
    Kmeans,
    AverageLinkage,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Gaicda => "GA-ICDA",
            Method::Kmeans => "K-Means",
            Method::AverageLinkage => "Average Linkage",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaicda" => Ok(Method::Gaicda),
            "kmeans" => Ok(Method::Kmeans),
            "average-linkage" => Ok(Method::AverageLinkage),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// Clusters feature rows with `method`. Degenerate rows are left out unless
/// `include_degenerate` is set.
pub fn cluster_rows(
    rows: &[FeatureRow],
    method: Method,
    params: &GaicdaParams,
    seed: u64,
    restarts: usize,
    include_degenerate: bool,
) -> Result<ClusteringRecord> {
    let (kept, excluded): (Vec<&FeatureRow>, Vec<&FeatureRow>) = rows
        .iter()
        .partition(|r| include_degenerate || !r.is_degenerate());
    for r in &excluded {
        log::warn!(
            "document {:?} is degenerate and excluded from clustering",
            r.doc_id
        );
    }
    let features: Vec<Vec<f64>> = kept.iter().map(|r| r.vector.values().to_vec()).collect();
    let mut params = params.clone();
    params.ga.rng_seed = seed;
    let (clustering, fitness, json_params): (Clustering, Option<f64>, serde_json::Value) =
        match method {
            Method::Gaicda => {
                let out = gaicda(&features, &params)?;
                let mut json = serde_json::to_value(&params).expect("serializable params");
                json["h_effective"] = features.len().saturating_sub(1).min(params.h).into();
                json["ga_clusters"] = out.ga_clustering.k().into();
                (out.clustering, Some(out.fitness), json)
            }
            Method::Kmeans => {
                let z = standardize(&features)?;
                let out = kmeans(&z, params.k_target, seed, restarts)?;
                let json = serde_json::json!({
                    "k": params.k_target,
                    "seed": seed,
                    "restarts": restarts,
                    "objective": out.objective,
                });
                (out.clustering, None, json)
            }
            Method::AverageLinkage => {
                let z = standardize(&features)?;
                let json = serde_json::json!({ "k": params.k_target, "distance": "l1" });
                (average_linkage(&z, params.k_target)?, None, json)
            }
        };
    Ok(ClusteringRecord {
        method: serde_json::to_value(method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default(),
        params: json_params,
        assignment: kept
            .iter()
            .zip(clustering.assignment())
            .map(|(r, &c)| (r.doc_id.clone(), c))
            .collect(),
        fitness,
        order: kept.iter().map(|r| r.doc_id.clone()).collect(),
        excluded: excluded.iter().map(|r| r.doc_id.clone()).collect(),
    })
}

/// Scores a clustering record against ground-truth labels.
pub fn evaluate_record(
    record: &ClusteringRecord,
    labels: &BTreeMap<String, String>,
) -> Result<EvalReport> {
    let truth = record
        .order
        .iter()
        .map(|id| {
            labels
                .get(id)
                .map(String::as_str)
                .ok_or_else(|| Error::format(LABELS_FILE, format!("no label for document {id:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let found: Vec<usize> =
        record
            .order
            .iter()
            .map(|id| {
                record.assignment.get(id).copied().ok_or_else(|| {
                    Error::format(CLUSTERING_FILE, format!("{id:?} is not assigned"))
                })
            })
            .collect::<Result<_>>()?;
    evaluate(&truth, &Clustering::from_labels(&found))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub features: Vec<FeatureRow>,
    pub clustering: ClusteringRecord,
    pub report: Option<EvalReport>,
    /// Text table over the repeated seeds, when labels were given.
    pub summary: Option<String>,
}

fn clear_output(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(Error::io(path, e)),
    }
}

/// Runs every stage and writes `features.csv`, `clustering.json` and, when
/// labels are available, `report.json` and `report.txt` under `config.out`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutput> {
    config.validate()?;
    fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;

    let docs = load_sequences(config)?;
    if config.input_type == InputType::Images {
        let coded_dir = config.out.join("coded");
        fs::create_dir_all(&coded_dir).map_err(|e| Error::io(&coded_dir, e))?;
        for (id, seq) in &docs {
            seq.save(&coded_dir.join(format!("{id}.txt")))?;
        }
    }
    let features = compute_features(&docs, config.albp)?;
    let features_path = config.out.join(FEATURES_FILE);
    write_features(&features_path, &features)?;
    // Downstream stages run from the reloaded file so they see exactly what
    // was written.
    let features = read_features(&features_path)?;

    let run = |method: Method, seed: u64| {
        cluster_rows(
            &features,
            method,
            &config.clustering,
            seed,
            config.restarts,
            config.include_degenerate,
        )
        .map_err(|e| e.in_stage("cluster", "*"))
    };
    let clustering = run(Method::Gaicda, config.seed)?;
    clustering.save(&config.out.join(CLUSTERING_FILE))?;

    let (report, summary) = match config.labels_path() {
        None => {
            clear_output(&config.out.join(REPORT_FILE))?;
            clear_output(&config.out.join(SUMMARY_FILE))?;
            (None, None)
        }
        Some(path) => {
            let labels = read_labels(&path)?;
            let evaluate = |r: &ClusteringRecord| {
                evaluate_record(r, &labels).map_err(|e| e.in_stage("evaluate", "*"))
            };
            let report = evaluate(&clustering)?;
            write_json(&config.out.join(REPORT_FILE), &report)?;

            let mut methods = vec![Method::Gaicda];
            if config.baselines {
                methods.extend([Method::Kmeans, Method::AverageLinkage]);
            }
            let mut table = Vec::new();
            for method in methods {
                let mut reports = Vec::with_capacity(config.repeats);
                for seed in config.seed..config.seed + config.repeats as u64 {
                    let record = if method == Method::Gaicda && seed == config.seed {
                        clustering.clone()
                    } else {
                        run(method, seed)?
                    };
                    reports.push(evaluate(&record)?);
                }
                table.push((method.label().to_string(), reports));
            }
            let summary = summary_table(&report.classes, &table);
            let summary_path = config.out.join(SUMMARY_FILE);
            fs::write(&summary_path, &summary).map_err(|e| Error::io(&summary_path, e))?;
            (Some(report), Some(summary))
        }
    };

    Ok(PipelineOutput {
        features,
        clustering,
        report,
        summary,
    })
}
