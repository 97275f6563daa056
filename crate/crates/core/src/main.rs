use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use scriptid::cluster::Preset;
use scriptid::dataset::{
    discover, read_features, read_labels, write_features, write_json, write_labels,
    ClusteringRecord, InputType,
};
use scriptid::image::InkPolarity;
use scriptid::pipeline::{
    cluster_rows, compute_features, encode_image, evaluate_record, load_sequences, run_pipeline,
    Method, PipelineConfig, CLUSTERING_FILE, FEATURES_FILE, LABELS_FILE, REPORT_FILE,
};
use scriptid::segment::{SegmentParams, Segmentation};
use scriptid::synth::{
    generate_synthetic, render_page, script_profiles, wrap_lines, GlyphGeometry,
};
use scriptid::texture::AlbpMode;
use scriptid::typography::{classify_segmentation, MapperParams, ScriptType};
use scriptid::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(
    name = "scriptid",
    version,
    about = "Script identification of historical text labels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment label images into lines and letters (writes one JSON per image).
    Segment(SegmentArgs),
    /// Convert label images to coded text files.
    Encode(SegmentArgs),
    /// Compute the feature CSV of a document directory.
    Features(FeaturesArgs),
    /// Cluster documents from a feature CSV.
    Cluster(ClusterArgs),
    /// Score a clustering against ground-truth labels.
    Evaluate(EvaluateArgs),
    /// Run every stage end to end.
    Pipeline(PipelineArgs),
    /// Generate a synthetic labelled corpus.
    Synth(SynthArgs),
}

#[derive(Args)]
struct ImageArgs {
    #[arg(long, default_value = "dark")]
    ink: InkPolarity,
    #[arg(long, default_value_t = 1)]
    min_gap: usize,
    #[arg(long, default_value_t = 4)]
    min_blob_area: usize,
}

impl ImageArgs {
    fn segment_params(&self) -> SegmentParams {
        SegmentParams {
            min_gap: self.min_gap,
            min_blob_area: self.min_blob_area,
        }
    }
}

#[derive(Args)]
struct SegmentArgs {
    /// Image file or directory of images.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    image: ImageArgs,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "coded")]
    input_type: InputType,
    #[arg(long, default_value = "normalized")]
    albp: AlbpMode,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    image: ImageArgs,
}

#[derive(Args, Default)]
struct ClusterFlags {
    /// Neighbourhood size.
    #[arg(long)]
    h: Option<usize>,
    /// Bandwidth threshold on node identifier differences.
    #[arg(long = "T")]
    bandwidth: Option<usize>,
    /// Target number of clusters.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Parameter preset: db1 (h=15, T=4) or db2 (h=20, T=5).
    #[arg(long)]
    profile: Option<Preset>,
    #[arg(long)]
    include_degenerate: bool,
}

impl ClusterFlags {
    fn apply(&self, config: &mut PipelineConfig) {
        if let Some(p) = self.profile {
            config.clustering.h = p.h();
            config.clustering.bandwidth = p.bandwidth();
        }
        if let Some(h) = self.h {
            config.clustering.h = h;
        }
        if let Some(t) = self.bandwidth {
            config.clustering.bandwidth = t;
        }
        if let Some(k) = self.k {
            config.clustering.k_target = k;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(r) = self.restarts {
            config.restarts = r;
        }
        if self.include_degenerate {
            config.include_degenerate = true;
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    /// Feature CSV.
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value = "gaicda")]
    method: Method,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    flags: ClusterFlags,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    clustering: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    /// JSON configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    input_type: Option<InputType>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    albp: Option<AlbpMode>,
    #[arg(long)]
    ink: Option<InkPolarity>,
    /// Also score the K-Means and average-linkage baselines.
    #[arg(long)]
    baselines: bool,
    /// Number of consecutive seeds summarized in report.txt.
    #[arg(long)]
    repeats: Option<usize>,
    #[command(flatten)]
    flags: ClusterFlags,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    /// Documents per class: cyrillic, angular, round.
    #[arg(long, value_delimiter = ',', default_values_t = [5, 5, 5])]
    counts: Vec<usize>,
    /// Extra angular documents drawn halfway between angular and round.
    #[arg(long, default_value_t = 0)]
    transitional: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also render every document as a PGM page image.
    #[arg(long)]
    images: bool,
    /// Letters per rendered line.
    #[arg(long, default_value_t = 16)]
    per_line: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Segment(args) => segment_cmd(&args),
        Command::Encode(args) => encode_cmd(&args),
        Command::Features(args) => features_cmd(&args),
        Command::Cluster(args) => cluster_cmd(&args),
        Command::Evaluate(args) => evaluate_cmd(&args),
        Command::Pipeline(args) => pipeline_cmd(&args),
        Command::Synth(args) => synth_cmd(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_config_error() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_DATA)
            }
        }
    }
}

fn create_dir(path: &Path) -> Result<(), Error> {
    fs::create_dir_all(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn image_inputs(input: &Path) -> Result<Vec<(String, PathBuf)>, Error> {
    if input.is_dir() {
        return discover(input, InputType::Images);
    }
    if !input.is_file() {
        return Err(Error::InvalidParameter(format!(
            "input {} does not exist",
            input.display()
        )));
    }
    let id = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("doc")
        .to_string();
    Ok(vec![(id, input.to_path_buf())])
}

#[derive(Serialize)]
struct SegmentationRecord<'a> {
    #[serde(flatten)]
    segmentation: &'a Segmentation,
    codes: Vec<ScriptType>,
    coded: String,
}

fn segment_cmd(args: &SegmentArgs) -> Result<(), Error> {
    let inputs = image_inputs(&args.input)?;
    create_dir(&args.out)?;
    let mapper = MapperParams::default();
    inputs.par_iter().try_for_each(|(id, path)| {
        let (seg, seq) = encode_image(path, args.image.ink, &args.image.segment_params(), &mapper)
            .map_err(|e| e.in_stage("segment", id))?;
        let record = SegmentationRecord {
            segmentation: &seg,
            codes: classify_segmentation(&seg, &mapper),
            coded: seq.to_string(),
        };
        write_json(&args.out.join(format!("{id}.json")), &record)
    })
}

fn encode_cmd(args: &SegmentArgs) -> Result<(), Error> {
    let inputs = image_inputs(&args.input)?;
    create_dir(&args.out)?;
    let mapper = MapperParams::default();
    inputs.par_iter().try_for_each(|(id, path)| {
        let (_, seq) = encode_image(path, args.image.ink, &args.image.segment_params(), &mapper)
            .map_err(|e| e.in_stage("encode", id))?;
        seq.save(&args.out.join(format!("{id}.txt")))
    })?;
    if args.input.is_dir() {
        let labels = args.input.join(LABELS_FILE);
        if labels.is_file() {
            fs::copy(&labels, args.out.join(LABELS_FILE)).map_err(|e| Error::Io {
                path: labels,
                source: e,
            })?;
        }
    }
    Ok(())
}

fn features_cmd(args: &FeaturesArgs) -> Result<(), Error> {
    let config = PipelineConfig {
        input: args.input.clone(),
        input_type: args.input_type,
        ink: args.image.ink,
        segment: args.image.segment_params(),
        ..PipelineConfig::default()
    };
    if !config.input.is_dir() {
        return Err(Error::InvalidParameter(format!(
            "input directory {} does not exist",
            config.input.display()
        )));
    }
    let docs = load_sequences(&config)?;
    let rows = compute_features(&docs, args.albp)?;
    create_dir(&args.out)?;
    write_features(&args.out.join(FEATURES_FILE), &rows)
}

fn cluster_cmd(args: &ClusterArgs) -> Result<(), Error> {
    let mut config = PipelineConfig::default();
    args.flags.apply(&mut config);
    config.clustering.ga.validate()?;
    let rows = read_features(&args.features)?;
    let record = cluster_rows(
        &rows,
        args.method,
        &config.clustering,
        config.seed,
        config.restarts,
        config.include_degenerate,
    )?;
    create_dir(&args.out)?;
    record.save(&args.out.join(CLUSTERING_FILE))
}

fn evaluate_cmd(args: &EvaluateArgs) -> Result<(), Error> {
    let record = ClusteringRecord::load(&args.clustering)?;
    let labels = read_labels(&args.labels)?;
    let report = evaluate_record(&record, &labels)?;
    create_dir(&args.out)?;
    write_json(&args.out.join(REPORT_FILE), &report)?;
    let table = scriptid::eval::summary_table(
        &report.classes,
        &[(record.method.clone(), vec![report.clone()])],
    );
    print!("{table}");
    Ok(())
}

fn pipeline_cmd(args: &PipelineArgs) -> Result<(), Error> {
    let mut config = match &args.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(input) = &args.input {
        config.input = input.clone();
    }
    if let Some(t) = args.input_type {
        config.input_type = t;
    }
    if let Some(labels) = &args.labels {
        config.labels = Some(labels.clone());
    }
    if let Some(out) = &args.out {
        config.out = out.clone();
    }
    if let Some(albp) = args.albp {
        config.albp = albp;
    }
    if let Some(ink) = args.ink {
        config.ink = ink;
    }
    if args.baselines {
        config.baselines = true;
    }
    if let Some(r) = args.repeats {
        config.repeats = r;
    }
    args.flags.apply(&mut config);
    let output = run_pipeline(&config)?;
    if let Some(summary) = &output.summary {
        print!("{summary}");
    }
    Ok(())
}

fn synth_cmd(args: &SynthArgs) -> Result<(), Error> {
    let mut profiles = script_profiles();
    if args.counts.len() != profiles.len() {
        return Err(Error::InvalidParameter(format!(
            "--counts needs {} values",
            profiles.len()
        )));
    }
    let mut counts = args.counts.clone();
    if args.transitional > 0 {
        let transitional = profiles[1].interpolate(&profiles[2], 0.5, "angular");
        profiles.insert(2, transitional);
        counts.insert(2, args.transitional);
    }
    let docs = generate_synthetic(&profiles, &counts, args.seed)?;
    create_dir(&args.out)?;
    let geometry = GlyphGeometry::default();
    for doc in &docs {
        doc.sequence
            .save(&args.out.join(format!("{}.txt", doc.id)))?;
        if args.images {
            let page = render_page(&wrap_lines(&doc.sequence, args.per_line), &geometry)?;
            page.save_pgm(&args.out.join(format!("{}.pgm", doc.id)))?;
        }
    }
    write_labels(
        &args.out.join(LABELS_FILE),
        docs.iter().map(|d| (d.id.as_str(), d.class.as_str())),
    )
}
