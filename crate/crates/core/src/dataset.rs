//! On-disk formats: document directories, `labels.csv`, the feature CSV and
//! the clustering JSON.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::texture::{feature_names, FeatureVector, FEATURE_DIM, RUN_LENGTH_FEATURES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputType {
    Images,
    #[default]
    Coded,
}

impl std::str::FromStr for InputType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "images" => Ok(InputType::Images),
            "coded" => Ok(InputType::Coded),
            other => Err(Error::InvalidParameter(format!(
                "input type must be `images` or `coded`, got {other:?}"
            ))),
        }
    }
}

impl InputType {
    fn accepts(self, ext: &str) -> bool {
        match self {
            InputType::Images => matches!(ext, "pgm" | "png"),
            InputType::Coded => ext == "txt",
        }
    }
}

/// Document files of `dir` in file-name order, paired with their ids (the
/// file stem).
pub fn discover(dir: &Path, kind: InputType) -> Result<Vec<(String, PathBuf)>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut docs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        if !ext.is_some_and(|e| kind.accepts(&e)) {
            continue;
        }
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::format(&path, "file name is not valid UTF-8"))?
            .to_string();
        docs.push((id, path));
    }
    docs.sort();
    if docs.is_empty() {
        return Err(Error::format(dir, "no input documents found"));
    }
    Ok(docs)
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRow {
    doc_id: String,
    class: String,
}

/// Reads `doc_id,class` rows.
pub fn read_labels(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    let mut labels = BTreeMap::new();
    for row in reader.deserialize::<LabelRow>() {
        let row = row.map_err(|e| Error::format(path, e.to_string()))?;
        if labels.insert(row.doc_id.clone(), row.class).is_some() {
            return Err(Error::format(
                path,
                format!("duplicate doc_id {:?}", row.doc_id),
            ));
        }
    }
    Ok(labels)
}

pub fn write_labels<'a>(
    path: &Path,
    rows: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<()> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    for (doc_id, class) in rows {
        writer
            .serialize(LabelRow {
                doc_id: doc_id.to_string(),
                class: class.to_string(),
            })
            .map_err(|e| Error::format(path, e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// One feature-CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub doc_id: String,
    pub vector: FeatureVector,
}

impl FeatureRow {
    /// No ALBP pair could be formed.
    pub fn is_degenerate(&self) -> bool {
        self.vector.values()[RUN_LENGTH_FEATURES..]
            .iter()
            .all(|&v| v == 0.0)
    }
}

/// Writes the feature CSV. Values use the shortest representation that
/// parses back to the same double.
pub fn write_features(path: &Path, rows: &[FeatureRow]) -> Result<()> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    let csv_err = |e: csv::Error| Error::format(path, e.to_string());
    let mut header = vec!["doc_id".to_string()];
    header.extend(feature_names());
    writer.write_record(&header).map_err(csv_err)?;
    for row in rows {
        let mut record = vec![row.doc_id.clone()];
        record.extend(row.vector.values().iter().map(|v| format!("{v:?}")));
        writer.write_record(&record).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub fn read_features(path: &Path) -> Result<Vec<FeatureRow>> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    let header = reader
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .clone();
    let mut expected = vec!["doc_id".to_string()];
    expected.extend(feature_names());
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::format(path, "unexpected feature CSV header"));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::format(path, e.to_string()))?;
        let mut values = [0.0; FEATURE_DIM];
        for (slot, field) in values.iter_mut().zip(record.iter().skip(1)) {
            *slot = field
                .parse()
                .map_err(|_| Error::format(path, format!("bad number {field:?}")))?;
        }
        rows.push(FeatureRow {
            doc_id: record[0].to_string(),
            vector: FeatureVector(values),
        });
    }
    Ok(rows)
}

/// Serialized clustering result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringRecord {
    pub method: String,
    pub params: serde_json::Value,
    /// Document id to cluster id.
    pub assignment: BTreeMap<String, usize>,
    /// Modularity of the genetic search result; absent for baselines.
    pub fitness: Option<f64>,
    /// Clustered documents in input order.
    pub order: Vec<String>,
    /// Documents left out of clustering.
    #[serde(default)]
    pub excluded: Vec<String>,
}

impl ClusteringRecord {
    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::format(path, e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
