use serde::{Deserialize, Serialize};

use super::{
    build_graph, ga_cluster, refine_merge, standardize, Clustering, GaParams, NodeOrdering,
};
use crate::error::{Error, Result};

/// Named parameter sets for the two label databases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// 15 labels: h = 15, T = 4.
    Db1,
    /// 20 labels: h = 20, T = 5.
    Db2,
}

impl Preset {
    pub fn h(self) -> usize {
        match self {
            Preset::Db1 => 15,
            Preset::Db2 => 20,
        }
    }

    pub fn bandwidth(self) -> usize {
        match self {
            Preset::Db1 => 4,
            Preset::Db2 => 5,
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "db1" => Ok(Preset::Db1),
            "db2" => Ok(Preset::Db2),
            other => Err(Error::InvalidParameter(format!(
                "unknown profile {other:?} (expected db1 or db2)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaicdaParams {
    /// Neighbourhood size.
    pub h: usize,
    /// Bandwidth threshold `T` on identifier differences.
    #[serde(rename = "T")]
    pub bandwidth: usize,
    pub k_target: usize,
    pub ordering: NodeOrdering,
    pub ga: GaParams,
}

impl Default for GaicdaParams {
    fn default() -> Self {
        Self::from_preset(Preset::Db1)
    }
}

impl GaicdaParams {
    pub fn from_preset(preset: Preset) -> Self {
        Self {
            h: preset.h(),
            bandwidth: preset.bandwidth(),
            k_target: 3,
            ordering: NodeOrdering::InputOrder,
            ga: GaParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaicdaOutcome {
    /// Final partition after refinement.
    pub clustering: Clustering,
    /// Partition returned by the genetic search.
    pub ga_clustering: Clustering,
    /// Modularity of `ga_clustering`.
    pub fitness: f64,
    pub edge_count: usize,
    pub isolated: Vec<usize>,
}

/// Standardizes the features, builds the bandwidth-filtered neighbourhood
/// graph, runs the genetic search and merges clusters down to `k_target`.
///
/// When the search finds fewer than `k_target` clusters its partition is
/// returned unchanged.
pub fn gaicda(features: &[Vec<f64>], params: &GaicdaParams) -> Result<GaicdaOutcome> {
    if params.k_target == 0 {
        return Err(Error::InvalidParameter(
            "k_target must be at least 1".into(),
        ));
    }
    if params.k_target > features.len() {
        return Err(Error::InvalidK {
            k: params.k_target,
            n: features.len(),
        });
    }
    let z = standardize(features)?;
    let graph = build_graph(&z, params.h, params.bandwidth, &params.ordering)?;
    let ga = ga_cluster(&graph, &params.ga)?;
    let clustering = if ga.clustering.k() >= params.k_target {
        refine_merge(&ga.clustering, &z, params.k_target)?
    } else {
        log::warn!(
            "genetic search found {} clusters, fewer than the target {}; refinement skipped",
            ga.clustering.k(),
            params.k_target
        );
        ga.clustering.clone()
    };
    Ok(GaicdaOutcome {
        clustering,
        ga_clustering: ga.clustering,
        fitness: ga.fitness,
        edge_count: graph.edge_count(),
        isolated: graph.isolated(),
    })
}
