//! Script identification of short historical text labels.
//!
//! A binarized label image is segmented into text lines and letters, every
//! letter is reduced to a typographic code in `0..4`, and the resulting 1-D
//! coded text is described by run-length statistics and an adjacent local
//! binary pattern histogram. Documents are then clustered by script with a
//! genetic algorithm on a bandwidth-filtered nearest-neighbour graph.

pub mod cluster;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod image;
pub mod pipeline;
pub mod segment;
pub mod synth;
pub mod texture;
pub mod typography;

pub use error::{Error, Result};
