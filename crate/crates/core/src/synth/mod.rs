//! Synthetic trees and corpora: named shapes, exhaustive enumeration, random
//! corpora and planted experiment fixtures.

mod enumerate;
mod planted;
mod random;
mod shapes;

use thiserror::Error;

pub use enumerate::{enumerate_trees, TreeEnumerator, ENUMERATION_CAP};
pub use planted::{planted_tot, planted_z, PlantedCorpus, PlantedTot, PlantedZ};
pub use random::{gen_random_corpus, gen_random_idg, random_corpus_records, RandomCorpus, Records};
pub use shapes::{gen_shape, gen_tree, shape_records, Layout, Shape, ShapeKind, ShapeSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("inconsistent shape: {0}")]
    Shape(String),
    #[error("enumeration is capped at n = {cap}, got {n}")]
    AboveCap { n: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
}
