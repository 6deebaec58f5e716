//! Influence dispersion graphs and trees.
//!
//! The IDG of a paper holds the paper and its direct citers with edges in
//! influence direction; the IDT keeps exactly one incoming edge per citer,
//! chosen to make the tree as deep as possible.

mod build;
mod graph;
mod tree;

use thiserror::Error;

pub use build::{build_idt, build_idt_in_order, TiePolicy};
pub(crate) use graph::build_idg_at;
pub use graph::{build_idg, InfluenceDispersionGraph};
pub use tree::{Branch, InfluenceDispersionTree, Tree, TreeStats};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdtError {
    #[error("node {node} has invalid parent {parent}")]
    InvalidParent { node: usize, parent: usize },
    #[error("structure contains a cycle")]
    Cycle,
    #[error("duplicate node id")]
    DuplicateNode,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("{labels} labels for {nodes} nodes")]
    LabelCount { labels: usize, nodes: usize },
    #[error("invalid insertion order: {0}")]
    InvalidOrder(String),
    #[error("malformed tree json: {0}")]
    Json(String),
}
