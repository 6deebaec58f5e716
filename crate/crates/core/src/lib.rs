//! Influence dispersion trees over citation networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`corpus`] ingests raw citation edges and paper metadata, enforces DAG
//!   hygiene and serves time-sliced views of the network.
//! * [`idt`] builds the influence dispersion graph of a paper (the paper plus
//!   its direct citers) and reduces it to an influence dispersion tree.
//! * [`metrics`] computes the dispersion index, its bounds, the ideal
//!   configuration and the (normalized) influence divergence.
//! * [`eval`] hosts the ranking experiments: venue z-scores, Test-of-Time
//!   ranks and corpus-wide distribution statistics.
//! * [`synth`] generates synthetic corpora, canonical tree shapes and the
//!   exhaustive tree enumeration used as a test oracle.
//! * [`pipeline`] wires the above into deterministic batch outputs.

pub mod corpus;
pub mod eval;
pub mod idt;
pub mod metrics;
pub mod pipeline;
pub mod synth;

pub use corpus::{CitationCorpus, CitationView, CorpusError, CorpusSnapshot, PaperRecord};
pub use idt::{build_idg, build_idt, InfluenceDispersionGraph, InfluenceDispersionTree, TiePolicy, Tree};
pub use metrics::MetricsReport;
