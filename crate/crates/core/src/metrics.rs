//! Dispersion index, its bounds, the ideal configuration and influence
//! divergence.
//!
//! All index arithmetic is exact over `u64`; only the normalized divergence
//! is a float.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::idt::Tree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("citation count must be at least 1, got {0}")]
    Domain(usize),
    #[error("normalized divergence is undefined for an uncited paper")]
    Undefined,
}

/// Influence Dispersion Index: the summed root-to-leaf path lengths. An
/// uncited paper has index 0.
pub fn idi(tree: &Tree) -> u64 {
    let depths = tree.depths();
    tree.child_counts()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &c)| c == 0)
        .map(|(v, _)| depths[v] as u64)
        .sum()
}

/// Largest index any tree with `n` non-root nodes can reach: a chain of
/// `k` nodes whose last node carries `n - k` leaves, at the best `k`.
pub fn idi_max(n: usize) -> Result<u64, MetricsError> {
    if n == 0 {
        return Err(MetricsError::Domain(n));
    }
    let broom = |k: u64| (1 + k) * (n as u64 - k);
    // (1 + k)(n - k) is symmetric about k = (n - 1) / 2, so both roundings
    // of a half-integer land on the same value
    let low = broom((n as u64 - 1) / 2);
    let high = broom(n as u64 / 2);
    debug_assert_eq!(low, high);
    Ok(low)
}

/// Smallest achievable index, reached whenever every branch is unified.
pub fn idi_min(n: usize) -> Result<u64, MetricsError> {
    match n {
        0 => Err(MetricsError::Domain(n)),
        n => Ok(n as u64),
    }
}

/// Depth and breadth of the ideal tree: `d = b = ceil(sqrt(n))`.
pub fn optimal_shape(n: usize) -> Result<(u32, u32), MetricsError> {
    if n == 0 {
        return Err(MetricsError::Domain(n));
    }
    let k = ceil_sqrt(n as u64) as u32;
    Ok((k, k))
}

/// Index of the ideal tree, whose branches are all unified.
pub fn ideal_idi(n: usize) -> Result<u64, MetricsError> {
    idi_min(n)
}

/// `idi - ideal_idi`; zero for an uncited paper.
pub fn influence_divergence(tree: &Tree) -> u64 {
    match tree.n() {
        0 => 0,
        n => idi(tree) - n as u64,
    }
}

/// Influence divergence scaled by `idi_max - idi_min`. With at most two
/// citers every tree is ideal and the result is 0.
pub fn nid(tree: &Tree) -> Result<f64, MetricsError> {
    let n = tree.n();
    if n == 0 {
        return Err(MetricsError::Undefined);
    }
    let span = idi_max(n)? - idi_min(n)?;
    if span == 0 {
        return Ok(0.0);
    }
    Ok(influence_divergence(tree) as f64 / span as f64)
}

pub(crate) fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Per-paper metrics row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub paper_id: String,
    pub n: usize,
    pub d: u32,
    pub b: u32,
    pub idi: u64,
    pub idi_min: u64,
    pub idi_max: u64,
    pub id: u64,
    pub nid: f64,
}

impl MetricsReport {
    pub const CSV_HEADER: [&'static str; 9] = ["paper_id", "n", "d", "b", "idi", "idi_min", "idi_max", "id", "nid"];

    /// `None` for an uncited paper, which has no place in a ranking.
    pub fn compute(paper_id: &str, tree: &Tree) -> Option<Self> {
        let n = tree.n();
        if n == 0 {
            return None;
        }
        let stats = tree.stats();
        Some(MetricsReport {
            paper_id: paper_id.to_string(),
            n,
            d: stats.depth,
            b: stats.breadth,
            idi: idi(tree),
            idi_min: idi_min(n).ok()?,
            idi_max: idi_max(n).ok()?,
            id: influence_divergence(tree),
            nid: nid(tree).ok()?,
        })
    }

    pub fn csv_record(&self) -> [String; 9] {
        [
            self.paper_id.clone(),
            self.n.to_string(),
            self.d.to_string(),
            self.b.to_string(),
            self.idi.to_string(),
            self.idi_min.to_string(),
            self.idi_max.to_string(),
            self.id.to_string(),
            self.nid.to_string(),
        ]
    }
}
