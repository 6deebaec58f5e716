use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::CitationView;
use crate::idt::TiePolicy;
use crate::metrics::MetricsReport;
use crate::pipeline::metrics_for_all;

/// Pearson correlation, `None` when either side has no variance.
///
/// Uses running co-moments, so a single pass suffices.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson needs paired samples");
    let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        let k = (i + 1) as f64;
        let dx = a - mx;
        let dy = b - my;
        mx += dx / k;
        my += dy / k;
        sxx += dx * (a - mx);
        syy += dy * (b - my);
        sxy += dx * (b - my);
    }
    if x.len() < 2 || sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub breadth_citations: Option<f64>,
    pub depth_citations: Option<f64>,
    pub depth_breadth: Option<f64>,
    pub idi_citations: Option<f64>,
    pub nid_citations: Option<f64>,
}

/// Depth/breadth distributions and correlations over every cited paper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub papers: usize,
    pub max_depth: u32,
    pub max_breadth: u32,
    pub depth_hist: BTreeMap<u32, usize>,
    pub breadth_hist: BTreeMap<u32, usize>,
    pub correlations: Correlations,
    #[serde(skip)]
    pub rows: Vec<MetricsReport>,
}

pub fn corpus_stats<V: CitationView>(view: &V, tie: TiePolicy) -> StatsReport {
    let rows = metrics_for_all(view, tie);
    let mut depth_hist = BTreeMap::new();
    let mut breadth_hist = BTreeMap::new();
    for r in &rows {
        *depth_hist.entry(r.d).or_insert(0) += 1;
        *breadth_hist.entry(r.b).or_insert(0) += 1;
    }
    let col = |f: fn(&MetricsReport) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let n = col(|r| r.n as f64);
    let d = col(|r| r.d as f64);
    let b = col(|r| r.b as f64);
    let correlations = Correlations {
        breadth_citations: pearson(&b, &n),
        depth_citations: pearson(&d, &n),
        depth_breadth: pearson(&d, &b),
        idi_citations: pearson(&col(|r| r.idi as f64), &n),
        nid_citations: pearson(&col(|r| r.nid), &n),
    };
    StatsReport {
        papers: rows.len(),
        max_depth: rows.iter().map(|r| r.d).max().unwrap_or(0),
        max_breadth: rows.iter().map(|r| r.b).max().unwrap_or(0),
        depth_hist,
        breadth_hist,
        correlations,
        rows,
    }
}
