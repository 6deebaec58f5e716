//! Batch computations and their file renderings.
//!
//! Per-paper work runs on the current rayon pool and is collected in paper
//! order, so output bytes do not depend on the number of workers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{CitationView, PaperIdx};
use crate::eval::{StatsReport, TotReport, ZReport};
use crate::idt::{build_idg_at, build_idt, InfluenceDispersionTree, TiePolicy};
use crate::metrics::{self, MetricsReport};

pub fn tree_at<V: CitationView + ?Sized>(view: &V, p: PaperIdx, tie: TiePolicy) -> InfluenceDispersionTree {
    build_idt(&build_idg_at(view, p), tie)
}

/// NID of `p` under `view`; `None` when the paper is uncited there.
pub fn nid_at<V: CitationView + ?Sized>(view: &V, p: PaperIdx, tie: TiePolicy) -> Option<f64> {
    if view.citation_count(p) == 0 {
        return None;
    }
    metrics::nid(&tree_at(view, p, tie)).ok()
}

/// Metrics for every visible paper with at least one citation, in id order.
pub fn metrics_for_all<V: CitationView>(view: &V, tie: TiePolicy) -> Vec<MetricsReport> {
    let corpus = view.corpus();
    view.visible()
        .into_par_iter()
        .filter(|&p| view.citation_count(p) > 0)
        .filter_map(|p| MetricsReport::compute(&corpus.paper(p).id, &tree_at(view, p, tie)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub paper_id: String,
    pub error: String,
}

/// Metrics for the requested ids, sorted by id. Unknown or uncited papers
/// produce an error record instead of a row.
pub fn metrics_for_ids<V: CitationView>(
    view: &V,
    ids: &[String],
    tie: TiePolicy,
) -> (Vec<MetricsReport>, Vec<RowError>) {
    let mut ids: Vec<&String> = ids.iter().collect();
    ids.sort();
    ids.dedup();
    let results: Vec<Result<MetricsReport, RowError>> = ids
        .par_iter()
        .map(|id| {
            let err = |e: String| RowError {
                paper_id: id.to_string(),
                error: e,
            };
            let p = view.resolve(id).map_err(|e| err(e.to_string()))?;
            MetricsReport::compute(id, &tree_at(view, p, tie)).ok_or_else(|| err("paper has no citations".into()))
        })
        .collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => errors.push(e),
        }
    }
    (rows, errors)
}

fn csv_string<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator,
    I::Item: IntoIterator,
    <I::Item as IntoIterator>::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

pub fn metrics_csv(rows: &[MetricsReport]) -> String {
    csv_string(&MetricsReport::CSV_HEADER, rows.iter().map(MetricsReport::csv_record))
}

/// One JSON object per line.
pub fn metrics_jsonl(rows: &[MetricsReport]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).expect("metrics json"));
        out.push('\n');
    }
    out
}

pub fn row_errors_csv(errors: &[RowError]) -> String {
    csv_string(
        &["paper_id", "error"],
        errors.iter().map(|e| [e.paper_id.as_str(), e.error.as_str()]),
    )
}

pub fn histogram_csv(key: &str, hist: &BTreeMap<u32, usize>) -> String {
    csv_string(
        &[key, "count"],
        hist.iter().map(|(k, c)| [k.to_string(), c.to_string()]),
    )
}

/// Plot-ready per-paper scatter data.
pub fn scatter_csv(stats: &StatsReport) -> String {
    csv_string(
        &["paper_id", "citations", "depth", "breadth", "idi", "nid"],
        stats.rows.iter().map(|r| {
            [
                r.paper_id.clone(),
                r.n.to_string(),
                r.d.to_string(),
                r.b.to_string(),
                r.idi.to_string(),
                r.nid.to_string(),
            ]
        }),
    )
}

pub fn z_venues_csv(report: &ZReport) -> String {
    csv_string(
        &["venue", "year", "n_papers", "z_nid", "z_cite", "z_diff"],
        report.venues.iter().map(|v| {
            [
                v.venue.clone(),
                v.year.to_string(),
                v.n_papers.to_string(),
                v.z_nid.to_string(),
                v.z_cite.to_string(),
                v.z_diff.to_string(),
            ]
        }),
    )
}

pub fn z_skipped_csv(report: &ZReport) -> String {
    csv_string(
        &["venue", "year", "reason"],
        report
            .skipped
            .iter()
            .map(|s| [s.venue.clone(), s.year.to_string(), s.reason.clone()]),
    )
}

pub fn tot_csv(report: &TotReport) -> String {
    csv_string(
        &["paper_id", "venue", "year", "cohort_size", "rank_cite", "rank_nid"],
        report.cases.iter().map(|c| {
            [
                c.paper_id.clone(),
                c.venue.clone(),
                c.year.to_string(),
                c.cohort_size.to_string(),
                c.rank_cite.to_string(),
                c.rank_nid.to_string(),
            ]
        }),
    )
}

pub fn tot_skipped_csv(report: &TotReport) -> String {
    csv_string(
        &["paper_id", "reason"],
        report.skipped.iter().map(|s| [s.paper_id.as_str(), s.reason.as_str()]),
    )
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}
