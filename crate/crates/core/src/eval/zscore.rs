use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rank::{fractional_gain_list, kendall_distance, rank_by_measure, GainMode, Measure, TieMode};
use super::EvalError;
use crate::corpus::{CitationCorpus, CitationView, PaperIdx};
use crate::idt::TiePolicy;

/// Settings for the venue z-score experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZConfig {
    pub first_year: i32,
    pub last_year: i32,
    pub t1: i32,
    pub t2: i32,
    pub tie: TiePolicy,
    pub gain: GainMode,
    pub kendall: TieMode,
}

impl Default for ZConfig {
    fn default() -> Self {
        ZConfig {
            first_year: 1995,
            last_year: 2000,
            t1: 5,
            t2: 10,
            tie: TiePolicy::default(),
            gain: GainMode::Fractional,
            kendall: TieMode::ById,
        }
    }
}

/// z-scores of one venue (one series in one year).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VenueExperiment {
    pub venue: String,
    pub year: i32,
    /// Papers with at least one citation at `year + t1`.
    pub n_papers: usize,
    pub z_nid: f64,
    pub z_cite: f64,
    /// `z_cite - z_nid`; positive when NID tracks future growth better.
    pub z_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedVenue {
    pub venue: String,
    pub year: i32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZSummary {
    pub venues: usize,
    pub skipped: usize,
    pub mean_z_nid: f64,
    pub mean_z_cite: f64,
    pub mean_z_diff: f64,
    /// Venues where NID scored strictly lower than citations.
    pub nid_better: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZReport {
    pub venues: Vec<VenueExperiment>,
    pub skipped: Vec<SkippedVenue>,
    pub summary: ZSummary,
}

enum Outcome {
    Done(VenueExperiment),
    Skipped(SkippedVenue),
}

/// For every venue published within the configured years, compares the
/// ranking by NID and by citation count at `year + t1` against the ranking
/// by citation gain from `year + t1` to `year + t2`.
///
/// Venues are keyed by `(venue, year)`; papers without a venue are ignored.
/// Results come back sorted by that key.
pub fn z_experiment(corpus: &CitationCorpus, cfg: &ZConfig) -> Result<ZReport, EvalError> {
    if cfg.t1 >= cfg.t2 {
        return Err(EvalError::Window { t1: cfg.t1, t2: cfg.t2 });
    }
    let mut groups: BTreeMap<(&str, i32), Vec<PaperIdx>> = BTreeMap::new();
    for (i, p) in corpus.papers().iter().enumerate() {
        if let Some(v) = &p.venue {
            if (cfg.first_year..=cfg.last_year).contains(&p.year) {
                groups.entry((v.as_str(), p.year)).or_default().push(i as PaperIdx);
            }
        }
    }
    let last_year = corpus.year_range().map(|(_, max)| max).unwrap_or(i32::MIN);

    let groups: Vec<_> = groups.into_iter().collect();
    let outcomes: Vec<Outcome> = groups
        .par_iter()
        .map(|((venue, year), members)| run_venue(corpus, cfg, venue, *year, members, last_year))
        .collect();

    let mut venues = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Done(v) => venues.push(v),
            Outcome::Skipped(s) => skipped.push(s),
        }
    }
    let mean = |f: fn(&VenueExperiment) -> f64| {
        if venues.is_empty() {
            0.0
        } else {
            venues.iter().map(f).sum::<f64>() / venues.len() as f64
        }
    };
    let summary = ZSummary {
        venues: venues.len(),
        skipped: skipped.len(),
        mean_z_nid: mean(|v| v.z_nid),
        mean_z_cite: mean(|v| v.z_cite),
        mean_z_diff: mean(|v| v.z_diff),
        nid_better: venues.iter().filter(|v| v.z_diff > 0.0).count(),
    };
    Ok(ZReport {
        venues,
        skipped,
        summary,
    })
}

fn run_venue(
    corpus: &CitationCorpus,
    cfg: &ZConfig,
    venue: &str,
    year: i32,
    members: &[PaperIdx],
    last_year: i32,
) -> Outcome {
    let skip = |reason: String| {
        Outcome::Skipped(SkippedVenue {
            venue: venue.to_string(),
            year,
            reason,
        })
    };
    if year + cfg.t2 > last_year {
        return skip(format!(
            "insufficient year coverage: needs {} but corpus ends {}",
            year + cfg.t2,
            last_year
        ));
    }
    let early = corpus.snapshot(year + cfg.t1);
    let eligible: Vec<PaperIdx> = members
        .iter()
        .copied()
        .filter(|&p| early.citation_count(p) > 0)
        .collect();
    if eligible.len() < 2 {
        return skip(format!("{} eligible papers, need at least 2", eligible.len()));
    }
    let gain = fractional_gain_list(corpus, &eligible, year, cfg.t1, cfg.t2, cfg.gain).list;
    let by_nid = rank_by_measure(&early, &eligible, Measure::Nid, cfg.tie).list;
    let by_cite = rank_by_measure(&early, &eligible, Measure::Citations, cfg.tie).list;
    let z_nid = kendall_distance(&by_nid, &gain, cfg.kendall).expect("same eligible set");
    let z_cite = kendall_distance(&by_cite, &gain, cfg.kendall).expect("same eligible set");
    Outcome::Done(VenueExperiment {
        venue: venue.to_string(),
        year,
        n_papers: eligible.len(),
        z_nid,
        z_cite,
        z_diff: z_cite - z_nid,
    })
}
