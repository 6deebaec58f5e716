//! Ranking experiments: venue z-scores, Test-of-Time ranks and corpus-wide
//! distribution statistics.

mod rank;
mod stats;
mod tot;
mod zscore;

use thiserror::Error;

pub use rank::{
    fractional_gain_list, kendall_distance, kendall_tau_distance, rank_by_measure, Direction, GainMode, Measure,
    RankedList, Ranking, TieMode,
};
pub use stats::{corpus_stats, pearson, Correlations, StatsReport};
pub use tot::{mrr, read_awardees, tot_experiment, Awardee, SkippedCase, TotCase, TotReport, TotSummary, TOT_HORIZON};
pub use zscore::{z_experiment, SkippedVenue, VenueExperiment, ZConfig, ZReport, ZSummary};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("ranked lists hold different elements")]
    ElementMismatch,
    #[error("paper `{0}` appears twice in a ranked list")]
    DuplicateEntry(String),
    #[error("score for `{0}` is not a number")]
    NanScore(String),
    #[error("t1 ({t1}) must be smaller than t2 ({t2})")]
    Window { t1: i32, t2: i32 },
    #[error("percentile {0} outside (0, 1]")]
    Percentile(f64),
    #[error("awardee list: {0}")]
    Awardees(String),
}
