use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::corpus::{CitationCorpus, CitationView, PaperIdx};
use crate::idt::TiePolicy;
use crate::pipeline::nid_at;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Lower scores rank first (NID).
    Ascending,
    /// Higher scores rank first (citations, citation gain).
    Descending,
}

/// Papers in rank order. Equal scores are ordered by id, so the order is a
/// strict total order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    items: Vec<(String, f64)>,
    direction: Direction,
}

impl RankedList {
    pub fn new(mut items: Vec<(String, f64)>, direction: Direction) -> Result<Self, EvalError> {
        if let Some((id, _)) = items.iter().find(|(_, s)| s.is_nan()) {
            return Err(EvalError::NanScore(id.clone()));
        }
        items.sort_by(|a, b| {
            let by_score = match direction {
                Direction::Ascending => a.1.total_cmp(&b.1),
                Direction::Descending => b.1.total_cmp(&a.1),
            };
            by_score.then_with(|| a.0.cmp(&b.0))
        });
        let mut ids: Vec<&str> = items.iter().map(|(id, _)| id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(EvalError::DuplicateEntry(w[0].to_string()));
        }
        Ok(RankedList { items, direction })
    }

    /// A plain permutation: the first id ranks first.
    pub fn from_order<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<Self, EvalError> {
        let items = ids
            .into_iter()
            .enumerate()
            .map(|(i, id)| (id.into(), i as f64))
            .collect();
        RankedList::new(items, Direction::Ascending)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn items(&self) -> &[(String, f64)] {
        &self.items
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|(id, _)| id.as_str())
    }

    /// 1-based rank of `id`.
    pub fn rank_of(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|(x, _)| x == id).map(|i| i + 1)
    }

    fn positions(&self) -> HashMap<&str, usize> {
        self.ids().enumerate().map(|(i, id)| (id, i)).collect()
    }

    /// Orientation of the pair by score alone: `Less` when `i` is better.
    fn compare_scores(&self, i: &str, j: &str, scores: &HashMap<&str, f64>) -> Ordering {
        let (a, b) = (scores[i], scores[j]);
        match self.direction {
            Direction::Ascending => a.total_cmp(&b),
            Direction::Descending => b.total_cmp(&a),
        }
    }
}

/// A ranking plus the papers that could not be scored.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub list: RankedList,
    pub excluded: Vec<String>,
}

/// How [`kendall_distance`] treats equal scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieMode {
    /// Use the id-resolved list order; every pair counts.
    #[default]
    ById,
    /// Skip pairs tied in either list, in the manner of tau-b.
    DiscardTies,
}

/// Normalized Kendall tau rank distance: discordant pairs over all
/// `m (m - 1) / 2` pairs. Lists shorter than two have distance 0.
pub fn kendall_tau_distance(a: &RankedList, b: &RankedList) -> Result<f64, EvalError> {
    let in_b = b.positions();
    if a.len() != b.len() {
        return Err(EvalError::ElementMismatch);
    }
    let mut seq = Vec::with_capacity(a.len());
    for id in a.ids() {
        seq.push(*in_b.get(id).ok_or(EvalError::ElementMismatch)?);
    }
    let m = seq.len() as u64;
    if m < 2 {
        return Ok(0.0);
    }
    let discordant = count_inversions(&mut seq);
    Ok(discordant as f64 / (m * (m - 1) / 2) as f64)
}

pub fn kendall_distance(a: &RankedList, b: &RankedList, mode: TieMode) -> Result<f64, EvalError> {
    match mode {
        TieMode::ById => kendall_tau_distance(a, b),
        TieMode::DiscardTies => {
            let sa: HashMap<&str, f64> = a.items.iter().map(|(id, s)| (id.as_str(), *s)).collect();
            let sb: HashMap<&str, f64> = b.items.iter().map(|(id, s)| (id.as_str(), *s)).collect();
            if sa.len() != sb.len() || sa.keys().any(|k| !sb.contains_key(k)) {
                return Err(EvalError::ElementMismatch);
            }
            let ids: Vec<&str> = a.ids().collect();
            let (mut counted, mut discordant) = (0u64, 0u64);
            for i in 0..ids.len() {
                for j in i + 1..ids.len() {
                    let oa = a.compare_scores(ids[i], ids[j], &sa);
                    let ob = b.compare_scores(ids[i], ids[j], &sb);
                    if oa == Ordering::Equal || ob == Ordering::Equal {
                        continue;
                    }
                    counted += 1;
                    if oa != ob {
                        discordant += 1;
                    }
                }
            }
            Ok(if counted == 0 {
                0.0
            } else {
                discordant as f64 / counted as f64
            })
        }
    }
}

/// Merge-sort inversion count.
fn count_inversions(seq: &mut [usize]) -> u64 {
    let mut buf = seq.to_vec();
    sort_count(seq, &mut buf)
}

fn sort_count(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = sort_count(&mut seq[..mid], &mut buf[..mid]) + sort_count(&mut seq[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&seq[j..n]);
    seq.copy_from_slice(&buf[..n]);
    inv
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Citations,
    Nid,
}

/// Ranks `papers` under `view` by citation count (descending) or NID
/// (ascending). Papers uncited in the view are excluded.
pub fn rank_by_measure<V: CitationView>(view: &V, papers: &[PaperIdx], measure: Measure, tie: TiePolicy) -> Ranking {
    let corpus = view.corpus();
    let mut items = Vec::with_capacity(papers.len());
    let mut excluded = Vec::new();
    for &p in papers {
        let id = corpus.paper(p).id.clone();
        let score = match measure {
            Measure::Citations => Some(view.citation_count(p) as f64).filter(|&c| c > 0.0),
            Measure::Nid => nid_at(view, p, tie),
        };
        match score {
            Some(s) => items.push((id, s)),
            None => excluded.push(id),
        }
    }
    let direction = match measure {
        Measure::Citations => Direction::Descending,
        Measure::Nid => Direction::Ascending,
    };
    Ranking {
        list: RankedList::new(items, direction).expect("finite scores over distinct papers"),
        excluded,
    }
}

/// How citation growth between the two snapshots is scored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainMode {
    /// `(c(t2) - c(t1)) / c(t1)`
    #[default]
    Fractional,
    /// `c(t2) - c(t1)`
    Absolute,
}

/// Ranks papers by citation growth from `pub_year + t1` to `pub_year + t2`,
/// highest first. Papers without citations at `t1` are excluded.
pub fn fractional_gain_list(
    corpus: &CitationCorpus,
    papers: &[PaperIdx],
    pub_year: i32,
    t1: i32,
    t2: i32,
    mode: GainMode,
) -> Ranking {
    let early = corpus.snapshot(pub_year + t1);
    let late = corpus.snapshot(pub_year + t2);
    let mut items = Vec::with_capacity(papers.len());
    let mut excluded = Vec::new();
    for &p in papers {
        let id = corpus.paper(p).id.clone();
        let c1 = early.citation_count(p) as f64;
        let c2 = late.citation_count(p) as f64;
        if c1 == 0.0 {
            excluded.push(id);
            continue;
        }
        let score = match mode {
            GainMode::Fractional => (c2 - c1) / c1,
            GainMode::Absolute => c2 - c1,
        };
        items.push((id, score));
    }
    Ranking {
        list: RankedList::new(items, Direction::Descending).expect("finite scores over distinct papers"),
        excluded,
    }
}
