//! Citation corpus: ingestion, hygiene and time-sliced views.
//!
//! A [`CitationCorpus`] is immutable once built. Papers are stored sorted by
//! id, so a [`PaperIdx`] comparison is an id comparison. Both adjacency
//! directions are kept in CSR form; the in-citation lists are ordered by
//! `(year, idx)` so that a [`CorpusSnapshot`] can slice them by cutoff year
//! without scanning.

mod cache;
mod ingest;
mod io;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cache::{content_hash, read_cache, write_cache, ContentHash};
pub use ingest::{ingest, ingest_raw, IngestOptions, IngestReport, IsolationRule, RawCorpus};
pub use io::{read_edges, read_metadata, write_edges, write_metadata};

/// Dense index of a paper inside one corpus.
pub type PaperIdx = u32;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown paper `{0}`")]
    UnknownPaper(String),
    #[error("corrupt corpus cache: {0}")]
    CorruptCache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One paper: opaque id, publication year and (optional) venue.
///
/// Venue identifiers are expected to be unique per series and year, e.g.
/// `JCDL-2000`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
}

impl PaperRecord {
    pub fn new(id: impl Into<String>, year: i32) -> Self {
        PaperRecord {
            id: id.into(),
            year,
            venue: None,
        }
    }

    pub fn with_venue(mut self, venue: impl Into<String>) -> Self {
        self.venue = Some(venue.into());
        self
    }
}

/// Deduplicated, acyclic citation network.
#[derive(Debug, Clone, PartialEq)]
pub struct CitationCorpus {
    papers: Vec<PaperRecord>,
    index: HashMap<String, PaperIdx>,
    ref_offsets: Vec<usize>,
    refs: Vec<PaperIdx>,
    cite_offsets: Vec<usize>,
    cites: Vec<PaperIdx>,
}

impl CitationCorpus {
    /// Builds the adjacency structure. `papers` must be sorted by id with
    /// unique ids, and `edges` are `(citing, cited)` index pairs.
    pub(crate) fn from_parts(papers: Vec<PaperRecord>, edges: &[(PaperIdx, PaperIdx)]) -> Self {
        debug_assert!(papers.windows(2).all(|w| w[0].id < w[1].id));
        let n = papers.len();
        let index = papers
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), i as PaperIdx))
            .collect();

        let (ref_offsets, mut refs) = csr(n, edges.iter().map(|&(a, b)| (a, b)));
        let (cite_offsets, mut cites) = csr(n, edges.iter().map(|&(a, b)| (b, a)));
        for p in 0..n {
            refs[ref_offsets[p]..ref_offsets[p + 1]].sort_unstable();
            cites[cite_offsets[p]..cite_offsets[p + 1]].sort_unstable_by_key(|&c| (papers[c as usize].year, c));
        }
        CitationCorpus {
            papers,
            index,
            ref_offsets,
            refs,
            cite_offsets,
            cites,
        }
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.refs.len()
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn paper(&self, p: PaperIdx) -> &PaperRecord {
        &self.papers[p as usize]
    }

    pub fn year(&self, p: PaperIdx) -> i32 {
        self.papers[p as usize].year
    }

    pub fn lookup(&self, id: &str) -> Option<PaperIdx> {
        self.index.get(id).copied()
    }

    /// Papers cited by `p`, sorted by index.
    pub fn references(&self, p: PaperIdx) -> &[PaperIdx] {
        let p = p as usize;
        &self.refs[self.ref_offsets[p]..self.ref_offsets[p + 1]]
    }

    /// Papers citing `p`, sorted by `(year, index)`.
    pub fn cited_by(&self, p: PaperIdx) -> &[PaperIdx] {
        let p = p as usize;
        &self.cites[self.cite_offsets[p]..self.cite_offsets[p + 1]]
    }

    /// All `(citing, cited)` pairs in citing-index order.
    pub fn edges(&self) -> impl Iterator<Item = (PaperIdx, PaperIdx)> + '_ {
        (0..self.papers.len() as PaperIdx).flat_map(move |a| self.references(a).iter().map(move |&b| (a, b)))
    }

    pub fn year_range(&self) -> Option<(i32, i32)> {
        let min = self.papers.iter().map(|p| p.year).min()?;
        let max = self.papers.iter().map(|p| p.year).max()?;
        Some((min, max))
    }

    pub fn snapshot(&self, cutoff_year: i32) -> CorpusSnapshot<'_> {
        CorpusSnapshot {
            base: self,
            cutoff_year,
        }
    }

    /// Topological order of the citation relation (cited before citing), or
    /// `None` if the edge relation contains a cycle.
    pub fn topological_order(&self) -> Option<Vec<PaperIdx>> {
        let n = self.papers.len();
        let mut pending: Vec<usize> = (0..n).map(|p| self.references(p as PaperIdx).len()).collect();
        let mut order: Vec<PaperIdx> = (0..n as PaperIdx).filter(|&p| pending[p as usize] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for &c in self.cited_by(p) {
                pending[c as usize] -= 1;
                if pending[c as usize] == 0 {
                    order.push(c);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

fn csr(n: usize, pairs: impl Iterator<Item = (PaperIdx, PaperIdx)> + Clone) -> (Vec<usize>, Vec<PaperIdx>) {
    let mut offsets = vec![0usize; n + 1];
    for (from, _) in pairs.clone() {
        offsets[from as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut targets = vec![0; offsets[n]];
    for (from, to) in pairs {
        targets[fill[from as usize]] = to;
        fill[from as usize] += 1;
    }
    (offsets, targets)
}

/// The corpus as it looked at the end of `cutoff_year`: papers published no
/// later than the cutoff and the citations they make.
#[derive(Debug, Clone, Copy)]
pub struct CorpusSnapshot<'a> {
    base: &'a CitationCorpus,
    cutoff_year: i32,
}

impl CorpusSnapshot<'_> {
    pub fn cutoff_year(&self) -> i32 {
        self.cutoff_year
    }
}

/// Read access shared by the full corpus and its snapshots.
pub trait CitationView: Sync {
    fn corpus(&self) -> &CitationCorpus;

    /// Last publication year visible in this view, if any.
    fn cutoff(&self) -> Option<i32>;

    fn contains(&self, p: PaperIdx) -> bool {
        match self.cutoff() {
            Some(y) => self.corpus().year(p) <= y,
            None => (p as usize) < self.corpus().len(),
        }
    }

    /// In-neighbors of `p` under the view, in `(year, index)` order.
    fn citing(&self, p: PaperIdx) -> &[PaperIdx] {
        let all = self.corpus().cited_by(p);
        match self.cutoff() {
            Some(y) => {
                let corpus = self.corpus();
                &all[..all.partition_point(|&c| corpus.year(c) <= y)]
            }
            None => all,
        }
    }

    /// Out-neighbors of a visible paper. Cited papers are never newer than
    /// the citing one, so the full reference list is visible.
    fn references(&self, p: PaperIdx) -> &[PaperIdx] {
        self.corpus().references(p)
    }

    fn citation_count(&self, p: PaperIdx) -> usize {
        self.citing(p).len()
    }

    /// Visible papers in index order.
    fn visible(&self) -> Vec<PaperIdx> {
        (0..self.corpus().len() as PaperIdx)
            .filter(|&p| self.contains(p))
            .collect()
    }

    fn resolve(&self, id: &str) -> Result<PaperIdx, CorpusError> {
        self.corpus()
            .lookup(id)
            .filter(|&p| self.contains(p))
            .ok_or_else(|| CorpusError::UnknownPaper(id.to_string()))
    }

    /// Ids of the papers citing `id` under this view.
    fn citations_of(&self, id: &str) -> Result<BTreeSet<&str>, CorpusError> {
        let p = self.resolve(id)?;
        let corpus = self.corpus();
        Ok(self.citing(p).iter().map(|&c| corpus.paper(c).id.as_str()).collect())
    }

    fn edge_count(&self) -> usize {
        (0..self.corpus().len() as PaperIdx)
            .filter(|&p| self.contains(p))
            .map(|p| self.citing(p).len())
            .sum()
    }
}

impl CitationView for CitationCorpus {
    fn corpus(&self) -> &CitationCorpus {
        self
    }

    fn cutoff(&self) -> Option<i32> {
        None
    }
}

impl CitationView for CorpusSnapshot<'_> {
    fn corpus(&self) -> &CitationCorpus {
        self.base
    }

    fn cutoff(&self) -> Option<i32> {
        Some(self.cutoff_year)
    }
}
