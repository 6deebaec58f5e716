use std::collections::{HashMap, HashSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};

use super::{CitationCorpus, PaperIdx, PaperRecord};

/// Which papers the isolation filter removes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsolationRule {
    /// Drop papers with zero citations and zero references.
    #[default]
    NoLinks,
    /// Drop papers lacking either citations or references. Removals cascade,
    /// so this runs to a fixed point.
    MissingEither,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    pub isolation: IsolationRule,
}

/// Counts of everything ingestion received, kept or dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub papers_in: usize,
    pub papers_kept: usize,
    pub edges_in: usize,
    pub edges_kept: usize,
    pub dropped_self: usize,
    pub dropped_dup: usize,
    pub dropped_forward: usize,
    pub dropped_cycle: usize,
    pub dropped_isolated: usize,
    /// Edges naming a paper without metadata.
    pub dropped_unknown: usize,
    /// Edges removed together with an isolated paper.
    pub dropped_stranded: usize,
    pub malformed_edges: usize,
    pub malformed_meta: usize,
    pub duplicate_meta: usize,
}

/// Parsed but not yet cleaned input.
#[derive(Debug, Clone, Default)]
pub struct RawCorpus {
    pub papers: Vec<PaperRecord>,
    pub edges: Vec<(String, String)>,
    pub malformed_edges: usize,
    pub malformed_meta: usize,
}

pub fn ingest_raw(raw: RawCorpus, opts: &IngestOptions) -> (CitationCorpus, IngestReport) {
    let (corpus, mut report) = ingest(raw.edges, raw.papers, opts);
    report.malformed_edges += raw.malformed_edges;
    report.malformed_meta += raw.malformed_meta;
    (corpus, report)
}

/// Cleans a raw edge stream into a [`CitationCorpus`].
///
/// Stages, in order: self-loops, unknown ids, duplicates, forward citations
/// (citing paper older than the cited one), residual same-year cycles, and
/// finally the isolation filter.
pub fn ingest<E, M>(edges: E, metadata: M, opts: &IngestOptions) -> (CitationCorpus, IngestReport)
where
    E: IntoIterator<Item = (String, String)>,
    M: IntoIterator<Item = PaperRecord>,
{
    let mut report = IngestReport::default();

    let mut papers: Vec<PaperRecord> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for rec in metadata {
        if rec.id.is_empty() {
            report.malformed_meta += 1;
            continue;
        }
        if !seen.insert(rec.id.clone()) {
            report.duplicate_meta += 1;
            continue;
        }
        papers.push(rec);
    }
    report.papers_in = papers.len();
    papers.sort_unstable_by(|a, b| a.id.cmp(&b.id));
    let index: HashMap<&str, PaperIdx> = papers
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str(), i as PaperIdx))
        .collect();

    let mut pairs: Vec<(PaperIdx, PaperIdx)> = Vec::new();
    for (citing, cited) in edges {
        if citing.is_empty() || cited.is_empty() {
            report.malformed_edges += 1;
            continue;
        }
        report.edges_in += 1;
        if citing == cited {
            report.dropped_self += 1;
            continue;
        }
        match (index.get(citing.as_str()), index.get(cited.as_str())) {
            (Some(&a), Some(&b)) => pairs.push((a, b)),
            _ => report.dropped_unknown += 1,
        }
    }
    drop(index);

    let before = pairs.len();
    pairs.sort_unstable();
    pairs.dedup();
    report.dropped_dup = before - pairs.len();

    let year = |p: PaperIdx| papers[p as usize].year;
    let before = pairs.len();
    pairs.retain(|&(a, b)| year(a) >= year(b));
    report.dropped_forward = before - pairs.len();

    let before = pairs.len();
    drop_same_year_cycles(&mut pairs, year);
    report.dropped_cycle = before - pairs.len();

    let (kept, stranded) = isolation_filter(papers.len(), &mut pairs, opts.isolation);
    report.dropped_stranded = stranded;

    let mut remap = vec![PaperIdx::MAX; papers.len()];
    let mut kept_papers = Vec::with_capacity(papers.len());
    for (old, rec) in papers.into_iter().enumerate() {
        if kept[old] {
            remap[old] = kept_papers.len() as PaperIdx;
            kept_papers.push(rec);
        }
    }
    for (a, b) in pairs.iter_mut() {
        *a = remap[*a as usize];
        *b = remap[*b as usize];
    }

    report.papers_kept = kept_papers.len();
    report.dropped_isolated = report.papers_in - report.papers_kept;
    report.edges_kept = pairs.len();
    (CitationCorpus::from_parts(kept_papers, &pairs), report)
}

/// After forward citations are gone every remaining cycle lies within one
/// publication year. Every edge inside a non-trivial strongly connected
/// component is dropped; for a mutual pair this removes both directions.
fn drop_same_year_cycles(pairs: &mut Vec<(PaperIdx, PaperIdx)>, year: impl Fn(PaperIdx) -> i32) {
    let same_year: Vec<(PaperIdx, PaperIdx)> = pairs.iter().copied().filter(|&(a, b)| year(a) == year(b)).collect();
    if same_year.is_empty() {
        return;
    }
    let mut nodes: HashMap<PaperIdx, NodeIndex> = HashMap::new();
    let mut graph: DiGraph<PaperIdx, ()> = DiGraph::new();
    for &(a, b) in &same_year {
        let na = *nodes.entry(a).or_insert_with(|| graph.add_node(a));
        let nb = *nodes.entry(b).or_insert_with(|| graph.add_node(b));
        graph.add_edge(na, nb, ());
    }
    let mut component: HashMap<PaperIdx, usize> = HashMap::new();
    for (i, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        if scc.len() > 1 {
            for n in scc {
                component.insert(graph[n], i);
            }
        }
    }
    if component.is_empty() {
        return;
    }
    pairs.retain(|(a, b)| match (component.get(a), component.get(b)) {
        (Some(x), Some(y)) => x != y,
        _ => true,
    });
}

/// Returns the keep mask and the number of edges removed alongside dropped
/// papers.
fn isolation_filter(n: usize, pairs: &mut Vec<(PaperIdx, PaperIdx)>, rule: IsolationRule) -> (Vec<bool>, usize) {
    let mut refs = vec![0usize; n];
    let mut cites = vec![0usize; n];
    for &(a, b) in pairs.iter() {
        refs[a as usize] += 1;
        cites[b as usize] += 1;
    }
    let doomed = |p: usize, refs: &[usize], cites: &[usize]| match rule {
        IsolationRule::NoLinks => refs[p] == 0 && cites[p] == 0,
        IsolationRule::MissingEither => refs[p] == 0 || cites[p] == 0,
    };
    let mut kept = vec![true; n];
    let mut stranded = 0;
    loop {
        let mut changed = false;
        for p in 0..n {
            if kept[p] && doomed(p, &refs, &cites) {
                kept[p] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let before = pairs.len();
        pairs.retain(|&(a, b)| {
            let keep = kept[a as usize] && kept[b as usize];
            if !keep {
                refs[a as usize] -= 1;
                cites[b as usize] -= 1;
            }
            keep
        });
        stranded += before - pairs.len();
        if pairs.len() == before {
            break;
        }
    }
    (kept, stranded)
}
