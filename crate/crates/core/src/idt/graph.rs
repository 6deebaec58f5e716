use std::collections::HashMap;

use crate::corpus::{CitationView, CorpusError, PaperIdx};

use super::IdtError;

/// A paper together with its direct citers, edges pointing in the direction
/// of influence (cited → citing).
///
/// Local node `0` is the root; citers follow in `(year, id)` order. Every
/// citer implicitly has the edge from the root, so only the links among
/// citers are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceDispersionGraph {
    ids: Vec<String>,
    years: Vec<i32>,
    /// For each local node, the other citers it cites (local indices, sorted).
    cites: Vec<Vec<u32>>,
}

impl InfluenceDispersionGraph {
    /// Builds an IDG from explicit parts. `links` are `(citing, cited)` id
    /// pairs among the citers; links touching the root are implied and
    /// ignored.
    pub fn new(root: (&str, i32), citers: &[(&str, i32)], links: &[(&str, &str)]) -> Result<Self, IdtError> {
        let mut nodes: Vec<(String, i32)> = citers.iter().map(|&(id, y)| (id.to_string(), y)).collect();
        nodes.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        let mut ids = vec![root.0.to_string()];
        let mut years = vec![root.1];
        for (id, y) in nodes {
            ids.push(id);
            years.push(y);
        }
        let local: HashMap<&str, u32> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i as u32)).collect();
        if local.len() != ids.len() {
            return Err(IdtError::DuplicateNode);
        }
        let mut cites = vec![Vec::new(); ids.len()];
        for &(a, b) in links {
            let la = *local.get(a).ok_or_else(|| IdtError::UnknownNode(a.to_string()))?;
            let lb = *local.get(b).ok_or_else(|| IdtError::UnknownNode(b.to_string()))?;
            if la == 0 || lb == 0 {
                continue;
            }
            if la == lb {
                return Err(IdtError::Cycle);
            }
            cites[la as usize].push(lb);
        }
        for c in cites.iter_mut() {
            c.sort_unstable();
            c.dedup();
        }
        let idg = InfluenceDispersionGraph { ids, years, cites };
        idg.topological_order().ok_or(IdtError::Cycle)?;
        Ok(idg)
    }

    /// Number of citers.
    pub fn n(&self) -> usize {
        self.ids.len() - 1
    }

    pub fn root_id(&self) -> &str {
        &self.ids[0]
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn year(&self, v: usize) -> i32 {
        self.years[v]
    }

    /// Citers cited by `v` (never includes the root).
    pub fn cited_citers(&self, v: usize) -> &[u32] {
        &self.cites[v]
    }

    /// All influence edges `(u, v)`, meaning `v` cites `u`, including the
    /// root edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 1..self.ids.len() {
            out.push((0, v));
            out.extend(self.cites[v].iter().map(|&u| (u as usize, v)));
        }
        out
    }

    /// Edges as `(from id, to id)` pairs, sorted.
    pub fn edge_ids(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (self.id(u), self.id(v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Chronological topological order: among the nodes whose cited citers
    /// are all placed, the earliest `(year, id)` goes first.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        let size = self.ids.len();
        let mut pending: Vec<usize> = self.cites.iter().map(Vec::len).collect();
        let mut dependents = vec![Vec::new(); size];
        for v in 1..size {
            for &u in &self.cites[v] {
                dependents[u as usize].push(v);
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> = (1..size).filter(|&v| pending[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(size - 1);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &w in &dependents[v] {
                pending[w] -= 1;
                if pending[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        (order.len() == size - 1).then_some(order)
    }
}

/// The IDG of `paper_id` under `view`: the paper, everything citing it in
/// the view, and the citations among those citers.
pub fn build_idg<V: CitationView + ?Sized>(view: &V, paper_id: &str) -> Result<InfluenceDispersionGraph, CorpusError> {
    let p = view.resolve(paper_id)?;
    Ok(build_idg_at(view, p))
}

pub(crate) fn build_idg_at<V: CitationView + ?Sized>(view: &V, p: PaperIdx) -> InfluenceDispersionGraph {
    let corpus = view.corpus();
    // `citing` is already in (year, idx) order and idx order is id order
    let citers = view.citing(p);
    let mut ids = Vec::with_capacity(citers.len() + 1);
    let mut years = Vec::with_capacity(citers.len() + 1);
    ids.push(corpus.paper(p).id.clone());
    years.push(corpus.year(p));
    let mut local: HashMap<PaperIdx, u32> = HashMap::with_capacity(citers.len());
    for (i, &c) in citers.iter().enumerate() {
        ids.push(corpus.paper(c).id.clone());
        years.push(corpus.year(c));
        local.insert(c, i as u32 + 1);
    }
    let mut cites = vec![Vec::new(); ids.len()];
    for (i, &c) in citers.iter().enumerate() {
        let mut linked: Vec<u32> = view
            .references(c)
            .iter()
            .filter_map(|r| local.get(r).copied())
            .collect();
        linked.sort_unstable();
        cites[i + 1] = linked;
    }
    InfluenceDispersionGraph { ids, years, cites }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ingest, IngestOptions, PaperRecord};

    #[test]
    fn single_citer() {
        let (corpus, _) = ingest(
            vec![("p1".into(), "P".into())],
            vec![PaperRecord::new("P", 2000), PaperRecord::new("p1", 2001)],
            &IngestOptions::default(),
        );
        let idg = build_idg(&corpus, "P").unwrap();
        assert_eq!(idg.edge_ids(), vec![("P", "p1")]);
    }

    #[test]
    fn uncited_paper_gives_single_node() {
        let (corpus, _) = ingest(
            vec![("p1".into(), "P".into())],
            vec![PaperRecord::new("P", 2000), PaperRecord::new("p1", 2001)],
            &IngestOptions::default(),
        );
        let idg = build_idg(&corpus, "p1").unwrap();
        assert_eq!(idg.n(), 0);
        assert!(idg.edges().is_empty());
        assert!(build_idg(&corpus, "nope").is_err());
    }

    #[test]
    fn explicit_construction_checks() {
        assert!(matches!(
            InfluenceDispersionGraph::new(("P", 0), &[("a", 1), ("b", 1)], &[("a", "b"), ("b", "a")]),
            Err(IdtError::Cycle)
        ));
        assert!(matches!(
            InfluenceDispersionGraph::new(("P", 0), &[("a", 1)], &[("a", "x")]),
            Err(IdtError::UnknownNode(_))
        ));
        assert!(matches!(
            InfluenceDispersionGraph::new(("P", 0), &[("a", 1), ("a", 2)], &[]),
            Err(IdtError::DuplicateNode)
        ));
    }

    #[test]
    fn same_year_chain_ordering() {
        // x cites y within one year; y is placed first although x sorts first
        let idg = InfluenceDispersionGraph::new(("P", 0), &[("x", 1), ("y", 1)], &[("x", "y")]).unwrap();
        let order = idg.topological_order().unwrap();
        let names: Vec<_> = order.iter().map(|&v| idg.id(v)).collect();
        assert_eq!(names, vec!["y", "x"]);
    }
}
