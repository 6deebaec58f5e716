use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SynthError;
use crate::corpus::{ingest, CitationCorpus, IngestOptions, IngestReport, PaperRecord};
use crate::idt::InfluenceDispersionGraph;

/// Papers with their `(citing, cited)` edges.
pub type Records = (Vec<PaperRecord>, Vec<(String, String)>);

/// Parameters of a random citation corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomCorpus {
    pub n_papers: usize,
    pub first_year: i32,
    pub last_year: i32,
    /// Mean number of references per paper.
    pub mean_refs: f64,
    /// Probability that a reference is drawn in proportion to citations
    /// already received rather than uniformly.
    pub bias: f64,
    /// Probability of also citing one of the chosen paper's references.
    pub closure: f64,
    /// Number of venue series; 0 leaves papers without a venue.
    pub venues: usize,
    pub seed: u64,
}

impl Default for RandomCorpus {
    fn default() -> Self {
        RandomCorpus {
            n_papers: 10_000,
            first_year: 1980,
            last_year: 2010,
            mean_refs: 8.0,
            bias: 0.5,
            closure: 0.3,
            venues: 0,
            seed: 0,
        }
    }
}

impl RandomCorpus {
    fn validate(&self) -> Result<(), SynthError> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if self.first_year > self.last_year {
            return Err(SynthError::Param(format!(
                "empty year range {}..{}",
                self.first_year, self.last_year
            )));
        }
        if !unit(self.bias) || !unit(self.closure) {
            return Err(SynthError::Param("bias and closure must lie in [0, 1]".into()));
        }
        if !(self.mean_refs >= 0.0 && self.mean_refs.is_finite()) {
            return Err(SynthError::Param(format!(
                "mean_refs must be finite and non-negative, got {}",
                self.mean_refs
            )));
        }
        Ok(())
    }
}

/// Papers and `(citing, cited)` edges of a random corpus. Years are uniform
/// over the range and every edge points strictly back in time, so the
/// result is acyclic by construction.
pub fn random_corpus_records(params: &RandomCorpus) -> Result<Records, SynthError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n_papers;
    let mut years: Vec<i32> = (0..n)
        .map(|_| rng.gen_range(params.first_year..=params.last_year))
        .collect();
    years.sort_unstable();

    let width = n.saturating_sub(1).to_string().len();
    let papers: Vec<PaperRecord> = years
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let p = PaperRecord::new(format!("r{i:0width$}"), y);
            match params.venues {
                0 => p,
                v => {
                    let series = rng.gen_range(0..v);
                    p.with_venue(format!("S{series}-{y}"))
                }
            }
        })
        .collect();

    // cited endpoint of every edge so far, for preferential picks
    let mut endpoints: Vec<u32> = Vec::new();
    let mut refs: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut older = 0;
    for i in 0..n {
        while years[older] < years[i] {
            older += 1;
        }
        if older == 0 {
            continue;
        }
        let want = rng.gen_range(0..=(2.0 * params.mean_refs).round() as usize);
        let mut chosen: Vec<u32> = Vec::with_capacity(want * 2);
        for _ in 0..want {
            // endpoints were all cited by papers no newer than `i`, so they
            // are strictly older than `i`
            let target = if !endpoints.is_empty() && rng.gen_bool(params.bias) {
                *endpoints.choose(&mut rng).unwrap()
            } else {
                rng.gen_range(0..older) as u32
            };
            chosen.push(target);
            if rng.gen_bool(params.closure) {
                if let Some(&r) = refs[target as usize].choose(&mut rng) {
                    chosen.push(r);
                }
            }
        }
        chosen.sort_unstable();
        chosen.dedup();
        endpoints.extend_from_slice(&chosen);
        refs[i] = chosen;
    }

    let edges = refs
        .iter()
        .enumerate()
        .flat_map(|(i, rs)| rs.iter().map(move |&r| (i, r as usize)))
        .map(|(i, r)| (papers[i].id.clone(), papers[r].id.clone()))
        .collect();
    Ok((papers, edges))
}

/// [`random_corpus_records`] passed through ingestion.
pub fn gen_random_corpus(params: &RandomCorpus) -> Result<(CitationCorpus, IngestReport), SynthError> {
    let (papers, edges) = random_corpus_records(params)?;
    Ok(ingest(edges, papers, &IngestOptions::default()))
}

/// A random IDG with `n` citers spread over `years` years after the root.
/// Each citer links to each earlier-or-same-year citer placed before it with
/// probability `link_prob`.
pub fn gen_random_idg(n: usize, years: i32, link_prob: f64, seed: u64) -> InfluenceDispersionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut citers: Vec<(String, i32)> = (0..n)
        .map(|i| (format!("c{i:04}"), rng.gen_range(1..=years.max(1))))
        .collect();
    citers.shuffle(&mut rng);
    citers.sort_by_key(|c| c.1);
    let mut links = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(link_prob) {
                links.push((citers[i].0.clone(), citers[j].0.clone()));
            }
        }
    }
    let citer_refs: Vec<(&str, i32)> = citers.iter().map(|(id, y)| (id.as_str(), *y)).collect();
    let link_refs: Vec<(&str, &str)> = links.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    InfluenceDispersionGraph::new(("R", 0), &citer_refs, &link_refs).expect("links point to earlier citers")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::write_edges;

    fn small(seed: u64, bias: f64) -> RandomCorpus {
        RandomCorpus {
            n_papers: 2_000,
            first_year: 1990,
            last_year: 2005,
            mean_refs: 5.0,
            bias,
            closure: 0.3,
            venues: 3,
            seed,
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let bytes = |p: &RandomCorpus| {
            let (c, _) = gen_random_corpus(p).unwrap();
            let mut out = Vec::new();
            write_edges(&c, &mut out).unwrap();
            out
        };
        assert_eq!(bytes(&small(3, 0.5)), bytes(&small(3, 0.5)));
        assert_ne!(bytes(&small(3, 0.5)), bytes(&small(4, 0.5)));
    }

    #[test]
    fn edges_point_back_in_time() {
        let (corpus, report) = gen_random_corpus(&small(1, 0.7)).unwrap();
        assert_eq!(report.dropped_forward + report.dropped_cycle + report.dropped_self, 0);
        assert!(corpus.edges().all(|(a, b)| corpus.year(a) > corpus.year(b)));
        assert!(corpus.topological_order().is_some());
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = small(0, 0.5);
        p.bias = 2.0;
        assert!(random_corpus_records(&p).is_err());
        p.bias = 0.5;
        p.first_year = 2010;
        assert!(random_corpus_records(&p).is_err());
    }

    #[test]
    fn random_idg_is_valid() {
        let idg = gen_random_idg(50, 5, 0.2, 9);
        assert_eq!(idg.n(), 50);
        assert!(idg.topological_order().is_some());
    }
}
