//! Fixtures with a known answer for the ranking experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::shapes::{gen_tree, shape_records, Layout, ShapeKind, ShapeSpec};
use super::SynthError;
use crate::corpus::PaperRecord;
use crate::eval::Awardee;
use crate::idt::Tree;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlantedCorpus {
    pub papers: Vec<PaperRecord>,
    pub edges: Vec<(String, String)>,
    pub awardees: Vec<Awardee>,
}

impl PlantedCorpus {
    fn add_tree(&mut self, tree: &Tree, root: &str, venue: &str, layout: &Layout) {
        let (mut papers, edges) = shape_records(tree, root, &format!("{root}.c"), layout);
        papers[0].venue = Some(venue.to_string());
        self.papers.extend(papers);
        self.edges.extend(edges);
    }
}

/// Venues whose papers are half optimal trees and half brooms. Citation
/// counts at `t1` are drawn independently of the shape; between `t1` and
/// `t2` optimal papers gain `n * U(1, 2)` citations and brooms `n * U(0, 0.8)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedZ {
    pub series: usize,
    pub first_year: i32,
    pub last_year: i32,
    pub papers_per_venue: usize,
    pub t1: i32,
    pub t2: i32,
    pub seed: u64,
}

impl Default for PlantedZ {
    fn default() -> Self {
        PlantedZ {
            series: 4,
            first_year: 1995,
            last_year: 2000,
            papers_per_venue: 20,
            t1: 5,
            t2: 10,
            seed: 0,
        }
    }
}

pub fn planted_z(params: &PlantedZ) -> Result<PlantedCorpus, SynthError> {
    if params.t1 < 1 || params.t1 >= params.t2 {
        return Err(SynthError::Param(format!(
            "need 1 <= t1 < t2, got t1 = {}, t2 = {}",
            params.t1, params.t2
        )));
    }
    if params.papers_per_venue < 2 {
        return Err(SynthError::Param("a venue needs at least 2 papers".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = PlantedCorpus::default();
    let layout = |y| Layout {
        root_year: y,
        span: params.t1,
        ancestors: 2,
    };
    for s in 0..params.series {
        for y in params.first_year..=params.last_year {
            let venue = format!("Z{s}");
            let m = params.papers_per_venue;
            let mut optimal: Vec<bool> = (0..m).map(|k| k < m.div_ceil(2)).collect();
            optimal.shuffle(&mut rng);
            for (k, &opt) in optimal.iter().enumerate() {
                let root = format!("z{s}-{y}-{k:02}");
                let side = *[3usize, 4, 5].choose(&mut rng).unwrap();
                let n = side * side;
                let (tree, burst) = if opt {
                    (gen_tree(&ShapeSpec::optimal(n))?, n as f64 * rng.gen_range(1.0..2.0))
                } else {
                    let k = rng.gen_range(1..=n - 2);
                    (
                        gen_tree(&ShapeSpec::new(ShapeKind::Broom { k }, n))?,
                        n as f64 * rng.gen_range(0.0..0.8),
                    )
                };
                out.add_tree(&tree, &root, &venue, &layout(y));
                for j in 0..burst.round() as usize {
                    let year = if j == 0 {
                        y + params.t2
                    } else {
                        rng.gen_range(y + params.t1 + 1..=y + params.t2)
                    };
                    let id = format!("{root}.b{j:03}");
                    out.papers.push(PaperRecord::new(id.clone(), year));
                    out.edges.push((id, root.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// Award cases in cohorts of `cohort` papers. Each awardee has an optimal
/// tree; its only serious rival is a broom with four citations fewer (when
/// the planted citation rank is 1) or more (rank 2). The rest of the cohort
/// are stars with one to three citations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedTot {
    pub first_year: i32,
    pub cohort: usize,
    /// Planted citation rank of each awardee, 1 or 2.
    pub cite_ranks: Vec<usize>,
    pub seed: u64,
}

impl Default for PlantedTot {
    fn default() -> Self {
        PlantedTot {
            first_year: 1995,
            cohort: 40,
            cite_ranks: vec![1, 1, 2, 2],
            seed: 0,
        }
    }
}

pub fn planted_tot(params: &PlantedTot) -> Result<PlantedCorpus, SynthError> {
    if params.cohort < 2 {
        return Err(SynthError::Param("a cohort needs at least 2 papers".into()));
    }
    if let Some(r) = params.cite_ranks.iter().find(|&&r| r != 1 && r != 2) {
        return Err(SynthError::Param(format!(
            "planted citation rank must be 1 or 2, got {r}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = PlantedCorpus::default();
    for (c, &rank) in params.cite_ranks.iter().enumerate() {
        let year = params.first_year + c as i32;
        let venue = format!("T{c}");
        let layout = Layout {
            root_year: year,
            span: 5,
            ancestors: 1,
        };
        let mut slots: Vec<usize> = (0..params.cohort).collect();
        slots.shuffle(&mut rng);
        let id = |k: usize| format!("t{c}-{k:02}");

        let n = *[16usize, 25].choose(&mut rng).unwrap();
        out.add_tree(&gen_tree(&ShapeSpec::optimal(n))?, &id(slots[0]), &venue, &layout);
        out.awardees.push(Awardee {
            paper_id: id(slots[0]),
            venue: venue.clone(),
            year,
        });

        let rival_n = if rank == 1 { n - 4 } else { n + 4 };
        let k = rng.gen_range(1..=rival_n - 2);
        out.add_tree(
            &gen_tree(&ShapeSpec::new(ShapeKind::Broom { k }, rival_n))?,
            &id(slots[1]),
            &venue,
            &layout,
        );

        for &slot in &slots[2..] {
            let star = gen_tree(&ShapeSpec::new(ShapeKind::Star, rng.gen_range(1..=3)))?;
            out.add_tree(&star, &id(slot), &venue, &layout);
        }
    }
    // one late paper so the corpus reaches the last horizon
    if let Some(last) = out.awardees.last() {
        let tail = "t-tail".to_string();
        out.papers
            .push(PaperRecord::new(tail.clone(), last.year + crate::eval::TOT_HORIZON));
        out.edges.push((tail, last.paper_id.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ingest, IngestOptions};
    use crate::eval::{tot_experiment, z_experiment, ZConfig};
    use crate::idt::TiePolicy;

    #[test]
    fn planted_tot_ranks() {
        let planted = planted_tot(&PlantedTot::default()).unwrap();
        let (corpus, _) = ingest(planted.edges, planted.papers, &IngestOptions::default());
        let report = tot_experiment(&corpus, &planted.awardees, 0.05, TiePolicy::default()).unwrap();
        let cite: Vec<usize> = report.cases.iter().map(|c| c.rank_cite).collect();
        let nid: Vec<usize> = report.cases.iter().map(|c| c.rank_nid).collect();
        assert_eq!(cite, [1, 1, 2, 2]);
        assert_eq!(nid, [1, 1, 1, 1]);
        assert_eq!(report.summary.mrr_cite, 0.75);
        assert_eq!(report.summary.mrr_nid, 1.0);
        assert!(report.cases.iter().all(|c| c.cohort_size == 2 && c.venue_papers == 40));
    }

    #[test]
    fn planted_z_favors_nid() {
        let planted = planted_z(&PlantedZ::default()).unwrap();
        let (corpus, report) = ingest(planted.edges, planted.papers, &IngestOptions::default());
        assert_eq!(report.edges_in, report.edges_kept);
        let z = z_experiment(&corpus, &ZConfig::default()).unwrap();
        assert_eq!(z.summary.venues, 24);
        assert!(z.summary.mean_z_nid + 0.05 <= z.summary.mean_z_cite, "{:?}", z.summary);
    }

    #[test]
    fn parameter_checks() {
        let bad = PlantedZ {
            t1: 10,
            ..PlantedZ::default()
        };
        assert!(planted_z(&bad).is_err());
        let bad = PlantedTot {
            cite_ranks: vec![3],
            ..PlantedTot::default()
        };
        assert!(planted_tot(&bad).is_err());
    }
}
