use std::collections::BTreeMap;

use idt_core::corpus::{ingest, IngestOptions};
use idt_core::eval::{corpus_stats, pearson};
use idt_core::metrics::MetricsReport;
use idt_core::pipeline;
use idt_core::synth::{
    gen_random_corpus, gen_tree, random_corpus_records, shape_records, Layout, RandomCorpus, ShapeKind, ShapeSpec,
};
use idt_core::{CitationView, TiePolicy};

fn params(bias: f64) -> RandomCorpus {
    RandomCorpus {
        n_papers: 10_000,
        first_year: 1990,
        last_year: 1999,
        mean_refs: 5.0,
        bias,
        closure: 0.0,
        venues: 0,
        seed: 42,
    }
}

/// Chi-square statistic per degree of freedom of in-degrees against a
/// uniform split, within each publication year.
fn dispersion(bias: f64) -> f64 {
    let (corpus, _) = gen_random_corpus(&params(bias)).unwrap();
    let mut by_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for p in 0..corpus.len() as u32 {
        by_year
            .entry(corpus.year(p))
            .or_default()
            .push(corpus.cited_by(p).len() as f64);
    }
    let (mut chi, mut df) = (0.0, 0.0);
    for counts in by_year.values() {
        let mean = counts.iter().sum::<f64>() / counts.len() as f64;
        if mean < 5.0 {
            continue;
        }
        chi += counts.iter().map(|o| (o - mean).powi(2) / mean).sum::<f64>();
        df += (counts.len() - 1) as f64;
    }
    chi / df
}

#[test]
fn unbiased_in_degree_is_roughly_uniform() {
    let d = dispersion(0.0);
    assert!((0.8..1.2).contains(&d), "chi-square per degree of freedom {d}");
}

#[test]
fn biased_in_degree_is_heavy_tailed() {
    let d = dispersion(0.9);
    assert!(d > 3.0, "chi-square per degree of freedom {d}");
    let (corpus, _) = gen_random_corpus(&params(0.9)).unwrap();
    let max = (0..corpus.len() as u32)
        .map(|p| corpus.cited_by(p).len())
        .max()
        .unwrap();
    let mean = corpus.edge_count() as f64 / corpus.len() as f64;
    assert!(max as f64 > 10.0 * mean, "max {max}, mean {mean}");

    let stats = corpus_stats(&corpus, TiePolicy::default());
    let rho = stats.correlations.breadth_citations.unwrap();
    assert!(rho > 0.5, "rho {rho}");
}

#[test]
fn correlations_match_a_direct_computation() {
    let mut p = params(0.6);
    p.n_papers = 3_000;
    p.closure = 0.4;
    let (corpus, _) = gen_random_corpus(&p).unwrap();
    let stats = corpus_stats(&corpus, TiePolicy::default());
    let b: Vec<f64> = stats.rows.iter().map(|r| r.b as f64).collect();
    let d: Vec<f64> = stats.rows.iter().map(|r| r.d as f64).collect();
    let n: Vec<f64> = stats.rows.iter().map(|r| r.n as f64).collect();
    // textbook form over sums of products
    let direct = |x: &[f64], y: &[f64]| {
        let k = x.len() as f64;
        let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|a| a * a).sum();
        (k * sxy - sx * sy) / ((k * sxx - sx * sx).sqrt() * (k * syy - sy * sy).sqrt())
    };
    let c = &stats.correlations;
    assert!((c.breadth_citations.unwrap() - direct(&b, &n)).abs() < 1e-9);
    assert!((c.depth_citations.unwrap() - direct(&d, &n)).abs() < 1e-9);
    assert!((c.depth_breadth.unwrap() - direct(&d, &b)).abs() < 1e-9);
    assert_eq!(pearson(&b, &n), c.breadth_citations);
}

#[test]
fn star_corpus_stats_and_metrics() {
    let mut papers = Vec::new();
    let mut edges = Vec::new();
    for (i, n) in [100usize, 3, 7, 1].into_iter().enumerate() {
        let tree = gen_tree(&ShapeSpec::new(ShapeKind::Star, n)).unwrap();
        let root = format!("s{i}");
        let (p, e) = shape_records(&tree, &root, &format!("{root}-"), &Layout::default());
        papers.extend(p);
        edges.extend(e);
    }
    let (corpus, _) = ingest(edges, papers, &IngestOptions::default());
    let stats = corpus_stats(&corpus, TiePolicy::default());
    assert_eq!(stats.depth_hist, BTreeMap::from([(1, 4)]));
    assert_eq!(stats.papers, 4);

    let rows = pipeline::metrics_for_all(&corpus, TiePolicy::default());
    let big: &MetricsReport = rows.iter().find(|r| r.paper_id == "s0").unwrap();
    assert_eq!((big.n, big.d, big.b, big.nid), (100, 1, 100, 0.0));
    let ids: Vec<&str> = rows.iter().map(|r| r.paper_id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn seeded_records_are_stable() {
    let mut p = params(0.5);
    p.n_papers = 2_000;
    p.venues = 4;
    assert_eq!(random_corpus_records(&p).unwrap(), random_corpus_records(&p).unwrap());
    let (corpus, _) = gen_random_corpus(&p).unwrap();
    assert!(corpus.papers().iter().all(|r| r.venue.is_some()));
    assert!(corpus.visible().len() == corpus.len());
}
