use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use idt_core::corpus::{ingest, IngestOptions, PaperRecord};

/// 10k distinct backward edges plus planted duplicates, self-loops and
/// forward citations, shuffled together.
#[test]
fn noisy_edge_stream_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let papers: Vec<PaperRecord> = (0..2_000)
        .map(|i| PaperRecord::new(format!("q{i:04}"), 1990 + i / 100))
        .collect();
    let year = |i: usize| 1990 + i as i32 / 100;

    let mut clean = std::collections::BTreeSet::new();
    while clean.len() < 10_000 {
        let a = rng.gen_range(100..2_000);
        let b = rng.gen_range(0..2_000);
        if year(b) < year(a) {
            clean.insert((a, b));
        }
    }
    let clean: Vec<(usize, usize)> = clean.into_iter().collect();
    let dups = 500;
    let loops = 200;
    let forward = 37;
    let mut stream: Vec<(usize, usize)> = clean.clone();
    stream.extend(clean.choose_multiple(&mut rng, dups).copied());
    stream.extend((0..loops).map(|_| {
        let v = rng.gen_range(0..2_000);
        (v, v)
    }));
    let mut planted_forward = std::collections::BTreeSet::new();
    while planted_forward.len() < forward {
        let (a, b) = clean[rng.gen_range(0..clean.len())];
        planted_forward.insert((b, a));
    }
    stream.extend(planted_forward.iter().copied());
    stream.shuffle(&mut rng);

    let edges: Vec<(String, String)> = stream
        .iter()
        .map(|&(a, b)| (format!("q{a:04}"), format!("q{b:04}")))
        .collect();
    let (corpus, report) = ingest(edges, papers, &IngestOptions::default());
    assert_eq!(report.edges_in, 10_000 + dups + loops + forward);
    assert_eq!(report.dropped_self, loops);
    assert_eq!(report.dropped_dup, dups);
    assert_eq!(report.dropped_forward, forward);
    assert_eq!(report.dropped_cycle, 0);
    assert_eq!(report.edges_kept, 10_000);
    assert_eq!(corpus.edge_count(), 10_000);
    assert!(corpus.topological_order().is_some());
}
