//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use idt_core::corpus::{ingest, read_edges, read_metadata, IngestOptions};
use idt_core::eval::{corpus_stats, kendall_tau_distance, z_experiment, RankedList, ZConfig};
use idt_core::metrics::{idi, idi_max, idi_min, nid, optimal_shape, MetricsReport};
use idt_core::pipeline;
use idt_core::synth::{enumerate_trees, gen_tree, planted_z, random_corpus_records, PlantedZ, RandomCorpus, ShapeSpec};
use idt_core::{build_idg, build_idt, TiePolicy, Tree};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:.2?}, budget {budget:?}"))
}

const TOY_EDGES: &str = "\
p1\tP
p2\tP
p3\tP
p4\tP
p5\tP
p3\tp1
p4\tp1
p4\tp2
p5\tp2
p5\tp3
";

const TOY_META: &str = r#"{"id":"P","year":2000}
{"id":"p1","year":2001}
{"id":"p2","year":2001}
{"id":"p3","year":2002}
{"id":"p4","year":2002}
{"id":"p5","year":2003}
"#;

fn toy_reproduction() -> Check {
    let start = Instant::now();
    let (edges, _) = read_edges(TOY_EDGES.as_bytes()).map_err(|e| e.to_string())?;
    let (papers, _) = read_metadata(TOY_META.as_bytes()).map_err(|e| e.to_string())?;
    let (corpus, _) = ingest(edges, papers, &IngestOptions::default());
    let idg = build_idg(&corpus, "P").map_err(|e| e.to_string())?;
    let idt = build_idt(&idg, TiePolicy::default());
    let row = MetricsReport::compute("P", &idt).ok_or("P is uncited")?;
    within(start.elapsed(), Duration::from_secs(1))?;
    ensure((row.n, row.d, row.b, row.idi) == (5, 3, 2, 5), || {
        format!("got {row:?}")
    })?;
    ensure(row.nid == 0.0, || format!("nid {}", row.nid))?;
    Ok(format!(
        "n={} d={} b={} idi={} nid={}",
        row.n, row.d, row.b, row.idi, row.nid
    ))
}

/// Uniform labeled tree on `n + 1` nodes from a random Prüfer sequence,
/// rooted at node 0.
fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Tree {
    let m = n + 1;
    if m == 2 {
        return Tree::from_parents(&[0]).unwrap();
    }
    let seq: Vec<usize> = (0..m - 2).map(|_| rng.gen_range(0..m)).collect();
    let mut degree = vec![1usize; m];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut adj = vec![Vec::new(); m];
    let mut leaves: std::collections::BTreeSet<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    for &s in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        adj[leaf].push(s);
        adj[s].push(leaf);
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    adj[rest[0]].push(rest[1]);
    adj[rest[1]].push(rest[0]);

    let mut parent = vec![usize::MAX; m];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    Tree::from_parents(&parent[1..]).unwrap()
}

/// Random tree in one of three families, so both bushy and stringy shapes
/// show up.
fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Tree {
    match rng.gen_range(0..3) {
        0 => prufer_tree(n, rng),
        1 => {
            let root_prob = rng.gen::<f64>();
            let mut spec = ShapeSpec::new(idt_core::synth::ShapeKind::RandomAttachment { root_prob }, n);
            spec.seed = rng.gen();
            gen_tree(&spec).unwrap()
        }
        _ => {
            // attach near the newest nodes
            let parents: Vec<usize> = (1..=n)
                .map(|v| {
                    let back = rng.gen_range(1..=3.min(v));
                    v - back
                })
                .collect();
            Tree::from_parents(&parents).unwrap()
        }
    }
}

fn lemmas_hold(t: &Tree) -> Result<(), String> {
    let n = t.n() as u64;
    let s = t.stats();
    let (d, b) = (s.depth as u64, s.breadth as u64);
    ensure((1..=n).contains(&d) && (1..=n).contains(&b), || {
        format!("n={n} d={d} b={b} out of range")
    })?;
    ensure(d + b <= n + 1, || format!("n={n} d={d} b={b}: d + b > n + 1"))?;
    ensure(d * b >= n, || format!("n={n} d={d} b={b}: d * b < n"))
}

fn bounds_oracle() -> Check {
    let start = Instant::now();
    for n in 1..=9 {
        let (mut lo, mut hi, mut count) = (u64::MAX, 0, 0);
        for t in enumerate_trees(n).map_err(|e| e.to_string())? {
            let v = idi(&t);
            lo = lo.min(v);
            hi = hi.max(v);
            count += 1;
            lemmas_hold(&t)?;
        }
        // scan every broom: a chain of k nodes ahead of n - k leaves
        let brute_max = (0..n as u64).map(|k| (1 + k) * (n as u64 - k)).max().unwrap();
        let want_max = idi_max(n).map_err(|e| e.to_string())?;
        ensure(lo == n as u64 && lo == idi_min(n).unwrap(), || {
            format!("n={n}: min idi {lo}")
        })?;
        ensure(hi == want_max && hi == brute_max, || {
            format!("n={n}: max idi {hi}, closed form {want_max}")
        })?;
        ensure(count > 0, || format!("n={n}: no trees"))?;
    }
    let per_n = 10_000;
    (10..=200usize).into_par_iter().try_for_each(|n| {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let (lo, hi) = (idi_min(n).unwrap(), idi_max(n).unwrap());
        for _ in 0..per_n {
            let t = random_tree(n, &mut rng);
            let v = idi(&t);
            ensure(lo <= v && v <= hi, || format!("n={n}: idi {v} outside [{lo}, {hi}]"))?;
            lemmas_hold(&t)?;
        }
        Ok::<(), String>(())
    })?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "exhaustive n<=9, {per_n} random trees for each n in 10..=200, {:.1?}",
        start.elapsed()
    ))
}

fn optimal_configuration() -> Check {
    for k in 1..=20usize {
        let n = k * k;
        let t = gen_tree(&ShapeSpec::optimal(n)).map_err(|e| e.to_string())?;
        let s = t.stats();
        ensure((s.depth as usize, s.breadth as usize) == (k, k), || {
            format!("n={n}: d={} b={}", s.depth, s.breadth)
        })?;
        ensure(nid(&t) == Ok(0.0), || format!("n={n}: nid {:?}", nid(&t)))?;
    }
    let mut checked = 0;
    for n in 1..=400usize {
        let feasible: Vec<(usize, usize)> = (1..=n)
            .flat_map(|d| (1..=n).map(move |b| (d, b)))
            .filter(|&(d, b)| d + b <= n + 1 && d * b >= n)
            .collect();
        let key = |&(d, b): &(usize, usize)| (d.abs_diff(b), d * b - n);
        let best = *feasible.iter().min_by_key(|p| key(p)).unwrap();
        let (want, _) = optimal_shape(n).unwrap();
        let want = want as usize;
        ensure(best.0.max(best.1) == want, || {
            format!("n={n}: brute force {best:?}, ceil sqrt {want}")
        })?;
        if feasible.iter().any(|&(d, b)| d == b) {
            let square = feasible
                .iter()
                .filter(|&&(d, b)| d == b)
                .min_by_key(|p| key(p))
                .unwrap();
            ensure(*square == (want, want), || {
                format!("n={n}: balanced optimum {square:?}, ceil sqrt {want}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "squares up to 400 exact; brute force agrees for n<=400 ({checked} with a balanced pair)"
    ))
}

fn reconfiguration_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut steps = 0;
    for n in 1..=50usize {
        // star to line: the next root leaf moves under the tip of the chain
        let mut parents = vec![0usize; n];
        for v in 2..=n {
            parents[v - 1] = v - 1;
            let t = Tree::from_parents(&parents).unwrap();
            ensure(idi(&t) == n as u64, || format!("n={n}, step {v}: idi {}", idi(&t)))?;
            steps += 1;
        }
        let line = Tree::from_parents(&parents).unwrap();
        ensure(line.height() as usize == n, || format!("n={n}: did not reach a line"))?;

        // any order of moving a root leaf under another leaf keeps every
        // branch unified
        let mut parents = vec![0usize; n];
        loop {
            let t = Tree::from_parents(&parents).unwrap();
            ensure(idi(&t) == n as u64, || {
                format!("n={n}: idi {} after random moves", idi(&t))
            })?;
            let leaves = t.leaves();
            let movable: Vec<usize> = leaves.iter().copied().filter(|&v| t.parent(v) == Some(0)).collect();
            if leaves.len() < 2 || movable.is_empty() {
                break;
            }
            let v = *movable.choose(&mut rng).unwrap();
            let targets: Vec<usize> = leaves.iter().copied().filter(|&u| u != v).collect();
            parents[v - 1] = *targets.choose(&mut rng).unwrap();
            steps += 1;
        }
    }
    Ok(format!("{steps} intermediate trees, all with idi = n"))
}

fn brute_discordant(a: &[usize], b: &[usize]) -> u64 {
    let pos_b: std::collections::HashMap<usize, usize> = b.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut count = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if pos_b[&a[i]] > pos_b[&a[j]] {
                count += 1;
            }
        }
    }
    count
}

fn list(order: &[usize]) -> RankedList {
    RankedList::from_order(order.iter().map(|x| format!("e{x}"))).unwrap()
}

fn kendall_distance_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1_000 {
        let m = rng.gen_range(2..=64);
        let mut a: Vec<usize> = (0..m).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let pairs = (m * (m - 1) / 2) as f64;
        let want = brute_discordant(&a, &b) as f64 / pairs;
        let got = kendall_tau_distance(&list(&a), &list(&b)).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("m={m}: {got} vs brute force {want}"))?;
    }
    for _ in 0..1_000 {
        let m = rng.gen_range(2..=64);
        let pairs = (m * (m - 1) / 2) as f64;
        let perms: Vec<Vec<usize>> = (0..3)
            .map(|_| {
                let mut p: Vec<usize> = (0..m).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let k = |x: &[usize], y: &[usize]| (kendall_tau_distance(&list(x), &list(y)).unwrap() * pairs).round() as u64;
        let (a, b, c) = (&perms[0], &perms[1], &perms[2]);
        ensure(k(a, a) == 0, || "K(a, a) != 0".into())?;
        ensure(k(a, b) == k(b, a), || "K is not symmetric".into())?;
        ensure(k(a, c) <= k(a, b) + k(b, c), || "triangle inequality fails".into())?;
        // relabeling every element the same way leaves the distance alone
        let mut relabel: Vec<usize> = (0..m).collect();
        relabel.shuffle(&mut rng);
        let ra: Vec<usize> = a.iter().map(|&x| relabel[x]).collect();
        let rb: Vec<usize> = b.iter().map(|&x| relabel[x]).collect();
        ensure(k(&ra, &rb) == k(a, b), || "relabeling changed K".into())?;
    }
    Ok("1000 random pairs exact against brute force; axioms on 1000 triples".into())
}

fn full_run(seed: u64) -> String {
    let params = RandomCorpus {
        n_papers: 100_000,
        first_year: 1980,
        last_year: 2012,
        mean_refs: 8.0,
        bias: 0.6,
        closure: 0.3,
        venues: 12,
        seed,
    };
    let (papers, edges) = random_corpus_records(&params).unwrap();
    let (corpus, report) = ingest(edges, papers, &IngestOptions::default());
    let tie = TiePolicy::default();
    let rows = pipeline::metrics_for_all(&corpus, tie);
    let stats = corpus_stats(&corpus, tie);
    let z = z_experiment(&corpus, &ZConfig::default()).unwrap();
    [
        pipeline::to_json(&report),
        pipeline::metrics_csv(&rows),
        pipeline::histogram_csv("depth", &stats.depth_hist),
        pipeline::histogram_csv("breadth", &stats.breadth_hist),
        pipeline::scatter_csv(&stats),
        pipeline::to_json(&stats),
        pipeline::z_venues_csv(&z),
        pipeline::z_skipped_csv(&z),
        pipeline::to_json(&z.summary),
    ]
    .concat()
}

fn pipeline_determinism() -> Check {
    let start = Instant::now();
    let pool = |threads| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let first = pool(4).install(|| full_run(6));
    let second = pool(4).install(|| full_run(6));
    let serial = pool(1).install(|| full_run(6));
    ensure(first == second, || "two parallel runs differ".into())?;
    ensure(first == serial, || "serial and parallel runs differ".into())?;
    ensure(first.lines().count() > 100_000, || "suspiciously small output".into())?;
    Ok(format!(
        "3 runs of a 100000-paper corpus, {} output bytes each, {:.1?}",
        first.len(),
        start.elapsed()
    ))
}

fn directional_z() -> Check {
    let start = Instant::now();
    let mut margins = Vec::new();
    for seed in 0..5 {
        let planted = planted_z(&PlantedZ {
            seed,
            ..PlantedZ::default()
        })
        .map_err(|e| e.to_string())?;
        let (corpus, _) = ingest(planted.edges, planted.papers, &IngestOptions::default());
        let s = z_experiment(&corpus, &ZConfig::default())
            .map_err(|e| e.to_string())?
            .summary;
        ensure(s.venues > 0, || format!("seed {seed}: no venues evaluated"))?;
        let margin = s.mean_z_cite - s.mean_z_nid;
        ensure(margin >= 0.05, || {
            format!(
                "seed {seed}: mean z_nid {:.4} vs mean z_cite {:.4}",
                s.mean_z_nid, s.mean_z_cite
            )
        })?;
        margins.push(margin);
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    let min = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("5 seeds, smallest margin {min:.4}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("toy reproduction", toy_reproduction),
        ("bounds oracle", bounds_oracle),
        ("optimal configuration", optimal_configuration),
        ("reconfiguration invariance", reconfiguration_invariance),
        ("kendall distance", kendall_distance_check),
        ("pipeline determinism", pipeline_determinism),
        ("directional z-score", directional_z),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "NOT RUN criterion 8: full-dataset figures need the 3.9M-paper corpus and the curated award list; \
         reproduce with `idt eval-z --years 1995:2000 --t1 5 --t2 10` and `idt eval-tot --pct 0.05`"
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
