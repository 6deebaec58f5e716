//! `idt`: batch front-end for influence dispersion tree analytics.

mod input;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use idt_core::corpus::{ingest, write_edges, write_metadata, IngestOptions};
use idt_core::eval::{corpus_stats, read_awardees, tot_experiment, z_experiment, GainMode, TieMode, ZConfig};
use idt_core::pipeline;
use idt_core::synth::{self, PlantedTot, PlantedZ, RandomCorpus, ShapeKind, ShapeSpec};
use idt_core::TiePolicy;

use input::{CorpusArgs, Failure, Loaded};

#[derive(Parser, Debug)]
#[command(name = "idt", version, about = "Influence dispersion trees over citation networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Parent choice among equally deep candidates.
    #[arg(long, global = true, value_enum, default_value_t = Tie::Latest)]
    tie: Tie,

    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Clean an edge list and metadata into a binary corpus cache.
    Ingest(CorpusArgs),
    /// Per-paper depth, breadth, IDI and NID.
    Metrics {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Only these papers, one id per line.
        #[arg(long)]
        ids: Option<PathBuf>,
    },
    /// Depth and breadth distributions and correlations.
    Stats(CorpusArgs),
    /// Venue z-scores of NID and citation rankings against citation gain.
    EvalZ {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Publication years, inclusive.
        #[arg(long, default_value = "1995:2000", value_parser = parse_years)]
        years: (i32, i32),
        #[arg(long, default_value_t = 5)]
        t1: i32,
        #[arg(long, default_value_t = 10)]
        t2: i32,
        #[arg(long, value_enum, default_value_t = Gain::Fractional)]
        gain: Gain,
        /// Treatment of equal scores in the rank distance.
        #[arg(long, value_enum, default_value_t = Kendall::ById)]
        kendall: Kendall,
    },
    /// Ranks of award-winning papers among their most-cited contemporaries.
    EvalTot {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// CSV with columns paper_id,venue,year.
        #[arg(long)]
        awardees: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        pct: f64,
    },
    /// Write synthetic corpora.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Subcommand, Debug)]
enum SynthCommand {
    /// Random corpus with preferential attachment.
    Corpus {
        #[arg(long, default_value_t = 10_000)]
        papers: usize,
        #[arg(long, default_value = "1980:2010", value_parser = parse_years)]
        years: (i32, i32),
        #[arg(long, default_value_t = 8.0)]
        mean_refs: f64,
        #[arg(long, default_value_t = 0.5)]
        bias: f64,
        #[arg(long, default_value_t = 0.3)]
        closure: f64,
        #[arg(long, default_value_t = 0)]
        venues: usize,
    },
    /// One paper whose citers form a named tree shape.
    Shape {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Chain length of a broom, branch count of an optimal tree.
        #[arg(long)]
        k: Option<usize>,
        /// Branch length of an optimal tree.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0.3)]
        root_prob: f64,
    },
    /// Venues mixing optimal trees that gain many citations with brooms
    /// that gain few.
    PlantedZ {
        #[arg(long, default_value_t = 4)]
        series: usize,
        #[arg(long, default_value = "1995:2000", value_parser = parse_years)]
        years: (i32, i32),
        #[arg(long, default_value_t = 20)]
        papers_per_venue: usize,
        #[arg(long, default_value_t = 5)]
        t1: i32,
        #[arg(long, default_value_t = 10)]
        t2: i32,
    },
    /// Award cohorts with planted citation ranks; writes awardees.csv too.
    PlantedTot {
        #[arg(long, default_value_t = 40)]
        cohort: usize,
        #[arg(long, default_value_t = 1995)]
        first_year: i32,
        #[arg(long, value_delimiter = ',', default_value = "1,1,2,2")]
        cite_ranks: Vec<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Tie {
    MinId,
    Latest,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Gain {
    Fractional,
    Absolute,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kendall {
    ById,
    DiscardTies,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Star,
    Chain,
    Broom,
    Optimal,
    Random,
}

fn parse_years(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or("expected FIRST:LAST")?;
    let a: i32 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: i32 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty year range {a}:{b}"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Data(e.into())),
        },
        None => run(&cli),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl Cli {
    fn tie_policy(&self) -> TiePolicy {
        match self.tie {
            Tie::MinId => TiePolicy::MinId,
            Tie::Latest => TiePolicy::Latest,
            Tie::Random => TiePolicy::Random { seed: self.seed },
        }
    }

    fn tie_name(&self) -> &'static str {
        match self.tie {
            Tie::MinId => "min-id",
            Tie::Latest => "latest",
            Tie::Random => "random",
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = &cli.out;
    let tie = cli.tie_policy();
    match &cli.command {
        Command::Ingest(args) => {
            let loaded = args.ingest(out)?;
            write(out, "ingest_report.json", &pipeline::to_json(&loaded.report))?;
            let r = &loaded.report;
            println!(
                "kept {} of {} papers and {} of {} edges (self {}, duplicate {}, forward {}, cycle {}, unknown {}, isolated {}, stranded {})",
                r.papers_kept,
                r.papers_in,
                r.edges_kept,
                r.edges_in,
                r.dropped_self,
                r.dropped_dup,
                r.dropped_forward,
                r.dropped_cycle,
                r.dropped_unknown,
                r.dropped_isolated,
                r.dropped_stranded
            );
            let loaded = input::checked(loaded)?;
            run_record(cli, "ingest", &loaded, json!({ "isolation": args.isolation_name() }))?;
        }
        Command::Metrics { corpus, ids } => {
            let loaded = corpus.load(out)?;
            let (rows, errors) = match ids {
                Some(path) => {
                    let text = read_text(path)?;
                    let ids: Vec<String> = text
                        .lines()
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .map(String::from)
                        .collect();
                    pipeline::metrics_for_ids(&loaded.corpus, &ids, tie)
                }
                None => (pipeline::metrics_for_all(&loaded.corpus, tie), Vec::new()),
            };
            write(out, "metrics.csv", &pipeline::metrics_csv(&rows))?;
            if ids.is_some() {
                write(out, "metrics_errors.csv", &pipeline::row_errors_csv(&errors))?;
            }
            run_record(cli, "metrics", &loaded, json!({ "ids": ids }))?;
            println!("{} rows, {} errors", rows.len(), errors.len());
            for e in &errors {
                eprintln!("{}: {}", e.paper_id, e.error);
            }
        }
        Command::Stats(corpus) => {
            let loaded = corpus.load(out)?;
            let stats = corpus_stats(&loaded.corpus, tie);
            write(
                out,
                "depth_hist.csv",
                &pipeline::histogram_csv("depth", &stats.depth_hist),
            )?;
            write(
                out,
                "breadth_hist.csv",
                &pipeline::histogram_csv("breadth", &stats.breadth_hist),
            )?;
            write(out, "scatter.csv", &pipeline::scatter_csv(&stats))?;
            write(out, "stats_summary.json", &pipeline::to_json(&stats))?;
            run_record(cli, "stats", &loaded, json!({}))?;
            let c = &stats.correlations;
            println!(
                "{} cited papers, max depth {}, max breadth {}; rho(breadth, citations) {}, rho(depth, citations) {}",
                stats.papers,
                stats.max_depth,
                stats.max_breadth,
                fmt_opt(c.breadth_citations),
                fmt_opt(c.depth_citations)
            );
        }
        Command::EvalZ {
            corpus,
            years,
            t1,
            t2,
            gain,
            kendall,
        } => {
            if t1 >= t2 {
                return Err(Failure::Usage(format!("--t1 ({t1}) must be less than --t2 ({t2})")));
            }
            let loaded = corpus.load(out)?;
            let cfg = ZConfig {
                first_year: years.0,
                last_year: years.1,
                t1: *t1,
                t2: *t2,
                tie,
                gain: match gain {
                    Gain::Fractional => GainMode::Fractional,
                    Gain::Absolute => GainMode::Absolute,
                },
                kendall: match kendall {
                    Kendall::ById => TieMode::ById,
                    Kendall::DiscardTies => TieMode::DiscardTies,
                },
            };
            let report = z_experiment(&loaded.corpus, &cfg).map_err(|e| Failure::Data(e.into()))?;
            write(out, "z_venues.csv", &pipeline::z_venues_csv(&report))?;
            write(out, "z_skipped.csv", &pipeline::z_skipped_csv(&report))?;
            write(
                out,
                "z_summary.json",
                &pipeline::to_json(&json!({ "config": cfg, "summary": report.summary })),
            )?;
            run_record(cli, "eval-z", &loaded, json!({ "config": cfg }))?;
            let s = &report.summary;
            println!(
                "{} venues ({} skipped): mean z_nid {:.4}, mean z_cite {:.4}; NID closer in {} venues",
                s.venues, s.skipped, s.mean_z_nid, s.mean_z_cite, s.nid_better
            );
        }
        Command::EvalTot { corpus, awardees, pct } => {
            if !(*pct > 0.0 && *pct <= 1.0) {
                return Err(Failure::Usage(format!("--pct must lie in (0, 1], got {pct}")));
            }
            let file = fs::File::open(awardees).with_context(|| format!("cannot open {}", awardees.display()))?;
            let list = read_awardees(file).with_context(|| format!("cannot read {}", awardees.display()))?;
            let loaded = corpus.load(out)?;
            let report = tot_experiment(&loaded.corpus, &list, *pct, tie).map_err(|e| Failure::Data(e.into()))?;
            write(out, "tot_cases.csv", &pipeline::tot_csv(&report))?;
            write(out, "tot_skipped.csv", &pipeline::tot_skipped_csv(&report))?;
            write(
                out,
                "tot_summary.json",
                &pipeline::to_json(&json!({ "pct": pct, "summary": report.summary })),
            )?;
            run_record(cli, "eval-tot", &loaded, json!({ "pct": pct, "awardees": awardees }))?;
            let s = &report.summary;
            println!(
                "{} cases ({} skipped): MRR nid {:.4}, MRR cite {:.4}; rank 1 by nid {}, by cite {}",
                s.cases, s.skipped, s.mrr_nid, s.mrr_cite, s.rank1_nid, s.rank1_cite
            );
        }
        Command::Synth(cmd) => synth_command(cli, cmd)?,
    }
    Ok(())
}

fn synth_command(cli: &Cli, cmd: &SynthCommand) -> Result<(), Failure> {
    let out = &cli.out;
    let invalid = |e: synth::SynthError| Failure::Usage(e.to_string());
    let (papers, edges, awardees, params) = match cmd {
        SynthCommand::Corpus {
            papers,
            years,
            mean_refs,
            bias,
            closure,
            venues,
        } => {
            let params = RandomCorpus {
                n_papers: *papers,
                first_year: years.0,
                last_year: years.1,
                mean_refs: *mean_refs,
                bias: *bias,
                closure: *closure,
                venues: *venues,
                seed: cli.seed,
            };
            let (p, e) = synth::random_corpus_records(&params).map_err(invalid)?;
            (p, e, None, json!({ "corpus": params }))
        }
        SynthCommand::Shape {
            kind,
            n,
            k,
            r,
            root_prob,
        } => {
            let need = |v: &Option<usize>, flag: &str| {
                v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this shape")))
            };
            let kind = match kind {
                Kind::Star => ShapeKind::Star,
                Kind::Chain => ShapeKind::Chain,
                Kind::Broom => ShapeKind::Broom { k: need(k, "k")? },
                Kind::Optimal => match (k, r) {
                    (None, None) => ShapeSpec::optimal(*n).kind,
                    _ => ShapeKind::Optimal {
                        k: need(k, "k")?,
                        r: need(r, "r")?,
                    },
                },
                Kind::Random => ShapeKind::RandomAttachment { root_prob: *root_prob },
            };
            let spec = ShapeSpec {
                kind,
                n: *n,
                seed: cli.seed,
            };
            let shape = synth::gen_shape(&spec).map_err(invalid)?;
            write(out, "idt.json", &(shape.idt.to_json() + "\n"))?;
            (shape.papers, shape.edges, None, json!({ "shape": spec }))
        }
        SynthCommand::PlantedZ {
            series,
            years,
            papers_per_venue,
            t1,
            t2,
        } => {
            let params = PlantedZ {
                series: *series,
                first_year: years.0,
                last_year: years.1,
                papers_per_venue: *papers_per_venue,
                t1: *t1,
                t2: *t2,
                seed: cli.seed,
            };
            let planted = synth::planted_z(&params).map_err(invalid)?;
            (planted.papers, planted.edges, None, json!({ "planted_z": params }))
        }
        SynthCommand::PlantedTot {
            cohort,
            first_year,
            cite_ranks,
        } => {
            let params = PlantedTot {
                first_year: *first_year,
                cohort: *cohort,
                cite_ranks: cite_ranks.clone(),
                seed: cli.seed,
            };
            let planted = synth::planted_tot(&params).map_err(invalid)?;
            (
                planted.papers,
                planted.edges,
                Some(planted.awardees),
                json!({ "planted_tot": params }),
            )
        }
    };

    let (corpus, _) = ingest(edges, papers, &IngestOptions::default());
    let mut e = Vec::new();
    let mut m = Vec::new();
    write_edges(&corpus, &mut e).context("serializing edges")?;
    write_metadata(&corpus, &mut m).context("serializing metadata")?;
    write_bytes(out, "edges.tsv", &e)?;
    write_bytes(out, "meta.jsonl", &m)?;
    if let Some(list) = &awardees {
        let mut text = String::from("paper_id,venue,year\n");
        for a in list {
            text.push_str(&format!("{},{},{}\n", a.paper_id, a.venue, a.year));
        }
        write(out, "awardees.csv", &text)?;
    }
    let record = json!({ "command": "synth", "seed": cli.seed, "params": params });
    write(out, "run.json", &pipeline::to_json(&record))?;
    println!(
        "{} papers, {} edges written to {}",
        corpus.len(),
        corpus.edge_count(),
        out.display()
    );
    Ok(())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".into(), |v| format!("{v:.4}"))
}

fn run_record(cli: &Cli, command: &str, loaded: &Loaded, params: serde_json::Value) -> Result<(), Failure> {
    let record = json!({
        "command": command,
        "seed": cli.seed,
        "tie": cli.tie_name(),
        "input_hash": input::hex(&loaded.hash),
        "papers": loaded.corpus.len(),
        "edges": loaded.corpus.edge_count(),
        "params": params,
    });
    write(cli.out.as_path(), "run.json", &pipeline::to_json(&record))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Data)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    write_bytes(dir, name, text.as_bytes())
}

fn write_bytes(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), Failure> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
