use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, ValueEnum};

use idt_core::corpus::{
    content_hash, ingest_raw, read_cache, read_edges, read_metadata, write_cache, ContentHash, IngestOptions,
    IngestReport, IsolationRule, RawCorpus,
};
use idt_core::CitationCorpus;

pub enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
pub enum Isolation {
    /// Drop papers that neither cite nor are cited.
    #[default]
    NoLinks,
    /// Drop papers lacking either direction, repeated until stable.
    MissingEither,
}

/// Where the corpus comes from: text inputs (cached after the first run)
/// or a cache file alone.
#[derive(Args, Debug)]
pub struct CorpusArgs {
    /// Tab-separated `citing<TAB>cited` edge list.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// JSON-lines paper metadata: id, year, optional venue.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Binary corpus cache; defaults to <out>/corpus.bin.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Isolation::NoLinks)]
    pub isolation: Isolation,
}

pub struct Loaded {
    pub corpus: CitationCorpus,
    pub report: IngestReport,
    pub hash: ContentHash,
}

pub fn hex(hash: &ContentHash) -> String {
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

impl CorpusArgs {
    pub fn isolation_name(&self) -> &'static str {
        match self.isolation {
            Isolation::NoLinks => "no-links",
            Isolation::MissingEither => "missing-either",
        }
    }

    fn cache_path(&self, out: &Path) -> PathBuf {
        self.cache.clone().unwrap_or_else(|| out.join("corpus.bin"))
    }

    fn text_inputs(&self) -> Result<Option<(&Path, &Path)>, Failure> {
        match (&self.edges, &self.meta) {
            (Some(e), Some(m)) => Ok(Some((e, m))),
            (None, None) => Ok(None),
            _ => Err(Failure::Usage("--edges and --meta must be given together".into())),
        }
    }

    /// Always parses and cleans the text inputs, then refreshes the cache.
    /// An empty result is returned as is for the caller to report.
    pub fn ingest(&self, out: &Path) -> Result<Loaded, Failure> {
        let (edges, meta) = self
            .text_inputs()?
            .ok_or_else(|| Failure::Usage("ingest needs --edges and --meta".into()))?;
        let loaded = self.ingest_text(edges, meta)?;
        if !loaded.corpus.is_empty() {
            self.store(out, &loaded)?;
        }
        Ok(loaded)
    }

    /// Uses the cache when its content hash matches the text inputs, or
    /// unconditionally when only `--cache` is given.
    pub fn load(&self, out: &Path) -> Result<Loaded, Failure> {
        let cache = self.cache_path(out);
        let Some((edges, meta)) = self.text_inputs()? else {
            if self.cache.is_none() {
                return Err(Failure::Usage("give --edges and --meta, or --cache".into()));
            }
            let file = fs::File::open(&cache).with_context(|| format!("cannot open {}", cache.display()))?;
            let (hash, corpus) =
                read_cache(BufReader::new(file)).with_context(|| format!("cannot read cache {}", cache.display()))?;
            return checked(Loaded {
                corpus,
                report: IngestReport::default(),
                hash,
            });
        };
        let (edge_bytes, meta_bytes) = (read(edges)?, read(meta)?);
        let hash = self.hash(&edge_bytes, &meta_bytes);
        if let Ok(file) = fs::File::open(&cache) {
            if let Ok((stored, corpus)) = read_cache(BufReader::new(file)) {
                if stored == hash {
                    return checked(Loaded {
                        corpus,
                        report: IngestReport::default(),
                        hash,
                    });
                }
            }
        }
        let loaded = checked(self.ingest_bytes(&edge_bytes, &meta_bytes, edges, meta)?)?;
        self.store(out, &loaded)?;
        Ok(loaded)
    }

    fn hash(&self, edges: &[u8], meta: &[u8]) -> ContentHash {
        content_hash(&[edges, meta, self.isolation_name().as_bytes()])
    }

    fn ingest_text(&self, edges: &Path, meta: &Path) -> Result<Loaded, Failure> {
        let (e, m) = (read(edges)?, read(meta)?);
        self.ingest_bytes(&e, &m, edges, meta)
    }

    fn ingest_bytes(&self, e: &[u8], m: &[u8], edges: &Path, meta: &Path) -> Result<Loaded, Failure> {
        let (edge_list, malformed_edges) =
            read_edges(e).with_context(|| format!("cannot parse {}", edges.display()))?;
        let (papers, malformed_meta) = read_metadata(m).with_context(|| format!("cannot parse {}", meta.display()))?;
        let opts = IngestOptions {
            isolation: match self.isolation {
                Isolation::NoLinks => IsolationRule::NoLinks,
                Isolation::MissingEither => IsolationRule::MissingEither,
            },
        };
        let raw = RawCorpus {
            papers,
            edges: edge_list,
            malformed_edges,
            malformed_meta,
        };
        let (corpus, report) = ingest_raw(raw, &opts);
        Ok(Loaded {
            corpus,
            report,
            hash: self.hash(e, m),
        })
    }

    fn store(&self, out: &Path, loaded: &Loaded) -> Result<(), Failure> {
        let path = self.cache_path(out);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        }
        let mut buf = Vec::new();
        write_cache(&loaded.corpus, &loaded.hash, &mut buf).context("serializing cache")?;
        fs::write(&path, buf).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    Ok(fs::read(path).with_context(|| format!("cannot read {}", path.display()))?)
}

pub fn checked(loaded: Loaded) -> Result<Loaded, Failure> {
    if loaded.corpus.is_empty() {
        return Err(Failure::Data(anyhow!("corpus is empty after ingestion")));
    }
    Ok(loaded)
}
