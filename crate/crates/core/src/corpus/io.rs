//! Text formats: tab-separated edge lists and JSON-lines metadata.

use std::io::{self, BufRead, Write};

use serde::Deserialize;

use super::{CitationCorpus, PaperRecord};

/// Reads `citing<TAB>cited` lines. Blank lines and `#` comments are skipped;
/// anything else without exactly two non-empty fields counts as malformed.
pub fn read_edges<R: BufRead>(reader: R) -> io::Result<(Vec<(String, String)>, usize)> {
    let mut edges = Vec::new();
    let mut malformed = 0;
    for line in reader.lines() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => {
                edges.push((a.to_string(), b.to_string()));
            }
            _ => malformed += 1,
        }
    }
    Ok((edges, malformed))
}

#[derive(Deserialize)]
struct MetaLine {
    id: String,
    year: i32,
    #[serde(default)]
    venue: Option<String>,
}

/// Reads one JSON object per line with keys `id`, `year` and optional
/// `venue`.
pub fn read_metadata<R: BufRead>(reader: R) -> io::Result<(Vec<PaperRecord>, usize)> {
    let mut papers = Vec::new();
    let mut malformed = 0;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<MetaLine>(&line) {
            Ok(m) if !m.id.is_empty() => papers.push(PaperRecord {
                id: m.id,
                year: m.year,
                venue: m.venue,
            }),
            _ => malformed += 1,
        }
    }
    Ok((papers, malformed))
}

pub fn write_edges<W: Write>(corpus: &CitationCorpus, mut w: W) -> io::Result<()> {
    for (a, b) in corpus.edges() {
        writeln!(w, "{}\t{}", corpus.paper(a).id, corpus.paper(b).id)?;
    }
    Ok(())
}

pub fn write_metadata<W: Write>(corpus: &CitationCorpus, mut w: W) -> io::Result<()> {
    for p in corpus.papers() {
        serde_json::to_writer(&mut w, p)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
