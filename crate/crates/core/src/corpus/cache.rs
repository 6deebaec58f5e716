//! Compact binary corpus cache, keyed by a content hash of the inputs it
//! was built from.
//!
//! Layout (little endian): magic `IDTC`, format version `u8`, 32-byte
//! content hash, `u32` paper count, then per paper `u32` id length, id
//! bytes, `i32` year, `u8` venue flag and optional `u32`-length-prefixed
//! venue, then `u64` edge count and `(u32 citing, u32 cited)` pairs.

use std::io::{self, Read, Write};

use sha2::{Digest, Sha256};

use super::{CitationCorpus, CorpusError, PaperIdx, PaperRecord};

const MAGIC: &[u8; 4] = b"IDTC";
const VERSION: u8 = 1;

pub type ContentHash = [u8; 32];

/// SHA-256 over length-prefixed parts.
pub fn content_hash(parts: &[&[u8]]) -> ContentHash {
    let mut h = Sha256::new();
    for part in parts {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part);
    }
    let mut out = [0u8; 32];
    out.copy_from_slice(&h.finalize());
    out
}

pub fn write_cache<W: Write>(corpus: &CitationCorpus, hash: &ContentHash, mut w: W) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(hash)?;
    w.write_all(&(corpus.len() as u32).to_le_bytes())?;
    for p in corpus.papers() {
        write_str(&mut w, &p.id)?;
        w.write_all(&p.year.to_le_bytes())?;
        match &p.venue {
            Some(v) => {
                w.write_all(&[1])?;
                write_str(&mut w, v)?;
            }
            None => w.write_all(&[0])?,
        }
    }
    w.write_all(&(corpus.edge_count() as u64).to_le_bytes())?;
    for (a, b) in corpus.edges() {
        w.write_all(&a.to_le_bytes())?;
        w.write_all(&b.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a cache, returning the stored content hash with the corpus.
pub fn read_cache<R: Read>(mut r: R) -> Result<(ContentHash, CitationCorpus), CorpusError> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic[..4] != MAGIC || magic[4] != VERSION {
        return Err(CorpusError::CorruptCache("bad magic or version".into()));
    }
    let mut hash = [0u8; 32];
    r.read_exact(&mut hash)?;
    let n = read_u32(&mut r)? as usize;
    let mut papers = Vec::with_capacity(n);
    for _ in 0..n {
        let id = read_str(&mut r)?;
        let year = i32::from_le_bytes(read_array(&mut r)?);
        let venue = match read_array::<1, _>(&mut r)?[0] {
            0 => None,
            1 => Some(read_str(&mut r)?),
            _ => return Err(CorpusError::CorruptCache("bad venue flag".into())),
        };
        papers.push(PaperRecord { id, year, venue });
    }
    if !papers.windows(2).all(|w| w[0].id < w[1].id) {
        return Err(CorpusError::CorruptCache("papers not sorted by id".into()));
    }
    let m = u64::from_le_bytes(read_array(&mut r)?) as usize;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let a = read_u32(&mut r)?;
        let b = read_u32(&mut r)?;
        if a as usize >= n || b as usize >= n {
            return Err(CorpusError::CorruptCache("edge endpoint out of range".into()));
        }
        edges.push((a as PaperIdx, b as PaperIdx));
    }
    Ok((hash, CitationCorpus::from_parts(papers, &edges)))
}

fn write_str<W: Write>(w: &mut W, s: &str) -> io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> io::Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    Ok(u32::from_le_bytes(read_array(r)?))
}

fn read_str<R: Read>(r: &mut R) -> Result<String, CorpusError> {
    let len = read_u32(r)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    String::from_utf8(buf).map_err(|_| CorpusError::CorruptCache("id is not utf-8".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ingest, IngestOptions};

    #[test]
    fn cache_round_trip() {
        let papers = vec![
            PaperRecord::new("a", 2000).with_venue("V-2000"),
            PaperRecord::new("b", 2001),
            PaperRecord::new("c", 2003),
        ];
        let edges = vec![("b".into(), "a".into()), ("c".into(), "b".into())];
        let (corpus, _) = ingest(edges, papers, &IngestOptions::default());
        let hash = content_hash(&[b"edges", b"meta"]);
        let mut buf = Vec::new();
        write_cache(&corpus, &hash, &mut buf).unwrap();
        let (h, back) = read_cache(&buf[..]).unwrap();
        assert_eq!(h, hash);
        assert_eq!(back, corpus);
    }

    #[test]
    fn truncated_cache_rejected() {
        let (corpus, _) = ingest(
            vec![("b".into(), "a".into())],
            vec![PaperRecord::new("a", 2000), PaperRecord::new("b", 2001)],
            &IngestOptions::default(),
        );
        let mut buf = Vec::new();
        write_cache(&corpus, &[0; 32], &mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(read_cache(&buf[..]).is_err());
        assert!(matches!(
            read_cache(&b"nope-nope"[..]),
            Err(CorpusError::CorruptCache(_))
        ));
    }

    #[test]
    fn hash_separates_parts() {
        assert_ne!(content_hash(&[b"ab", b"c"]), content_hash(&[b"a", b"bc"]));
    }
}
