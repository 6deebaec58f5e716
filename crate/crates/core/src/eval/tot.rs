use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rank::{rank_by_measure, Measure};
use super::EvalError;
use crate::corpus::{CitationCorpus, CitationView, PaperIdx};
use crate::idt::TiePolicy;

/// Years after publication at which awardees are compared.
pub const TOT_HORIZON: i32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Awardee {
    pub paper_id: String,
    pub venue: String,
    pub year: i32,
}

/// Reads `paper_id,venue,year` rows; a leading header row is skipped.
pub fn read_awardees<R: Read>(reader: R) -> Result<Vec<Awardee>, EvalError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| EvalError::Awardees(e.to_string()))?;
        if rec.len() != 3 {
            return Err(EvalError::Awardees(format!(
                "row {}: expected 3 fields, got {}",
                line + 1,
                rec.len()
            )));
        }
        if line == 0 && &rec[0] == "paper_id" {
            continue;
        }
        let year = rec[2]
            .parse()
            .map_err(|_| EvalError::Awardees(format!("row {}: bad year `{}`", line + 1, &rec[2])))?;
        out.push(Awardee {
            paper_id: rec[0].to_string(),
            venue: rec[1].to_string(),
            year,
        });
    }
    Ok(out)
}

/// Ranks of one awardee among its most-cited contemporaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotCase {
    pub paper_id: String,
    pub venue: String,
    pub year: i32,
    /// Papers published in the same venue and year.
    pub venue_papers: usize,
    /// Size of the competitor set the ranks are taken in.
    pub cohort_size: usize,
    pub rank_cite: usize,
    pub rank_nid: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedCase {
    pub paper_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotSummary {
    pub cases: usize,
    pub skipped: usize,
    pub mrr_cite: f64,
    pub mrr_nid: f64,
    pub rank1_cite: usize,
    pub rank1_nid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotReport {
    pub cases: Vec<TotCase>,
    pub skipped: Vec<SkippedCase>,
    pub summary: TotSummary,
}

/// Mean reciprocal rank; 0 for no ranks.
pub fn mrr(ranks: &[usize]) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().map(|&r| 1.0 / r as f64).sum::<f64>() / ranks.len() as f64
}

/// For each awardee, takes the `ceil(pct * |venue|)` most-cited papers of
/// its venue and year at `year + 10` (adding the awardee if it missed the
/// cut) and ranks the awardee within that set by citations and by NID.
pub fn tot_experiment(
    corpus: &CitationCorpus,
    awardees: &[Awardee],
    pct: f64,
    tie: TiePolicy,
) -> Result<TotReport, EvalError> {
    if !(pct > 0.0 && pct <= 1.0) {
        return Err(EvalError::Percentile(pct));
    }
    let last_year = corpus.year_range().map(|(_, max)| max).unwrap_or(i32::MIN);
    let outcomes: Vec<Result<TotCase, SkippedCase>> = awardees
        .par_iter()
        .map(|a| run_case(corpus, a, pct, tie, last_year))
        .collect();

    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Ok(c) => cases.push(c),
            Err(s) => skipped.push(s),
        }
    }
    let cite: Vec<usize> = cases.iter().map(|c| c.rank_cite).collect();
    let nid: Vec<usize> = cases.iter().map(|c| c.rank_nid).collect();
    let summary = TotSummary {
        cases: cases.len(),
        skipped: skipped.len(),
        mrr_cite: mrr(&cite),
        mrr_nid: mrr(&nid),
        rank1_cite: cite.iter().filter(|&&r| r == 1).count(),
        rank1_nid: nid.iter().filter(|&&r| r == 1).count(),
    };
    Ok(TotReport {
        cases,
        skipped,
        summary,
    })
}

fn run_case(
    corpus: &CitationCorpus,
    a: &Awardee,
    pct: f64,
    tie: TiePolicy,
    last_year: i32,
) -> Result<TotCase, SkippedCase> {
    let skip = |reason: String| SkippedCase {
        paper_id: a.paper_id.clone(),
        reason,
    };
    let Some(awardee) = corpus.lookup(&a.paper_id) else {
        return Err(skip("awardee not in corpus".into()));
    };
    let horizon = a.year + TOT_HORIZON;
    if horizon > last_year {
        return Err(skip(format!(
            "insufficient year coverage: needs {horizon} but corpus ends {last_year}"
        )));
    }
    let view = corpus.snapshot(horizon);
    if view.citation_count(awardee) == 0 {
        return Err(skip("awardee uncited at the horizon".into()));
    }
    let members: Vec<PaperIdx> = corpus
        .papers()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.year == a.year && p.venue.as_deref() == Some(a.venue.as_str()))
        .map(|(i, _)| i as PaperIdx)
        .collect();
    let venue_papers = members.len();

    // most cited first, ties by id (index order is id order)
    let mut by_cites = members;
    by_cites.sort_by_key(|&p| (std::cmp::Reverse(view.citation_count(p)), p));
    let quota = ((pct * venue_papers as f64) - 1e-9).ceil().max(1.0) as usize;
    let mut competitors: Vec<PaperIdx> = by_cites.into_iter().take(quota).collect();
    if !competitors.contains(&awardee) {
        competitors.push(awardee);
    }

    let rank = |m: Measure| {
        rank_by_measure(&view, &competitors, m, tie)
            .list
            .rank_of(&a.paper_id)
            .expect("awardee is cited, so it is ranked")
    };
    Ok(TotCase {
        paper_id: a.paper_id.clone(),
        venue: a.venue.clone(),
        year: a.year,
        venue_papers,
        cohort_size: competitors.len(),
        rank_cite: rank(Measure::Citations),
        rank_nid: rank(Measure::Nid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mrr_arithmetic() {
        assert_eq!(mrr(&[1, 1, 1]), 1.0);
        assert!((mrr(&[1, 2, 4]) - (1.0 + 0.5 + 0.25) / 3.0).abs() < 1e-15);
        assert_eq!(mrr(&[1, 1, 2, 2]), 0.75);
        assert_eq!(mrr(&[]), 0.0);
    }

    #[test]
    fn awardee_csv() {
        let text = "paper_id,venue,year\np1, SIGIR-1998 ,1998\np2,AAAI-2001,2001\n";
        let got = read_awardees(text.as_bytes()).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].venue, "SIGIR-1998");
        assert!(read_awardees("p1,V,notayear\n".as_bytes()).is_err());
        assert!(read_awardees("p1,V\n".as_bytes()).is_err());
    }
}
