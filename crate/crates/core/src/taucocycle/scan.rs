use rayon::prelude::*;
use serde::Serialize;

use super::{check_polynomiality, TauError};
use crate::birep::{BirationalRep, Word};

/// All reflection words of length `0..=max_len` with no letter repeated
/// consecutively, in length-then-lexicographic order. Words with an
/// adjacent repeat reduce to shorter words, so nothing is lost.
pub fn words_without_repeats(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::<usize>::new()];
    let mut frontier = vec![Vec::<usize>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..n {
                if w.last() != Some(&i) {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.iter().map(|w| Word::from_indices(w)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub word: String,
    pub k: usize,
    pub nterms: usize,
    pub max_degree: u32,
    pub is_polynomial: bool,
    pub integer_coefficients: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    /// Rows where the value is not an integer polynomial.
    pub fn failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| !(r.is_polynomial && r.integer_coefficients))
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<24} {:>3} {:>7} {:>6} {:>10}\n",
            "word", "k", "terms", "degree", "polynomial"
        );
        for r in &self.rows {
            let verdict = match (r.is_polynomial, r.integer_coefficients) {
                (true, true) => "yes",
                (true, false) => "rational",
                _ => "NO",
            };
            out.push_str(&format!(
                "{:<24} {:>3} {:>7} {:>6} {:>10}\n",
                r.word, r.k, r.nterms, r.max_degree, verdict
            ));
        }
        out
    }
}

/// Checks `phi_w(Lambda_k)` for every word without adjacent repeats up to
/// `max_len` and every `k`, in parallel.
pub fn scan_conjecture(rep: &BirationalRep, max_len: usize) -> Result<ScanReport, TauError> {
    let n = rep.size();
    let jobs: Vec<(Word, usize)> = words_without_repeats(n, max_len)
        .into_iter()
        .flat_map(|w| (0..n).map(move |k| (w.clone(), k)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|(w, k)| {
            let p = check_polynomiality(rep, w, *k)?;
            Ok(ScanRow {
                word: w.to_string(),
                k: *k,
                nterms: p.nterms,
                max_degree: p.total_degree,
                is_polynomial: p.is_polynomial,
                integer_coefficients: p.integer_coefficients,
            })
        })
        .collect::<Result<Vec<_>, TauError>>()?;
    Ok(ScanReport { rows })
}
