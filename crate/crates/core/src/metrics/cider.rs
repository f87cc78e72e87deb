//! CIDEr-D: consensus-based n-gram similarity with idf weighting, count
//! clipping, and a Gaussian length penalty. Scores live on a 0-10 scale.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{ngram_profile, Sentence, Token};
use crate::math;
use crate::{CoreError, Result};

/// Parameters of the CIDEr-D scorer.
#[derive(Debug, Clone, PartialEq)]
pub struct CiderConfig {
    /// Highest n-gram order aggregated into the score (1..=4).
    pub max_order: u8,
    /// Standard deviation of the Gaussian length penalty, in tokens.
    pub sigma: f64,
}

impl Default for CiderConfig {
    fn default() -> Self {
        CiderConfig {
            max_order: 4,
            sigma: 6.0,
        }
    }
}

impl CiderConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.max_order == 0 || self.max_order > 4 {
            return Err(CoreError::InvalidConfig("max_order must be in 1..=4"));
        }
        if self.sigma.is_nan() || self.sigma <= 0.0 {
            return Err(CoreError::InvalidConfig("sigma must be positive"));
        }
        Ok(())
    }
}

/// Document frequencies of reference n-grams, where one instance's
/// reference set counts as one document.
#[derive(Debug, Clone)]
pub struct IdfTable {
    num_docs: usize,
    max_order: u8,
    doc_freq: BTreeMap<Vec<Token>, u64>,
}

impl IdfTable {
    /// Number of documents (instances) the table was built from.
    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    /// Highest n-gram order recorded in the table.
    pub fn max_order(&self) -> u8 {
        self.max_order
    }

    /// Number of documents whose reference set contains `gram`.
    pub fn doc_freq(&self, gram: &[Token]) -> u64 {
        self.doc_freq.get(gram).copied().unwrap_or(0)
    }

    /// `ln(num_docs) - ln(max(1, doc_freq))`. Unseen grams get the full
    /// `ln(num_docs)` weight; grams present everywhere get zero.
    pub fn idf(&self, gram: &[Token]) -> f64 {
        math::ln(self.num_docs as f64) - math::ln(self.doc_freq(gram).max(1) as f64)
    }
}

/// Builds document frequencies over all orders `1..=max_order` from the
/// reference sets of a corpus. A gram counts once per instance no matter
/// how many of that instance's references contain it.
pub fn build_idf(refs: &[Vec<Sentence>], max_order: u8) -> Result<IdfTable> {
    if max_order == 0 || max_order > 4 {
        return Err(CoreError::InvalidConfig("max_order must be in 1..=4"));
    }
    if refs.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    let mut doc_freq: BTreeMap<Vec<Token>, u64> = BTreeMap::new();
    for (i, instance_refs) in refs.iter().enumerate() {
        if instance_refs.is_empty() {
            return Err(CoreError::NoReferences { instance: i });
        }
        let mut seen: BTreeSet<Vec<Token>> = BTreeSet::new();
        for r in instance_refs {
            for n in 1..=max_order {
                for gram in ngram_profile(r, n).counts().keys() {
                    seen.insert(gram.clone());
                }
            }
        }
        for gram in seen {
            *doc_freq.entry(gram).or_insert(0) += 1;
        }
    }
    Ok(IdfTable {
        num_docs: refs.len(),
        max_order,
        doc_freq,
    })
}

/// Per-order tf-idf vector of a sentence plus its norms and token length.
struct SentenceVec {
    by_order: Vec<BTreeMap<Vec<Token>, f64>>,
    norms: Vec<f64>,
    tokens: usize,
}

fn sentence_vec(s: &Sentence, idf: &IdfTable, max_order: u8) -> SentenceVec {
    let mut by_order = Vec::with_capacity(max_order as usize);
    let mut norms = Vec::with_capacity(max_order as usize);
    for n in 1..=max_order {
        let profile = ngram_profile(s, n);
        let mut vec_n = BTreeMap::new();
        let mut sq = 0.0f64;
        for (gram, &count) in profile.counts() {
            let w = count as f64 * idf.idf(gram);
            sq += w * w;
            vec_n.insert(gram.clone(), w);
        }
        norms.push(math::sqrt(sq));
        by_order.push(vec_n);
    }
    SentenceVec {
        by_order,
        norms,
        tokens: s.len(),
    }
}

/// Clipped cosine per order times the Gaussian length penalty.
fn similarity(hyp: &SentenceVec, r: &SentenceVec, sigma: f64, max_order: u8) -> Vec<f64> {
    let delta = hyp.tokens as f64 - r.tokens as f64;
    let penalty = math::exp(-(delta * delta) / (2.0 * sigma * sigma));
    let mut vals = Vec::with_capacity(max_order as usize);
    for n in 0..max_order as usize {
        let mut dot = 0.0f64;
        for (gram, &wh) in &hyp.by_order[n] {
            let wr = r.by_order[n].get(gram).copied().unwrap_or(0.0);
            dot += wh.min(wr) * wr;
        }
        let denom = hyp.norms[n] * r.norms[n];
        let cos = if denom != 0.0 { dot / denom } else { dot };
        vals.push(cos * penalty);
    }
    vals
}

/// Per-instance CIDEr-D scores, in instance order.
pub fn cider_d_per_instance(
    hyps: &[Sentence],
    refs: &[Vec<Sentence>],
    cfg: &CiderConfig,
    idf: &IdfTable,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    if cfg.max_order > idf.max_order {
        return Err(CoreError::InvalidConfig(
            "idf table order lower than requested max_order",
        ));
    }
    if hyps.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    if hyps.len() != refs.len() {
        return Err(CoreError::LengthMismatch {
            left: hyps.len(),
            right: refs.len(),
        });
    }
    let mut scores = Vec::with_capacity(hyps.len());
    for (i, (hyp, instance_refs)) in hyps.iter().zip(refs).enumerate() {
        if instance_refs.is_empty() {
            return Err(CoreError::NoReferences { instance: i });
        }
        let hv = sentence_vec(hyp, idf, cfg.max_order);
        let mut order_sums = vec![0.0f64; cfg.max_order as usize];
        for r in instance_refs {
            let rv = sentence_vec(r, idf, cfg.max_order);
            for (sum, val) in order_sums
                .iter_mut()
                .zip(similarity(&hv, &rv, cfg.sigma, cfg.max_order))
            {
                *sum += val;
            }
        }
        let m = instance_refs.len() as f64;
        let mean_over_orders =
            order_sums.iter().sum::<f64>() / cfg.max_order as f64;
        scores.push(10.0 * mean_over_orders / m);
    }
    Ok(scores)
}

/// Corpus CIDEr-D: arithmetic mean of per-instance scores.
pub fn cider_d(
    hyps: &[Sentence],
    refs: &[Vec<Sentence>],
    cfg: &CiderConfig,
    idf: &IdfTable,
) -> Result<f64> {
    let scores = cider_d_per_instance(hyps, refs, cfg, idf)?;
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}
