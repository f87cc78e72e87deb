//! Corpus-level BLEU: modified (clipped) n-gram precision with a brevity
//! penalty.
//!
//! Precisions are pooled over the whole corpus (`p_n = Σ clipped / Σ total`),
//! the brevity penalty compares total hypothesis length against the summed
//! per-instance effective reference length (closest, ties to shorter), and
//! BLEU-k is `100 · BP · exp(Σ_{n≤k} ln p_n / k)`.

use alloc::vec::Vec;

use crate::corpus::{closest_ref_length, ngram_profile, NGramProfile, Sentence};
use crate::math;
use crate::{CoreError, Result};

/// BLEU configuration. `smoothing_epsilon = 0` means unsmoothed: a zero
/// precision at order n zeroes BLEU-k for every k ≥ n. A positive epsilon
/// floors zero precisions at `eps / total` (or `eps` when the corpus has no
/// n-gram slots at that order), keeping short candidates comparable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BleuConfig {
    pub max_order: u8,
    pub smoothing_epsilon: f64,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig {
            max_order: 4,
            smoothing_epsilon: 0.0,
        }
    }
}

impl BleuConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.max_order) {
            return Err(CoreError::InvalidConfig("bleu max_order must be in 1..=4"));
        }
        if self.smoothing_epsilon.is_nan() || self.smoothing_epsilon < 0.0 {
            return Err(CoreError::InvalidConfig(
                "bleu smoothing_epsilon must be non-negative",
            ));
        }
        Ok(())
    }
}

/// Corpus BLEU scores for every order up to `max_order`, with the
/// intermediate quantities useful for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct BleuScores {
    /// `by_order[k-1]` is BLEU-k on the 0..=100 scale.
    pub by_order: Vec<f64>,
    /// Pooled modified precisions `p_1..p_max`, in [0, 1].
    pub precisions: Vec<f64>,
    pub brevity_penalty: f64,
    pub hyp_tokens: u64,
    pub effective_ref_tokens: u64,
}

impl BleuScores {
    /// BLEU-k; panics if `k` exceeds the configured max order.
    pub fn bleu(&self, k: u8) -> f64 {
        self.by_order[k as usize - 1]
    }
}

/// Credits each hypothesis n-gram up to its maximum count in any single
/// reference. Returns `(clipped, total)` with `clipped ≤ total`.
///
/// All profiles must share the same order.
pub fn clipped_counts(hyp_profile: &NGramProfile, ref_profiles: &[NGramProfile]) -> (u64, u64) {
    for r in ref_profiles {
        assert_eq!(
            r.order(),
            hyp_profile.order(),
            "clipped_counts requires profiles of equal order"
        );
    }
    let mut clipped = 0u64;
    for (gram, &count) in hyp_profile.counts() {
        let best_ref = ref_profiles
            .iter()
            .map(|r| r.get(gram))
            .max()
            .unwrap_or(0);
        clipped += count.min(best_ref) as u64;
    }
    (clipped, hyp_profile.total() as u64)
}

/// Corpus-level BLEU-1..BLEU-max over aligned hypotheses and references.
pub fn bleu_corpus(
    hyps: &[Sentence],
    refs: &[Vec<Sentence>],
    cfg: &BleuConfig,
) -> Result<BleuScores> {
    cfg.validate()?;
    if hyps.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    if hyps.len() != refs.len() {
        return Err(CoreError::LengthMismatch {
            left: hyps.len(),
            right: refs.len(),
        });
    }
    let mut clipped = [0u64; 4];
    let mut totals = [0u64; 4];
    let mut hyp_tokens = 0u64;
    let mut eff_ref_tokens = 0u64;
    for (i, (hyp, inst_refs)) in hyps.iter().zip(refs).enumerate() {
        if inst_refs.is_empty() {
            return Err(CoreError::NoReferences { instance: i });
        }
        for n in 1..=cfg.max_order {
            let hyp_profile = ngram_profile(hyp, n);
            let ref_profiles: Vec<NGramProfile> =
                inst_refs.iter().map(|r| ngram_profile(r, n)).collect();
            let (c, t) = clipped_counts(&hyp_profile, &ref_profiles);
            clipped[n as usize - 1] += c;
            totals[n as usize - 1] += t;
        }
        hyp_tokens += hyp.len() as u64;
        let ref_lens: Vec<usize> = inst_refs.iter().map(Sentence::len).collect();
        eff_ref_tokens += closest_ref_length(hyp.len(), &ref_lens) as u64;
    }
    Ok(combine_bleu(
        &clipped,
        &totals,
        hyp_tokens,
        eff_ref_tokens,
        cfg,
    ))
}

/// Final combination step shared by [`bleu_corpus`] and the fixed-hypothesis
/// search paths, so equal count aggregates produce bit-identical scores.
pub(crate) fn combine_bleu(
    clipped: &[u64; 4],
    totals: &[u64; 4],
    hyp_tokens: u64,
    eff_ref_tokens: u64,
    cfg: &BleuConfig,
) -> BleuScores {
    let eps = cfg.smoothing_epsilon;
    let brevity_penalty = if hyp_tokens >= eff_ref_tokens {
        1.0
    } else {
        math::exp(1.0 - eff_ref_tokens as f64 / hyp_tokens as f64)
    };
    let max = cfg.max_order as usize;
    let mut precisions = Vec::with_capacity(max);
    for n in 0..max {
        let p = if totals[n] == 0 {
            if eps > 0.0 {
                eps
            } else {
                0.0
            }
        } else if clipped[n] == 0 {
            if eps > 0.0 {
                eps / totals[n] as f64
            } else {
                0.0
            }
        } else {
            clipped[n] as f64 / totals[n] as f64
        };
        precisions.push(p);
    }
    let mut by_order = Vec::with_capacity(max);
    let mut log_sum = 0.0;
    let mut saw_zero = false;
    for (k, &p) in precisions.iter().enumerate() {
        if p == 0.0 {
            saw_zero = true;
        } else {
            log_sum += math::ln(p);
        }
        if saw_zero {
            by_order.push(0.0);
        } else {
            by_order.push(100.0 * brevity_penalty * math::exp(log_sum / (k + 1) as f64));
        }
    }
    BleuScores {
        by_order,
        precisions,
        brevity_penalty,
        hyp_tokens,
        effective_ref_tokens: eff_ref_tokens,
    }
}
