//! Greedy token-embedding F-score with baseline rescaling.
//!
//! Embeddings are consumed, never computed: callers supply one vector per
//! token (plus optional per-token idf weights) and this module only does
//! the greedy max-cosine matching.

use alloc::vec::Vec;

use crate::corpus::Token;
use crate::math;
use crate::{CoreError, Result};

/// A sentence resolved to token embeddings.
#[allow(clippy::len_without_is_empty)] // construction rejects empty sentences
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSentence {
    tokens: Vec<Token>,
    vectors: Vec<Vec<f64>>,
    idf: Option<Vec<f64>>,
}

impl EmbeddedSentence {
    /// One vector per token, all sharing one dimension; `idf`, when given,
    /// holds one non-negative weight per token.
    pub fn new(tokens: Vec<Token>, vectors: Vec<Vec<f64>>, idf: Option<Vec<f64>>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(CoreError::EmptySentence);
        }
        if vectors.len() != tokens.len() {
            return Err(CoreError::LengthMismatch {
                left: tokens.len(),
                right: vectors.len(),
            });
        }
        let dim = vectors[0].len();
        if dim == 0 {
            return Err(CoreError::InvalidConfig("embedding dimension must be positive"));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(CoreError::EmbeddingDim {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        if let Some(w) = &idf {
            if w.len() != tokens.len() {
                return Err(CoreError::LengthMismatch {
                    left: tokens.len(),
                    right: w.len(),
                });
            }
        }
        Ok(EmbeddedSentence {
            tokens,
            vectors,
            idf,
        })
    }

    /// Token count; constructively at least 1.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn idf(&self) -> Option<&[f64]> {
        self.idf.as_deref()
    }
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (math::sqrt(na) * math::sqrt(nb))
    }
}

/// Weighted mean over `from` tokens of the best cosine against `against`.
fn directed_score(from: &EmbeddedSentence, against: &EmbeddedSentence, use_idf: bool) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in from.vectors.iter().enumerate() {
        let best = against
            .vectors
            .iter()
            .map(|u| cosine(v, u))
            .fold(f64::NEG_INFINITY, f64::max);
        let w = if use_idf {
            from.idf.as_ref().expect("validated")[t]
        } else {
            1.0
        };
        num += w * best;
        den += w;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Greedy embedding F-score for one instance: per reference, precision and
/// recall of maximal per-token cosines, harmonic mean, then the affine
/// rescale `(F - baseline) / (1 - baseline)`; returns the max over
/// references. Can be negative after rescaling.
pub fn greedy_embed_fscore(
    hyp: &EmbeddedSentence,
    refs: &[EmbeddedSentence],
    baseline: f64,
    use_idf: bool,
) -> Result<f64> {
    if !(0.0..1.0).contains(&baseline) {
        return Err(CoreError::InvalidConfig("baseline must lie in [0, 1)"));
    }
    if refs.is_empty() {
        return Err(CoreError::MissingReferences);
    }
    for r in refs {
        if r.dim() != hyp.dim() {
            return Err(CoreError::EmbeddingDim {
                expected: hyp.dim(),
                got: r.dim(),
            });
        }
    }
    if use_idf && (hyp.idf.is_none() || refs.iter().any(|r| r.idf.is_none())) {
        return Err(CoreError::MissingIdf);
    }
    let mut best = f64::NEG_INFINITY;
    for r in refs {
        let p = directed_score(hyp, r, use_idf);
        let rec = directed_score(r, hyp, use_idf);
        let f = if p + rec == 0.0 {
            0.0
        } else {
            2.0 * p * rec / (p + rec)
        };
        let rescaled = (f - baseline) / (1.0 - baseline);
        best = best.max(rescaled);
    }
    Ok(best)
}

/// Corpus score: arithmetic mean of per-instance scores, in instance order.
pub fn greedy_embed_corpus(
    hyps: &[EmbeddedSentence],
    refs: &[Vec<EmbeddedSentence>],
    baseline: f64,
    use_idf: bool,
) -> Result<f64> {
    if hyps.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    if hyps.len() != refs.len() {
        return Err(CoreError::LengthMismatch {
            left: hyps.len(),
            right: refs.len(),
        });
    }
    let mut total = 0.0;
    for (hyp, rs) in hyps.iter().zip(refs) {
        total += greedy_embed_fscore(hyp, rs, baseline, use_idf)?;
    }
    Ok(total / hyps.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn toks(names: &[&str]) -> Vec<Token> {
        names.iter().map(|n| Token::new(*n).unwrap()).collect()
    }

    fn emb(names: &[&str], vectors: &[&[f64]]) -> EmbeddedSentence {
        EmbeddedSentence::new(
            toks(names),
            vectors.iter().map(|v| v.to_vec()).collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn identity_scores_one_for_any_baseline() {
        let s = emb(&["a", "b"], &[&[1.0, 0.0], &[0.5, 0.5]]);
        for baseline in [0.0, 0.3, 0.9] {
            let got = greedy_embed_fscore(&s, core::slice::from_ref(&s), baseline, false).unwrap();
            assert_abs_diff_eq!(got, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn orthogonal_with_half_baseline_hits_minus_one() {
        let hyp = emb(&["a"], &[&[1.0, 0.0]]);
        let r = emb(&["b"], &[&[0.0, 1.0]]);
        let got = greedy_embed_fscore(&hyp, &[r], 0.5, false).unwrap();
        assert_abs_diff_eq!(got, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn cosines_at_baseline_rescale_to_zero() {
        // cos(60°) = 0.5 between every hyp/ref token pair.
        let hyp = emb(&["a"], &[&[1.0, 0.0]]);
        let r = emb(&["b"], &[&[0.5, 3.0f64.sqrt() / 2.0]]);
        let got = greedy_embed_fscore(&hyp, &[r], 0.5, false).unwrap();
        assert_abs_diff_eq!(got, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn max_over_references() {
        let hyp = emb(&["a"], &[&[1.0, 0.0]]);
        let far = emb(&["b"], &[&[0.0, 1.0]]);
        let near = emb(&["c"], &[&[1.0, 0.0]]);
        let got = greedy_embed_fscore(&hyp, &[far.clone(), near], 0.0, false).unwrap();
        assert_abs_diff_eq!(got, 1.0, epsilon = 1e-12);
        let only_far = greedy_embed_fscore(&hyp, &[far], 0.0, false).unwrap();
        assert!(only_far < 1e-12);
    }

    #[test]
    fn idf_weights_shift_the_score() {
        // Hyp token "a" matches perfectly, "b" is orthogonal to every ref
        // token. Upweighting "a" must raise the score.
        let hyp_uniform = emb(&["a", "b"], &[&[1.0, 0.0], &[0.0, 1.0]]);
        let hyp_weighted = EmbeddedSentence::new(
            toks(&["a", "b"]),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            Some(vec![3.0, 1.0]),
        )
        .unwrap();
        let r = EmbeddedSentence::new(
            toks(&["a"]),
            vec![vec![1.0, 0.0]],
            Some(vec![1.0]),
        )
        .unwrap();
        let uniform = greedy_embed_fscore(&hyp_uniform, core::slice::from_ref(&r), 0.0, false).unwrap();
        let weighted = greedy_embed_fscore(&hyp_weighted, &[r], 0.0, true).unwrap();
        assert!(weighted > uniform);
    }

    #[test]
    fn missing_idf_is_an_error_when_requested() {
        let hyp = emb(&["a"], &[&[1.0]]);
        let r = emb(&["b"], &[&[1.0]]);
        assert!(matches!(
            greedy_embed_fscore(&hyp, &[r], 0.0, true),
            Err(CoreError::MissingIdf)
        ));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let hyp = emb(&["a"], &[&[1.0, 0.0]]);
        let r = emb(&["b"], &[&[1.0]]);
        assert!(matches!(
            greedy_embed_fscore(&hyp, &[r], 0.0, false),
            Err(CoreError::EmbeddingDim {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn zero_vectors_contribute_zero_cosine() {
        let hyp = emb(&["a"], &[&[0.0, 0.0]]);
        let r = emb(&["b"], &[&[1.0, 0.0]]);
        let got = greedy_embed_fscore(&hyp, &[r], 0.0, false).unwrap();
        assert_abs_diff_eq!(got, 0.0, epsilon = 1e-12);
    }
}
