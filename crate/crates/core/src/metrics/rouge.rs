//! ROUGE-L: longest-common-subsequence F-measure against the best reference.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Sentence;
use crate::{CoreError, Result};

/// Recall weight in the ROUGE-L F-measure. The captioning evaluation
/// convention weighs recall 1.2x against precision.
pub const ROUGE_L_BETA: f64 = 1.2;

/// Length of the longest common subsequence of two token sequences.
///
/// Two-row dynamic program: O(|a|*|b|) time, O(min-row) memory.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    // Iterate over the longer sequence so the rows span the shorter one.
    let (outer, inner) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; inner.len() + 1];
    let mut cur = vec![0usize; inner.len() + 1];
    for x in outer {
        for (j, y) in inner.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[inner.len()]
}

/// Sentence-level ROUGE-L on a 0-100 scale: the maximum over references of
/// the LCS F-measure `(1+β²)·R·P / (R + β²·P)`.
pub fn rouge_l(hyp: &Sentence, refs: &[Sentence], beta: f64) -> Result<f64> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(CoreError::InvalidConfig("rouge beta must be positive"));
    }
    if refs.is_empty() {
        return Err(CoreError::MissingReferences);
    }
    let b2 = beta * beta;
    let mut best = 0.0f64;
    for r in refs {
        let lcs = lcs_length(hyp.tokens(), r.tokens()) as f64;
        let prec = lcs / hyp.len() as f64;
        let rec = lcs / r.len() as f64;
        let f = if lcs == 0.0 {
            0.0
        } else {
            (1.0 + b2) * rec * prec / (rec + b2 * prec)
        };
        best = best.max(f);
    }
    Ok(100.0 * best)
}

/// Corpus ROUGE-L: arithmetic mean of sentence scores, in instance order.
pub fn rouge_l_corpus(hyps: &[Sentence], refs: &[Vec<Sentence>], beta: f64) -> Result<f64> {
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
        total += rouge_l(hyp, rs, beta)?;
    }
    Ok(total / hyps.len() as f64)
}
