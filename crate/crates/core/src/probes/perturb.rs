//! Vocabulary perturbations: controlled token substitutions applied to a
//! hypothesis corpus, with before/after scoring against held-out
//! references. Sentence count and sentence lengths are always preserved.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Sentence, Token, Vocabulary};
use crate::metrics::{score_all, MetricReport, ScoreConfig};
use crate::{CoreError, Result};

/// What to substitute and with what.
#[derive(Debug, Clone, PartialEq)]
pub enum PerturbSpec {
    /// Every occurrence of each target token becomes the replacement.
    Targeted {
        targets: Vec<Token>,
        replacement: Token,
    },
    /// Every token whose corpus count falls below `threshold` becomes the
    /// replacement (out-of-vocabulary mapping).
    Threshold {
        threshold: u64,
        replacement: Token,
    },
    /// Token positions outside the stoplist are drawn uniformly at random
    /// (seeded, without replacement) until the substituted fraction of all
    /// tokens reaches `target_fraction`.
    RandomContent {
        target_fraction: f64,
        seed: u64,
        stoplist: BTreeSet<Token>,
        replacement: Token,
    },
    /// Systematic lexical swap, e.g. every "woman" becomes "man".
    Swap { from: Token, to: Token },
}

impl PerturbSpec {
    /// Targeted substitution with the conventional UNK replacement.
    pub fn targeted(targets: Vec<Token>) -> Self {
        PerturbSpec::Targeted {
            targets,
            replacement: Token::unk(),
        }
    }

    /// Threshold mode with the conventional UNK replacement.
    pub fn threshold(threshold: u64) -> Self {
        PerturbSpec::Threshold {
            threshold,
            replacement: Token::unk(),
        }
    }

    /// Random content-word substitution with the conventional UNK
    /// replacement.
    pub fn random_content(target_fraction: f64, seed: u64, stoplist: BTreeSet<Token>) -> Self {
        PerturbSpec::RandomContent {
            target_fraction,
            seed,
            stoplist,
            replacement: Token::unk(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PerturbSpec::Targeted { targets, .. } => {
                if targets.is_empty() {
                    return Err(CoreError::InvalidConfig("targeted mode needs targets"));
                }
            }
            PerturbSpec::Threshold { threshold, .. } => {
                if *threshold == 0 {
                    return Err(CoreError::InvalidConfig("threshold must be positive"));
                }
            }
            PerturbSpec::RandomContent {
                target_fraction, ..
            } => {
                if !(*target_fraction > 0.0 && *target_fraction <= 1.0) {
                    return Err(CoreError::InvalidConfig(
                        "target_fraction must lie in (0, 1]",
                    ));
                }
            }
            PerturbSpec::Swap { .. } => {}
        }
        Ok(())
    }
}

/// A perturbed corpus plus substitution accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedCorpus {
    pub sentences: Vec<Sentence>,
    pub substituted_tokens: usize,
    /// substituted_tokens / total tokens.
    pub substitution_fraction: f64,
}

/// Perturbation results with before/after metric reports.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PerturbOutcome {
    pub perturbed: Vec<Sentence>,
    pub substituted_tokens: usize,
    pub substitution_fraction: f64,
    pub report_before: MetricReport,
    pub report_after: MetricReport,
    /// after − before, field-wise.
    pub deltas: MetricReport,
}

/// Applies `spec` to the corpus. `vocab` supplies the counts consulted by
/// threshold mode; other modes ignore it.
pub fn perturb(
    corpus: &[Sentence],
    spec: &PerturbSpec,
    vocab: &Vocabulary,
) -> Result<PerturbedCorpus> {
    spec.validate()?;
    if corpus.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    let total_tokens: usize = corpus.iter().map(Sentence::len).sum();
    let mut sentences: Vec<Vec<Token>> = corpus
        .iter()
        .map(|s| s.tokens().to_vec())
        .collect();
    let mut substituted = 0usize;

    match spec {
        PerturbSpec::Targeted {
            targets,
            replacement,
        } => {
            let target_set: BTreeSet<&Token> = targets.iter().collect();
            for sent in &mut sentences {
                for tok in sent.iter_mut() {
                    if target_set.contains(tok) && tok != replacement {
                        *tok = replacement.clone();
                        substituted += 1;
                    }
                }
            }
        }
        PerturbSpec::Swap { from, to } => {
            for sent in &mut sentences {
                for tok in sent.iter_mut() {
                    if tok == from && tok != to {
                        *tok = to.clone();
                        substituted += 1;
                    }
                }
            }
        }
        PerturbSpec::Threshold {
            threshold,
            replacement,
        } => {
            for sent in &mut sentences {
                for tok in sent.iter_mut() {
                    if vocab.count(tok) < *threshold && tok != replacement {
                        *tok = replacement.clone();
                        substituted += 1;
                    }
                }
            }
        }
        PerturbSpec::RandomContent {
            target_fraction,
            seed,
            stoplist,
            replacement,
        } => {
            // Positions eligible for substitution, in deterministic
            // (sentence, offset) order.
            let mut eligible: Vec<(usize, usize)> = Vec::new();
            for (i, sent) in sentences.iter().enumerate() {
                for (j, tok) in sent.iter().enumerate() {
                    if !stoplist.contains(tok) && tok != replacement {
                        eligible.push((i, j));
                    }
                }
            }
            // Smallest k with k/total ≥ target_fraction.
            let required = ceil_mul(*target_fraction, total_tokens);
            if required > eligible.len() {
                return Err(CoreError::FractionUnreachable {
                    required,
                    available: eligible.len(),
                    total: total_tokens,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            // Partial Fisher-Yates: the first `required` slots end up a
            // uniform draw without replacement.
            for i in 0..required {
                let j = rng.gen_range(i..eligible.len());
                eligible.swap(i, j);
            }
            for &(si, tj) in &eligible[..required] {
                sentences[si][tj] = replacement.clone();
            }
            substituted = required;
        }
    }

    let sentences: Vec<Sentence> = sentences
        .into_iter()
        .map(|tokens| Sentence::new(tokens).expect("lengths preserved"))
        .collect();
    Ok(PerturbedCorpus {
        substitution_fraction: substituted as f64 / total_tokens as f64,
        substituted_tokens: substituted,
        sentences,
    })
}

/// Smallest integer k with k ≥ fraction·total, computed without fp
/// round-trip surprises at the boundaries.
fn ceil_mul(fraction: f64, total: usize) -> usize {
    let exact = fraction * total as f64;
    let k = exact as usize;
    if (k as f64) >= exact {
        k
    } else {
        k + 1
    }
}

/// Perturbs the hypothesis corpus `r1` and scores it against the held-out
/// references before and after.
pub fn perturb_and_score(
    r1: &[Sentence],
    heldout_refs: &[Vec<Sentence>],
    spec: &PerturbSpec,
    vocab: &Vocabulary,
    cfg: &ScoreConfig,
) -> Result<PerturbOutcome> {
    if r1.len() != heldout_refs.len() {
        return Err(CoreError::LengthMismatch {
            left: r1.len(),
            right: heldout_refs.len(),
        });
    }
    let perturbed = perturb(r1, spec, vocab)?;
    let report_before = score_all(r1, heldout_refs, cfg, None)?;
    let report_after = score_all(&perturbed.sentences, heldout_refs, cfg, None)?;
    let deltas = report_after.difference(&report_before);
    Ok(PerturbOutcome {
        perturbed: perturbed.sentences,
        substituted_tokens: perturbed.substituted_tokens,
        substitution_fraction: perturbed.substitution_fraction,
        report_before,
        report_after,
        deltas,
    })
}
