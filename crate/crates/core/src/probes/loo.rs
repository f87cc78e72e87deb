//! Leave-one-out reference scoring: each reference corpus in turn plays
//! the candidate (or a fixed system output does) against the held-out
//! C−1 corpora, and the per-iteration reports are averaged.

use alloc::vec::Vec;

use crate::corpus::{ReferenceBundle, Sentence};
use crate::metrics::{score_all, EmbeddedSentence, EmbeddingInputs, MetricReport, ScoreConfig};
use crate::{CoreError, Result};

/// Outcome of a leave-one-out run over C reference corpora.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LooResult {
    /// One report per held-out index, in corpus order.
    pub per_iteration: Vec<MetricReport>,
    /// Field-wise arithmetic mean of the iterations.
    pub mean: MetricReport,
    /// Field-wise population standard deviation (divide by C).
    pub sd: MetricReport,
}

/// Token embeddings mirroring a [`ReferenceBundle`], plus the system
/// corpus when scoring system-vs-reference.
#[derive(Debug, Clone)]
pub struct LooEmbeddings {
    /// One embedded corpus per reference corpus, instance-aligned.
    pub corpora: Vec<Vec<EmbeddedSentence>>,
    /// Embedded system output; required when `sys` sentences are given.
    pub sys: Option<Vec<EmbeddedSentence>>,
}

/// Runs the leave-one-out protocol. With `sys = None` iteration i scores
/// corpus R_i against the others (reference-vs-reference); with a system
/// corpus, that corpus is the candidate in every iteration but still sees
/// only the C−1 held-out reference sets (system-vs-reference).
pub fn leave_one_out(
    bundle: &ReferenceBundle,
    sys: Option<&[Sentence]>,
    cfg: &ScoreConfig,
    embeddings: Option<&LooEmbeddings>,
) -> Result<LooResult> {
    let c = bundle.num_corpora();
    let n = bundle.num_instances();
    if c < 2 {
        return Err(CoreError::TooFewCorpora { got: c });
    }
    if let Some(sys) = sys {
        if sys.len() != n {
            return Err(CoreError::LengthMismatch {
                left: n,
                right: sys.len(),
            });
        }
    }
    if let Some(e) = embeddings {
        if e.corpora.len() != c {
            return Err(CoreError::LengthMismatch {
                left: c,
                right: e.corpora.len(),
            });
        }
        for corpus in &e.corpora {
            if corpus.len() != n {
                return Err(CoreError::LengthMismatch {
                    left: n,
                    right: corpus.len(),
                });
            }
        }
        match (&e.sys, sys) {
            (None, Some(_)) => {
                return Err(CoreError::InvalidConfig(
                    "system embeddings required when scoring a system corpus",
                ))
            }
            (Some(se), _) if se.len() != n => {
                return Err(CoreError::LengthMismatch {
                    left: n,
                    right: se.len(),
                });
            }
            _ => {}
        }
    }

    let mut per_iteration = Vec::with_capacity(c);
    for held_out in 0..c {
        let hyps: &[Sentence] = match sys {
            Some(sys) => sys,
            None => bundle.corpus(held_out),
        };
        let refs = bundle.heldout_refs(held_out);
        let embed_inputs = embeddings.map(|e| {
            let hyp_embeds = match (sys, &e.sys) {
                (Some(_), Some(se)) => se.clone(),
                _ => e.corpora[held_out].clone(),
            };
            let ref_embeds = (0..n)
                .map(|inst| {
                    e.corpora
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != held_out)
                        .map(|(_, corpus)| corpus[inst].clone())
                        .collect()
                })
                .collect();
            EmbeddingInputs {
                hyps: hyp_embeds,
                refs: ref_embeds,
            }
        });
        per_iteration.push(score_all(hyps, &refs, cfg, embed_inputs.as_ref())?);
    }
    let mean = MetricReport::mean(&per_iteration);
    let sd = MetricReport::population_sd(&per_iteration);
    Ok(LooResult {
        per_iteration,
        mean,
        sd,
    })
}
