//! One-call corpus scoring across every metric, producing a single report
//! row plus mean/spread helpers used by the leave-one-out probe.

use alloc::vec::Vec;

use crate::corpus::Sentence;
use crate::math;
use crate::metrics::bleu::{bleu_corpus, BleuConfig};
use crate::metrics::cider::{build_idf, cider_d, CiderConfig};
use crate::metrics::embed::{greedy_embed_corpus, EmbeddedSentence};
use crate::metrics::meteor::{meteor_corpus, MeteorConfig};
use crate::metrics::rouge::{rouge_l_corpus, ROUGE_L_BETA};
use crate::{CoreError, Result};

/// Every knob consumed by [`score_all`].
#[derive(Debug, Clone)]
pub struct ScoreConfig {
    pub bleu: BleuConfig,
    pub meteor: MeteorConfig,
    pub cider: CiderConfig,
    pub rouge_beta: f64,
    /// Baseline for embedding-score rescaling, in `[0, 1)`.
    pub embed_baseline: f64,
    /// Weight embedding matches by the per-token idf carried in the
    /// embedding input instead of uniformly.
    pub embed_use_idf: bool,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig {
            bleu: BleuConfig::default(),
            meteor: MeteorConfig::default(),
            cider: CiderConfig::default(),
            rouge_beta: ROUGE_L_BETA,
            embed_baseline: 0.0,
            embed_use_idf: false,
        }
    }
}

impl ScoreConfig {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Pre-embedded hypotheses and references aligned with the token corpora.
#[derive(Debug, Clone)]
pub struct EmbeddingInputs {
    pub hyps: Vec<EmbeddedSentence>,
    pub refs: Vec<Vec<EmbeddedSentence>>,
}

/// One row of scores: the full metric column set for a corpus.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricReport {
    pub bleu1: f64,
    pub bleu2: f64,
    pub bleu3: f64,
    pub bleu4: f64,
    pub meteor: f64,
    pub rouge_l: f64,
    /// 0-10 scale.
    pub cider_d: f64,
    /// Absent when no embeddings were supplied; negative values are
    /// legitimate after baseline rescaling.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    #[cfg_attr(feature = "serde", serde(default))]
    pub bert_f: Option<f64>,
}

/// Field labels in report order; `bert_f` last.
pub const METRIC_FIELDS: [&str; 8] = [
    "bleu1", "bleu2", "bleu3", "bleu4", "meteor", "rouge_l", "cider_d", "bert_f",
];

impl MetricReport {
    /// Values in [`METRIC_FIELDS`] order.
    pub fn values(&self) -> [Option<f64>; 8] {
        [
            Some(self.bleu1),
            Some(self.bleu2),
            Some(self.bleu3),
            Some(self.bleu4),
            Some(self.meteor),
            Some(self.rouge_l),
            Some(self.cider_d),
            self.bert_f,
        ]
    }

    fn from_values(v: [Option<f64>; 8]) -> MetricReport {
        MetricReport {
            bleu1: v[0].unwrap_or(0.0),
            bleu2: v[1].unwrap_or(0.0),
            bleu3: v[2].unwrap_or(0.0),
            bleu4: v[3].unwrap_or(0.0),
            meteor: v[4].unwrap_or(0.0),
            rouge_l: v[5].unwrap_or(0.0),
            cider_d: v[6].unwrap_or(0.0),
            bert_f: v[7],
        }
    }

    fn aggregate(reports: &[MetricReport], f: impl Fn(&[f64]) -> f64) -> MetricReport {
        assert!(!reports.is_empty(), "aggregate of zero reports");
        let mut out = [None; 8];
        for (idx, slot) in out.iter_mut().enumerate() {
            let column: Option<Vec<f64>> = reports.iter().map(|r| r.values()[idx]).collect();
            // A column aggregates only when every report carries it.
            *slot = column.map(|c| f(&c));
        }
        MetricReport::from_values(out)
    }

    /// Field-wise arithmetic mean. Optional fields survive only when
    /// present in every report.
    pub fn mean(reports: &[MetricReport]) -> MetricReport {
        MetricReport::aggregate(reports, |c| {
            // A constant column means exactly that constant; bypassing the
            // summation keeps ceilings exact when every iteration produces
            // a bit-identical report.
            if c.iter().all(|x| *x == c[0]) {
                c[0]
            } else {
                c.iter().sum::<f64>() / c.len() as f64
            }
        })
    }

    /// Field-wise difference `self − other`; optional fields survive only
    /// when present on both sides.
    pub fn difference(&self, other: &MetricReport) -> MetricReport {
        let mut out = [None; 8];
        for (idx, slot) in out.iter_mut().enumerate() {
            *slot = match (self.values()[idx], other.values()[idx]) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            };
        }
        MetricReport::from_values(out)
    }

    /// Field-wise population standard deviation (divide by the count, not
    /// count − 1).
    pub fn population_sd(reports: &[MetricReport]) -> MetricReport {
        MetricReport::aggregate(reports, |c| {
            // The spread of a constant column is exactly zero; the naive
            // two-pass formula would leave ulp-sized noise behind.
            if c.iter().all(|x| *x == c[0]) {
                return 0.0;
            }
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            let var = c.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / c.len() as f64;
            math::sqrt(var)
        })
    }
}

/// Scores a corpus with every metric. The idf table for CIDEr-D is built
/// from `refs` itself; `bert_f` is populated only when embeddings are
/// given.
pub fn score_all(
    hyps: &[Sentence],
    refs: &[Vec<Sentence>],
    cfg: &ScoreConfig,
    embeddings: Option<&EmbeddingInputs>,
) -> Result<MetricReport> {
    if cfg.bleu.max_order != 4 {
        return Err(CoreError::InvalidConfig(
            "the full report requires bleu max_order = 4",
        ));
    }
    let bleu = bleu_corpus(hyps, refs, &cfg.bleu)?;
    let meteor = meteor_corpus(hyps, refs, &cfg.meteor)?;
    let rouge = rouge_l_corpus(hyps, refs, cfg.rouge_beta)?;
    let idf = build_idf(refs, cfg.cider.max_order)?;
    let cider = cider_d(hyps, refs, &cfg.cider, &idf)?;
    let bert_f = match embeddings {
        None => None,
        Some(e) => {
            if e.hyps.len() != hyps.len() {
                return Err(CoreError::LengthMismatch {
                    left: hyps.len(),
                    right: e.hyps.len(),
                });
            }
            if e.refs.len() != refs.len() {
                return Err(CoreError::LengthMismatch {
                    left: refs.len(),
                    right: e.refs.len(),
                });
            }
            Some(greedy_embed_corpus(
                &e.hyps,
                &e.refs,
                cfg.embed_baseline,
                cfg.embed_use_idf,
            )?)
        }
    };
    Ok(MetricReport {
        bleu1: bleu.bleu(1),
        bleu2: bleu.bleu(2),
        bleu3: bleu.bleu(3),
        bleu4: bleu.bleu(4),
        meteor,
        rouge_l: rouge,
        cider_d: cider,
        bert_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize_tokens;
    use crate::corpus::Token;
    use approx::assert_abs_diff_eq;

    fn s(text: &str) -> Sentence {
        normalize_tokens(text, false).unwrap()
    }

    #[test]
    fn identity_corpus_hits_the_ngram_ceilings() {
        let hyps = vec![s("a b c d e"), s("v w x y z")];
        let refs = vec![vec![s("a b c d e")], vec![s("v w x y z")]];
        let report = score_all(&hyps, &refs, &ScoreConfig::new(), None).unwrap();
        assert_abs_diff_eq!(report.bleu4, 100.0, epsilon = 1e-9);
        assert_abs_diff_eq!(report.rouge_l, 100.0, epsilon = 1e-9);
        assert_abs_diff_eq!(report.cider_d, 10.0, epsilon = 1e-9);
        assert!(report.bert_f.is_none());
    }

    #[test]
    fn fields_match_individual_kernels() {
        let hyps = vec![s("the cat sat on the mat"), s("a dog runs fast today")];
        let refs = vec![
            vec![s("the cat is on the mat"), s("a cat sits on a mat")],
            vec![s("the dog runs quickly"), s("a fast dog is running")],
        ];
        let cfg = ScoreConfig::new();
        let report = score_all(&hyps, &refs, &cfg, None).unwrap();
        let bleu = bleu_corpus(&hyps, &refs, &cfg.bleu).unwrap();
        assert_eq!(report.bleu1, bleu.bleu(1));
        assert_eq!(report.bleu4, bleu.bleu(4));
        assert_eq!(
            report.meteor,
            meteor_corpus(&hyps, &refs, &cfg.meteor).unwrap()
        );
        assert_eq!(
            report.rouge_l,
            rouge_l_corpus(&hyps, &refs, cfg.rouge_beta).unwrap()
        );
        let idf = build_idf(&refs, 4).unwrap();
        assert_eq!(
            report.cider_d,
            cider_d(&hyps, &refs, &cfg.cider, &idf).unwrap()
        );
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(matches!(
            score_all(&[], &[], &ScoreConfig::new(), None),
            Err(CoreError::EmptyCorpus)
        ));
    }

    #[test]
    fn embeddings_populate_bert_f() {
        let hyps = vec![s("a b c d")];
        let refs = vec![vec![s("a b c d")]];
        let toks = |names: &[&str]| -> Vec<Token> {
            names.iter().map(|n| Token::new(*n).unwrap()).collect()
        };
        let emb = EmbeddedSentence::new(
            toks(&["a", "b", "c", "d"]),
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
                vec![0.5, 0.25],
            ],
            None,
        )
        .unwrap();
        let inputs = EmbeddingInputs {
            hyps: vec![emb.clone()],
            refs: vec![vec![emb]],
        };
        let report = score_all(&hyps, &refs, &ScoreConfig::new(), Some(&inputs)).unwrap();
        assert_abs_diff_eq!(report.bert_f.unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mean_and_sd_are_field_wise() {
        let a = MetricReport {
            bleu1: 10.0,
            bleu2: 20.0,
            bleu3: 30.0,
            bleu4: 40.0,
            meteor: 50.0,
            rouge_l: 60.0,
            cider_d: 1.0,
            bert_f: Some(0.5),
        };
        let b = MetricReport {
            bleu1: 30.0,
            bleu2: 40.0,
            bleu3: 50.0,
            bleu4: 60.0,
            meteor: 70.0,
            rouge_l: 80.0,
            cider_d: 3.0,
            bert_f: Some(0.7),
        };
        let mean = MetricReport::mean(&[a.clone(), b.clone()]);
        assert_abs_diff_eq!(mean.bleu1, 20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mean.cider_d, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mean.bert_f.unwrap(), 0.6, epsilon = 1e-12);
        let sd = MetricReport::population_sd(&[a.clone(), b.clone()]);
        assert_abs_diff_eq!(sd.bleu1, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sd.bert_f.unwrap(), 0.1, epsilon = 1e-12);

        // A missing optional field in any report drops it from aggregates.
        let c = MetricReport { bert_f: None, ..b };
        assert!(MetricReport::mean(&[a, c]).bert_f.is_none());
    }
}
