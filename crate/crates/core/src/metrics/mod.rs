//! The five scoring kernels: corpus BLEU, METEOR, ROUGE-L, CIDEr-D, and
//! the greedy embedding F-score, plus the combined report.
//!
//! All kernels are pure functions over [`crate::corpus`] types. Corpus
//! aggregates accumulate in instance order so results are bit-identical
//! across runs and thread counts.

mod bleu;
mod cider;
mod embed;
mod meteor;
mod report;
mod rouge;
pub mod stem;

pub use bleu::{bleu_corpus, clipped_counts, BleuConfig, BleuScores};
pub use cider::{build_idf, cider_d, cider_d_per_instance, CiderConfig, IdfTable};
pub use embed::{greedy_embed_corpus, greedy_embed_fscore, EmbeddedSentence};
pub use meteor::{
    meteor_align, meteor_corpus, meteor_score, Alignment, MatchStage, MeteorConfig,
    SynonymLexicon,
};
pub use report::{score_all, EmbeddingInputs, MetricReport, ScoreConfig, METRIC_FIELDS};
pub use rouge::{lcs_length, rouge_l, rouge_l_corpus, ROUGE_L_BETA};

pub(crate) use bleu::combine_bleu;
