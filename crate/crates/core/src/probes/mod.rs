//! Stress-test probes built on top of the metric kernels: leave-one-out
//! reference scoring, vocabulary-targeted perturbations, and the
//! single-representative-sentence search.

mod loo;
mod perturb;
mod search;

pub use loo::{leave_one_out, LooEmbeddings, LooResult};
pub use perturb::{perturb, perturb_and_score, PerturbOutcome, PerturbSpec, PerturbedCorpus};
pub use search::{
    score_fixed_hypothesis, search_representative_sentence, Objective, SearchOptions,
    SearchResult,
};
