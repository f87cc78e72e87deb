//! Reference-based evaluation metrics for generated text, plus the stress-test
//! probes that expose their failure modes.
//!
//! The crate has three layers:
//!
//! * [`corpus`] — tokenized text containers, vocabularies, and n-gram profiles
//!   shared by everything else.
//! * [`metrics`] — the scoring kernels: corpus-level BLEU, METEOR, ROUGE-L,
//!   CIDEr-D, and a greedy embedding F-score over externally produced vectors.
//! * [`probes`] — the experimental protocols: leave-one-out reference scoring,
//!   frequency-targeted perturbation, and the single-representative-sentence
//!   adversary with an indexed fast path.
//!
//! All kernels are pure functions over immutable inputs. Corpus-level sums are
//! accumulated in instance order so results are independent of thread count.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std` feature
//! enables `std::error::Error` impls and native float math.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod corpus;
mod error;
pub(crate) mod math;
pub mod metrics;
pub mod probes;

pub use error::CoreError;

pub type Result<T> = core::result::Result<T, CoreError>;
