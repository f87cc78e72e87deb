//! Tokenized text containers, vocabulary/frequency tables, n-gram extraction,
//! and reference-length bookkeeping.
//!
//! Input text is assumed pre-tokenized: sentences are split on runs of
//! whitespace and optionally lowercased, nothing more. All types are immutable
//! after construction.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{CoreError, Result};

/// Default sentinel for substituted tokens.
pub const UNK_TOKEN: &str = "UNK";

/// A single token: non-empty, no internal whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(surface: impl Into<String>) -> Result<Self> {
        let surface = surface.into();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(CoreError::InvalidToken(surface));
        }
        Ok(Token(surface))
    }

    /// The default `UNK` sentinel token.
    pub fn unk() -> Self {
        Token(UNK_TOKEN.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl core::borrow::Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Token {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Token::new(s)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Token {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Token {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> core::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Token::new(raw).map_err(serde::de::Error::custom)
    }
}

/// An ordered, non-empty list of tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sentence(Vec<Token>);

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(CoreError::EmptySentence);
        }
        Ok(Sentence(tokens))
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)] // invariant: never empty
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// A copy with every token position mapped through `f`.
    pub fn map_tokens(&self, mut f: impl FnMut(&Token) -> Token) -> Sentence {
        Sentence(self.0.iter().map(&mut f).collect())
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tok) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(tok.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for Sentence {
    type Err = CoreError;

    /// Whitespace-splits without lowercasing. See [`normalize_tokens`].
    fn from_str(s: &str) -> Result<Self> {
        normalize_tokens(s, false)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Sentence {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Sentence {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> core::result::Result<Self, D::Error> {
        let tokens = Vec::<Token>::deserialize(deserializer)?;
        Sentence::new(tokens).map_err(serde::de::Error::custom)
    }
}

/// Splits a raw line on runs of whitespace, optionally lowercasing.
///
/// Idempotent: re-joining the result with single spaces and re-tokenizing
/// yields an identical sentence.
pub fn normalize_tokens(raw_line: &str, lowercase: bool) -> Result<Sentence> {
    let tokens: Vec<Token> = raw_line
        .split_whitespace()
        .map(|w| {
            if lowercase {
                Token(w.to_lowercase())
            } else {
                Token(w.to_owned())
            }
        })
        .collect();
    Sentence::new(tokens)
}

/// Token occurrence counts over a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    counts: BTreeMap<Token, u64>,
    total_tokens: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from explicit counts; zero counts are dropped.
    pub fn from_counts(counts: impl IntoIterator<Item = (Token, u64)>) -> Self {
        let mut map: BTreeMap<Token, u64> = BTreeMap::new();
        for (tok, n) in counts {
            if n > 0 {
                *map.entry(tok).or_insert(0) += n;
            }
        }
        let total_tokens = map.values().sum();
        Vocabulary {
            counts: map,
            total_tokens,
        }
    }

    pub fn count(&self, token: &Token) -> u64 {
        self.counts.get(token.as_str()).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn distinct_tokens(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Token, u64)> {
        self.counts.iter().map(|(t, &n)| (t, n))
    }

    /// Entries sorted by descending count, ties broken lexicographically.
    /// This is the order used by the TSV export.
    pub fn entries_by_frequency(&self) -> Vec<(&Token, u64)> {
        let mut entries: Vec<(&Token, u64)> = self.iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        entries
    }
}

/// Exact token frequencies over a non-empty corpus.
pub fn build_vocabulary(corpus: &[Sentence]) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    let mut counts: BTreeMap<Token, u64> = BTreeMap::new();
    let mut total_tokens = 0u64;
    for sentence in corpus {
        for token in sentence.tokens() {
            *counts.entry(token.clone()).or_insert(0) += 1;
            total_tokens += 1;
        }
    }
    Ok(Vocabulary {
        counts,
        total_tokens,
    })
}

/// Counts of the contiguous n-grams of one sentence, for a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramProfile {
    order: u8,
    counts: BTreeMap<Vec<Token>, u32>,
    total: u32,
}

impl NGramProfile {
    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn counts(&self) -> &BTreeMap<Vec<Token>, u32> {
        &self.counts
    }

    pub fn get(&self, gram: &[Token]) -> u32 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    /// Number of n-gram positions: `max(0, len - n + 1)`.
    pub fn total(&self) -> u32 {
        self.total
    }
}

/// Counts all contiguous n-grams of `sentence`. A sentence shorter than `n`
/// yields an empty profile with total 0.
///
/// Panics if `n` is outside `1..=4`.
pub fn ngram_profile(sentence: &Sentence, n: u8) -> NGramProfile {
    assert!((1..=4).contains(&n), "n-gram order must be in 1..=4");
    let n = n as usize;
    let tokens = sentence.tokens();
    let mut counts: BTreeMap<Vec<Token>, u32> = BTreeMap::new();
    let total = tokens.len().saturating_sub(n - 1);
    for window in tokens.windows(n) {
        *counts.entry(window.to_vec()).or_insert(0) += 1;
    }
    NGramProfile {
        order: n as u8,
        counts,
        total: total as u32,
    }
}

/// The reference length closest to `hyp_len`; ties break toward the shorter
/// length.
///
/// Panics if `ref_lens` is empty.
pub fn closest_ref_length(hyp_len: usize, ref_lens: &[usize]) -> usize {
    assert!(!ref_lens.is_empty(), "ref_lens must be non-empty");
    *ref_lens
        .iter()
        .min_by_key(|&&len| (len.abs_diff(hyp_len), len))
        .expect("non-empty")
}

/// C parallel reference corpora over the same N instances, rectangular by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceBundle {
    corpora: Vec<Vec<Sentence>>,
}

impl ReferenceBundle {
    /// Validates that every corpus has the same positive number of sentences.
    pub fn new(corpora: Vec<Vec<Sentence>>) -> Result<Self> {
        if corpora.is_empty() {
            return Err(CoreError::EmptyCorpus);
        }
        let expected = corpora[0].len();
        if expected == 0 {
            return Err(CoreError::EmptyCorpus);
        }
        for (i, corpus) in corpora.iter().enumerate() {
            if corpus.len() != expected {
                return Err(CoreError::RaggedReferences {
                    corpus: i,
                    expected,
                    got: corpus.len(),
                });
            }
        }
        Ok(ReferenceBundle { corpora })
    }

    pub fn num_corpora(&self) -> usize {
        self.corpora.len()
    }

    pub fn num_instances(&self) -> usize {
        self.corpora[0].len()
    }

    pub fn corpus(&self, i: usize) -> &[Sentence] {
        &self.corpora[i]
    }

    /// Per-instance reference lists drawn from every corpus except `skip`.
    pub fn heldout_refs(&self, skip: usize) -> Vec<Vec<Sentence>> {
        (0..self.num_instances())
            .map(|j| {
                self.corpora
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, corpus)| corpus[j].clone())
                    .collect()
            })
            .collect()
    }

    /// Per-instance reference lists drawn from all corpora.
    pub fn all_refs(&self) -> Vec<Vec<Sentence>> {
        (0..self.num_instances())
            .map(|j| self.corpora.iter().map(|corpus| corpus[j].clone()).collect())
            .collect()
    }
}

/// One evaluation instance: at least one reference, an optional hypothesis,
/// an opaque id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalInstance {
    pub id: String,
    pub refs: Vec<Sentence>,
    pub hyp: Option<Sentence>,
}

/// An aligned corpus of instances with unique ids and possibly ragged
/// reference counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalCorpus {
    instances: Vec<EvalInstance>,
}

impl EvalCorpus {
    pub fn new(instances: Vec<EvalInstance>) -> Result<Self> {
        if instances.is_empty() {
            return Err(CoreError::EmptyCorpus);
        }
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for (i, inst) in instances.iter().enumerate() {
            if inst.refs.is_empty() {
                return Err(CoreError::NoReferences { instance: i });
            }
            if !seen.insert(&inst.id) {
                return Err(CoreError::DuplicateId(inst.id.clone()));
            }
        }
        Ok(EvalCorpus { instances })
    }

    pub fn instances(&self) -> &[EvalInstance] {
        &self.instances
    }

    #[allow(clippy::len_without_is_empty)] // invariant: never empty
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    /// Splits into aligned hypothesis and reference corpora; every instance
    /// must carry a hypothesis.
    pub fn to_score_inputs(&self) -> Result<(Vec<Sentence>, Vec<Vec<Sentence>>)> {
        let mut hyps = Vec::with_capacity(self.len());
        let mut refs = Vec::with_capacity(self.len());
        for inst in &self.instances {
            match &inst.hyp {
                Some(h) => hyps.push(h.clone()),
                None => return Err(CoreError::MissingHypothesis(inst.id.clone())),
            }
            refs.push(inst.refs.clone());
        }
        Ok((hyps, refs))
    }

    /// Interprets the (rectangular) reference columns as parallel corpora.
    pub fn to_reference_bundle(&self) -> Result<ReferenceBundle> {
        let c = self.instances[0].refs.len();
        for (i, inst) in self.instances.iter().enumerate() {
            if inst.refs.len() != c {
                return Err(CoreError::RaggedReferences {
                    corpus: i,
                    expected: c,
                    got: inst.refs.len(),
                });
            }
        }
        let corpora = (0..c)
            .map(|k| self.instances.iter().map(|inst| inst.refs[k].clone()).collect())
            .collect();
        ReferenceBundle::new(corpora)
    }
}
