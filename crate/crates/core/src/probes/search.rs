//! Single-representative-sentence search: find the training sentence that,
//! used as the hypothesis for every test instance, maximizes a corpus
//! metric.
//!
//! BLEU objectives run through an inverted n-gram index whose per-candidate
//! aggregates are the same integers the naive corpus scorer accumulates,
//! and both paths share one float-combination routine, so fast and naive
//! results are bit-identical. Other objectives always score candidates
//! with the plain corpus kernels.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{closest_ref_length, Sentence, Token};
use crate::metrics::{
    bleu_corpus, build_idf, cider_d, combine_bleu, meteor_corpus, rouge_l_corpus, score_all,
    BleuConfig, MetricReport, ScoreConfig,
};
use crate::{CoreError, Result};

/// Corpus metric maximized by the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// BLEU-k for k in 1..=4.
    Bleu(u8),
    Meteor,
    RougeL,
    CiderD,
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Bleu(1) => "bleu1",
            Objective::Bleu(2) => "bleu2",
            Objective::Bleu(3) => "bleu3",
            Objective::Bleu(_) => "bleu4",
            Objective::Meteor => "meteor",
            Objective::RougeL => "rouge-l",
            Objective::CiderD => "cider-d",
        }
    }
}

impl core::fmt::Display for Objective {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Objective {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Objective {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> core::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

impl core::str::FromStr for Objective {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bleu1" | "bleu-1" => Ok(Objective::Bleu(1)),
            "bleu2" | "bleu-2" => Ok(Objective::Bleu(2)),
            "bleu3" | "bleu-3" => Ok(Objective::Bleu(3)),
            "bleu4" | "bleu-4" | "bleu" => Ok(Objective::Bleu(4)),
            "meteor" => Ok(Objective::Meteor),
            "rouge-l" | "rouge_l" | "rouge" => Ok(Objective::RougeL),
            "cider-d" | "cider_d" | "cider" => Ok(Objective::CiderD),
            _ => Err(CoreError::InvalidConfig(
                "objective must be one of bleu1..bleu4, meteor, rouge-l, cider-d",
            )),
        }
    }
}

/// Search controls.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub objective: Objective,
    /// Epsilon substituted for zero n-gram precisions while *ranking* BLEU
    /// objectives, so short candidates stay comparable. The reported
    /// winner score is still computed with `score`'s own BLEU settings.
    pub smoothing_epsilon: f64,
    /// Force the exhaustive per-candidate oracle even for BLEU objectives.
    pub force_naive: bool,
    /// Configuration for the winner's full report and final score.
    pub score: ScoreConfig,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            objective: Objective::Bleu(4),
            smoothing_epsilon: 1e-7,
            force_naive: false,
            score: ScoreConfig::new(),
        }
    }
}

/// Search outcome.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchResult {
    /// The winning training sentence.
    pub sentence: Sentence,
    /// The winner re-scored with [`score_fixed_hypothesis`] under the
    /// user-facing configuration (unsmoothed BLEU by default).
    pub objective_score: f64,
    pub objective: Objective,
    /// Unique candidates considered.
    pub candidates_evaluated: usize,
    /// All metrics of the winner against the test references.
    pub full_report: MetricReport,
}

/// Corpus-level objective score with `s` as the hypothesis of every
/// instance. This is the oracle the fast path must agree with.
pub fn score_fixed_hypothesis(
    s: &Sentence,
    refs: &[Vec<Sentence>],
    objective: Objective,
    cfg: &ScoreConfig,
) -> Result<f64> {
    if refs.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    let hyps = vec![s.clone(); refs.len()];
    match objective {
        Objective::Bleu(k) => {
            if k == 0 || k > cfg.bleu.max_order {
                return Err(CoreError::InvalidConfig(
                    "bleu objective order exceeds configured max_order",
                ));
            }
            Ok(bleu_corpus(&hyps, refs, &cfg.bleu)?.bleu(k))
        }
        Objective::Meteor => meteor_corpus(&hyps, refs, &cfg.meteor),
        Objective::RougeL => rouge_l_corpus(&hyps, refs, cfg.rouge_beta),
        Objective::CiderD => {
            let idf = build_idf(refs, cfg.cider.max_order)?;
            cider_d(&hyps, refs, &cfg.cider, &idf)
        }
    }
}

/// `(candidate, ranking score)` ordering: higher score wins; ties go to
/// the shorter sentence, then the lexicographically smaller one.
fn better(score_a: f64, a: &Sentence, score_b: f64, b: &Sentence) -> bool {
    if score_a != score_b {
        return score_a > score_b;
    }
    if a.len() != b.len() {
        return a.len() < b.len();
    }
    a.tokens() < b.tokens()
}

/// Searches the unique sentences of `train` for the corpus-objective
/// argmax over `refs`.
pub fn search_representative_sentence(
    train: &[Sentence],
    refs: &[Vec<Sentence>],
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if train.is_empty() || refs.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    for (i, instance_refs) in refs.iter().enumerate() {
        if instance_refs.is_empty() {
            return Err(CoreError::NoReferences { instance: i });
        }
    }
    if let Objective::Bleu(k) = opts.objective {
        if k == 0 || k > 4 {
            return Err(CoreError::InvalidConfig("bleu objective order must be 1..=4"));
        }
    }

    let unique: Vec<Sentence> = {
        let set: BTreeSet<&Sentence> = train.iter().collect();
        set.into_iter().cloned().collect()
    };

    let winner = match opts.objective {
        Objective::Bleu(k) if !opts.force_naive => {
            rank_bleu_fast(&unique, refs, k, opts.smoothing_epsilon)
        }
        _ => rank_naive(&unique, refs, opts)?,
    };

    let objective_score = score_fixed_hypothesis(&winner, refs, opts.objective, &opts.score)?;
    let hyps = vec![winner.clone(); refs.len()];
    let full_report = score_all(&hyps, refs, &opts.score, None)?;
    Ok(SearchResult {
        sentence: winner,
        objective_score,
        objective: opts.objective,
        candidates_evaluated: unique.len(),
        full_report,
    })
}

/// Ranking configuration for BLEU objectives: all four orders with the
/// search epsilon, shared verbatim by the naive and fast paths.
fn ranking_bleu_cfg(epsilon: f64) -> BleuConfig {
    BleuConfig {
        max_order: 4,
        smoothing_epsilon: epsilon,
    }
}

fn rank_naive(
    unique: &[Sentence],
    refs: &[Vec<Sentence>],
    opts: &SearchOptions,
) -> Result<Sentence> {
    // BLEU ranks see the same smoothed configuration as the fast path;
    // every other objective scores exactly as score_fixed_hypothesis does.
    let mut ranking_cfg = opts.score.clone();
    if matches!(opts.objective, Objective::Bleu(_)) {
        ranking_cfg.bleu = ranking_bleu_cfg(opts.smoothing_epsilon);
    }
    let scored = map_candidates(unique, |cand| {
        score_fixed_hypothesis(cand, refs, opts.objective, &ranking_cfg)
    });
    let mut best: Option<(f64, &Sentence)> = None;
    for (cand, score) in unique.iter().zip(scored) {
        let score = score?;
        best = Some(match best {
            None => (score, cand),
            Some((bs, bc)) => {
                if better(score, cand, bs, bc) {
                    (score, cand)
                } else {
                    (bs, bc)
                }
            }
        });
    }
    Ok(best.expect("non-empty candidate set").1.clone())
}

#[cfg(feature = "parallel")]
fn map_candidates<T: Send>(
    unique: &[Sentence],
    f: impl Fn(&Sentence) -> T + Sync + Send,
) -> Vec<T> {
    use rayon::prelude::*;
    unique.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_candidates<T>(unique: &[Sentence], f: impl Fn(&Sentence) -> T) -> Vec<T> {
    unique.iter().map(f).collect()
}

/// Per-gram reference statistics: per-instance maximum reference counts
/// (instances where the gram occurs at all), sorted ascending, with
/// prefix sums. `sum_i min(c, maxcnt_i)` then needs one binary search.
struct GramStats {
    sorted_max_counts: Vec<u32>,
    prefix: Vec<u64>,
}

impl GramStats {
    fn from_counts(mut counts: Vec<u32>) -> Self {
        counts.sort_unstable();
        let mut prefix = Vec::with_capacity(counts.len() + 1);
        let mut acc = 0u64;
        prefix.push(0);
        for &c in &counts {
            acc += c as u64;
            prefix.push(acc);
        }
        GramStats {
            sorted_max_counts: counts,
            prefix,
        }
    }

    /// Σ over indexed instances of min(c, maxcnt_i), c ≥ 1.
    fn clipped_total(&self, c: u32) -> u64 {
        let idx = self.sorted_max_counts.partition_point(|&m| m < c);
        self.prefix[idx] + (self.sorted_max_counts.len() - idx) as u64 * c as u64
    }
}

/// Inverted index over the test references for fixed-hypothesis BLEU.
struct FastBleuIndex {
    token_ids: BTreeMap<String, u32>,
    gram_stats: [BTreeMap<u128, GramStats>; 4],
    ref_lens: Vec<Vec<usize>>,
    num_instances: u64,
}

/// Packs up to four 32-bit token ids into one key; the order is implicit
/// in which table the key lives in.
fn pack_gram(ids: &[u32]) -> u128 {
    let mut key = 0u128;
    for (pos, &id) in ids.iter().enumerate() {
        key |= (id as u128) << (32 * pos);
    }
    key
}

impl FastBleuIndex {
    fn build(unique: &[Sentence], refs: &[Vec<Sentence>]) -> Self {
        let mut token_ids: BTreeMap<String, u32> = BTreeMap::new();
        let intern = |tok: &Token, token_ids: &mut BTreeMap<String, u32>| -> u32 {
            if let Some(&id) = token_ids.get(tok.as_str()) {
                return id;
            }
            let id = token_ids.len() as u32;
            token_ids.insert(String::from(tok.as_str()), id);
            id
        };
        // Candidate tokens must be resolvable too; unseen-in-refs tokens
        // simply never hit the gram tables.
        for cand in unique {
            for tok in cand.tokens() {
                intern(tok, &mut token_ids);
            }
        }
        let mut per_gram: [BTreeMap<u128, Vec<u32>>; 4] = Default::default();
        for instance_refs in refs {
            // Per-instance max count per gram, then folded into the
            // global per-gram count lists.
            let mut instance_max: [BTreeMap<u128, u32>; 4] = Default::default();
            for r in instance_refs {
                let ids: Vec<u32> = r
                    .tokens()
                    .iter()
                    .map(|tok| intern(tok, &mut token_ids))
                    .collect();
                for n in 1..=4usize.min(ids.len()) {
                    let mut counts: BTreeMap<u128, u32> = BTreeMap::new();
                    for w in ids.windows(n) {
                        *counts.entry(pack_gram(w)).or_insert(0) += 1;
                    }
                    for (gram, c) in counts {
                        let slot = instance_max[n - 1].entry(gram).or_insert(0);
                        *slot = (*slot).max(c);
                    }
                }
            }
            for n in 0..4 {
                for (gram, c) in &instance_max[n] {
                    per_gram[n].entry(*gram).or_default().push(*c);
                }
            }
        }
        let gram_stats = per_gram.map(|table| {
            table
                .into_iter()
                .map(|(gram, counts)| (gram, GramStats::from_counts(counts)))
                .collect::<BTreeMap<_, _>>()
        });
        let ref_lens = refs
            .iter()
            .map(|instance_refs| {
                let mut lens: Vec<usize> =
                    instance_refs.iter().map(Sentence::len).collect();
                lens.sort_unstable();
                lens
            })
            .collect();
        FastBleuIndex {
            token_ids,
            gram_stats,
            ref_lens,
            num_instances: refs.len() as u64,
        }
    }

    /// Summed effective reference length for a fixed hypothesis length.
    fn effective_ref_tokens(&self, hyp_len: usize) -> u64 {
        self.ref_lens
            .iter()
            .map(|lens| closest_ref_length(hyp_len, lens) as u64)
            .sum()
    }

    /// The integer aggregates `bleu_corpus` would accumulate for this
    /// candidate as the hypothesis of every instance (clipped and total
    /// gram counts per order, plus hypothesis token count).
    fn aggregates(&self, cand: &Sentence) -> ([u64; 4], [u64; 4], u64) {
        let ids: Vec<u32> = cand
            .tokens()
            .iter()
            .map(|tok| self.token_ids[tok.as_str()])
            .collect();
        let mut clipped = [0u64; 4];
        let mut totals = [0u64; 4];
        for n in 1..=4usize {
            if ids.len() < n {
                break;
            }
            totals[n - 1] = (ids.len() - n + 1) as u64 * self.num_instances;
            let mut grams: Vec<u128> = ids.windows(n).map(pack_gram).collect();
            grams.sort_unstable();
            let table = &self.gram_stats[n - 1];
            let mut i = 0;
            while i < grams.len() {
                let mut j = i + 1;
                while j < grams.len() && grams[j] == grams[i] {
                    j += 1;
                }
                if let Some(stats) = table.get(&grams[i]) {
                    clipped[n - 1] += stats.clipped_total((j - i) as u32);
                }
                i = j;
            }
        }
        let hyp_tokens = ids.len() as u64 * self.num_instances;
        (clipped, totals, hyp_tokens)
    }
}

fn rank_bleu_fast(
    unique: &[Sentence],
    refs: &[Vec<Sentence>],
    k: u8,
    epsilon: f64,
) -> Sentence {
    let index = FastBleuIndex::build(unique, refs);
    let cfg = ranking_bleu_cfg(epsilon);
    // Effective reference lengths depend only on candidate length;
    // memoize them up front so the candidate loop is read-only.
    let eff_by_len: BTreeMap<usize, u64> = unique
        .iter()
        .map(Sentence::len)
        .collect::<BTreeSet<usize>>()
        .into_iter()
        .map(|len| (len, index.effective_ref_tokens(len)))
        .collect();
    let scored = map_candidates(unique, |cand| {
        let (clipped, totals, hyp_tokens) = index.aggregates(cand);
        let eff = eff_by_len[&cand.len()];
        combine_bleu(&clipped, &totals, hyp_tokens, eff, &cfg).bleu(k)
    });
    let mut best: Option<(f64, &Sentence)> = None;
    for (cand, score) in unique.iter().zip(scored) {
        best = Some(match best {
            None => (score, cand),
            Some((bs, bc)) => {
                if better(score, cand, bs, bc) {
                    (score, cand)
                } else {
                    (bs, bc)
                }
            }
        });
    }
    best.expect("non-empty candidate set").1.clone()
}
