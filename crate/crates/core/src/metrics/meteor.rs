//! METEOR: staged unigram alignment (exact, stem, synonym) scored by a
//! recall-weighted harmonic mean with a fragmentation penalty.
//!
//! Alignment semantics: stages run in order, each matching as many of the
//! still-unmatched tokens as possible (maximum-cardinality one-to-one).
//! Among the alignments reachable that way, the one with the fewest chunks
//! wins; remaining ties go to the lexicographically smallest match list, so
//! results are deterministic. The chunk minimization enumerates all stage
//! matchings while the contested-token count stays small and falls back to
//! a fixed-width beam above that.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Sentence;
use crate::math;
use crate::metrics::stem::stem_key;
use crate::{CoreError, Result};

/// Matcher that produced a given alignment pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MatchStage {
    /// Identical surface forms.
    Exact,
    /// Equal Porter stems.
    Stem,
    /// Shared synonym set in the external lexicon.
    Synonym,
}

/// Synonym sets for the synonym stage: groups of mutually synonymous
/// surface forms. A token may belong to several groups; two tokens match
/// when they share at least one.
#[derive(Debug, Clone, Default)]
pub struct SynonymLexicon {
    groups_of: BTreeMap<String, Vec<u32>>,
    num_groups: u32,
}

impl SynonymLexicon {
    pub fn new<I, S>(sets: I) -> Self
    where
        I: IntoIterator,
        I::Item: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut groups_of: BTreeMap<String, Vec<u32>> = BTreeMap::new();
        let mut next = 0u32;
        for set in sets {
            let members: BTreeSet<String> = set.into_iter().map(Into::into).collect();
            if members.len() < 2 {
                continue; // a singleton set can never produce a match
            }
            for m in members {
                let ids = groups_of.entry(m).or_default();
                if ids.last() != Some(&next) {
                    ids.push(next);
                }
            }
            next += 1;
        }
        SynonymLexicon {
            groups_of,
            num_groups: next,
        }
    }

    /// Parses one synonym set per line, members space-separated.
    pub fn from_lines(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(|line| line.split_whitespace().map(String::from).collect::<Vec<_>>())
                .filter(|set| !set.is_empty()),
        )
    }

    pub fn num_groups(&self) -> u32 {
        self.num_groups
    }

    pub fn is_empty(&self) -> bool {
        self.num_groups == 0
    }

    fn groups(&self, surface: &str) -> &[u32] {
        self.groups_of.get(surface).map(Vec::as_slice).unwrap_or(&[])
    }

    /// True when the two surfaces appear together in at least one set.
    pub fn share_group(&self, a: &str, b: &str) -> bool {
        let (ga, gb) = (self.groups(a), self.groups(b));
        // Both lists are sorted by construction.
        let (mut i, mut j) = (0, 0);
        while i < ga.len() && j < gb.len() {
            match ga[i].cmp(&gb[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// METEOR parameters.
#[derive(Debug, Clone)]
pub struct MeteorConfig {
    /// Precision weight in the harmonic mean `P·R / (α·P + (1−α)·R)`.
    pub alpha: f64,
    /// Fragmentation exponent in the penalty `γ·(chunks/m)^β`.
    pub beta: f64,
    /// Fragmentation weight; the ceiling score for a single-chunk perfect
    /// match is `100·(1−γ)` when m = chunks = 1.
    pub gamma: f64,
    /// Matchers applied in order; the exact stage must come first.
    pub stages: Vec<MatchStage>,
    /// Lexicon backing the synonym stage; with `None` that stage matches
    /// nothing.
    pub synonyms: Option<SynonymLexicon>,
}

impl Default for MeteorConfig {
    fn default() -> Self {
        MeteorConfig {
            alpha: 0.85,
            beta: 0.2,
            gamma: 0.6,
            stages: vec![MatchStage::Exact, MatchStage::Stem, MatchStage::Synonym],
            synonyms: None,
        }
    }
}

impl MeteorConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(CoreError::InvalidConfig("alpha must lie in [0, 1]"));
        }
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(CoreError::InvalidConfig("beta must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(CoreError::InvalidConfig("gamma must lie in [0, 1]"));
        }
        if self.stages.first() != Some(&MatchStage::Exact) {
            return Err(CoreError::InvalidConfig(
                "stage list must be non-empty and start with the exact stage",
            ));
        }
        Ok(())
    }
}

/// One-to-one token alignment between a hypothesis and one reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    matches: Vec<(usize, usize, MatchStage)>,
    chunk_count: usize,
}

impl Alignment {
    /// Matches as `(hyp_index, ref_index, stage)`, sorted by hyp index.
    pub fn matches(&self) -> &[(usize, usize, MatchStage)] {
        &self.matches
    }

    pub fn match_count(&self) -> usize {
        self.matches.len()
    }

    /// Number of maximal runs contiguous in both sentences; 0 iff there
    /// are no matches.
    pub fn chunk_count(&self) -> usize {
        self.chunk_count
    }
}

/// Contested-token budget below which every stage matching is enumerated.
const EXHAUSTIVE_AMBIGUITY_LIMIT: usize = 12;
/// Partial alignments kept per expansion step once enumeration falls back
/// to beam search.
const BEAM_WIDTH: usize = 40;
/// Matchings expanded from one partial alignment per stage in beam mode.
const BEAM_EXPANSION_CAP: usize = 200;

/// Per-stage token keys: tokens are eligible to match when their key sets
/// intersect (equality stages get singleton keys).
enum StageKeys {
    Equal(Vec<u32>, Vec<u32>),
    Groups(Vec<Vec<u32>>, Vec<Vec<u32>>),
}

impl StageKeys {
    fn eligible(&self, i: usize, j: usize) -> bool {
        match self {
            StageKeys::Equal(h, r) => h[i] == r[j],
            StageKeys::Groups(h, r) => {
                let (ga, gb) = (&h[i], &r[j]);
                let (mut a, mut b) = (0, 0);
                while a < ga.len() && b < gb.len() {
                    match ga[a].cmp(&gb[b]) {
                        core::cmp::Ordering::Less => a += 1,
                        core::cmp::Ordering::Greater => b += 1,
                        core::cmp::Ordering::Equal => return true,
                    }
                }
                false
            }
        }
    }
}

fn intern<'a>(keys: impl Iterator<Item = &'a str> + Clone) -> Vec<u32> {
    let mut ids: BTreeMap<&str, u32> = BTreeMap::new();
    for k in keys.clone() {
        let next = ids.len() as u32;
        ids.entry(k).or_insert(next);
    }
    keys.map(|k| ids[k]).collect()
}

fn stage_keys(stage: MatchStage, hyp: &Sentence, r: &Sentence, cfg: &MeteorConfig) -> StageKeys {
    match stage {
        MatchStage::Exact => {
            let all: Vec<&str> = hyp
                .tokens()
                .iter()
                .chain(r.tokens())
                .map(|t| t.as_str())
                .collect();
            let ids = intern(all.iter().copied());
            let (h, rest) = ids.split_at(hyp.len());
            StageKeys::Equal(h.to_vec(), rest.to_vec())
        }
        MatchStage::Stem => {
            let stems: Vec<String> = hyp
                .tokens()
                .iter()
                .chain(r.tokens())
                .map(|t| stem_key(t.as_str()))
                .collect();
            let ids = intern(stems.iter().map(String::as_str));
            let (h, rest) = ids.split_at(hyp.len());
            StageKeys::Equal(h.to_vec(), rest.to_vec())
        }
        MatchStage::Synonym => {
            let lex = cfg.synonyms.as_ref();
            let groups = |s: &Sentence| -> Vec<Vec<u32>> {
                s.tokens()
                    .iter()
                    .map(|t| {
                        lex.map(|l| l.groups(t.as_str()).to_vec())
                            .unwrap_or_default()
                    })
                    .collect()
            };
            StageKeys::Groups(groups(hyp), groups(r))
        }
    }
}

/// Maximum bipartite matching size via augmenting paths. `adj[u]` lists
/// right-side nodes in ascending order, so results are deterministic.
fn max_matching_size(adj: &[Vec<usize>], n_right: usize) -> usize {
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        match_right: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &v in &adj[u] {
            if !visited[v] {
                visited[v] = true;
                let free = match match_right[v] {
                    None => true,
                    Some(w) => augment(w, adj, match_right, visited),
                };
                if free {
                    match_right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut match_right = vec![None; n_right];
    let mut size = 0;
    for u in 0..adj.len() {
        let mut visited = vec![false; n_right];
        if augment(u, adj, &mut match_right, &mut visited) {
            size += 1;
        }
    }
    size
}

/// Counts tokens in eligibility components larger than a forced 1-1 pair.
/// These are the tokens whose assignment the enumeration must explore.
fn ambiguous_tokens(adj: &[Vec<usize>], hyp_nodes: &[usize], n_ref: usize) -> usize {
    // Union-find over (left: index into hyp_nodes) and (right: ref pos).
    let n = hyp_nodes.len();
    let mut parent: Vec<usize> = (0..n + n_ref).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    let mut edge_count = vec![0usize; n + n_ref];
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, n + v));
            if ru != rv {
                parent[ru] = rv;
            }
        }
        edge_count[u] = nbrs.len();
    }
    let mut comp_tokens: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comp_edges: BTreeMap<usize, usize> = BTreeMap::new();
    for (u, &edges) in edge_count.iter().enumerate().take(n) {
        if edges > 0 {
            let root = find(&mut parent, u);
            *comp_tokens.entry(root).or_insert(0) += 1;
            *comp_edges.entry(root).or_insert(0) += edges;
        }
    }
    for v in 0..n_ref {
        let root = find(&mut parent, n + v);
        if comp_tokens.contains_key(&root) {
            // Count the ref token only if its component has any edge; refs
            // with no eligible partner stay out of every component tally.
            let touched = adj.iter().any(|nbrs| nbrs.contains(&v));
            if touched {
                *comp_tokens.entry(root).or_insert(0) += 1;
            }
        }
    }
    comp_tokens
        .iter()
        .filter(|(root, &tokens)| !(tokens == 2 && comp_edges.get(root) == Some(&1)))
        .map(|(_, &tokens)| tokens)
        .sum()
}

/// Enumerates maximum matchings of the stage graph in a deterministic
/// depth-first order, up to `cap` results.
fn enumerate_maximum_matchings(
    hyp_nodes: &[usize],
    adj: &[Vec<usize>],
    n_ref_total: usize,
    target: usize,
    cap: usize,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    fn residual_capacity(
        k: usize,
        adj: &[Vec<usize>],
        used_ref: &[bool],
        n_ref_total: usize,
    ) -> usize {
        let residual: Vec<Vec<usize>> = adj[k..]
            .iter()
            .map(|nbrs| nbrs.iter().copied().filter(|&v| !used_ref[v]).collect())
            .collect();
        max_matching_size(&residual, n_ref_total)
    }
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        k: usize,
        matched: usize,
        hyp_nodes: &[usize],
        adj: &[Vec<usize>],
        used_ref: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        target: usize,
        cap: usize,
        n_ref_total: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if out.len() >= cap {
            return;
        }
        if matched + residual_capacity(k, adj, used_ref, n_ref_total) < target {
            return;
        }
        if k == hyp_nodes.len() {
            debug_assert_eq!(matched, target);
            out.push(cur.clone());
            return;
        }
        for &v in &adj[k] {
            if !used_ref[v] {
                used_ref[v] = true;
                cur.push((hyp_nodes[k], v));
                dfs(
                    k + 1,
                    matched + 1,
                    hyp_nodes,
                    adj,
                    used_ref,
                    cur,
                    target,
                    cap,
                    n_ref_total,
                    out,
                );
                cur.pop();
                used_ref[v] = false;
            }
        }
        // Leave this hyp token unmatched; the capacity bound above prunes
        // the branch unless the target stays reachable.
        dfs(
            k + 1,
            matched,
            hyp_nodes,
            adj,
            used_ref,
            cur,
            target,
            cap,
            n_ref_total,
            out,
        );
    }
    let mut used_ref = vec![false; n_ref_total];
    let mut cur = Vec::new();
    dfs(
        0,
        0,
        hyp_nodes,
        adj,
        &mut used_ref,
        &mut cur,
        target,
        cap,
        n_ref_total,
        out,
    );
}

fn chunk_count_of(pairs: &[(usize, usize, u8)]) -> usize {
    if pairs.is_empty() {
        return 0;
    }
    let mut sorted: Vec<(usize, usize)> = pairs.iter().map(|&(h, r, _)| (h, r)).collect();
    sorted.sort_unstable();
    let mut chunks = 1;
    for w in sorted.windows(2) {
        if w[1].0 != w[0].0 + 1 || w[1].1 != w[0].1 + 1 {
            chunks += 1;
        }
    }
    chunks
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PartialAlignment {
    // Ordering fields first so the derived Ord gives the beam key:
    // fewer chunks, then lexicographically smaller matches.
    chunks: usize,
    pairs: Vec<(usize, usize, u8)>,
}

/// Aligns `hyp` to one reference under the configured stages.
pub fn meteor_align(hyp: &Sentence, reference: &Sentence, cfg: &MeteorConfig) -> Alignment {
    debug_assert!(cfg.validate().is_ok());
    let keys: Vec<StageKeys> = cfg
        .stages
        .iter()
        .map(|&s| stage_keys(s, hyp, reference, cfg))
        .collect();

    // Decide enumeration mode on a canonical dry run: follow the first
    // (greedy) matching through the stages and total up contested tokens.
    let mut ambiguity = 0usize;
    {
        let mut used_h = vec![false; hyp.len()];
        let mut used_r = vec![false; reference.len()];
        for stage_keys in &keys {
            let (hyp_nodes, adj) = stage_graph(stage_keys, &used_h, &used_r, hyp.len());
            ambiguity += ambiguous_tokens(&adj, &hyp_nodes, reference.len());
            let target = max_matching_size(&adj, reference.len());
            if target == 0 {
                continue;
            }
            let mut first = Vec::new();
            enumerate_maximum_matchings(
                &hyp_nodes,
                &adj,
                reference.len(),
                target,
                1,
                &mut first,
            );
            for &(i, j) in &first[0] {
                used_h[i] = true;
                used_r[j] = true;
            }
        }
    }
    let exhaustive = ambiguity <= EXHAUSTIVE_AMBIGUITY_LIMIT;

    let mut states = vec![PartialAlignment {
        chunks: 0,
        pairs: Vec::new(),
    }];
    for (stage_idx, stage_keys) in keys.iter().enumerate() {
        let mut next: BTreeSet<PartialAlignment> = BTreeSet::new();
        for state in &states {
            let mut used_h = vec![false; hyp.len()];
            let mut used_r = vec![false; reference.len()];
            for &(i, j, _) in &state.pairs {
                used_h[i] = true;
                used_r[j] = true;
            }
            let (hyp_nodes, adj) = stage_graph(stage_keys, &used_h, &used_r, hyp.len());
            let target = max_matching_size(&adj, reference.len());
            if target == 0 {
                next.insert(state.clone());
                continue;
            }
            let cap = if exhaustive {
                usize::MAX
            } else {
                BEAM_EXPANSION_CAP
            };
            let mut matchings = Vec::new();
            enumerate_maximum_matchings(
                &hyp_nodes,
                &adj,
                reference.len(),
                target,
                cap,
                &mut matchings,
            );
            for m in matchings {
                let mut pairs = state.pairs.clone();
                pairs.extend(m.iter().map(|&(i, j)| (i, j, stage_idx as u8)));
                let chunks = chunk_count_of(&pairs);
                next.insert(PartialAlignment { chunks, pairs });
            }
        }
        let mut pruned: Vec<PartialAlignment> = next.into_iter().collect();
        if !exhaustive && pruned.len() > BEAM_WIDTH {
            // Keep the widest alignments first, then the beam key order.
            pruned.sort_by(|a, b| {
                b.pairs
                    .len()
                    .cmp(&a.pairs.len())
                    .then_with(|| a.cmp(b))
            });
            pruned.truncate(BEAM_WIDTH);
        }
        states = pruned;
    }

    let best_len = states.iter().map(|s| s.pairs.len()).max().unwrap_or(0);
    let best = states
        .into_iter()
        .filter(|s| s.pairs.len() == best_len)
        .min()
        .expect("at least one state");
    let mut matches: Vec<(usize, usize, MatchStage)> = best
        .pairs
        .iter()
        .map(|&(i, j, s)| (i, j, cfg.stages[s as usize]))
        .collect();
    matches.sort_unstable();
    Alignment {
        chunk_count: chunk_count_of(&best.pairs),
        matches,
    }
}

/// Builds the stage eligibility graph over still-unmatched tokens.
/// Returns the hyp positions with at least one edge plus their adjacency.
fn stage_graph(
    keys: &StageKeys,
    used_h: &[bool],
    used_r: &[bool],
    n_hyp: usize,
) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut hyp_nodes = Vec::new();
    let mut adj = Vec::new();
    for (i, &used) in used_h.iter().enumerate().take(n_hyp) {
        if used {
            continue;
        }
        let nbrs: Vec<usize> = (0..used_r.len())
            .filter(|&j| !used_r[j] && keys.eligible(i, j))
            .collect();
        if !nbrs.is_empty() {
            hyp_nodes.push(i);
            adj.push(nbrs);
        }
    }
    (hyp_nodes, adj)
}

/// Sentence METEOR on a 0-100 scale: the best single-reference score.
pub fn meteor_score(hyp: &Sentence, refs: &[Sentence], cfg: &MeteorConfig) -> Result<f64> {
    cfg.validate()?;
    if refs.is_empty() {
        return Err(CoreError::MissingReferences);
    }
    let mut best = 0.0f64;
    for r in refs {
        let alignment = meteor_align(hyp, r, cfg);
        let m = alignment.match_count() as f64;
        let score = if m == 0.0 {
            0.0
        } else {
            let p = m / hyp.len() as f64;
            let rec = m / r.len() as f64;
            let f = p * rec / (cfg.alpha * p + (1.0 - cfg.alpha) * rec);
            let frag = alignment.chunk_count() as f64 / m;
            let pen = cfg.gamma * math::powf(frag, cfg.beta);
            100.0 * (1.0 - pen) * f
        };
        best = best.max(score);
    }
    Ok(best)
}

/// Corpus METEOR: arithmetic mean of sentence scores, in instance order.
pub fn meteor_corpus(hyps: &[Sentence], refs: &[Vec<Sentence>], cfg: &MeteorConfig) -> Result<f64> {
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
        total += meteor_score(hyp, rs, cfg)?;
    }
    Ok(total / hyps.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize_tokens;
    use approx::assert_abs_diff_eq;

    fn s(text: &str) -> Sentence {
        normalize_tokens(text, false).unwrap()
    }

    fn exact_only() -> MeteorConfig {
        MeteorConfig {
            stages: vec![MatchStage::Exact],
            ..MeteorConfig::default()
        }
    }

    #[test]
    fn identity_alignment_is_one_chunk() {
        let a = meteor_align(&s("the cat"), &s("the cat"), &MeteorConfig::default());
        assert_eq!(a.match_count(), 2);
        assert_eq!(a.chunk_count(), 1);
        assert_eq!(
            a.matches(),
            &[(0, 0, MatchStage::Exact), (1, 1, MatchStage::Exact)]
        );
    }

    #[test]
    fn crossed_alignment_is_two_chunks() {
        let a = meteor_align(&s("cat the"), &s("the cat"), &MeteorConfig::default());
        assert_eq!(a.match_count(), 2);
        assert_eq!(a.chunk_count(), 2);
    }

    #[test]
    fn stem_stage_matches_inflected_forms() {
        let a = meteor_align(&s("dogs"), &s("dog"), &MeteorConfig::default());
        assert_eq!(a.matches(), &[(0, 0, MatchStage::Stem)]);
        let exact = meteor_align(&s("dogs"), &s("dog"), &exact_only());
        assert_eq!(exact.match_count(), 0);
        assert_eq!(exact.chunk_count(), 0);
    }

    #[test]
    fn synonym_stage_needs_a_lexicon() {
        let without = meteor_align(&s("sofa"), &s("couch"), &MeteorConfig::default());
        assert_eq!(without.match_count(), 0);
        let cfg = MeteorConfig {
            synonyms: Some(SynonymLexicon::from_lines("sofa couch settee\n")),
            ..MeteorConfig::default()
        };
        let with = meteor_align(&s("sofa"), &s("couch"), &cfg);
        assert_eq!(with.matches(), &[(0, 0, MatchStage::Synonym)]);
    }

    #[test]
    fn chunk_minimization_prefers_monotone_assignment() {
        // "a b a" vs "a b a": pairing the a's crosswise would cost 3
        // chunks; the minimizer must find the single-chunk identity.
        let a = meteor_align(&s("a b a"), &s("a b a"), &exact_only());
        assert_eq!(a.match_count(), 3);
        assert_eq!(a.chunk_count(), 1);
    }

    #[test]
    fn repeated_tokens_clip_to_one_to_one() {
        let a = meteor_align(&s("the the the"), &s("the"), &exact_only());
        assert_eq!(a.match_count(), 1);
        assert_eq!(a.chunk_count(), 1);
    }

    #[test]
    fn beam_path_still_finds_the_identity_alignment() {
        // 8 identical tokens on both sides: a 16-token contested component
        // exceeds the exhaustive budget, so this exercises the beam. The
        // first depth-first matching is the identity, which the beam keeps.
        let text = "a a a a a a a a";
        let a = meteor_align(&s(text), &s(text), &exact_only());
        assert_eq!(a.match_count(), 8);
        assert_eq!(a.chunk_count(), 1);
    }

    #[test]
    fn single_token_identity_scores_forty_under_defaults() {
        let got = meteor_score(&s("cat"), &[s("cat")], &MeteorConfig::default()).unwrap();
        assert_abs_diff_eq!(got, 40.0, epsilon = 1e-9);
    }

    #[test]
    fn zero_matches_scores_zero() {
        let got = meteor_score(&s("a b"), &[s("x y")], &MeteorConfig::default()).unwrap();
        assert_abs_diff_eq!(got, 0.0, epsilon = 0.0);
    }

    #[test]
    fn max_over_references_picks_the_identical_one() {
        let hyp = s("a man rides a horse");
        let refs = [s("completely unrelated text here now"), hyp.clone()];
        let solo = meteor_score(&hyp, core::slice::from_ref(&hyp), &MeteorConfig::default()).unwrap();
        let multi = meteor_score(&hyp, &refs, &MeteorConfig::default()).unwrap();
        assert_abs_diff_eq!(multi, solo, epsilon = 1e-12);
    }

    #[test]
    fn fragmentation_penalty_follows_the_formula() {
        // hyp "b a", ref "a b": m=2, chunks=2, P=R=1.
        let got = meteor_score(&s("b a"), &[s("a b")], &MeteorConfig::default()).unwrap();
        let pen = 0.6 * (2.0f64 / 2.0).powf(0.2);
        assert_abs_diff_eq!(got, 100.0 * (1.0 - pen), epsilon = 1e-9);

        let eight = meteor_score(
            &s("a a a a a a a a"),
            &[s("a a a a a a a a")],
            &MeteorConfig::default(),
        )
        .unwrap();
        let pen8 = 0.6 * (1.0f64 / 8.0).powf(0.2);
        assert_abs_diff_eq!(eight, 100.0 * (1.0 - pen8), epsilon = 1e-9);
    }

    #[test]
    fn lexicon_groups_merge_transitively_only_within_lines() {
        let lex = SynonymLexicon::from_lines("a b\nb c\n");
        assert!(lex.share_group("a", "b"));
        assert!(lex.share_group("b", "c"));
        assert!(!lex.share_group("a", "c"));
        assert!(!lex.share_group("a", "zzz"));
    }

    #[test]
    fn stage_priority_exact_before_stem() {
        // ref has one "dog"; hyp has "dog" and "dogs". Exact stage must
        // claim the surface match, leaving "dogs" unmatched.
        let a = meteor_align(&s("dogs dog"), &s("dog"), &MeteorConfig::default());
        assert_eq!(a.matches(), &[(1, 0, MatchStage::Exact)]);
    }
}
