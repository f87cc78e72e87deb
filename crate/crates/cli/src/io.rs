//! File readers and the atomic writer.
//!
//! Corpus files come in two shapes, sniffed from the first non-blank line:
//! JSON Lines (lines starting with `{`) carry explicit instance ids;
//! plain text is one whitespace-tokenized sentence per line, with the
//! 1-based position serving as the id.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use metric_gauntlet_core::corpus::{normalize_tokens, Sentence, Token};
use metric_gauntlet_core::metrics::{EmbeddedSentence, SynonymLexicon};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn looks_like_jsonl(content: &str) -> bool {
    content
        .lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.trim_start().starts_with('{'))
}

fn parse_sentence(line: &str, lowercase: bool, path: &Path, line_no: usize) -> Result<Sentence> {
    normalize_tokens(line, lowercase)
        .map_err(|e| CliError::Validation(format!("{}:{line_no}: {e}", path.display())))
}

fn parse_json_line<'a, T: Deserialize<'a>>(line: &'a str, path: &Path, line_no: usize) -> Result<T> {
    serde_json::from_str(line)
        .map_err(|e| CliError::Validation(format!("{}:{line_no}: {e}", path.display())))
}

/// A hypothesis corpus with alignment ids.
pub struct HypCorpus {
    pub ids: Vec<String>,
    pub sentences: Vec<Sentence>,
    /// True when the file carried explicit ids (JSON Lines form).
    pub has_ids: bool,
}

#[derive(Deserialize)]
struct HypRecord {
    id: String,
    hyp: String,
}

/// Reads `{"id": ..., "hyp": ...}` JSON Lines or plain one-per-line text.
pub fn read_hypotheses(path: &Path, lowercase: bool) -> Result<HypCorpus> {
    let content = read_file(path)?;
    let has_ids = looks_like_jsonl(&content);
    let mut ids = Vec::new();
    let mut sentences = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if has_ids {
            if line.trim().is_empty() {
                continue;
            }
            let rec: HypRecord = parse_json_line(line, path, line_no)?;
            if !seen.insert(rec.id.clone()) {
                return Err(CliError::Validation(format!(
                    "{}: duplicate instance id {:?}",
                    path.display(),
                    rec.id
                )));
            }
            sentences.push(parse_sentence(&rec.hyp, lowercase, path, line_no)?);
            ids.push(rec.id);
        } else {
            sentences.push(parse_sentence(line, lowercase, path, line_no)?);
            ids.push(sentences.len().to_string());
        }
    }
    if sentences.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no instances",
            path.display()
        )));
    }
    Ok(HypCorpus {
        ids,
        sentences,
        has_ids,
    })
}

/// A reference corpus: one or more references per instance.
pub struct RefCorpus {
    pub ids: Vec<String>,
    pub refs: Vec<Vec<Sentence>>,
    pub has_ids: bool,
}

#[derive(Deserialize)]
struct RefRecord {
    id: String,
    refs: Vec<String>,
}

/// Reads `{"id": ..., "refs": [...]}` JSON Lines or plain text with one
/// reference per line.
pub fn read_reference_file(path: &Path, lowercase: bool) -> Result<RefCorpus> {
    let content = read_file(path)?;
    let has_ids = looks_like_jsonl(&content);
    let mut ids = Vec::new();
    let mut refs: Vec<Vec<Sentence>> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if has_ids {
            if line.trim().is_empty() {
                continue;
            }
            let rec: RefRecord = parse_json_line(line, path, line_no)?;
            if rec.refs.is_empty() {
                return Err(CliError::Validation(format!(
                    "{}:{line_no}: instance {:?} has no references",
                    path.display(),
                    rec.id
                )));
            }
            if !seen.insert(rec.id.clone()) {
                return Err(CliError::Validation(format!(
                    "{}: duplicate instance id {:?}",
                    path.display(),
                    rec.id
                )));
            }
            let parsed: Result<Vec<Sentence>> = rec
                .refs
                .iter()
                .map(|r| parse_sentence(r, lowercase, path, line_no))
                .collect();
            refs.push(parsed?);
            ids.push(rec.id);
        } else {
            refs.push(vec![parse_sentence(line, lowercase, path, line_no)?]);
            ids.push(refs.len().to_string());
        }
    }
    if refs.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no instances",
            path.display()
        )));
    }
    Ok(RefCorpus {
        ids,
        refs,
        has_ids,
    })
}

/// Merges parallel reference files into one corpus: instance i's references
/// are the concatenation of every file's references for instance i.
/// Id-bearing files align by id in the first file's order; plain files
/// align by line and must agree on instance count. Mixing the two forms
/// is an error.
pub fn combine_reference_files(files: Vec<RefCorpus>, paths: &[impl AsRef<Path>]) -> Result<RefCorpus> {
    let mut iter = files.into_iter();
    let mut combined = iter.next().expect("at least one reference file");
    for (k, file) in iter.enumerate() {
        let path = paths[k + 1].as_ref();
        if file.has_ids != combined.has_ids {
            return Err(CliError::Validation(
                "cannot mix id-bearing (JSON) and plain reference files".to_string(),
            ));
        }
        if file.has_ids {
            let mut by_id: BTreeMap<String, Vec<Sentence>> =
                file.ids.into_iter().zip(file.refs).collect();
            for (id, slot) in combined.ids.iter().zip(combined.refs.iter_mut()) {
                match by_id.remove(id) {
                    Some(extra) => slot.extend(extra),
                    None => {
                        return Err(CliError::Validation(format!(
                            "{}: missing instance id {id:?}",
                            path.display()
                        )))
                    }
                }
            }
            if let Some(extra_id) = by_id.into_keys().next() {
                return Err(CliError::Validation(format!(
                    "{}: instance id {extra_id:?} does not appear in the first reference file",
                    path.display()
                )));
            }
        } else {
            if file.refs.len() != combined.refs.len() {
                return Err(CliError::Validation(format!(
                    "{}: {} instances, expected {}",
                    path.display(),
                    file.refs.len(),
                    combined.refs.len()
                )));
            }
            for (slot, extra) in combined.refs.iter_mut().zip(file.refs) {
                slot.extend(extra);
            }
        }
    }
    Ok(combined)
}

/// Instance ids, hypotheses, and per-instance reference sets, aligned.
pub type AlignedCorpus = (Vec<String>, Vec<Sentence>, Vec<Vec<Sentence>>);

/// Pairs hypotheses with references. When both sides carry explicit ids
/// the match is by id (reference order wins); otherwise both sides must
/// have the same instance count and align by position.
pub fn align(hyps: HypCorpus, refs: RefCorpus) -> Result<AlignedCorpus> {
    if hyps.has_ids && refs.has_ids {
        let mut by_id: BTreeMap<String, Sentence> =
            hyps.ids.into_iter().zip(hyps.sentences).collect();
        let mut ordered = Vec::with_capacity(refs.ids.len());
        for id in &refs.ids {
            match by_id.remove(id) {
                Some(h) => ordered.push(h),
                None => {
                    return Err(CliError::Validation(format!(
                        "instance id {id:?} has no hypothesis"
                    )))
                }
            }
        }
        if let Some(extra_id) = by_id.into_keys().next() {
            return Err(CliError::Validation(format!(
                "hypothesis id {extra_id:?} has no reference entry"
            )));
        }
        Ok((refs.ids, ordered, refs.refs))
    } else {
        if hyps.sentences.len() != refs.refs.len() {
            return Err(CliError::Validation(format!(
                "hypotheses and references disagree on instance count: {} vs {}",
                hyps.sentences.len(),
                refs.refs.len()
            )));
        }
        let ids = if refs.has_ids { refs.ids } else { hyps.ids };
        Ok((ids, hyps.sentences, refs.refs))
    }
}

/// Reads a plain-text corpus (one sentence per line); rejects JSON Lines.
pub fn read_plain_corpus(path: &Path, lowercase: bool) -> Result<Vec<Sentence>> {
    let content = read_file(path)?;
    if looks_like_jsonl(&content) {
        return Err(CliError::Validation(format!(
            "{}: expected one sentence per line, found JSON lines",
            path.display()
        )));
    }
    let sentences: Result<Vec<Sentence>> = content
        .lines()
        .enumerate()
        .map(|(i, l)| parse_sentence(l, lowercase, path, i + 1))
        .collect();
    let sentences = sentences?;
    if sentences.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no sentences",
            path.display()
        )));
    }
    Ok(sentences)
}

/// One parsed embedding file: an optional rescaling baseline from the
/// header line plus `(id, embedded sentence)` entries in file order.
pub struct EmbeddingFile {
    pub baseline: Option<f64>,
    pub entries: Vec<(String, EmbeddedSentence)>,
}

#[derive(Deserialize)]
struct EmbedRecord {
    id: Option<String>,
    tokens: Option<Vec<String>>,
    vectors: Option<Vec<Vec<f64>>>,
    idf: Option<Vec<f64>>,
    baseline: Option<f64>,
}

/// Reads `{"id", "tokens", "vectors"[, "idf"]}` JSON Lines; a leading
/// `{"baseline": x}` line sets the file's rescaling baseline.
pub fn read_embeddings(path: &Path) -> Result<EmbeddingFile> {
    let content = read_file(path)?;
    let mut baseline = None;
    let mut entries: Vec<(String, EmbeddedSentence)> = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: EmbedRecord = parse_json_line(line, path, line_no)?;
        match (rec.id, rec.tokens, rec.vectors) {
            (None, None, None) if rec.baseline.is_some() => {
                if baseline.is_some() || !entries.is_empty() {
                    return Err(CliError::Validation(format!(
                        "{}:{line_no}: the baseline header must be the first line",
                        path.display()
                    )));
                }
                baseline = rec.baseline;
            }
            (Some(id), Some(tokens), Some(vectors)) => {
                let tokens: std::result::Result<Vec<Token>, _> =
                    tokens.iter().map(|t| Token::new(t.as_str())).collect();
                let tokens = tokens.map_err(|e| {
                    CliError::Validation(format!("{}:{line_no}: {e}", path.display()))
                })?;
                let emb = EmbeddedSentence::new(tokens, vectors, rec.idf).map_err(|e| {
                    CliError::Validation(format!("{}:{line_no}: {e}", path.display()))
                })?;
                entries.push((id, emb));
            }
            _ => {
                return Err(CliError::Validation(format!(
                    "{}:{line_no}: expected a {{\"baseline\"}} header or an \
                     {{\"id\", \"tokens\", \"vectors\"}} entry",
                    path.display()
                )))
            }
        }
    }
    if entries.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no embedding entries",
            path.display()
        )));
    }
    Ok(EmbeddingFile { baseline, entries })
}

/// One embedded hypothesis per instance id, in `ids` order.
pub fn hyp_embeddings_for(ids: &[String], file: EmbeddingFile, path: &Path) -> Result<Vec<EmbeddedSentence>> {
    let mut by_id: BTreeMap<String, EmbeddedSentence> = BTreeMap::new();
    for (id, emb) in file.entries {
        if by_id.insert(id.clone(), emb).is_some() {
            return Err(CliError::Validation(format!(
                "{}: duplicate embedding id {id:?}",
                path.display()
            )));
        }
    }
    ids.iter()
        .map(|id| {
            by_id.remove(id).ok_or_else(|| {
                CliError::Validation(format!(
                    "{}: no embedding for instance id {id:?}",
                    path.display()
                ))
            })
        })
        .collect()
}

/// Embedded references grouped per instance: entries sharing an id map to
/// that instance's references in file order, and the group size must match
/// the instance's reference count.
pub fn ref_embeddings_for(
    ids: &[String],
    refs: &[Vec<Sentence>],
    file: EmbeddingFile,
    path: &Path,
) -> Result<Vec<Vec<EmbeddedSentence>>> {
    let mut by_id: BTreeMap<String, Vec<EmbeddedSentence>> = BTreeMap::new();
    for (id, emb) in file.entries {
        by_id.entry(id).or_default().push(emb);
    }
    let mut grouped = Vec::with_capacity(ids.len());
    for (id, instance_refs) in ids.iter().zip(refs) {
        let group = by_id.remove(id).ok_or_else(|| {
            CliError::Validation(format!(
                "{}: no embeddings for instance id {id:?}",
                path.display()
            ))
        })?;
        if group.len() != instance_refs.len() {
            return Err(CliError::Validation(format!(
                "{}: instance id {id:?} has {} reference embeddings, expected {}",
                path.display(),
                group.len(),
                instance_refs.len()
            )));
        }
        grouped.push(group);
    }
    if let Some(extra_id) = by_id.into_keys().next() {
        return Err(CliError::Validation(format!(
            "{}: embedding id {extra_id:?} matches no instance",
            path.display()
        )));
    }
    Ok(grouped)
}

/// True when every sentence carries idf weights; false when none does;
/// an error when the files mix the two.
pub fn resolve_use_idf<'a>(all: impl Iterator<Item = &'a EmbeddedSentence>) -> Result<bool> {
    let mut with = 0usize;
    let mut without = 0usize;
    for e in all {
        if e.idf().is_some() {
            with += 1;
        } else {
            without += 1;
        }
    }
    match (with, without) {
        (_, 0) => Ok(true),
        (0, _) => Ok(false),
        _ => Err(CliError::Validation(
            "embedding files mix entries with and without idf weights".to_string(),
        )),
    }
}

pub fn read_synonyms(path: &Path) -> Result<SynonymLexicon> {
    Ok(SynonymLexicon::from_lines(&read_file(path)?))
}

pub fn read_stoplist(path: &Path) -> Result<BTreeSet<Token>> {
    let content = read_file(path)?;
    let mut stoplist = BTreeSet::new();
    for word in content.split_whitespace() {
        stoplist.insert(
            Token::new(word)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?,
        );
    }
    Ok(stoplist)
}

/// Writes via a temporary file in the destination directory plus rename,
/// so readers never observe a partial report.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(content.as_bytes())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
