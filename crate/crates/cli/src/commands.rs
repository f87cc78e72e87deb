//! The four subcommands: score, loo, perturb, search-ss.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use metric_gauntlet_core::corpus::{build_vocabulary, ReferenceBundle, Sentence, Token};
use metric_gauntlet_core::metrics::{EmbeddingInputs, MetricReport, ScoreConfig};
use metric_gauntlet_core::metrics::score_all;
use metric_gauntlet_core::probes::{
    leave_one_out, perturb_and_score, search_representative_sentence, LooEmbeddings, Objective,
    PerturbSpec, SearchOptions,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io;
use crate::table;

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Both,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Report rendering
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write the report to this file (atomically) instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lowercase all input text while tokenizing
    #[arg(long)]
    pub lowercase: bool,
}

impl CommonArgs {
    fn emit(&self, table: String, json: String) -> Result<()> {
        let body = match self.format {
            OutputFormat::Table => table,
            OutputFormat::Json => json,
            OutputFormat::Both => format!("{table}{json}"),
        };
        match &self.out {
            Some(path) => io::write_atomic(path, &body),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize infallibly");
    s.push('\n');
    s
}

fn load_score_config(synonyms: Option<&Path>) -> Result<ScoreConfig> {
    let mut cfg = ScoreConfig::new();
    if let Some(path) = synonyms {
        cfg.meteor.synonyms = Some(io::read_synonyms(path)?);
    }
    Ok(cfg)
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Hypotheses: JSON lines {"id", "hyp"} or plain text (one per line)
    #[arg(long)]
    pub hyps: PathBuf,
    /// References: JSON lines {"id", "refs": [...]} or plain text; repeat
    /// the flag for parallel corpora contributing one reference each
    #[arg(long, required = true)]
    pub refs: Vec<PathBuf>,
    /// Embedding files enabling the embedding F-score: exactly two, the
    /// hypotheses' embeddings then the references' embeddings
    #[arg(long)]
    pub embeddings: Vec<PathBuf>,
    /// Synonym lexicon (one space-separated synonym set per line)
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    /// Rescaling baseline for the embedding score; overrides file headers
    #[arg(long)]
    pub baseline: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_score(args: &ScoreArgs) -> Result<()> {
    let hyps = io::read_hypotheses(&args.hyps, args.common.lowercase)?;
    let ref_files: Result<Vec<io::RefCorpus>> = args
        .refs
        .iter()
        .map(|p| io::read_reference_file(p, args.common.lowercase))
        .collect();
    let refs = io::combine_reference_files(ref_files?, &args.refs)?;
    let (ids, hyps, refs) = io::align(hyps, refs)?;

    let mut cfg = load_score_config(args.synonyms.as_deref())?;
    let embeddings = match args.embeddings.len() {
        0 => None,
        2 => {
            let hyp_file = io::read_embeddings(&args.embeddings[0])?;
            let ref_file = io::read_embeddings(&args.embeddings[1])?;
            let header_baseline = hyp_file.baseline.or(ref_file.baseline);
            let hyp_embeds = io::hyp_embeddings_for(&ids, hyp_file, &args.embeddings[0])?;
            let ref_embeds = io::ref_embeddings_for(&ids, &refs, ref_file, &args.embeddings[1])?;
            cfg.embed_baseline = args.baseline.or(header_baseline).unwrap_or(0.0);
            cfg.embed_use_idf = io::resolve_use_idf(
                hyp_embeds.iter().chain(ref_embeds.iter().flatten()),
            )?;
            Some(EmbeddingInputs {
                hyps: hyp_embeds,
                refs: ref_embeds,
            })
        }
        n => {
            return Err(CliError::Validation(format!(
                "score takes exactly two --embeddings files (hypotheses, references), got {n}"
            )))
        }
    };

    if refs.len() == 1 {
        eprintln!(
            "warning: CIDEr-D degenerates on a single-instance corpus (every idf is zero); \
             reporting 0"
        );
    }
    let report = score_all(&hyps, &refs, &cfg, embeddings.as_ref())?;
    args.common
        .emit(table::render_score(&report), to_json(&report))
}

/// The JSON document `loo` emits; `protocol` is "RvR" (reference vs
/// reference) or "SvR" (system vs reference).
#[derive(Debug, Serialize, Deserialize)]
pub struct LooReport {
    pub protocol: String,
    pub per_iteration: Vec<MetricReport>,
    pub mean: MetricReport,
    pub sd: MetricReport,
}

#[derive(Debug, Args)]
pub struct LooArgs {
    /// Parallel reference corpora: plain text, one sentence per line,
    /// line-aligned across files; at least two files
    #[arg(long, required = true)]
    pub refs: Vec<PathBuf>,
    /// System output corpus (plain text): switches RvR to SvR
    #[arg(long)]
    pub hyps: Option<PathBuf>,
    /// Embedding files in --refs order (entries in line order), plus one
    /// more for the system corpus (last) when --hyps is given
    #[arg(long)]
    pub embeddings: Vec<PathBuf>,
    /// Synonym lexicon (one space-separated synonym set per line)
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    /// Rescaling baseline for the embedding score; overrides file headers
    #[arg(long)]
    pub baseline: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_loo(args: &LooArgs) -> Result<()> {
    let corpora: Result<Vec<Vec<Sentence>>> = args
        .refs
        .iter()
        .map(|p| io::read_plain_corpus(p, args.common.lowercase))
        .collect();
    let bundle = ReferenceBundle::new(corpora?)?;
    let sys = args
        .hyps
        .as_deref()
        .map(|p| io::read_plain_corpus(p, args.common.lowercase))
        .transpose()?;

    let mut cfg = load_score_config(args.synonyms.as_deref())?;
    let embeddings = if args.embeddings.is_empty() {
        None
    } else {
        let expected = bundle.num_corpora() + usize::from(sys.is_some());
        if args.embeddings.len() != expected {
            return Err(CliError::Validation(format!(
                "expected {expected} --embeddings files (one per reference corpus{}), got {}",
                if sys.is_some() { ", system last" } else { "" },
                args.embeddings.len()
            )));
        }
        let mut header_baseline = None;
        let mut corpora_embeds = Vec::new();
        for path in &args.embeddings {
            let file = io::read_embeddings(path)?;
            header_baseline = header_baseline.or(file.baseline);
            let entries: Vec<_> = file.entries.into_iter().map(|(_, e)| e).collect();
            if entries.len() != bundle.num_instances() {
                return Err(CliError::Validation(format!(
                    "{}: {} embedding entries, expected {}",
                    path.display(),
                    entries.len(),
                    bundle.num_instances()
                )));
            }
            corpora_embeds.push(entries);
        }
        let sys_embeds = if sys.is_some() { corpora_embeds.pop() } else { None };
        cfg.embed_baseline = args.baseline.or(header_baseline).unwrap_or(0.0);
        cfg.embed_use_idf = io::resolve_use_idf(
            corpora_embeds
                .iter()
                .flatten()
                .chain(sys_embeds.iter().flatten()),
        )?;
        Some(LooEmbeddings {
            corpora: corpora_embeds,
            sys: sys_embeds,
        })
    };

    let result = leave_one_out(&bundle, sys.as_deref(), &cfg, embeddings.as_ref())?;
    let report = LooReport {
        protocol: if sys.is_some() { "SvR" } else { "RvR" }.to_string(),
        per_iteration: result.per_iteration,
        mean: result.mean,
        sd: result.sd,
    };
    args.common
        .emit(table::render_loo(&report), to_json(&report))
}

/// On-disk probe description.
#[derive(Debug, Deserialize)]
struct ProbeConfig {
    mode: String,
    #[serde(default)]
    targets: Vec<String>,
    #[serde(rename = "T")]
    threshold: Option<u64>,
    fraction: Option<f64>,
    seed: Option<u64>,
    stoplist_file: Option<String>,
    replacement: Option<String>,
}

fn parse_token(raw: &str, context: &str) -> Result<Token> {
    Token::new(raw).map_err(|e| CliError::Validation(format!("{context}: {e}")))
}

fn build_perturb_spec(
    path: &Path,
    cli_seed: u64,
    cli_stoplist: Option<&Path>,
) -> Result<PerturbSpec> {
    let raw = io::read_file(path)?;
    let cfg: ProbeConfig = serde_json::from_str(&raw)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let context = path.display().to_string();
    let replacement = match &cfg.replacement {
        Some(r) => Some(parse_token(r, &context)?),
        None => None,
    };
    let targets: Result<Vec<Token>> =
        cfg.targets.iter().map(|t| parse_token(t, &context)).collect();
    let targets = targets?;
    match cfg.mode.as_str() {
        "targeted" => Ok(PerturbSpec::Targeted {
            targets,
            replacement: replacement.unwrap_or_else(Token::unk),
        }),
        "threshold" => {
            let threshold = cfg.threshold.ok_or_else(|| {
                CliError::Validation(format!("{context}: threshold mode needs \"T\""))
            })?;
            Ok(PerturbSpec::Threshold {
                threshold,
                replacement: replacement.unwrap_or_else(Token::unk),
            })
        }
        "random_content" => {
            let target_fraction = cfg.fraction.ok_or_else(|| {
                CliError::Validation(format!("{context}: random_content mode needs \"fraction\""))
            })?;
            let stoplist: BTreeSet<Token> = match (cli_stoplist, &cfg.stoplist_file) {
                (Some(p), _) => io::read_stoplist(p)?,
                (None, Some(f)) => io::read_stoplist(Path::new(f))?,
                (None, None) => {
                    return Err(CliError::Validation(format!(
                        "{context}: random_content mode needs a stoplist \
                         (--stoplist flag or \"stoplist_file\")"
                    )))
                }
            };
            Ok(PerturbSpec::RandomContent {
                target_fraction,
                seed: cfg.seed.unwrap_or(cli_seed),
                stoplist,
                replacement: replacement.unwrap_or_else(Token::unk),
            })
        }
        "swap" => {
            if targets.len() != 1 {
                return Err(CliError::Validation(format!(
                    "{context}: swap mode needs exactly one target token"
                )));
            }
            let to = replacement.ok_or_else(|| {
                CliError::Validation(format!("{context}: swap mode needs \"replacement\""))
            })?;
            Ok(PerturbSpec::Swap {
                from: targets.into_iter().next().expect("checked length"),
                to,
            })
        }
        other => Err(CliError::Validation(format!(
            "{context}: unknown mode {other:?} \
             (expected targeted, threshold, random_content, or swap)"
        ))),
    }
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    /// Parallel corpora, plain text: the first file is R1 (perturbed and
    /// scored as the hypothesis corpus), the rest are held-out references
    #[arg(long, required = true)]
    pub refs: Vec<PathBuf>,
    /// Training corpus supplying threshold-mode frequencies (default: R1)
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Probe JSON: {"mode", "targets", "T", "fraction", "seed",
    /// "stoplist_file", "replacement"}
    #[arg(long)]
    pub probe_config: PathBuf,
    /// Stoplist for random_content mode; overrides the config's file
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
    /// Synonym lexicon (one space-separated synonym set per line)
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    /// Seed for random_content when the probe config omits one
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_perturb(args: &PerturbArgs) -> Result<()> {
    if args.refs.len() < 2 {
        return Err(CliError::Validation(
            "perturb needs at least two --refs files: R1 plus held-out references".to_string(),
        ));
    }
    let corpora: Result<Vec<Vec<Sentence>>> = args
        .refs
        .iter()
        .map(|p| io::read_plain_corpus(p, args.common.lowercase))
        .collect();
    let corpora = corpora?;
    let n = corpora[0].len();
    for (path, corpus) in args.refs.iter().zip(&corpora).skip(1) {
        if corpus.len() != n {
            return Err(CliError::Validation(format!(
                "{}: {} sentences, expected {} (parallel corpora must be line-aligned)",
                path.display(),
                corpus.len(),
                n
            )));
        }
    }
    let r1 = &corpora[0];
    let heldout: Vec<Vec<Sentence>> = (0..n)
        .map(|i| corpora[1..].iter().map(|c| c[i].clone()).collect())
        .collect();

    let vocab_corpus = match &args.train {
        Some(path) => io::read_plain_corpus(path, args.common.lowercase)?,
        None => r1.clone(),
    };
    let vocab = build_vocabulary(&vocab_corpus)?;
    let spec = build_perturb_spec(&args.probe_config, args.seed, args.stoplist.as_deref())?;
    let cfg = load_score_config(args.synonyms.as_deref())?;

    let outcome = perturb_and_score(r1, &heldout, &spec, &vocab, &cfg)?;
    args.common
        .emit(table::render_perturb(&outcome), to_json(&outcome))
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Training corpus: plain text, one candidate sentence per line
    #[arg(long)]
    pub train: PathBuf,
    /// Test references: JSON lines {"id", "refs": [...]} or plain text;
    /// repeatable for parallel corpora
    #[arg(long, required = true)]
    pub refs: Vec<PathBuf>,
    /// Metric the search maximizes: bleu1..bleu4, meteor, rouge-l, cider-d
    #[arg(long, default_value = "bleu4")]
    pub objective: String,
    /// Force the exhaustive per-candidate oracle (skips the indexed path)
    #[arg(long)]
    pub naive: bool,
    /// Synonym lexicon (one space-separated synonym set per line)
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_search_ss(args: &SearchArgs) -> Result<()> {
    let train = io::read_plain_corpus(&args.train, args.common.lowercase)?;
    let ref_files: Result<Vec<io::RefCorpus>> = args
        .refs
        .iter()
        .map(|p| io::read_reference_file(p, args.common.lowercase))
        .collect();
    let refs = io::combine_reference_files(ref_files?, &args.refs)?.refs;

    let objective: Objective = args
        .objective
        .parse()
        .map_err(|e| CliError::Validation(format!("--objective: {e}")))?;
    let opts = SearchOptions {
        objective,
        force_naive: args.naive,
        score: load_score_config(args.synonyms.as_deref())?,
        ..SearchOptions::default()
    };
    let result = search_representative_sentence(&train, &refs, &opts)?;
    args.common
        .emit(table::render_search(&result), to_json(&result))
}
