//! Human-readable report rendering.
//!
//! Every renderer is a pure function of the same structs the JSON output
//! serializes, so parsing a JSON report and re-rendering reproduces the
//! table exactly.

use metric_gauntlet_core::metrics::MetricReport;
use metric_gauntlet_core::probes::{Objective, PerturbOutcome, SearchResult};

use crate::commands::LooReport;

/// Display names in `MetricReport::values()` order.
const DISPLAY_NAMES: [&str; 8] = [
    "BLEU-1", "BLEU-2", "BLEU-3", "BLEU-4", "METEOR", "ROUGE-L", "CIDEr-D", "Embed-F",
];

/// The 0-100 metrics print with 2 decimals; CIDEr-D and the embedding
/// score with 3.
fn decimals(field_index: usize) -> usize {
    if field_index >= 6 {
        3
    } else {
        2
    }
}

fn fmt_value(field_index: usize, v: f64) -> String {
    format!("{:.*}", decimals(field_index), v)
}

fn fmt_objective_score(objective: Objective, v: f64) -> String {
    match objective {
        Objective::CiderD => format!("{v:.3}"),
        _ => format!("{v:.2}"),
    }
}

/// Aligns columns: first column left-justified, the rest right-justified.
fn align_columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[String]| {
        for (c, cell) in cells.iter().enumerate() {
            if c > 0 {
                out.push_str("  ");
            }
            if c == 0 {
                out.push_str(&format!("{cell:<width$}", width = widths[c]));
            } else {
                out.push_str(&format!("{cell:>width$}", width = widths[c]));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    push_row(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        push_row(row);
    }
    out
}

/// `(name, formatted value)` pairs for the metrics present in the report.
fn metric_rows(reports: &[&MetricReport]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, name) in DISPLAY_NAMES.iter().enumerate() {
        let values: Vec<Option<f64>> = reports.iter().map(|r| r.values()[i]).collect();
        if values.iter().all(Option::is_some) {
            let mut row = vec![name.to_string()];
            row.extend(values.into_iter().map(|v| fmt_value(i, v.unwrap())));
            rows.push(row);
        }
    }
    rows
}

pub fn render_score(report: &MetricReport) -> String {
    align_columns(&["metric", "score"], &metric_rows(&[report]))
}

pub fn render_loo(report: &LooReport) -> String {
    let mut rows = Vec::new();
    for (i, name) in DISPLAY_NAMES.iter().enumerate() {
        let (mean, sd) = (report.mean.values()[i], report.sd.values()[i]);
        if let (Some(mean), Some(sd)) = (mean, sd) {
            rows.push(vec![
                name.to_string(),
                format!("{} ±{}", fmt_value(i, mean), fmt_value(i, sd)),
            ]);
        }
    }
    let mut out = format!(
        "leave-one-out {} over {} corpora\n",
        report.protocol,
        report.per_iteration.len()
    );
    out.push_str(&align_columns(&["metric", "mean ±sd"], &rows));
    out
}

pub fn render_perturb(outcome: &PerturbOutcome) -> String {
    let mut out = format!(
        "substituted {} tokens ({:.2}%)\n",
        outcome.substituted_tokens,
        100.0 * outcome.substitution_fraction
    );
    let rows = metric_rows(&[
        &outcome.report_before,
        &outcome.report_after,
        &outcome.deltas,
    ]);
    out.push_str(&align_columns(
        &["metric", "before", "after", "delta"],
        &rows,
    ));
    out
}

pub fn render_search(result: &SearchResult) -> String {
    let mut out = String::new();
    out.push_str(&format!("winner: {}\n", result.sentence));
    out.push_str(&format!(
        "objective: {} = {}\n",
        result.objective,
        fmt_objective_score(result.objective, result.objective_score)
    ));
    out.push_str(&format!(
        "candidates evaluated: {}\n",
        result.candidates_evaluated
    ));
    out.push_str(&align_columns(
        &["metric", "score"],
        &metric_rows(&[&result.full_report]),
    ));
    out
}
