//! JSON and TSV renderings of score reports.
//!
//! JSON carries rates in `[0, 1]` with `null` for undefined scores; TSV cells
//! are percentages with two decimals and `-` for undefined scores.

use serde_json::{json, Map, Value};

use crate::score::{ScoreReport, ScoredCounts};

fn counts_json(scored: &ScoredCounts) -> Value {
    json!({
        "tp": scored.counts.tp,
        "fp": scored.counts.fp,
        "fn": scored.counts.fn_,
        "p": scored.scores.precision,
        "r": scored.scores.recall,
        "f": scored.scores.f,
    })
}

pub fn report_value(report: &ScoreReport) -> Value {
    let categories: Map<String, Value> =
        report.categories.iter().map(|(category, scored)| (category.label(), counts_json(scored))).collect();
    json!({
        "axis": report.axis.as_str(),
        "beta": report.beta.value(),
        "categories": categories,
        "total": counts_json(&report.total),
    })
}

pub fn to_json(report: &ScoreReport) -> String {
    let mut text = serde_json::to_string_pretty(&report_value(report)).expect("report serializes");
    text.push('\n');
    text
}

/// Formats a rate as a percentage with two decimals, or `-`.
pub fn percent(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{:.2}", v * 100.0),
        None => "-".to_string(),
    }
}

pub fn to_tsv(report: &ScoreReport) -> String {
    let mut out = format!("category\ttp\tfp\tfn\tP\tR\tF{}\n", report.beta);
    let row = |label: &str, s: &ScoredCounts| {
        format!(
            "{label}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            s.counts.tp,
            s.counts.fp,
            s.counts.fn_,
            percent(s.scores.precision),
            percent(s.scores.recall),
            percent(s.scores.f)
        )
    };
    for (category, scored) in &report.categories {
        if *category != crate::score::Category::Total {
            out.push_str(&row(&category.label(), scored));
        }
    }
    out.push_str(&row("Total", &report.total));
    out
}
