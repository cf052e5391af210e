//! Corpus statistics: summary lengths, BLEU between summaries, the share of
//! summaries that needed correction, and the distribution of error types.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use crate::align::{edits_between, EditSet};
use crate::classify::{classify_all, ContentCode};
use crate::error::{Error, Result};
use crate::pipeline::{par_map, AnnotationSource, Field};
use crate::report::percent;
use crate::textmodel::{tokenize, DatasetItem};

const MAX_ORDER: usize = 4;

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
        }
    }
    counts
}

/// Corpus-level BLEU with orders 1 to 4, uniform weights and no smoothing.
///
/// Clipped n-gram matches are accumulated over the whole corpus. Orders for
/// which the candidates contain no n-gram at all are left out of the
/// geometric mean. The brevity penalty uses total candidate and reference
/// lengths.
pub fn corpus_bleu<S: AsRef<str>>(candidates: &[Vec<S>], references: &[Vec<S>]) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::contract("BLEU needs a non-empty corpus"));
    }
    if candidates.len() != references.len() {
        return Err(Error::contract(format!(
            "BLEU needs paired lists, got {} candidates and {} references",
            candidates.len(),
            references.len()
        )));
    }
    let mut matches = [0usize; MAX_ORDER];
    let mut possible = [0usize; MAX_ORDER];
    let mut cand_len = 0;
    let mut ref_len = 0;
    for (cand, reference) in candidates.iter().zip(references) {
        cand_len += cand.len();
        ref_len += reference.len();
        for n in 1..=MAX_ORDER {
            let ref_counts = ngram_counts(reference, n);
            for (gram, count) in ngram_counts(cand, n) {
                matches[n - 1] += count.min(ref_counts.get(&gram).copied().unwrap_or(0));
            }
            possible[n - 1] += cand.len().saturating_sub(n - 1);
        }
    }

    let orders: Vec<usize> = (0..MAX_ORDER).filter(|&k| possible[k] > 0).collect();
    if orders.is_empty() {
        return Ok(if ref_len == 0 { 1.0 } else { 0.0 });
    }
    if orders.iter().any(|&k| matches[k] == 0) {
        return Ok(0.0);
    }
    let log_precision: f64 =
        orders.iter().map(|&k| (matches[k] as f64 / possible[k] as f64).ln()).sum::<f64>() / orders.len() as f64;
    let brevity = if cand_len < ref_len { (1.0 - ref_len as f64 / cand_len as f64).exp() } else { 1.0 };
    Ok(brevity * log_precision.exp())
}

/// Percentage of token-sequence pairs that differ.
pub fn error_rate_of<S: AsRef<str>>(pairs: &[(Vec<S>, Vec<S>)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::contract("error rate needs at least one item"));
    }
    let differing = pairs
        .iter()
        .filter(|(o, r)| o.len() != r.len() || o.iter().zip(r).any(|(a, b)| a.as_ref() != b.as_ref()))
        .count();
    Ok(100.0 * differing as f64 / pairs.len() as f64)
}

/// Percentage of items whose tokenized reference differs from the tokenized original.
pub fn error_rate(items: &[DatasetItem]) -> Result<f64> {
    let pairs: Vec<(Vec<String>, Vec<String>)> =
        items.iter().map(|item| (tokenize(&item.original), tokenize(&item.reference))).collect();
    error_rate_of(&pairs)
}

/// Mean token counts over items whose original needed correction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AvgLengths {
    pub items: usize,
    pub original: Option<f64>,
    pub reference: Option<f64>,
    /// Hypothesis lengths, over filtered items that have a hypothesis.
    pub corrected: Option<f64>,
}

fn mean(values: &[usize]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<usize>() as f64 / values.len() as f64)
}

pub fn avg_lengths(items: &[DatasetItem], source: &AnnotationSource) -> Result<AvgLengths> {
    let mut original = Vec::new();
    let mut reference = Vec::new();
    let mut corrected = Vec::new();
    for item in items {
        let o = source.sentence(item, Field::Original)?;
        let r = source.sentence(item, Field::Reference)?;
        if o.surfaces() == r.surfaces() {
            continue;
        }
        original.push(o.len());
        reference.push(r.len());
        if item.hypothesis.is_some() {
            corrected.push(source.sentence(item, Field::Hypothesis)?.len());
        }
    }
    Ok(AvgLengths {
        items: original.len(),
        original: mean(&original),
        reference: mean(&reference),
        corrected: mean(&corrected),
    })
}

/// Relative share of each content code among classified edits.
pub fn category_distribution(editsets: &[EditSet]) -> BTreeMap<ContentCode, f64> {
    let mut counts: BTreeMap<ContentCode, usize> = BTreeMap::new();
    for edit in editsets.iter().flat_map(|s| &s.edits) {
        if let Some(code) = edit.content {
            *counts.entry(code).or_default() += 1;
        }
    }
    let total: usize = counts.values().sum();
    counts.into_iter().map(|(code, n)| (code, n as f64 / total as f64)).collect()
}

/// Statistics for one `(corpus, system)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub corpus: Option<String>,
    pub system: Option<String>,
    pub items: usize,
    pub error_rate: f64,
    pub lengths: AvgLengths,
    pub bleu_origin_vs_reference: f64,
    /// Only defined when every item in the group has a hypothesis.
    pub bleu_origin_vs_corrected: Option<f64>,
    pub category_distribution: BTreeMap<ContentCode, f64>,
}

/// Computes [`CorpusStats`] per `(corpus, system)` group, groups in sorted order.
pub fn corpus_stats(items: &[DatasetItem], source: &AnnotationSource, jobs: usize) -> Result<Vec<CorpusStats>> {
    let mut groups: BTreeMap<(Option<String>, Option<String>), Vec<DatasetItem>> = BTreeMap::new();
    for item in items {
        groups.entry((item.corpus.clone(), item.system.clone())).or_default().push(item.clone());
    }
    let mut out = Vec::with_capacity(groups.len());
    for ((corpus, system), group) in groups {
        let annotated = par_map(&group, jobs, |item| {
            let original = source.sentence(item, Field::Original)?;
            let reference = source.sentence(item, Field::Reference)?;
            let hypothesis =
                if item.hypothesis.is_some() { Some(source.sentence(item, Field::Hypothesis)?) } else { None };
            let edits = classify_all(edits_between(&original, &reference));
            Ok((original, reference, hypothesis, edits))
        })?;

        let tokens = |s: &crate::textmodel::AnnotatedSentence| -> Vec<String> {
            s.surfaces().into_iter().map(str::to_string).collect()
        };
        let pairs: Vec<(Vec<String>, Vec<String>)> =
            annotated.iter().map(|(o, r, _, _)| (tokens(o), tokens(r))).collect();
        let originals: Vec<Vec<String>> = pairs.iter().map(|(o, _)| o.clone()).collect();
        let references: Vec<Vec<String>> = pairs.iter().map(|(_, r)| r.clone()).collect();
        let hypotheses: Option<Vec<Vec<String>>> =
            annotated.iter().map(|(_, _, h, _)| h.as_ref().map(tokens)).collect();
        let editsets: Vec<EditSet> = annotated.into_iter().map(|(_, _, _, e)| e).collect();

        out.push(CorpusStats {
            corpus,
            system,
            items: group.len(),
            error_rate: error_rate_of(&pairs)?,
            lengths: avg_lengths(&group, source)?,
            bleu_origin_vs_reference: corpus_bleu(&originals, &references)?,
            bleu_origin_vs_corrected: hypotheses.map(|h| corpus_bleu(&originals, &h)).transpose()?,
            category_distribution: category_distribution(&editsets),
        });
    }
    Ok(out)
}

fn fixed(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

pub fn stats_to_tsv(stats: &[CorpusStats]) -> String {
    let mut header = vec![
        "corpus",
        "system",
        "items",
        "error_rate",
        "error_items",
        "avg_len_original",
        "avg_len_reference",
        "avg_len_corrected",
        "bleu_origin_vs_reference",
        "bleu_origin_vs_corrected",
    ]
    .into_iter()
    .map(str::to_string)
    .collect::<Vec<_>>();
    header.extend(ContentCode::ALL.iter().map(|c| c.code().to_string()));
    let mut out = header.join("\t");
    out.push('\n');
    for s in stats {
        let mut row = vec![
            s.corpus.clone().unwrap_or_else(|| "-".into()),
            s.system.clone().unwrap_or_else(|| "-".into()),
            s.items.to_string(),
            format!("{:.2}", s.error_rate),
            s.lengths.items.to_string(),
            fixed(s.lengths.original),
            fixed(s.lengths.reference),
            fixed(s.lengths.corrected),
            fixed(Some(s.bleu_origin_vs_reference)),
            fixed(s.bleu_origin_vs_corrected),
        ];
        let any_edits = !s.category_distribution.is_empty();
        row.extend(ContentCode::ALL.iter().map(|code| {
            if any_edits {
                percent(Some(s.category_distribution.get(code).copied().unwrap_or(0.0)))
            } else {
                "-".to_string()
            }
        }));
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn stats_to_json(stats: &[CorpusStats]) -> String {
    let groups: Vec<Value> = stats
        .iter()
        .map(|s| {
            let distribution: Map<String, Value> =
                s.category_distribution.iter().map(|(code, share)| (code.code().to_string(), json!(share))).collect();
            json!({
                "corpus": s.corpus,
                "system": s.system,
                "items": s.items,
                "error_rate": s.error_rate,
                "error_items": s.lengths.items,
                "avg_len_original": s.lengths.original,
                "avg_len_reference": s.lengths.reference,
                "avg_len_corrected": s.lengths.corrected,
                "bleu_origin_vs_reference": s.bleu_origin_vs_reference,
                "bleu_origin_vs_corrected": s.bleu_origin_vs_corrected,
                "category_distribution": distribution,
            })
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&Value::Array(groups)).expect("stats serialize");
    text.push('\n');
    text
}
