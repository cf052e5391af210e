//! End-to-end wiring: annotation lookup, edit extraction over a dataset,
//! and scoring of hypothesis edits against reference edits.

use rayon::prelude::*;

use crate::align::edits_between;
use crate::classify::classify_all;
use crate::error::{Error, Result};
use crate::m2::EditBlock;
use crate::score::{match_edits, tally, Axis, Beta, CountMap, ScoreReport};
use crate::textmodel::{heuristic_annotate, AnnotatedSentence, AnnotationIndex, DatasetItem};

/// Which text of a dataset item to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Field {
    Original,
    Reference,
    Hypothesis,
}

impl Field {
    fn suffix(self) -> &'static str {
        match self {
            Field::Original => "orig",
            Field::Reference => "ref",
            Field::Hypothesis => "hyp",
        }
    }
}

/// Where token annotations come from.
#[derive(Debug, Clone)]
pub enum AnnotationSource {
    /// Pre-computed annotations keyed `<item-id>.orig|ref|hyp`.
    External(AnnotationIndex),
    /// The built-in heuristic annotator applied to the raw text.
    Builtin,
}

impl AnnotationSource {
    pub fn sentence(&self, item: &DatasetItem, field: Field) -> Result<AnnotatedSentence> {
        let id = format!("{}.{}", item.id, field.suffix());
        match self {
            AnnotationSource::External(index) => index.get(&id).cloned(),
            AnnotationSource::Builtin => {
                let text = match field {
                    Field::Original => &item.original,
                    Field::Reference => &item.reference,
                    Field::Hypothesis => {
                        item.hypothesis.as_ref().ok_or_else(|| Error::MissingAnnotation(id.clone()))?
                    }
                };
                let mut sentence = heuristic_annotate(text);
                sentence.id = id;
                Ok(sentence)
            }
        }
    }

    pub fn has(&self, item: &DatasetItem, field: Field) -> bool {
        match self {
            AnnotationSource::External(index) => index.get(&format!("{}.{}", item.id, field.suffix())).is_ok(),
            AnnotationSource::Builtin => field != Field::Hypothesis || item.hypothesis.is_some(),
        }
    }
}

/// Runs `f` on a dedicated pool of `jobs` threads (0 = all cores); output order follows input order.
pub fn par_map<T, U, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::contract(format!("cannot start worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Edits turning `item`'s original into `target`, as an edit-file block named after the item.
pub fn extract_item(item: &DatasetItem, target: Field, source: &AnnotationSource, classify: bool) -> Result<EditBlock> {
    let original = source.sentence(item, Field::Original)?;
    let corrected = source.sentence(item, target)?;
    let mut set = edits_between(&original, &corrected);
    if classify {
        set = classify_all(set);
    }
    set.id = item.id.clone();
    Ok(EditBlock::from(&set))
}

pub fn extract_dataset(
    items: &[DatasetItem],
    target: Field,
    source: &AnnotationSource,
    classify: bool,
    jobs: usize,
) -> Result<Vec<EditBlock>> {
    par_map(items, jobs, |item| extract_item(item, target, source, classify))
}

/// Scores hypothesis blocks against reference blocks sentence by sentence.
pub fn compare_blocks(hyp: &[EditBlock], reference: &[EditBlock], axis: Axis, beta: Beta) -> Result<ScoreReport> {
    if hyp.len() != reference.len() {
        return Err(Error::data_no_line(format!(
            "hypothesis has {} sentences but reference has {}",
            hyp.len(),
            reference.len()
        )));
    }
    let mut maps: Vec<CountMap> = Vec::with_capacity(hyp.len());
    for (h, r) in hyp.iter().zip(reference) {
        if h.id != r.id || h.tokens != r.tokens {
            return Err(Error::data_no_line(format!("sentence mismatch at id `{}`", r.id)));
        }
        maps.push(tally(&match_edits(h, r)?, axis));
    }
    crate::score::aggregate(axis, &maps, beta)
}

/// Extracts reference and hypothesis edits for every item and scores them.
pub fn evaluate_dataset(
    items: &[DatasetItem],
    source: &AnnotationSource,
    axis: Axis,
    beta: Beta,
    jobs: usize,
) -> Result<ScoreReport> {
    let reference = extract_dataset(items, Field::Reference, source, true, jobs)?;
    let hyp = extract_dataset(items, Field::Hypothesis, source, true, jobs)?;
    compare_blocks(&hyp, &reference, axis, beta)
}
