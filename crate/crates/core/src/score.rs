//! Hypothesis-vs-reference edit comparison and precision/recall/F-beta.
//!
//! An edit is a true positive when the hypothesis and the reference contain
//! an edit with the same original span and the same correction string. TPs
//! and FNs are counted under the reference edit's category, FPs under the
//! hypothesis edit's. Scores are micro-averaged: counts are summed over the
//! corpus before precision and recall are computed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::align::{Edit, EditSet, Form};
use crate::classify::{CombinedCode, ContentCode};
use crate::error::{Error, Result};

/// Which label an edit is counted under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Form,
    Content,
    Combined,
    Total,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Form => "form",
            Axis::Content => "content",
            Axis::Combined => "combined",
            Axis::Total => "total",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "form" => Ok(Axis::Form),
            "content" => Ok(Axis::Content),
            "combined" => Ok(Axis::Combined),
            "total" => Ok(Axis::Total),
            other => Err(Error::contract(format!("unknown axis `{other}`"))),
        }
    }
}

/// A category bucket. `None` content means the edit was never classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Form(Form),
    Content(Option<ContentCode>),
    Combined(Form, Option<ContentCode>),
    Total,
}

impl Category {
    pub fn of(edit: &Edit, axis: Axis) -> Category {
        match axis {
            Axis::Form => Category::Form(edit.form()),
            Axis::Content => Category::Content(edit.content),
            Axis::Combined => Category::Combined(edit.form(), edit.content),
            Axis::Total => Category::Total,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Category::Form(_) => Axis::Form,
            Category::Content(_) => Axis::Content,
            Category::Combined(..) => Axis::Combined,
            Category::Total => Axis::Total,
        }
    }

    pub fn label(self) -> String {
        match self {
            Category::Form(form) => form.to_string(),
            Category::Content(Some(code)) => code.code().to_string(),
            Category::Content(None) => "NA".to_string(),
            Category::Combined(form, Some(content)) => CombinedCode { form, content }.to_string(),
            Category::Combined(form, None) => format!("{form}:NA"),
            Category::Total => "Total".to_string(),
        }
    }

    /// Categories always listed for an axis, even when nothing was counted.
    pub fn taxonomy(axis: Axis) -> Vec<Category> {
        match axis {
            Axis::Form => Form::ALL.into_iter().map(Category::Form).collect(),
            Axis::Content => ContentCode::ALL.into_iter().map(|c| Category::Content(Some(c))).collect(),
            Axis::Combined => Vec::new(),
            Axis::Total => vec![Category::Total],
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl CategoryCounts {
    pub fn new(tp: u64, fp: u64, fn_: u64) -> Self {
        CategoryCounts { tp, fp, fn_ }
    }

    pub fn is_zero(&self) -> bool {
        self.tp == 0 && self.fp == 0 && self.fn_ == 0
    }
}

impl Add for CategoryCounts {
    type Output = CategoryCounts;

    fn add(self, rhs: Self) -> Self {
        CategoryCounts { tp: self.tp + rhs.tp, fp: self.fp + rhs.fp, fn_: self.fn_ + rhs.fn_ }
    }
}

impl AddAssign for CategoryCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

/// F-measure weight; must be positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Beta(f64);

impl Beta {
    pub fn new(value: f64) -> Result<Beta> {
        if value.is_finite() && value > 0.0 {
            Ok(Beta(value))
        } else {
            Err(Error::contract(format!("beta must be a positive number, got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Beta {
    fn default() -> Self {
        Beta(0.5)
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Beta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: f64 = s.parse().map_err(|_| Error::contract(format!("beta `{s}` is not a number")))?;
        Beta::new(value)
    }
}

/// Precision, recall and F in `[0, 1]`; all three are `None` when there is nothing to score.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ScoreTriple {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f: Option<f64>,
}

impl ScoreTriple {
    pub fn is_defined(&self) -> bool {
        self.precision.is_some()
    }
}

/// Computes precision, recall and F-beta from counts.
///
/// With no hypothesis edits precision is 1; with no reference edits recall
/// is 1; F is 0 when its denominator vanishes. All-zero counts are undefined.
pub fn f_beta(counts: CategoryCounts, beta: Beta) -> ScoreTriple {
    if counts.is_zero() {
        return ScoreTriple::default();
    }
    let tp = counts.tp as f64;
    let ratio = |den: u64| if den == 0 { 1.0 } else { tp / den as f64 };
    let p = ratio(counts.tp + counts.fp);
    let r = ratio(counts.tp + counts.fn_);
    let b2 = beta.0 * beta.0;
    let den = b2 * p + r;
    let f = if counts.tp == 0 || den == 0.0 { 0.0 } else { (1.0 + b2) * p * r / den };
    ScoreTriple { precision: Some(p), recall: Some(r), f: Some(f) }
}

/// What scoring needs from a sentence: its original tokens and its edits.
pub trait SentenceEdits {
    fn sentence_id(&self) -> &str;
    fn original_tokens(&self) -> Vec<&str>;
    fn edits(&self) -> &[Edit];
}

impl SentenceEdits for EditSet {
    fn sentence_id(&self) -> &str {
        &self.id
    }

    fn original_tokens(&self) -> Vec<&str> {
        self.original.surfaces()
    }

    fn edits(&self) -> &[Edit] {
        &self.edits
    }
}

/// Result of comparing two edit lists over the same original sentence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Matching {
    /// `(hypothesis, reference)` pairs.
    pub matched: Vec<(Edit, Edit)>,
    pub false_positives: Vec<Edit>,
    pub false_negatives: Vec<Edit>,
}

/// Pairs hypothesis and reference edits with equal original span and correction.
pub fn match_edits<H: SentenceEdits + ?Sized, R: SentenceEdits + ?Sized>(hyp: &H, reference: &R) -> Result<Matching> {
    if hyp.original_tokens() != reference.original_tokens() {
        return Err(Error::contract(format!(
            "sentence `{}`: hypothesis and reference edits refer to different original sentences",
            reference.sentence_id()
        )));
    }
    let mut by_key: HashMap<(usize, usize, &str), Vec<usize>> = HashMap::new();
    for (i, e) in reference.edits().iter().enumerate().rev() {
        by_key.entry((e.o_start, e.o_end, e.correction.as_str())).or_default().push(i);
    }
    let mut used = vec![false; reference.edits().len()];
    let mut matching = Matching::default();
    for h in hyp.edits() {
        match by_key.get_mut(&(h.o_start, h.o_end, h.correction.as_str())).and_then(Vec::pop) {
            Some(i) => {
                used[i] = true;
                matching.matched.push((h.clone(), reference.edits()[i].clone()));
            }
            None => matching.false_positives.push(h.clone()),
        }
    }
    matching.false_negatives =
        reference.edits().iter().zip(&used).filter(|(_, used)| !**used).map(|(e, _)| e.clone()).collect();
    Ok(matching)
}

/// Per-category counts on one axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMap {
    pub axis: Axis,
    pub counts: BTreeMap<Category, CategoryCounts>,
}

impl CountMap {
    pub fn new(axis: Axis) -> Self {
        CountMap { axis, counts: BTreeMap::new() }
    }

    pub fn total(&self) -> CategoryCounts {
        self.counts.values().copied().fold(CategoryCounts::default(), Add::add)
    }

    /// Adds another map's counts; both maps must be on the same axis.
    pub fn merge(&mut self, other: &CountMap) -> Result<()> {
        if other.axis != self.axis {
            return Err(Error::contract(format!("cannot merge {} counts into {} counts", other.axis, self.axis)));
        }
        for (category, counts) in &other.counts {
            *self.counts.entry(*category).or_default() += *counts;
        }
        Ok(())
    }
}

/// Counts a matching on `axis`: TPs under the reference edit's label.
pub fn tally(matching: &Matching, axis: Axis) -> CountMap {
    let mut map = CountMap::new(axis);
    for (_, reference) in &matching.matched {
        map.counts.entry(Category::of(reference, axis)).or_default().tp += 1;
    }
    for hyp in &matching.false_positives {
        map.counts.entry(Category::of(hyp, axis)).or_default().fp += 1;
    }
    for reference in &matching.false_negatives {
        map.counts.entry(Category::of(reference, axis)).or_default().fn_ += 1;
    }
    map
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredCounts {
    pub counts: CategoryCounts,
    pub scores: ScoreTriple,
}

impl ScoredCounts {
    pub fn new(counts: CategoryCounts, beta: Beta) -> Self {
        ScoredCounts { counts, scores: f_beta(counts, beta) }
    }
}

/// Corpus-level scores on one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub axis: Axis,
    pub beta: Beta,
    pub categories: BTreeMap<Category, ScoredCounts>,
    pub total: ScoredCounts,
}

impl ScoreReport {
    /// Scores a count map, listing the axis taxonomy even where nothing was counted.
    pub fn from_counts(map: &CountMap, beta: Beta) -> ScoreReport {
        let mut categories: BTreeMap<Category, ScoredCounts> = Category::taxonomy(map.axis)
            .into_iter()
            .map(|c| (c, ScoredCounts::new(CategoryCounts::default(), beta)))
            .collect();
        for (category, counts) in &map.counts {
            categories.insert(*category, ScoredCounts::new(*counts, beta));
        }
        ScoreReport { axis: map.axis, beta, categories, total: ScoredCounts::new(map.total(), beta) }
    }

    pub fn get(&self, category: Category) -> Option<&ScoredCounts> {
        self.categories.get(&category)
    }
}

/// Sums per-sentence counts and scores the sums.
pub fn aggregate(axis: Axis, maps: &[CountMap], beta: Beta) -> Result<ScoreReport> {
    let mut sum = CountMap::new(axis);
    for map in maps {
        sum.merge(map)?;
    }
    Ok(ScoreReport::from_counts(&sum, beta))
}

/// Matches and tallies a whole corpus of sentence pairs on one axis.
pub fn score_corpus<H: SentenceEdits, R: SentenceEdits>(
    pairs: &[(H, R)],
    axis: Axis,
    beta: Beta,
) -> Result<ScoreReport> {
    let maps = pairs.iter().map(|(h, r)| match_edits(h, r).map(|m| tally(&m, axis))).collect::<Result<Vec<_>>>()?;
    aggregate(axis, &maps, beta)
}
