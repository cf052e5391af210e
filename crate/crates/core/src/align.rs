//! Token alignment between an original and a corrected summary, and
//! extraction of merged edits.
//!
//! The alignment is a weighted Damerau-Levenshtein distance over tokens.
//! Matching requires identical surfaces; substitutions are priced by
//! [`sub_cost`] from lemma, POS and character overlap, so that linguistically
//! related tokens pair up instead of being deleted and re-inserted.
//! Insertions, deletions and adjacent two-token swaps cost 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classify::ContentCode;
use crate::error::{Error, Result};
use crate::textmodel::{AnnotatedSentence, AnnotatedToken, Upos};

pub const INDEL_COST: f64 = 1.0;
pub const TRANSPOSE_COST: f64 = 1.0;
pub const LEMMA_MISMATCH_COST: f64 = 0.499;
pub const POS_GROUP_COST: f64 = 0.25;
pub const POS_MISMATCH_COST: f64 = 0.5;
pub const CHAR_COST_WEIGHT: f64 = 0.5;

// Costs are sums of a few binary fractions and LCS ratios; anything closer
// than this is a tie.
const COST_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    Match,
    Substitute,
    Transpose,
    Delete,
    Insert,
}

/// One step of an alignment path. Spans are half-open token ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlignmentOp {
    pub kind: OpKind,
    pub o_span: (usize, usize),
    pub c_span: (usize, usize),
}

/// Form-based edit category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Form {
    /// Missing information that has to be inserted.
    M,
    /// Wrong information that has to be replaced.
    R,
    /// Unnecessary information that has to be deleted.
    U,
}

impl Form {
    pub const ALL: [Form; 3] = [Form::M, Form::R, Form::U];

    pub fn as_str(self) -> &'static str {
        match self {
            Form::M => "M",
            Form::R => "R",
            Form::U => "U",
        }
    }

    pub fn parse(s: &str) -> Option<Form> {
        Form::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A contiguous span rewrite from the original to the corrected sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edit {
    pub o_start: usize,
    pub o_end: usize,
    pub c_start: usize,
    pub c_end: usize,
    /// Filled in by [`crate::classify::classify_all`].
    pub content: Option<ContentCode>,
    /// Corrected-span surfaces joined by single spaces.
    pub correction: String,
}

impl Edit {
    /// The form code follows from which spans are empty.
    pub fn form(&self) -> Form {
        if self.o_start == self.o_end {
            Form::M
        } else if self.c_start == self.c_end {
            Form::U
        } else {
            Form::R
        }
    }

    pub fn correction_tokens(&self) -> impl Iterator<Item = &str> {
        self.correction.split(' ').filter(|t| !t.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditSet {
    pub id: String,
    pub original: AnnotatedSentence,
    pub corrected: AnnotatedSentence,
    pub edits: Vec<Edit>,
}

fn coarse_group(upos: Upos) -> Option<u8> {
    match upos {
        Upos::Verb | Upos::Aux => Some(0),
        Upos::Noun | Upos::Propn | Upos::Pron => Some(1),
        _ => None,
    }
}

fn lcs_len(a: &[char], b: &[char]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for &ca in a {
        let mut diag = 0;
        for (j, &cb) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if ca == cb { diag + 1 } else { above.max(row[j]) };
            diag = above;
        }
    }
    row[b.len()]
}

/// Character-level cost in `[0, 0.5]`: half the complement of the LCS ratio.
///
/// Surfaces are compared with their original casing so that a pure case
/// change still costs something and only identical tokens are free.
pub fn char_cost(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let total = a.len() + b.len();
    if total == 0 {
        return 0.0;
    }
    let ratio = 2.0 * lcs_len(&a, &b) as f64 / total as f64;
    CHAR_COST_WEIGHT * (1.0 - ratio)
}

/// Substitution cost between two tokens; 0 exactly when the surfaces are identical.
pub fn sub_cost(a: &AnnotatedToken, b: &AnnotatedToken) -> f64 {
    if a.surface == b.surface {
        return 0.0;
    }
    let lemma = if a.lemma == b.lemma { 0.0 } else { LEMMA_MISMATCH_COST };
    let pos = if a.upos == b.upos {
        0.0
    } else if coarse_group(a.upos).is_some() && coarse_group(a.upos) == coarse_group(b.upos) {
        POS_GROUP_COST
    } else {
        POS_MISMATCH_COST
    };
    lemma + pos + char_cost(&a.surface, &b.surface)
}

/// Whether `o[i..i+2]` and `c[j..j+2]` are a swap of each other (case-insensitive).
fn is_transposition(o: &[AnnotatedToken], c: &[AnnotatedToken], i: usize, j: usize) -> bool {
    let lower = |t: &AnnotatedToken| t.surface.to_lowercase();
    lower(&o[i]) == lower(&c[j + 1]) && lower(&o[i + 1]) == lower(&c[j])
}

/// Minimum-cost alignment of `original` against `corrected`.
///
/// On equal cost the path prefers match, then substitute, transpose, delete
/// and insert, evaluated backwards from the end of both sentences.
pub fn align(original: &AnnotatedSentence, corrected: &AnnotatedSentence) -> Vec<AlignmentOp> {
    let o = &original.tokens;
    let c = &corrected.tokens;
    let (n, m) = (o.len(), c.len());
    let width = m + 1;
    let mut cost = vec![0.0f64; (n + 1) * width];
    let at = |i: usize, j: usize| i * width + j;

    for i in 1..=n {
        cost[at(i, 0)] = i as f64 * INDEL_COST;
    }
    for j in 1..=m {
        cost[at(0, j)] = j as f64 * INDEL_COST;
    }
    let mut subs = vec![0.0f64; n * m];
    for i in 0..n {
        for j in 0..m {
            subs[i * m + j] = sub_cost(&o[i], &c[j]);
        }
    }
    for i in 1..=n {
        for j in 1..=m {
            let mut best = cost[at(i - 1, j - 1)] + subs[(i - 1) * m + (j - 1)];
            best = best.min(cost[at(i - 1, j)] + INDEL_COST);
            best = best.min(cost[at(i, j - 1)] + INDEL_COST);
            if i >= 2 && j >= 2 && is_transposition(o, c, i - 2, j - 2) {
                best = best.min(cost[at(i - 2, j - 2)] + TRANSPOSE_COST);
            }
            cost[at(i, j)] = best;
        }
    }

    let ties = |candidate: f64, target: f64| (candidate - target).abs() <= COST_EPSILON;
    let mut path = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = cost[at(i, j)];
        if i > 0 && j > 0 && ties(cost[at(i - 1, j - 1)] + subs[(i - 1) * m + (j - 1)], here) {
            let kind = if o[i - 1].surface == c[j - 1].surface { OpKind::Match } else { OpKind::Substitute };
            path.push(AlignmentOp { kind, o_span: (i - 1, i), c_span: (j - 1, j) });
            i -= 1;
            j -= 1;
        } else if i >= 2
            && j >= 2
            && is_transposition(o, c, i - 2, j - 2)
            && ties(cost[at(i - 2, j - 2)] + TRANSPOSE_COST, here)
        {
            path.push(AlignmentOp { kind: OpKind::Transpose, o_span: (i - 2, i), c_span: (j - 2, j) });
            i -= 2;
            j -= 2;
        } else if i > 0 && ties(cost[at(i - 1, j)] + INDEL_COST, here) {
            path.push(AlignmentOp { kind: OpKind::Delete, o_span: (i - 1, i), c_span: (j, j) });
            i -= 1;
        } else {
            debug_assert!(j > 0 && ties(cost[at(i, j - 1)] + INDEL_COST, here));
            path.push(AlignmentOp { kind: OpKind::Insert, o_span: (i, i), c_span: (j - 1, j) });
            j -= 1;
        }
    }
    path.reverse();
    path
}

/// Total cost of a path under the same weights [`align`] minimizes.
pub fn path_cost(path: &[AlignmentOp], original: &AnnotatedSentence, corrected: &AnnotatedSentence) -> f64 {
    path.iter()
        .map(|op| match op.kind {
            OpKind::Match => 0.0,
            OpKind::Substitute => sub_cost(&original.tokens[op.o_span.0], &corrected.tokens[op.c_span.0]),
            OpKind::Transpose => TRANSPOSE_COST,
            OpKind::Delete | OpKind::Insert => INDEL_COST,
        })
        .sum()
}

/// Collapses every maximal run of non-match operations into one edit.
pub fn extract_edits(path: &[AlignmentOp], original: &AnnotatedSentence, corrected: &AnnotatedSentence) -> EditSet {
    let mut edits = Vec::new();
    let mut run: Option<(usize, usize, usize, usize)> = None;

    let mut close = |run: &mut Option<(usize, usize, usize, usize)>| {
        if let Some((o_start, o_end, c_start, c_end)) = run.take() {
            let correction =
                corrected.tokens[c_start..c_end].iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
            edits.push(Edit { o_start, o_end, c_start, c_end, content: None, correction });
        }
    };

    for op in path {
        if op.kind == OpKind::Match {
            close(&mut run);
            continue;
        }
        run = Some(match run {
            None => (op.o_span.0, op.o_span.1, op.c_span.0, op.c_span.1),
            Some((o_start, _, c_start, _)) => (o_start, op.o_span.1, c_start, op.c_span.1),
        });
    }
    close(&mut run);

    EditSet { id: original.id.clone(), original: original.clone(), corrected: corrected.clone(), edits }
}

/// Aligns and extracts edits in one step.
pub fn edits_between(original: &AnnotatedSentence, corrected: &AnnotatedSentence) -> EditSet {
    extract_edits(&align(original, corrected), original, corrected)
}

/// Rewrites `original` by splicing in each edit's correction.
pub fn apply_edits<S: AsRef<str>>(original: &[S], edits: &[Edit]) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(original.len());
    let mut cursor = 0;
    for edit in edits {
        if edit.o_start > edit.o_end || edit.o_end > original.len() {
            return Err(Error::contract(format!(
                "edit span {}..{} out of bounds for {} tokens",
                edit.o_start,
                edit.o_end,
                original.len()
            )));
        }
        if edit.o_start < cursor {
            return Err(Error::contract(format!(
                "edit span {}..{} overlaps or precedes the previous edit",
                edit.o_start, edit.o_end
            )));
        }
        out.extend(original[cursor..edit.o_start].iter().map(|s| s.as_ref().to_string()));
        out.extend(edit.correction_tokens().map(str::to_string));
        cursor = edit.o_end;
    }
    out.extend(original[cursor..].iter().map(|s| s.as_ref().to_string()));
    Ok(out)
}
