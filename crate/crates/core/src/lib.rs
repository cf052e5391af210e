//! Reference-based evaluation of factual error correction for summaries.
//!
//! The pipeline has three stages:
//!
//! 1. [`align`]: the original and corrected summaries are aligned token by
//!    token with a linguistically weighted edit distance, and adjacent
//!    non-matching operations are merged into [`Edit`]s carrying a form code
//!    (`M`, `R` or `U`).
//! 2. [`classify`]: every edit gets a content code (`Ent:ObjE`,
//!    `Pred:NegE`, ...) derived from the POS tags and lemmas of its spans.
//! 3. [`score`]: hypothesis edits are matched against reference edits and
//!    TP/FP/FN are tallied per category, yielding precision, recall and
//!    F-beta (F0.5 by default).
//!
//! [`textmodel`] holds the annotated-token data model and the dataset and
//! CoNLL-U readers, [`m2`] the edit file format, [`stats`] corpus statistics,
//! and [`cli`] the command line front end.

pub mod align;
pub mod classify;
pub mod cli;
mod error;
pub mod m2;
pub mod pipeline;
pub mod report;
pub mod score;
pub mod stats;
pub mod textmodel;

pub use align::{align, apply_edits, extract_edits, sub_cost, AlignmentOp, Edit, EditSet, Form, OpKind};
pub use classify::{classify, classify_all, CombinedCode, ContentCode};
pub use error::{Error, Result};
pub use score::{
    aggregate, f_beta, match_edits, tally, Axis, Beta, Category, CategoryCounts, CountMap, Matching, ScoreReport,
    ScoreTriple,
};
pub use textmodel::{
    heuristic_annotate, parse_conllu, parse_dataset, serialize_conllu, AnnotatedSentence, AnnotatedToken, DatasetItem,
    Upos,
};
