//! Content-based classification of edits.
//!
//! Each edit is labeled from the POS tags and lemmas of its original and
//! corrected spans. Specific detectors (negation, numbers, modality, tense,
//! coreference) run first; otherwise the category follows the dominant POS
//! tag of the spans.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::align::{Edit, EditSet, Form};
use crate::textmodel::{is_numeric_literal, AnnotatedSentence, AnnotatedToken, Upos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContentCode {
    EntObj,
    EntAttr,
    PredMod,
    PredTens,
    PredNeg,
    PredVerb,
    Circ,
    Coref,
    Link,
    Num,
    Oth,
}

impl ContentCode {
    /// Table order; reports list categories in this order.
    pub const ALL: [ContentCode; 11] = [
        ContentCode::EntObj,
        ContentCode::EntAttr,
        ContentCode::PredMod,
        ContentCode::PredTens,
        ContentCode::PredNeg,
        ContentCode::PredVerb,
        ContentCode::Circ,
        ContentCode::Coref,
        ContentCode::Link,
        ContentCode::Num,
        ContentCode::Oth,
    ];

    /// The code as written in edit files and reports, e.g. `Pred:NegE`.
    pub fn code(self) -> &'static str {
        match self {
            ContentCode::EntObj => "Ent:ObjE",
            ContentCode::EntAttr => "Ent:AttrE",
            ContentCode::PredMod => "Pred:ModE",
            ContentCode::PredTens => "Pred:TensE",
            ContentCode::PredNeg => "Pred:NegE",
            ContentCode::PredVerb => "Pred:VerbE",
            ContentCode::Circ => "CircE",
            ContentCode::Coref => "CorefE",
            ContentCode::Link => "LinkE",
            ContentCode::Num => "NumE",
            ContentCode::Oth => "OthE",
        }
    }

    /// The code without its trailing `E`, as used in combined labels (`R:Pred:Neg`).
    pub fn short(self) -> &'static str {
        let code = self.code();
        &code[..code.len() - 1]
    }

    pub fn from_code(s: &str) -> Option<ContentCode> {
        ContentCode::ALL.into_iter().find(|c| c.code() == s)
    }

    pub fn from_short(s: &str) -> Option<ContentCode> {
        ContentCode::ALL.into_iter().find(|c| c.short() == s)
    }
}

impl fmt::Display for ContentCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Form and content joined, rendered `<form>:<content-short>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CombinedCode {
    pub form: Form,
    pub content: ContentCode,
}

impl CombinedCode {
    pub fn parse(s: &str) -> Option<CombinedCode> {
        let (form, content) = s.split_once(':')?;
        Some(CombinedCode { form: Form::parse(form)?, content: ContentCode::from_short(content)? })
    }
}

impl fmt::Display for CombinedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.form, self.content.short())
    }
}

const NEGATIONS: &[&str] = &["not", "n't", "never", "no", "none", "neither", "nor", "cannot"];
const MODAL_LEMMAS: &[&str] = &["can", "could", "may", "might", "must", "shall", "should", "will", "would"];

/// Dominant-tag tie-break order: content words before function words.
const DOMINANCE_ORDER: [Upos; 9] =
    [Upos::Noun, Upos::Propn, Upos::Adj, Upos::Verb, Upos::Aux, Upos::Adv, Upos::Adp, Upos::Cconj, Upos::Sconj];

/// The specific detectors that run ahead of the POS-majority rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Detector {
    Negation,
    Number,
    Modality,
    Tense,
    Coreference,
}

impl Detector {
    pub(crate) const ALL: [Detector; 5] =
        [Detector::Negation, Detector::Number, Detector::Modality, Detector::Tense, Detector::Coreference];
}

fn normalize(surface: &str) -> String {
    surface.to_lowercase().replace('\u{2019}', "'")
}

fn is_negation(word: &str) -> bool {
    NEGATIONS.contains(&word) || word.ends_with("n't")
}

fn is_modal(token: &AnnotatedToken) -> bool {
    MODAL_LEMMAS.contains(&token.lemma.as_str()) || MODAL_LEMMAS.contains(&normalize(&token.surface).as_str())
}

fn is_verbal(upos: Upos) -> bool {
    matches!(upos, Upos::Verb | Upos::Aux)
}

struct Spans<'a> {
    original: &'a [AnnotatedToken],
    corrected: &'a [AnnotatedToken],
}

impl<'a> Spans<'a> {
    fn union(&self) -> impl Iterator<Item = &'a AnnotatedToken> + Clone {
        self.original.iter().chain(self.corrected.iter())
    }

    fn content_tokens(&self) -> impl Iterator<Item = &'a AnnotatedToken> + Clone {
        self.union().filter(|t| t.upos != Upos::Punct)
    }
}

fn negation(spans: &Spans) -> bool {
    let words = |toks: &[AnnotatedToken]| toks.iter().map(|t| normalize(&t.surface)).collect::<BTreeSet<_>>();
    let o = words(spans.original);
    let c = words(spans.corrected);
    if o.symmetric_difference(&c).any(|w| is_negation(w)) {
        return true;
    }
    let joined = |toks: &[AnnotatedToken]| toks.iter().map(|t| normalize(&t.surface)).collect::<Vec<_>>().join(" ");
    let (o, c) = (joined(spans.original), joined(spans.corrected));
    c == format!("{o}n't") || o == format!("{c}n't")
}

fn number(spans: &Spans) -> bool {
    let mut content = spans.content_tokens().peekable();
    content.peek().is_some() && content.all(|t| t.upos == Upos::Num || is_numeric_literal(&t.surface))
}

fn modality(spans: &Spans) -> bool {
    let modals = |toks: &[AnnotatedToken]| {
        let mut m: Vec<String> = toks.iter().filter(|t| is_modal(t)).map(|t| t.lemma.clone()).collect();
        m.sort();
        m
    };
    let (o, c) = (modals(spans.original), modals(spans.corrected));
    if o == c {
        return false;
    }
    spans.content_tokens().filter(|t| !is_modal(t)).all(|t| is_verbal(t.upos))
}

fn tense(form: Form, spans: &Spans) -> bool {
    if form != Form::R || !spans.union().all(|t| is_verbal(t.upos)) {
        return false;
    }
    fn lemmas(toks: &[AnnotatedToken]) -> Vec<&str> {
        let mut l: Vec<&str> = toks.iter().map(|t| t.lemma.as_str()).collect();
        l.sort_unstable();
        l
    }
    let same_surfaces = spans.original.len() == spans.corrected.len()
        && spans.original.iter().zip(spans.corrected).all(|(a, b)| a.surface == b.surface);
    lemmas(spans.original) == lemmas(spans.corrected) && !same_surfaces
}

fn coreference(spans: &Spans) -> bool {
    spans.union().any(|t| t.upos == Upos::Pron)
        && spans
            .union()
            .filter(|t| t.upos != Upos::Pron)
            .all(|t| matches!(t.upos, Upos::Noun | Upos::Propn | Upos::Det))
}

fn dominant_upos(spans: &Spans) -> Option<Upos> {
    let mut counts = [0usize; 17];
    for t in spans.content_tokens() {
        counts[Upos::ALL.iter().position(|u| *u == t.upos).expect("closed tag set")] += 1;
    }
    let max = *counts.iter().max()?;
    if max == 0 {
        return None;
    }
    let count = |u: Upos| counts[Upos::ALL.iter().position(|x| *x == u).expect("closed tag set")];
    DOMINANCE_ORDER
        .iter()
        .copied()
        .find(|u| count(*u) == max)
        .or_else(|| Upos::ALL.iter().copied().find(|u| count(*u) == max))
}

pub(crate) fn classify_with(
    edit: &Edit,
    original: &AnnotatedSentence,
    corrected: &AnnotatedSentence,
    enabled: &[Detector],
) -> ContentCode {
    let spans = Spans {
        original: &original.tokens[edit.o_start..edit.o_end],
        corrected: &corrected.tokens[edit.c_start..edit.c_end],
    };
    let form = edit.form();
    for detector in enabled {
        let (fires, code) = match detector {
            Detector::Negation => (negation(&spans), ContentCode::PredNeg),
            Detector::Number => (number(&spans), ContentCode::Num),
            Detector::Modality => (modality(&spans), ContentCode::PredMod),
            Detector::Tense => (tense(form, &spans), ContentCode::PredTens),
            Detector::Coreference => (coreference(&spans), ContentCode::Coref),
        };
        if fires {
            return code;
        }
    }

    let by_majority = match dominant_upos(&spans) {
        Some(Upos::Cconj | Upos::Sconj) => Some(ContentCode::Link),
        Some(Upos::Noun | Upos::Propn) => Some(ContentCode::EntObj),
        Some(Upos::Adj) => Some(ContentCode::EntAttr),
        Some(Upos::Verb | Upos::Aux) => Some(ContentCode::PredVerb),
        Some(Upos::Adv | Upos::Adp) => Some(ContentCode::Circ),
        _ => None,
    };
    if let Some(code) = by_majority {
        return code;
    }
    let starts_with_adp = |toks: &[AnnotatedToken]| toks.first().is_some_and(|t| t.upos == Upos::Adp);
    if starts_with_adp(spans.original) || starts_with_adp(spans.corrected) {
        return ContentCode::Circ;
    }
    ContentCode::Oth
}

/// Assigns the content code of one edit. `edit`'s spans must lie within the
/// two sentences.
pub fn classify(edit: &Edit, original: &AnnotatedSentence, corrected: &AnnotatedSentence) -> ContentCode {
    classify_with(edit, original, corrected, &Detector::ALL)
}

/// Classifies every edit in place; spans and order are untouched.
pub fn classify_all(mut editset: EditSet) -> EditSet {
    for i in 0..editset.edits.len() {
        let code = classify(&editset.edits[i], &editset.original, &editset.corrected);
        editset.edits[i].content = Some(code);
    }
    editset
}

/// The combined label of a classified edit.
pub fn combined(edit: &Edit) -> Option<CombinedCode> {
    edit.content.map(|content| CombinedCode { form: edit.form(), content })
}
