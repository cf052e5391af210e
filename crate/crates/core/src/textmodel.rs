//! Annotated text: tokens carrying lemma and universal POS, the JSON-lines
//! dataset reader, a CoNLL-U subset reader/writer, and a small rule-based
//! annotator for use when no external tagger output is available.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// The 17 Universal Dependencies part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseUposError(pub String);

impl fmt::Display for ParseUposError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown UPOS tag `{}`", self.0)
    }
}

impl std::error::Error for ParseUposError {}

impl FromStr for Upos {
    type Err = ParseUposError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Upos::ALL.iter().copied().find(|tag| tag.as_str() == s).ok_or_else(|| ParseUposError(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedToken {
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub upos: Upos,
    pub xpos: Option<String>,
    /// Morphological features; an empty map means the column was `_`.
    pub feats: BTreeMap<String, String>,
}

impl AnnotatedToken {
    pub fn new(index: usize, surface: impl Into<String>, lemma: impl Into<String>, upos: Upos) -> Self {
        AnnotatedToken {
            index,
            surface: surface.into(),
            lemma: lemma.into().to_lowercase(),
            upos,
            xpos: None,
            feats: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub id: String,
    pub tokens: Vec<AnnotatedToken>,
}

impl AnnotatedSentence {
    /// Builds a sentence from `(surface, lemma, upos)` triples, numbering tokens from 0.
    pub fn from_triples<'a, I>(id: impl Into<String>, triples: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str, Upos)>,
    {
        let tokens = triples
            .into_iter()
            .enumerate()
            .map(|(i, (surface, lemma, upos))| AnnotatedToken::new(i, surface, lemma, upos))
            .collect();
        AnnotatedSentence { id: id.into(), tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    /// Checks the token-level invariants: consecutive indices, non-empty
    /// whitespace-free surfaces, lowercase lemmas.
    pub fn validate(&self) -> Result<()> {
        for (pos, token) in self.tokens.iter().enumerate() {
            if token.index != pos {
                return Err(Error::contract(format!(
                    "sentence `{}`: token at position {pos} has index {}",
                    self.id, token.index
                )));
            }
            if let Some(msg) = surface_problem(&token.surface) {
                return Err(Error::contract(format!("sentence `{}`: token {pos}: {msg}", self.id)));
            }
            if token.lemma != token.lemma.to_lowercase() {
                return Err(Error::contract(format!(
                    "sentence `{}`: lemma `{}` is not lowercase",
                    self.id, token.lemma
                )));
            }
        }
        Ok(())
    }
}

fn surface_problem(surface: &str) -> Option<&'static str> {
    if surface.is_empty() {
        Some("empty surface")
    } else if surface.chars().any(char::is_whitespace) {
        Some("surface contains whitespace")
    } else {
        None
    }
}

/// One evaluation record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetItem {
    pub id: String,
    /// Source document the summary was produced from.
    pub dialogue: String,
    /// Summary to be corrected.
    pub original: String,
    /// Human reference correction.
    pub reference: String,
    /// System correction under evaluation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
}

impl DatasetItem {
    pub fn original_id(&self) -> String {
        format!("{}.orig", self.id)
    }

    pub fn reference_id(&self) -> String {
        format!("{}.ref", self.id)
    }

    pub fn hypothesis_id(&self) -> String {
        format!("{}.hyp", self.id)
    }
}

/// Parses a JSON-lines dataset. Blank lines are skipped and unknown fields ignored.
pub fn parse_dataset(text: &str) -> Result<Vec<DatasetItem>> {
    let mut items = Vec::new();
    let mut seen = HashSet::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(line).map_err(|e| Error::data(line_no, format!("malformed JSON: {e}")))?;
        let obj = value.as_object().ok_or_else(|| Error::data(line_no, "expected a JSON object"))?;

        let required = |field: &str| -> Result<String> {
            match obj.get(field) {
                Some(Value::String(s)) => Ok(s.clone()),
                Some(_) => Err(Error::data(line_no, format!("field `{field}` must be a string"))),
                None => Err(Error::data(line_no, format!("missing required field `{field}`"))),
            }
        };
        let optional = |field: &str| -> Result<Option<String>> {
            match obj.get(field) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::String(s)) => Ok(Some(s.clone())),
                Some(_) => Err(Error::data(line_no, format!("field `{field}` must be a string"))),
            }
        };

        let item = DatasetItem {
            id: required("id")?,
            dialogue: required("dialogue")?,
            original: required("original")?,
            reference: required("reference")?,
            hypothesis: optional("hypothesis")?,
            system: optional("system")?,
            corpus: optional("corpus")?,
        };
        if !seen.insert(item.id.clone()) {
            return Err(Error::data(line_no, format!("duplicate id `{}`", item.id)));
        }
        items.push(item);
    }
    Ok(items)
}

/// Writes items back as JSON lines, one object per line.
pub fn serialize_dataset(items: &[DatasetItem]) -> String {
    let mut out = String::new();
    for item in items {
        // DatasetItem contains only strings, serialization cannot fail.
        out.push_str(&serde_json::to_string(item).expect("dataset item serializes"));
        out.push('\n');
    }
    out
}

/// Parses the CoNLL-U subset used for annotation sidecars.
///
/// Token lines carry `ID FORM LEMMA UPOS XPOS FEATS`, optionally followed by
/// the remaining four standard columns, which are ignored. A sentence is bound
/// to its id by a `# id = ...` (or `# sent_id = ...`) comment and ends at a
/// blank line. A block with an id comment and no tokens is an empty sentence.
pub fn parse_conllu(text: &str) -> Result<Vec<AnnotatedSentence>> {
    let mut sentences = Vec::new();
    let mut current: Option<(Option<String>, Vec<AnnotatedToken>, usize)> = None;

    let mut finish = |block: Option<(Option<String>, Vec<AnnotatedToken>, usize)>| -> Result<()> {
        if let Some((id, tokens, start_line)) = block {
            let id = id.ok_or_else(|| Error::data(start_line, "sentence has no `# id = ...` comment"))?;
            sentences.push(AnnotatedSentence { id, tokens });
        }
        Ok(())
    };

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            finish(current.take())?;
            continue;
        }
        let block = current.get_or_insert_with(|| (None, Vec::new(), line_no));
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let key = key.trim();
                if key == "id" || key == "sent_id" {
                    block.0 = Some(value.trim().to_string());
                }
            }
            continue;
        }
        let token = parse_token_line(line, line_no, block.1.len())?;
        block.1.push(token);
    }
    finish(current.take())?;
    Ok(sentences)
}

fn parse_token_line(line: &str, line_no: usize, expected_index: usize) -> Result<AnnotatedToken> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 6 && cols.len() != 10 {
        return Err(Error::data(line_no, format!("expected 6 or 10 tab-separated columns, found {}", cols.len())));
    }
    let id: usize =
        cols[0].parse().map_err(|_| Error::data(line_no, format!("token ID `{}` is not an integer", cols[0])))?;
    if id != expected_index + 1 {
        return Err(Error::data(line_no, format!("token ID {id} out of sequence, expected {}", expected_index + 1)));
    }
    let surface = cols[1];
    if let Some(msg) = surface_problem(surface) {
        return Err(Error::data(line_no, msg));
    }
    let lemma = match cols[2] {
        "" => return Err(Error::data(line_no, "empty lemma")),
        "_" if surface != "_" => surface.to_lowercase(),
        lemma => lemma.to_lowercase(),
    };
    let upos: Upos = cols[3].parse().map_err(|e: ParseUposError| Error::data(line_no, e.to_string()))?;
    let xpos = match cols[4] {
        "_" => None,
        x => Some(x.to_string()),
    };
    let feats = match cols[5] {
        "_" => BTreeMap::new(),
        feats => feats
            .split('|')
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| Error::data(line_no, format!("feature `{kv}` is not key=value")))
            })
            .collect::<Result<_>>()?,
    };
    Ok(AnnotatedToken { index: expected_index, surface: surface.to_string(), lemma, upos, xpos, feats })
}

/// Writes sentences in the 6-column CoNLL-U subset read by [`parse_conllu`].
pub fn serialize_conllu(sentences: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        out.push_str("# id = ");
        out.push_str(&sentence.id);
        out.push('\n');
        for token in &sentence.tokens {
            let feats = if token.feats.is_empty() {
                "_".to_string()
            } else {
                token.feats.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("|")
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                token.index + 1,
                token.surface,
                token.lemma,
                token.upos,
                token.xpos.as_deref().unwrap_or("_"),
                feats
            ));
        }
        out.push('\n');
    }
    out
}

/// Sentences keyed by id, as loaded from one or more annotation files.
#[derive(Debug, Clone, Default)]
pub struct AnnotationIndex {
    sentences: HashMap<String, AnnotatedSentence>,
}

impl AnnotationIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds sentences, rejecting ids that are already present.
    pub fn extend(&mut self, sentences: Vec<AnnotatedSentence>) -> Result<()> {
        for sentence in sentences {
            if self.sentences.contains_key(&sentence.id) {
                return Err(Error::data_no_line(format!("duplicate annotation id `{}`", sentence.id)));
            }
            self.sentences.insert(sentence.id.clone(), sentence);
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&AnnotatedSentence> {
        self.sentences.get(id).ok_or_else(|| Error::MissingAnnotation(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

// Heuristic annotator ------------------------------------------------------

const PRONOUNS: &[&str] = &[
    "i",
    "me",
    "my",
    "mine",
    "myself",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
    "he",
    "him",
    "his",
    "himself",
    "she",
    "her",
    "hers",
    "herself",
    "it",
    "its",
    "itself",
    "we",
    "us",
    "our",
    "ours",
    "ourselves",
    "they",
    "them",
    "their",
    "theirs",
    "themselves",
    "someone",
    "somebody",
    "something",
    "everyone",
    "everybody",
    "everything",
    "anyone",
    "anybody",
    "anything",
    "nobody",
    "nothing",
    "who",
    "whom",
    "whose",
    "what",
    "which",
];
const MODALS: &[&str] = &["can", "could", "may", "might", "must", "shall", "should", "will", "would"];
const AUXILIARIES: &[&str] =
    &["be", "am", "is", "are", "was", "were", "been", "being", "have", "has", "had", "having", "do", "does", "did"];
const COORDINATORS: &[&str] = &["and", "or", "but", "nor", "yet", "so"];
const SUBORDINATORS: &[&str] =
    &["because", "although", "though", "if", "while", "since", "unless", "until", "whether", "whereas", "as"];
const PREPOSITIONS: &[&str] = &[
    "in", "on", "at", "to", "from", "with", "by", "for", "of", "about", "after", "before", "during", "into", "onto",
    "over", "under", "between", "through", "without", "within", "against", "among", "around", "near", "off", "across",
    "behind", "beyond", "towards", "toward", "upon", "via", "per", "till",
];
const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "some", "any", "every", "each", "all", "no", "another", "both",
    "either", "neither", "none",
];
const PARTICLES: &[&str] = &["not", "n't"];
const ADVERBS: &[&str] = &[
    "never",
    "very",
    "really",
    "just",
    "then",
    "now",
    "today",
    "tonight",
    "tomorrow",
    "yesterday",
    "soon",
    "later",
    "here",
    "there",
    "again",
    "too",
    "also",
    "maybe",
    "perhaps",
    "possibly",
    "probably",
    "always",
    "often",
    "sometimes",
    "already",
    "still",
    "almost",
    "only",
    "even",
    "together",
    "away",
    "back",
    "up",
    "down",
    "out",
    "home",
    "early",
    "well",
    "ever",
    "once",
    "twice",
];
const INTERJECTIONS: &[&str] = &["hi", "hello", "hey", "yes", "no", "ok", "okay", "oh", "wow", "thanks", "bye"];
const ADJECTIVES: &[&str] = &[
    "happy",
    "sad",
    "proud",
    "good",
    "bad",
    "new",
    "old",
    "big",
    "small",
    "great",
    "sure",
    "busy",
    "sick",
    "free",
    "angry",
    "tired",
    "ready",
    "glad",
    "sorry",
    "nice",
    "right",
    "wrong",
    "next",
    "last",
    "first",
    "little",
    "long",
    "short",
    "young",
    "hungry",
    "upset",
    "excited",
    "worried",
    "available",
    "important",
    "expensive",
    "cheap",
    "fine",
    "able",
    "interested",
    "late",
];
const VERBS: &[&str] = &[
    "go", "goes", "went", "gone", "come", "comes", "came", "leave", "leaves", "left", "meet", "meets", "met", "see",
    "sees", "saw", "seen", "say", "says", "said", "tell", "tells", "told", "give", "gives", "gave", "given", "lend",
    "lends", "lent", "send", "sends", "sent", "buy", "buys", "bought", "bring", "brings", "brought", "call", "calls",
    "remind", "reminds", "teach", "teaches", "taught", "take", "takes", "took", "taken", "make", "makes", "made",
    "get", "gets", "got", "want", "wants", "need", "needs", "like", "likes", "know", "knows", "knew", "think",
    "thinks", "thought", "ask", "asks", "help", "helps", "pick", "picks", "invite", "invites", "agree", "agrees",
    "find", "finds", "found", "pay", "pays", "paid", "eat", "eats", "ate", "visit", "visits", "wait", "waits", "work",
    "works", "play", "plays", "forget", "forgets", "forgot", "win", "wins", "won", "lose", "loses", "lost", "keep",
    "keeps", "kept", "write", "writes", "wrote",
];
const IRREGULAR_LEMMAS: &[(&str, &str)] = &[
    ("am", "be"),
    ("is", "be"),
    ("are", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("being", "be"),
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("does", "do"),
    ("did", "do"),
    ("done", "do"),
    ("goes", "go"),
    ("went", "go"),
    ("gone", "go"),
    ("came", "come"),
    ("left", "leave"),
    ("met", "meet"),
    ("saw", "see"),
    ("seen", "see"),
    ("said", "say"),
    ("told", "tell"),
    ("gave", "give"),
    ("given", "give"),
    ("lent", "lend"),
    ("sent", "send"),
    ("bought", "buy"),
    ("brought", "bring"),
    ("taught", "teach"),
    ("teaches", "teach"),
    ("took", "take"),
    ("taken", "take"),
    ("made", "make"),
    ("got", "get"),
    ("knew", "know"),
    ("thought", "think"),
    ("found", "find"),
    ("paid", "pay"),
    ("ate", "eat"),
    ("forgot", "forget"),
    ("won", "win"),
    ("lost", "lose"),
    ("kept", "keep"),
    ("wrote", "write"),
    ("children", "child"),
    ("men", "man"),
    ("women", "woman"),
    ("people", "person"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("mice", "mouse"),
];
const NUMBER_WORDS: &[&str] = &[
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
    "thirty",
    "forty",
    "fifty",
    "sixty",
    "seventy",
    "eighty",
    "ninety",
    "hundred",
    "thousand",
    "million",
    "billion",
];
const SYMBOLS: &str = "$%&+=<>@#^~|\\*/€£";

fn is_punct_char(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace() && c != '\''
}

/// Splits raw text into tokens: whitespace-separated chunks with leading and
/// trailing punctuation peeled off one character at a time. Internal
/// punctuation (`3.5`, `won't`) stays inside the word.
pub fn tokenize(raw: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in raw.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && is_edge_punct(chars[start]) {
            start += 1;
        }
        while end > start && is_edge_punct(chars[end - 1]) {
            end -= 1;
        }
        tokens.extend(chars[..start].iter().map(|c| c.to_string()));
        if start < end {
            tokens.push(chars[start..end].iter().collect());
        }
        tokens.extend(chars[end..].iter().map(|c| c.to_string()));
    }
    tokens
}

fn is_edge_punct(c: char) -> bool {
    is_punct_char(c) || c == '\''
}

/// A numeric literal: digits with optional internal `.`, `,` or `:`.
pub fn is_numeric_literal(s: &str) -> bool {
    let mut digits = 0;
    for c in s.chars() {
        if c.is_ascii_digit() {
            digits += 1;
        } else if !matches!(c, '.' | ',' | ':') {
            return false;
        }
    }
    digits > 0 && s.starts_with(|c: char| c.is_ascii_digit()) && s.ends_with(|c: char| c.is_ascii_digit())
}

fn tag_token(surface: &str) -> Upos {
    let lower = surface.to_lowercase();
    let lower = lower.as_str();
    let in_list = |list: &[&str]| list.contains(&lower);

    if surface.chars().all(|c| !c.is_alphanumeric()) {
        return if surface.chars().all(|c| SYMBOLS.contains(c)) { Upos::Sym } else { Upos::Punct };
    }
    if is_numeric_literal(surface) || in_list(NUMBER_WORDS) {
        return Upos::Num;
    }
    if lower.ends_with("n't") || in_list(MODALS) || in_list(AUXILIARIES) || lower == "cannot" {
        return Upos::Aux;
    }
    if in_list(PARTICLES) {
        return Upos::Part;
    }
    if in_list(PRONOUNS) {
        return Upos::Pron;
    }
    if in_list(DETERMINERS) {
        return Upos::Det;
    }
    if in_list(COORDINATORS) {
        return Upos::Cconj;
    }
    if in_list(SUBORDINATORS) {
        return Upos::Sconj;
    }
    if in_list(PREPOSITIONS) {
        return Upos::Adp;
    }
    if in_list(INTERJECTIONS) {
        return Upos::Intj;
    }
    if in_list(ADVERBS) {
        return Upos::Adv;
    }
    if in_list(ADJECTIVES) {
        return Upos::Adj;
    }
    if in_list(VERBS) {
        return Upos::Verb;
    }
    if surface.starts_with(|c: char| c.is_uppercase()) {
        return Upos::Propn;
    }
    if lower.len() > 4 && (lower.ends_with("ed") || lower.ends_with("ing")) {
        return Upos::Verb;
    }
    Upos::Noun
}

fn lemmatize(surface: &str, upos: Upos) -> String {
    let lower = surface.to_lowercase();
    if let Some((_, lemma)) = IRREGULAR_LEMMAS.iter().find(|(form, _)| *form == lower) {
        return lemma.to_string();
    }
    if !matches!(upos, Upos::Noun | Upos::Verb) {
        return lower;
    }
    let strip = |suffix: &str, min_len: usize| -> Option<String> {
        (lower.len() >= min_len && lower.ends_with(suffix)).then(|| lower[..lower.len() - suffix.len()].to_string())
    };
    if let Some(stem) = strip("ies", 5) {
        return stem + "y";
    }
    if upos == Upos::Verb {
        if let Some(stem) = strip("ing", 6) {
            return stem;
        }
        if let Some(stem) = strip("ed", 5) {
            return stem;
        }
    }
    if !lower.ends_with("ss") && !lower.ends_with("us") {
        if let Some(stem) = strip("s", 4) {
            return stem;
        }
    }
    lower
}

/// Annotates raw English text with a small closed-class lexicon. Output
/// quality is test grade; real evaluations should feed tagger output through
/// [`parse_conllu`].
pub fn heuristic_annotate(raw: &str) -> AnnotatedSentence {
    let tokens = tokenize(raw)
        .into_iter()
        .enumerate()
        .map(|(index, surface)| {
            let upos = tag_token(&surface);
            let lemma = lemmatize(&surface, upos);
            AnnotatedToken { index, surface, lemma, upos, xpos: None, feats: BTreeMap::new() }
        })
        .collect();
    AnnotatedSentence { id: String::new(), tokens }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tagged(raw: &str) -> Vec<(String, String, Upos)> {
        heuristic_annotate(raw).tokens.into_iter().map(|t| (t.surface, t.lemma, t.upos)).collect()
    }

    #[test]
    fn minimal_dataset_record() {
        let items = parse_dataset(
            r#"{"id":"s1","dialogue":"...","original":"Ola will be late.","reference":"Ola will be late."}"#,
        )
        .unwrap();
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].id, "s1");
        assert_eq!(items[0].hypothesis, None);
    }

    #[test]
    fn numeric_id_is_rejected_at_line_one() {
        let err = parse_dataset(r#"{"id":1}"#).unwrap_err();
        match err {
            Error::DataFormat { line: Some(1), message } => assert!(message.contains("`id`"), "{message}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_dataset(r#"{"id":"a","dialogue":"d","original":"o"}"#).unwrap_err();
        assert!(err.to_string().contains("`reference`"), "{err}");
    }

    #[test]
    fn malformed_line_names_line_number() {
        let text = "{\"id\":\"a\",\"dialogue\":\"\",\"original\":\"\",\"reference\":\"\"}\n{oops\n";
        let err = parse_dataset(text).unwrap_err();
        assert!(matches!(err, Error::DataFormat { line: Some(2), .. }), "{err:?}");
    }

    #[test]
    fn blank_lines_are_skipped() {
        let text = concat!(
            r#"{"id":"a","dialogue":"d","original":"o","reference":"r","extra":3}"#,
            "\n   \n",
            r#"{"id":"b","dialogue":"d","original":"o","reference":"r","hypothesis":"h","system":"bart"}"#,
            "\n"
        );
        let items = parse_dataset(text).unwrap();
        assert_eq!(items.iter().map(|i| i.id.as_str()).collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(items[1].hypothesis.as_deref(), Some("h"));
        assert_eq!(items[1].system.as_deref(), Some("bart"));
        assert_eq!(parse_dataset(&serialize_dataset(&items)).unwrap(), items);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let line = r#"{"id":"a","dialogue":"d","original":"o","reference":"r"}"#;
        let err = parse_dataset(&format!("{line}\n{line}\n")).unwrap_err();
        assert!(matches!(err, Error::DataFormat { line: Some(2), .. }));
    }

    #[test]
    fn two_token_block() {
        let text = "# id = x.orig\n1\tOla\tOla\tPROPN\t_\t_\n2\tleft\tleave\tVERB\tVBD\tTense=Past\n\n";
        let sentences = parse_conllu(text).unwrap();
        assert_eq!(sentences.len(), 1);
        let s = &sentences[0];
        assert_eq!(s.id, "x.orig");
        assert_eq!(s.len(), 2);
        assert_eq!(s.tokens[0].lemma, "ola");
        assert_eq!(s.tokens[1].xpos.as_deref(), Some("VBD"));
        assert_eq!(s.tokens[1].feats.get("Tense").map(String::as_str), Some("Past"));
    }

    #[test]
    fn ten_column_lines_accepted() {
        let text = "# sent_id = a\n1\tHi\thi\tINTJ\tUH\t_\t0\troot\t_\t_\n";
        let s = parse_conllu(text).unwrap();
        assert_eq!(s[0].tokens[0].upos, Upos::Intj);
    }

    #[test]
    fn unknown_upos_rejected() {
        let err = parse_conllu("# id = a\n1\tdogs\tdog\tNOUNS\t_\t_\n").unwrap_err();
        assert!(matches!(err, Error::DataFormat { line: Some(2), .. }), "{err:?}");
    }

    #[test]
    fn bad_id_and_column_count_rejected() {
        assert!(matches!(
            parse_conllu("# id = a\n1-2\tdon't\t_\tAUX\t_\t_\n").unwrap_err(),
            Error::DataFormat { line: Some(2), .. }
        ));
        assert!(matches!(
            parse_conllu("# id = a\n1\tdog\tdog\tNOUN\n").unwrap_err(),
            Error::DataFormat { line: Some(2), .. }
        ));
        assert!(parse_conllu("1\tdog\tdog\tNOUN\t_\t_\n").is_err());
    }

    #[test]
    fn empty_sentence_block() {
        let s = parse_conllu("# id = e.hyp\n\n").unwrap();
        assert_eq!(s, vec![AnnotatedSentence { id: "e.hyp".into(), tokens: vec![] }]);
    }

    #[test]
    fn serialize_layout() {
        assert_eq!(serialize_conllu(&[]), "");
        let s = AnnotatedSentence::from_triples("a", [("Hi", "hi", Upos::Intj)]);
        assert_eq!(serialize_conllu(&[s]), "# id = a\n1\tHi\thi\tINTJ\t_\t_\n\n");
    }

    #[test]
    fn golden_heuristic_output() {
        let expected: Vec<(String, String, Upos)> = [
            ("Ola", "ola", Upos::Propn),
            ("will", "will", Upos::Aux),
            ("be", "be", Upos::Aux),
            ("late", "late", Upos::Adj),
            (".", ".", Upos::Punct),
        ]
        .into_iter()
        .map(|(s, l, u)| (s.to_string(), l.to_string(), u))
        .collect();
        assert_eq!(tagged("Ola will be late."), expected);
    }

    #[test]
    fn heuristic_edge_cases() {
        assert!(heuristic_annotate("").is_empty());
        let t = tagged("15");
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].2, Upos::Num);

        let t = tagged("She won't pay $30, so meetings ended.");
        let surfaces: Vec<&str> = t.iter().map(|x| x.0.as_str()).collect();
        assert_eq!(surfaces, ["She", "won't", "pay", "$", "30", ",", "so", "meetings", "ended", "."]);
        assert_eq!(t[0].2, Upos::Pron);
        assert_eq!(t[1].2, Upos::Aux);
        assert_eq!(t[3].2, Upos::Sym);
        assert_eq!(t[6].2, Upos::Cconj);
        assert_eq!((t[7].1.as_str(), t[7].2), ("meeting", Upos::Noun));
        assert_eq!((t[8].1.as_str(), t[8].2), ("end", Upos::Verb));
        assert_eq!(tagged("Tom was there")[1].1, "be");
    }

    #[test]
    fn lemmas_are_lowercase_and_tags_closed() {
        let s = heuristic_annotate("Derek and PHIL Went to the STORES in 2019, didn't they?");
        s.validate().unwrap();
        for t in &s.tokens {
            assert!(Upos::ALL.contains(&t.upos));
        }
    }

    #[test]
    fn upos_round_trips_through_str() {
        for tag in Upos::ALL {
            assert_eq!(tag.as_str().parse::<Upos>().unwrap(), tag);
        }
        assert!("noun".parse::<Upos>().is_err());
    }

    #[test]
    fn annotation_index_lookup() {
        let mut index = AnnotationIndex::new();
        index.extend(vec![AnnotatedSentence { id: "a.orig".into(), tokens: vec![] }]).unwrap();
        assert!(index.get("a.orig").is_ok());
        assert!(matches!(index.get("a.ref"), Err(Error::MissingAnnotation(id)) if id == "a.ref"));
        assert!(index.extend(vec![AnnotatedSentence { id: "a.orig".into(), tokens: vec![] }]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn token_strategy() -> impl Strategy<Value = (String, String, Upos, Option<String>, BTreeMap<String, String>)> {
            (
                "[A-Za-z0-9.,'!?$-]{1,8}",
                "[a-z0-9']{1,8}",
                proptest::sample::select(Upos::ALL.to_vec()),
                proptest::option::of("[A-Z$]{1,4}"),
                proptest::collection::btree_map("[A-Z][a-z]{0,5}", "[A-Za-z0-9]{1,4}", 0..3),
            )
        }

        fn sentence_strategy() -> impl Strategy<Value = AnnotatedSentence> {
            ("[a-z0-9]{1,6}\\.(orig|ref|hyp)", proptest::collection::vec(token_strategy(), 0..8)).prop_map(
                |(id, toks)| AnnotatedSentence {
                    id,
                    tokens: toks
                        .into_iter()
                        .enumerate()
                        .map(|(index, (surface, lemma, upos, xpos, feats))| AnnotatedToken {
                            index,
                            surface,
                            lemma,
                            upos,
                            xpos,
                            feats,
                        })
                        .collect(),
                },
            )
        }

        proptest! {
            #[test]
            fn conllu_round_trip(sentences in proptest::collection::vec(sentence_strategy(), 0..5)) {
                let text = serialize_conllu(&sentences);
                let parsed = parse_conllu(&text).unwrap();
                prop_assert_eq!(&parsed, &sentences);
                prop_assert_eq!(serialize_conllu(&parsed), text);
            }

            #[test]
            fn tokenization_is_idempotent(raw in "[A-Za-z0-9 .,!?'$()-]{0,40}") {
                let first = heuristic_annotate(&raw);
                let detok = first.surfaces().join(" ");
                let second = heuristic_annotate(&detok);
                prop_assert_eq!(first.surfaces(), second.surfaces());
                prop_assert_eq!(&first, &heuristic_annotate(&raw));
                first.validate().unwrap();
            }
        }
    }
}
