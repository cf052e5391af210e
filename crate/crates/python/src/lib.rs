//! Python bindings: annotated sentences, edit extraction and classification,
//! scoring and corpus BLEU. Dataset-level operations take and return text in
//! the same formats the command line tool reads and writes.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use factedit::classify::combined;
use factedit::m2::{parse_edit_file, write_edit_file};
use factedit::pipeline::{compare_blocks, evaluate_dataset, extract_dataset, AnnotationSource, Field};
use factedit::report;
use factedit::textmodel::AnnotationIndex;
use factedit::{AnnotatedSentence, Axis, Beta, CategoryCounts, Edit as CoreEdit, Error, ScoreReport, Upos};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_axis(axis: &str) -> PyResult<Axis> {
    axis.parse().map_err(|_| PyValueError::new_err(format!("unknown axis `{axis}`")))
}

fn parse_beta(beta: f64) -> PyResult<Beta> {
    Beta::new(beta).map_err(to_py)
}

fn render(report: &ScoreReport, format: &str) -> PyResult<String> {
    match format {
        "json" => Ok(report::to_json(report)),
        "tsv" => Ok(report::to_tsv(report)),
        other => Err(PyValueError::new_err(format!("unknown format `{other}`"))),
    }
}

/// An annotated sentence: tokens with surface, lemma and universal POS tag.
#[pyclass(name = "Sentence", module = "pyfactedit", frozen)]
struct PySentence {
    inner: AnnotatedSentence,
}

#[pymethods]
impl PySentence {
    /// Builds a sentence from `(surface, lemma, upos)` triples.
    #[new]
    #[pyo3(signature = (tokens, id = String::new()))]
    fn new(tokens: Vec<(String, String, String)>, id: String) -> PyResult<Self> {
        let mut parsed = Vec::with_capacity(tokens.len());
        for (surface, lemma, upos) in &tokens {
            let upos: Upos = upos.parse().map_err(|_| PyValueError::new_err(format!("unknown UPOS `{upos}`")))?;
            parsed.push((surface.as_str(), lemma.as_str(), upos));
        }
        let inner = AnnotatedSentence::from_triples(id, parsed);
        inner.validate().map_err(to_py)?;
        Ok(PySentence { inner })
    }

    /// Tokenizes and tags raw text with the built-in heuristic annotator.
    #[staticmethod]
    #[pyo3(signature = (text, id = String::new()))]
    fn annotate(text: &str, id: String) -> Self {
        let mut inner = factedit::heuristic_annotate(text);
        inner.id = id;
        PySentence { inner }
    }

    #[getter]
    fn id(&self) -> &str {
        &self.inner.id
    }

    #[getter]
    fn tokens(&self) -> Vec<(String, String, String)> {
        self.inner.tokens.iter().map(|t| (t.surface.clone(), t.lemma.clone(), t.upos.as_str().to_string())).collect()
    }

    #[getter]
    fn surfaces(&self) -> Vec<String> {
        self.inner.surfaces().into_iter().map(str::to_string).collect()
    }

    fn to_conllu(&self) -> String {
        factedit::serialize_conllu(std::slice::from_ref(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Sentence(id={:?}, text={:?})", self.inner.id, self.inner.surfaces().join(" "))
    }
}

/// One span rewrite from the original to the corrected sentence.
#[pyclass(name = "Edit", module = "pyfactedit", frozen, get_all)]
struct PyEdit {
    o_start: usize,
    o_end: usize,
    c_start: usize,
    c_end: usize,
    correction: String,
    /// `M`, `R` or `U`.
    form: String,
    /// Content code such as `Ent:ObjE`, or `None` when unclassified.
    content: Option<String>,
    /// Combined label such as `R:Pred:Neg`, or `None` when unclassified.
    label: Option<String>,
}

impl From<&CoreEdit> for PyEdit {
    fn from(e: &CoreEdit) -> Self {
        PyEdit {
            o_start: e.o_start,
            o_end: e.o_end,
            c_start: e.c_start,
            c_end: e.c_end,
            correction: e.correction.clone(),
            form: e.form().as_str().to_string(),
            content: e.content.map(|c| c.code().to_string()),
            label: combined(e).map(|c| c.to_string()),
        }
    }
}

impl PyEdit {
    fn to_core(&self) -> CoreEdit {
        CoreEdit {
            o_start: self.o_start,
            o_end: self.o_end,
            c_start: self.c_start,
            c_end: self.c_end,
            content: self.content.as_deref().and_then(factedit::ContentCode::from_code),
            correction: self.correction.clone(),
        }
    }
}

#[pymethods]
impl PyEdit {
    fn __repr__(&self) -> String {
        format!(
            "Edit({}..{} -> {:?}, {}:{})",
            self.o_start,
            self.o_end,
            self.correction,
            self.form,
            self.content.as_deref().unwrap_or("NA")
        )
    }
}

/// Parses CoNLL-U text into sentences.
#[pyfunction]
fn parse_conllu(text: &str) -> PyResult<Vec<PySentence>> {
    Ok(factedit::parse_conllu(text).map_err(to_py)?.into_iter().map(|inner| PySentence { inner }).collect())
}

/// Aligns two sentences and returns the merged edits, classified unless `classify` is false.
#[pyfunction]
#[pyo3(signature = (original, corrected, classify = true))]
fn extract_edits(original: &PySentence, corrected: &PySentence, classify: bool) -> Vec<PyEdit> {
    let set = factedit::align::edits_between(&original.inner, &corrected.inner);
    let set = if classify { factedit::classify_all(set) } else { set };
    set.edits.iter().map(PyEdit::from).collect()
}

/// Splices edit corrections into a token list.
#[pyfunction]
fn apply_edits(tokens: Vec<String>, edits: Vec<PyRef<'_, PyEdit>>) -> PyResult<Vec<String>> {
    let edits: Vec<CoreEdit> = edits.iter().map(|e| e.to_core()).collect();
    factedit::apply_edits(&tokens, &edits).map_err(to_py)
}

/// Precision, recall and F-beta in `[0, 1]`; each is `None` when all counts are zero.
#[pyfunction]
#[pyo3(signature = (tp, fp, fn_, beta = 0.5))]
fn f_beta(tp: u64, fp: u64, fn_: u64, beta: f64) -> PyResult<(Option<f64>, Option<f64>, Option<f64>)> {
    let s = factedit::f_beta(CategoryCounts::new(tp, fp, fn_), parse_beta(beta)?);
    Ok((s.precision, s.recall, s.f))
}

/// Corpus-level BLEU over parallel lists of token lists.
#[pyfunction]
fn corpus_bleu(candidates: Vec<Vec<String>>, references: Vec<Vec<String>>) -> PyResult<f64> {
    factedit::stats::corpus_bleu(&candidates, &references).map_err(to_py)
}

fn source(annotations: Option<Vec<String>>) -> PyResult<AnnotationSource> {
    match annotations {
        None => Ok(AnnotationSource::Builtin),
        Some(texts) => {
            let mut index = AnnotationIndex::new();
            for text in texts {
                index.extend(factedit::parse_conllu(&text).map_err(to_py)?).map_err(to_py)?;
            }
            Ok(AnnotationSource::External(index))
        }
    }
}

/// Extracts edits for every item of a JSON-lines dataset and returns the edit file text.
///
/// `annotations` is a list of CoNLL-U texts; without it the built-in annotator is used.
#[pyfunction]
#[pyo3(signature = (dataset, annotations = None, target = "reference", classify = true, jobs = 0))]
fn extract(
    dataset: &str,
    annotations: Option<Vec<String>>,
    target: &str,
    classify: bool,
    jobs: usize,
) -> PyResult<String> {
    let target = match target {
        "reference" => Field::Reference,
        "hypothesis" => Field::Hypothesis,
        other => return Err(PyValueError::new_err(format!("unknown target `{other}`"))),
    };
    let items = factedit::parse_dataset(dataset).map_err(to_py)?;
    let blocks = extract_dataset(&items, target, &source(annotations)?, classify, jobs).map_err(to_py)?;
    Ok(write_edit_file(&blocks))
}

/// Scores a hypothesis edit file against a reference edit file.
#[pyfunction]
#[pyo3(signature = (hyp, reference, axis = "form", beta = 0.5, format = "json"))]
fn compare(hyp: &str, reference: &str, axis: &str, beta: f64, format: &str) -> PyResult<String> {
    let hyp = parse_edit_file(hyp).map_err(to_py)?;
    let reference = parse_edit_file(reference).map_err(to_py)?;
    let report = compare_blocks(&hyp, &reference, parse_axis(axis)?, parse_beta(beta)?).map_err(to_py)?;
    render(&report, format)
}

/// Extracts reference and hypothesis edits from a dataset and scores them.
#[pyfunction]
#[pyo3(signature = (dataset, annotations = None, axis = "form", beta = 0.5, format = "json", jobs = 0))]
fn evaluate(
    dataset: &str,
    annotations: Option<Vec<String>>,
    axis: &str,
    beta: f64,
    format: &str,
    jobs: usize,
) -> PyResult<String> {
    let items = factedit::parse_dataset(dataset).map_err(to_py)?;
    let report =
        evaluate_dataset(&items, &source(annotations)?, parse_axis(axis)?, parse_beta(beta)?, jobs).map_err(to_py)?;
    render(&report, format)
}

#[pymodule]
fn pyfactedit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySentence>()?;
    m.add_class::<PyEdit>()?;
    m.add_function(wrap_pyfunction!(parse_conllu, m)?)?;
    m.add_function(wrap_pyfunction!(extract_edits, m)?)?;
    m.add_function(wrap_pyfunction!(apply_edits, m)?)?;
    m.add_function(wrap_pyfunction!(f_beta, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_bleu, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
