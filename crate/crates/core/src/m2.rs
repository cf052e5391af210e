//! M2-style edit files.
//!
//! ```text
//! # id = d17
//! S Derek and Phil will come .
//! A 1 3|||U:Ent:ObjE||||||REQUIRED|||-NONE-|||0
//!
//! ```
//!
//! Each block is an id comment, an `S` line with the space-joined original
//! tokens, zero or more `A` lines and a terminating blank line. The label is
//! `<FORM>:<CONTENT>` where CONTENT is a content code or `NA` for an
//! unclassified edit.

use crate::align::{Edit, EditSet, Form};
use crate::classify::ContentCode;
use crate::error::{Error, Result};
use crate::score::SentenceEdits;

const A_LINE_SUFFIX: &str = "REQUIRED|||-NONE-|||0";

/// One sentence of an edit file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditBlock {
    pub id: String,
    pub tokens: Vec<String>,
    pub edits: Vec<Edit>,
}

impl From<&EditSet> for EditBlock {
    fn from(set: &EditSet) -> Self {
        EditBlock {
            id: set.id.clone(),
            tokens: set.original.surfaces().into_iter().map(str::to_string).collect(),
            edits: set.edits.clone(),
        }
    }
}

impl SentenceEdits for EditBlock {
    fn sentence_id(&self) -> &str {
        &self.id
    }

    fn original_tokens(&self) -> Vec<&str> {
        self.tokens.iter().map(String::as_str).collect()
    }

    fn edits(&self) -> &[Edit] {
        &self.edits
    }
}

pub fn format_edit_line(edit: &Edit) -> String {
    let content = edit.content.map_or("NA", ContentCode::code);
    format!("A {} {}|||{}:{}|||{}|||{A_LINE_SUFFIX}", edit.o_start, edit.o_end, edit.form(), content, edit.correction)
}

pub fn write_edit_file(blocks: &[EditBlock]) -> String {
    let mut out = String::new();
    for block in blocks {
        out.push_str("# id = ");
        out.push_str(&block.id);
        out.push('\n');
        out.push_str("S ");
        out.push_str(&block.tokens.join(" "));
        out.push('\n');
        for edit in &block.edits {
            out.push_str(&format_edit_line(edit));
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

struct PartialBlock {
    id: Option<String>,
    tokens: Option<Vec<String>>,
    edits: Vec<Edit>,
    start_line: usize,
    shift: isize,
}

impl PartialBlock {
    fn finish(self) -> Result<EditBlock> {
        let id = self.id.ok_or_else(|| Error::data(self.start_line, "edit block has no `# id = ...` line"))?;
        let tokens = self.tokens.ok_or_else(|| Error::data(self.start_line, "edit block has no `S` line"))?;
        Ok(EditBlock { id, tokens, edits: self.edits })
    }
}

fn parse_edit_line(line: &str, line_no: usize, block: &PartialBlock) -> Result<Edit> {
    let bad = |msg: String| Error::data(line_no, msg);
    let tokens = block.tokens.as_ref().ok_or_else(|| bad("`A` line before `S` line".into()))?;
    let fields: Vec<&str> = line.splitn(6, "|||").collect();
    if fields.len() != 6 {
        return Err(bad(format!("expected 6 `|||`-separated fields, found {}", fields.len())));
    }
    let span: Vec<&str> =
        fields[0].strip_prefix("A ").ok_or_else(|| bad("malformed `A` line".into()))?.split(' ').collect();
    let [start, end] = span[..] else {
        return Err(bad(format!("malformed span `{}`", fields[0])));
    };
    let o_start: usize = start.parse().map_err(|_| bad(format!("bad span start `{start}`")))?;
    let o_end: usize = end.parse().map_err(|_| bad(format!("bad span end `{end}`")))?;
    if o_start > o_end || o_end > tokens.len() {
        return Err(bad(format!("span {o_start}..{o_end} out of bounds for {} tokens", tokens.len())));
    }
    if let Some(prev) = block.edits.last() {
        if o_start < prev.o_end || (o_start == prev.o_end && o_start == o_end && prev.o_start == prev.o_end) {
            return Err(bad(format!("span {o_start}..{o_end} overlaps the previous edit")));
        }
    }

    let (form, content) = fields[1].split_once(':').ok_or_else(|| bad(format!("malformed label `{}`", fields[1])))?;
    let form = Form::parse(form).ok_or_else(|| bad(format!("unknown form code `{form}`")))?;
    let content = match content {
        "NA" => None,
        code => Some(ContentCode::from_code(code).ok_or_else(|| bad(format!("unknown content code `{code}`")))?),
    };
    let correction = fields[2].to_string();
    if correction.split(' ').any(str::is_empty) && !correction.is_empty() {
        return Err(bad(format!("correction `{correction}` has stray spaces")));
    }
    let n_corrected = if correction.is_empty() { 0 } else { correction.split(' ').count() };
    if o_start == o_end && n_corrected == 0 {
        return Err(bad("edit with empty original span and empty correction".into()));
    }

    let c_start = (o_start as isize + block.shift) as usize;
    let edit = Edit { o_start, o_end, c_start, c_end: c_start + n_corrected, content, correction };
    if edit.form() != form {
        return Err(bad(format!("label form {form} disagrees with span shape {}", edit.form())));
    }
    Ok(edit)
}

/// Parses an edit file written by [`write_edit_file`] or a compatible tool.
///
/// Corrected-side offsets are reconstructed from the edits' spans and corrections.
pub fn parse_edit_file(text: &str) -> Result<Vec<EditBlock>> {
    let mut blocks = Vec::new();
    let mut current: Option<PartialBlock> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            if let Some(block) = current.take() {
                blocks.push(block.finish()?);
            }
            continue;
        }
        let block = current.get_or_insert_with(|| PartialBlock {
            id: None,
            tokens: None,
            edits: Vec::new(),
            start_line: line_no,
            shift: 0,
        });
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(("id", value)) = comment.split_once('=').map(|(k, v)| (k.trim(), v.trim())) {
                block.id = Some(value.to_string());
            }
        } else if line == "S" || line.starts_with("S ") {
            if block.tokens.is_some() {
                return Err(Error::data(line_no, "second `S` line in one block"));
            }
            let rest = line.get(2..).unwrap_or("");
            block.tokens = Some(rest.split(' ').filter(|t| !t.is_empty()).map(str::to_string).collect());
        } else if line.starts_with("A ") {
            let edit = parse_edit_line(line, line_no, block)?;
            block.shift += (edit.c_end - edit.c_start) as isize - (edit.o_end - edit.o_start) as isize;
            block.edits.push(edit);
        } else {
            return Err(Error::data(line_no, format!("unexpected line `{line}`")));
        }
    }
    if let Some(block) = current.take() {
        blocks.push(block.finish()?);
    }
    Ok(blocks)
}
