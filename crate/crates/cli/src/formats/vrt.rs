//! Vertical corpus format.
//!
//! One token per line: `form<TAB>candidates[<TAB>gold]`, candidates joined
//! by `/` in their meaningful order. A blank line ends a sentence. A line
//! `# id=<string>` before a sentence sets its id (sentences without one
//! get `s1`, `s2`, ... by position); any other `#` line is a comment.
//!
//! In gold mode every token must carry exactly one candidate, which
//! doubles as its gold tag. In ambiguous mode the optional third column is
//! the gold tag.

use std::fmt;
use std::fs;
use std::path::Path;

use synpat_core::corpus::{Corpus, CorpusError, Sentence, Token};
use synpat_core::tagset::{Tag, TagsetError};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadMode {
    Gold,
    Ambiguous,
}

#[derive(Debug)]
pub enum VrtError {
    MalformedLine { line: usize, reason: String },
    GoldModeAmbiguity { line: usize },
    EmptySentence { line: usize },
    Model(CorpusError),
}

impl fmt::Display for VrtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VrtError::MalformedLine { line, reason } => {
                write!(f, "line {line}: {reason}")
            }
            VrtError::GoldModeAmbiguity { line } => {
                write!(f, "line {line}: gold corpus has an ambiguous token")
            }
            VrtError::EmptySentence { line } => {
                write!(f, "line {line}: sentence has no tokens")
            }
            VrtError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for VrtError {}

impl From<VrtError> for CliError {
    fn from(e: VrtError) -> Self {
        let code = match &e {
            VrtError::MalformedLine { .. } => "MalformedLine",
            VrtError::GoldModeAmbiguity { .. } => "GoldModeAmbiguity",
            VrtError::EmptySentence { .. } => "EmptySentence",
            VrtError::Model(inner) => return CliError::from(inner.clone()),
        };
        CliError::new(code, e.to_string())
    }
}

fn malformed(line: usize, e: TagsetError) -> VrtError {
    VrtError::MalformedLine {
        line,
        reason: e.to_string(),
    }
}

pub fn read_corpus_str(text: &str, mode: ReadMode, name: &str) -> Result<Corpus, VrtError> {
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut pending_id: Option<(String, usize)> = None;

    let close = |tokens: &mut Vec<Token>,
                     pending_id: &mut Option<(String, usize)>,
                     sentences: &mut Vec<Sentence>,
                     line: usize|
     -> Result<(), VrtError> {
        if tokens.is_empty() {
            if let Some((_, at)) = pending_id.take() {
                return Err(VrtError::EmptySentence { line: at });
            }
            return Ok(());
        }
        let id = pending_id
            .take()
            .map(|(id, _)| id)
            .unwrap_or_else(|| format!("s{}", sentences.len() + 1));
        let sentence =
            Sentence::new(id, std::mem::take(tokens)).map_err(VrtError::Model)?;
        sentences.push(sentence);
        let _ = line;
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            close(&mut tokens, &mut pending_id, &mut sentences, line_no)?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("# id=") {
            if !tokens.is_empty() {
                return Err(VrtError::MalformedLine {
                    line: line_no,
                    reason: "sentence id inside a sentence; end it with a blank line".into(),
                });
            }
            if pending_id.is_some() {
                return Err(VrtError::EmptySentence { line: line_no - 1 });
            }
            let id = rest.trim().to_string();
            if id.is_empty() {
                return Err(VrtError::MalformedLine {
                    line: line_no,
                    reason: "empty sentence id".into(),
                });
            }
            pending_id = Some((id, line_no));
            continue;
        }
        if line.starts_with('#') {
            continue;
        }

        let mut columns = line.split('\t');
        let form = columns.next().unwrap_or_default();
        let Some(candidates_col) = columns.next() else {
            return Err(VrtError::MalformedLine {
                line: line_no,
                reason: "expected form<TAB>candidates".into(),
            });
        };
        let gold_col = columns.next();
        if columns.next().is_some() {
            return Err(VrtError::MalformedLine {
                line: line_no,
                reason: "more than three columns".into(),
            });
        }

        let mut candidates = Vec::new();
        for part in candidates_col.split('/') {
            candidates.push(Tag::parse(part).map_err(|e| malformed(line_no, e))?);
        }
        let explicit_gold = gold_col
            .map(|g| Tag::parse(g).map_err(|e| malformed(line_no, e)))
            .transpose()?;

        let gold = match mode {
            ReadMode::Gold => {
                if candidates.len() != 1 {
                    return Err(VrtError::GoldModeAmbiguity { line: line_no });
                }
                if let Some(g) = &explicit_gold {
                    if g != &candidates[0] {
                        return Err(VrtError::MalformedLine {
                            line: line_no,
                            reason: "gold column contradicts the single candidate".into(),
                        });
                    }
                }
                Some(candidates[0].clone())
            }
            ReadMode::Ambiguous => explicit_gold,
        };

        let token = Token::new(form, candidates, gold).map_err(|e| {
            VrtError::MalformedLine {
                line: line_no,
                reason: e.to_string(),
            }
        })?;
        tokens.push(token);
    }
    let last_line = text.lines().count();
    close(&mut tokens, &mut pending_id, &mut sentences, last_line)?;
    Corpus::new(name, sentences).map_err(VrtError::Model)
}

/// Canonical rendering: explicit `# id=` line per sentence, one blank line
/// after each sentence, gold column only when asked for and present.
pub fn write_corpus_string(corpus: &Corpus, include_gold: bool) -> String {
    let mut out = String::new();
    for sentence in corpus.sentences() {
        out.push_str("# id=");
        out.push_str(sentence.id());
        out.push('\n');
        for token in sentence.tokens() {
            out.push_str(token.form());
            out.push('\t');
            let mut first = true;
            for c in token.candidates() {
                if !first {
                    out.push('/');
                }
                out.push_str(c.as_str());
                first = false;
            }
            if include_gold {
                if let Some(g) = token.gold() {
                    out.push('\t');
                    out.push_str(g.as_str());
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

pub fn read_corpus_file(path: &Path, mode: ReadMode) -> Result<Corpus, CliError> {
    let text = fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into());
    Ok(read_corpus_str(&text, mode, &name)?)
}

pub fn write_corpus_file(
    corpus: &Corpus,
    path: &Path,
    include_gold: bool,
) -> Result<(), CliError> {
    fs::write(path, write_corpus_string(corpus, include_gold))?;
    Ok(())
}
