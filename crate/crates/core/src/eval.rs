//! Per-text evaluation: word counts, ambiguity and error rates of the
//! parser's input, and success rates of its output.
//!
//! Totals pool the underlying counts (micro-average); they are not means
//! of the per-text rates. Punctuation tokens are excluded from every
//! denominator.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::Corpus;
use crate::tagset::Tag;

/// Counts backing one report row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRow {
    pub name: String,
    /// Non-punctuation tokens.
    pub words: u64,
    /// Words ambiguous in the parser's input.
    pub ambiguous: u64,
    /// Words whose gold tag was absent from the input candidates; `None`
    /// when no input corpus was supplied.
    pub input_errors: Option<u64>,
    /// Words whose predicted tag equals gold.
    pub correct: u64,
}

impl EvalRow {
    pub fn ambiguity_rate(&self) -> f64 {
        ratio(self.ambiguous, self.words)
    }

    pub fn error_rate(&self) -> Option<f64> {
        self.input_errors.map(|e| ratio(e, self.words))
    }

    pub fn success_rate(&self) -> f64 {
        ratio(self.correct, self.words)
    }
}

fn ratio(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

/// One row per evaluated text plus a pooled totals row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub total: EvalRow,
}

/// One text to evaluate: the parser's disambiguated output, the gold
/// standard, and optionally the ambiguous corpus the parser consumed
/// (the source of ambiguity and error rates).
pub struct EvalSample<'a> {
    pub name: String,
    pub input: Option<&'a Corpus>,
    pub pred: &'a Corpus,
    pub gold: &'a Corpus,
}

/// Fraction of words whose single predicted tag equals gold.
pub fn success_rate(pred: &Corpus, gold: &Corpus) -> Result<f64, EvalError> {
    let row = evaluate_sample(&EvalSample {
        name: String::new(),
        input: None,
        pred,
        gold,
    })?;
    Ok(row.success_rate())
}

/// Evaluates one text.
pub fn evaluate_sample(sample: &EvalSample<'_>) -> Result<EvalRow, EvalError> {
    let pred = sample.pred;
    let gold = sample.gold;
    align_shape(pred, gold)?;
    if let Some(input) = sample.input {
        align_shape(input, gold)?;
    }

    let mut row = EvalRow {
        name: sample.name.clone(),
        words: 0,
        ambiguous: 0,
        input_errors: sample.input.map(|_| 0),
        correct: 0,
    };
    for (si, (ps, gs)) in pred.sentences().iter().zip(gold.sentences()).enumerate() {
        for (ti, (pt, gt)) in ps.tokens().iter().zip(gs.tokens()).enumerate() {
            if gt.is_punct() {
                continue;
            }
            if pt.candidates().len() != 1 {
                return Err(EvalError::NotDisambiguated {
                    sentence: ps.id().into(),
                    position: ti,
                });
            }
            let gold_tag = resolved_gold(gt, gs.id(), ti)?;
            row.words += 1;
            if &pt.candidates()[0] == gold_tag {
                row.correct += 1;
            }
            if let Some(input) = sample.input {
                let it = &input.sentences()[si].tokens()[ti];
                if it.is_ambiguous() {
                    row.ambiguous += 1;
                }
                if it.candidate_index(gold_tag).is_none() {
                    *row.input_errors.as_mut().expect("input present") += 1;
                }
            }
        }
    }
    Ok(row)
}

fn resolved_gold<'a>(
    token: &'a crate::corpus::Token,
    sentence_id: &str,
    position: usize,
) -> Result<&'a Tag, EvalError> {
    if let Some(g) = token.gold() {
        return Ok(g);
    }
    if token.candidates().len() == 1 {
        return Ok(&token.candidates()[0]);
    }
    Err(EvalError::MissingGold {
        sentence: sentence_id.into(),
        position,
    })
}

fn align_shape(a: &Corpus, b: &Corpus) -> Result<(), EvalError> {
    if a.sentences().len() != b.sentences().len() {
        return Err(EvalError::AlignmentMismatch {
            sentence: String::from("<corpus>"),
            position: a.sentences().len().min(b.sentences().len()),
            detail: "different sentence counts",
        });
    }
    for (sa, sb) in a.sentences().iter().zip(b.sentences()) {
        if sa.len() != sb.len() {
            return Err(EvalError::AlignmentMismatch {
                sentence: sb.id().into(),
                position: sa.len().min(sb.len()),
                detail: "different token counts",
            });
        }
        for (i, (ta, tb)) in sa.tokens().iter().zip(sb.tokens()).enumerate() {
            if ta.form() != tb.form() {
                return Err(EvalError::AlignmentMismatch {
                    sentence: sb.id().into(),
                    position: i,
                    detail: "token forms differ",
                });
            }
        }
    }
    Ok(())
}

/// Builds the per-text report plus its pooled totals row.
pub fn build_report(samples: &[EvalSample<'_>]) -> Result<EvalReport, EvalError> {
    let mut rows = Vec::with_capacity(samples.len());
    for sample in samples {
        rows.push(evaluate_sample(sample)?);
    }
    let mut total = EvalRow {
        name: String::from("total"),
        words: 0,
        ambiguous: 0,
        input_errors: rows
            .iter()
            .all(|r| r.input_errors.is_some())
            .then_some(0),
        correct: 0,
    };
    for row in &rows {
        total.words += row.words;
        total.ambiguous += row.ambiguous;
        total.correct += row.correct;
        if let (Some(t), Some(e)) = (total.input_errors.as_mut(), row.input_errors) {
            *t += e;
        }
    }
    Ok(EvalReport { rows, total })
}

fn percent(rate: f64) -> String {
    alloc::format!("{:.1} %", rate * 100.0)
}

impl EvalReport {
    /// Plain-text table, rates as one-decimal percentages.
    pub fn render_table(&self) -> String {
        let name_width = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .chain([self.total.name.len(), 4])
            .max()
            .unwrap_or(4);
        let mut out = String::new();
        out.push_str(&alloc::format!(
            "{:<name_width$}  {:>8}  {:>9}  {:>7}  {:>7}\n",
            "text",
            "words",
            "ambiguity",
            "error",
            "success",
        ));
        let mut render_row = |row: &EvalRow| {
            out.push_str(&alloc::format!(
                "{:<name_width$}  {:>8}  {:>9}  {:>7}  {:>7}\n",
                row.name,
                row.words,
                percent(row.ambiguity_rate()),
                row.error_rate().map(percent).unwrap_or_else(|| "n/a".into()),
                percent(row.success_rate()),
            ));
        };
        for row in &self.rows {
            render_row(row);
        }
        render_row(&self.total);
        out
    }

    /// Comma-separated rows with a header, percentages without the sign.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("text,words,ambiguity,error,success\n");
        let mut render_row = |row: &EvalRow| {
            out.push_str(&alloc::format!(
                "{},{},{:.1},{},{:.1}\n",
                row.name,
                row.words,
                row.ambiguity_rate() * 100.0,
                row.error_rate()
                    .map(|r| alloc::format!("{:.1}", r * 100.0))
                    .unwrap_or_default(),
                row.success_rate() * 100.0,
            ));
        };
        for row in &self.rows {
            render_row(row);
        }
        render_row(&self.total);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    AlignmentMismatch {
        sentence: String,
        position: usize,
        detail: &'static str,
    },
    NotDisambiguated {
        sentence: String,
        position: usize,
    },
    MissingGold {
        sentence: String,
        position: usize,
    },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::AlignmentMismatch {
                sentence,
                position,
                detail,
            } => write!(
                f,
                "corpora misaligned at sentence {sentence:?} position {position}: {detail}"
            ),
            EvalError::NotDisambiguated { sentence, position } => write!(
                f,
                "prediction at sentence {sentence:?} position {position} is still ambiguous"
            ),
            EvalError::MissingGold { sentence, position } => write!(
                f,
                "gold corpus has no tag at sentence {sentence:?} position {position}"
            ),
        }
    }
}

impl core::error::Error for EvalError {}
