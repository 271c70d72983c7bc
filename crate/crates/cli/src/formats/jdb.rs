//! Joint database format.
//!
//! ```text
//! PARAMS error_margin=0.01 absolute_margin=5 max_len=4
//! TARGETCOUNT SUBJ 120
//! JOINT SUBJ : <s> DN> _ +FMAINV | COUNT 42
//! ```
//!
//! `_` marks the target slot, `<s>`/`</s>` the sentence boundaries.
//! Frequencies are re-derived from the counts on load. Which generation
//! algorithm produced the database is deliberately not recorded: both
//! algorithms yield the same joints, and the file stores content, not
//! provenance (an `algorithm=` key is accepted and ignored when reading).

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use synpat_core::joint::{Context, CtxSym, JointDb, JointError, JointParams};
use synpat_core::tagset::Tag;

use crate::error::CliError;

#[derive(Debug)]
pub enum JdbError {
    Malformed { line: usize, reason: String },
    Model(JointError),
}

impl fmt::Display for JdbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JdbError::Malformed { line, reason } => write!(f, "line {line}: {reason}"),
            JdbError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for JdbError {}

impl From<JdbError> for CliError {
    fn from(e: JdbError) -> Self {
        match e {
            JdbError::Malformed { .. } => CliError::new("MalformedJointFile", e.to_string()),
            JdbError::Model(inner) => CliError::from(inner),
        }
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> JdbError {
    JdbError::Malformed {
        line,
        reason: reason.into(),
    }
}

pub fn render_joint_db(db: &JointDb) -> String {
    let params = db.params();
    let mut out = format!(
        "PARAMS error_margin={} absolute_margin={} max_len={}\n",
        params.error_margin, params.absolute_margin, params.max_len
    );
    for (tag, count) in db.target_counts() {
        out.push_str(&format!("TARGETCOUNT {tag} {count}\n"));
    }
    for joint in db.iter() {
        out.push_str(&format!("JOINT {} :", joint.target));
        for sym in &joint.context.left {
            out.push_str(&format!(" {sym}"));
        }
        out.push_str(" _");
        for sym in &joint.context.right {
            out.push_str(&format!(" {sym}"));
        }
        out.push_str(&format!(" | COUNT {}\n", joint.support));
    }
    out
}

fn parse_ctx_sym(token: &str, line: usize) -> Result<CtxSym, JdbError> {
    match token {
        "<s>" => Ok(CtxSym::Bos),
        "</s>" => Ok(CtxSym::Eos),
        t => Ok(CtxSym::Tag(
            Tag::parse(t).map_err(|e| malformed(line, e.to_string()))?,
        )),
    }
}

pub fn parse_joint_db(text: &str) -> Result<JointDb, JdbError> {
    let mut params: Option<JointParams> = None;
    let mut target_counts: BTreeMap<Tag, u64> = BTreeMap::new();
    let mut by_target: BTreeMap<Tag, BTreeMap<Context, u64>> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "PARAMS" => {
                if params.is_some() {
                    return Err(malformed(line_no, "duplicate PARAMS line"));
                }
                let mut error_margin = None;
                let mut absolute_margin = None;
                let mut max_len = None;
                for pair in &tokens[1..] {
                    let (key, value) = pair
                        .split_once('=')
                        .ok_or_else(|| malformed(line_no, format!("bad pair {pair:?}")))?;
                    match key {
                        "error_margin" => {
                            error_margin = Some(value.parse::<f64>().map_err(|_| {
                                malformed(line_no, format!("bad error_margin {value:?}"))
                            })?);
                        }
                        "absolute_margin" => {
                            absolute_margin = Some(value.parse::<u64>().map_err(|_| {
                                malformed(line_no, format!("bad absolute_margin {value:?}"))
                            })?);
                        }
                        "max_len" => {
                            max_len = Some(value.parse::<usize>().map_err(|_| {
                                malformed(line_no, format!("bad max_len {value:?}"))
                            })?);
                        }
                        // Provenance key tolerated for compatibility.
                        "algorithm" => {}
                        other => {
                            return Err(malformed(line_no, format!("unknown key {other:?}")))
                        }
                    }
                }
                match (error_margin, absolute_margin, max_len) {
                    (Some(e), Some(a), Some(m)) => {
                        params = Some(JointParams {
                            error_margin: e,
                            absolute_margin: a,
                            max_len: m,
                        });
                    }
                    _ => return Err(malformed(line_no, "PARAMS line is missing a key")),
                }
            }
            "TARGETCOUNT" => {
                if tokens.len() != 3 {
                    return Err(malformed(line_no, "expected TARGETCOUNT <tag> <n>"));
                }
                let tag = Tag::parse(tokens[1]).map_err(|e| malformed(line_no, e.to_string()))?;
                let count: u64 = tokens[2]
                    .parse()
                    .map_err(|_| malformed(line_no, format!("bad count {:?}", tokens[2])))?;
                if target_counts.insert(tag, count).is_some() {
                    return Err(malformed(line_no, "duplicate TARGETCOUNT"));
                }
            }
            "JOINT" => {
                if tokens.len() < 6 || tokens[2] != ":" {
                    return Err(malformed(
                        line_no,
                        "expected JOINT <tag> : <left> _ <right> | COUNT <n>",
                    ));
                }
                let target =
                    Tag::parse(tokens[1]).map_err(|e| malformed(line_no, e.to_string()))?;
                let slot = tokens
                    .iter()
                    .position(|t| *t == "_")
                    .ok_or_else(|| malformed(line_no, "missing target slot '_'"))?;
                let bar = tokens
                    .iter()
                    .position(|t| *t == "|")
                    .ok_or_else(|| malformed(line_no, "missing '|' before COUNT"))?;
                if slot < 3 || bar < slot {
                    return Err(malformed(line_no, "context out of order"));
                }
                if bar + 3 != tokens.len() || tokens[bar + 1] != "COUNT" {
                    return Err(malformed(line_no, "expected '| COUNT <n>'"));
                }
                let support: u64 = tokens[bar + 2].parse().map_err(|_| {
                    malformed(line_no, format!("bad count {:?}", tokens[bar + 2]))
                })?;
                let left = tokens[3..slot]
                    .iter()
                    .map(|t| parse_ctx_sym(t, line_no))
                    .collect::<Result<Vec<_>, _>>()?;
                let right = tokens[slot + 1..bar]
                    .iter()
                    .map(|t| parse_ctx_sym(t, line_no))
                    .collect::<Result<Vec<_>, _>>()?;
                let previous = by_target
                    .entry(target)
                    .or_default()
                    .insert(Context { left, right }, support);
                if previous.is_some() {
                    return Err(malformed(line_no, "duplicate JOINT line"));
                }
            }
            other => return Err(malformed(line_no, format!("unknown directive {other:?}"))),
        }
    }

    let params = params.ok_or_else(|| malformed(1, "missing PARAMS header"))?;
    JointDb::from_parts(params, target_counts, by_target).map_err(JdbError::Model)
}

pub fn read_joint_db_file(path: &Path) -> Result<JointDb, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_joint_db(&text)?)
}

pub fn write_joint_db_file(db: &JointDb, path: &Path) -> Result<(), CliError> {
    fs::write(path, render_joint_db(db))?;
    Ok(())
}
