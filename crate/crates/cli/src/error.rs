//! Command-level errors: a stable machine-greppable code plus a human
//! message, printed as one line on stderr.

use std::fmt;

use synpat_core::axis::AxisError;
use synpat_core::corpus::CorpusError;
use synpat_core::eval::EvalError;
use synpat_core::joint::JointError;
use synpat_core::parser::ParserError;
use synpat_core::tagset::TagsetError;

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}] {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("IoError", e.to_string())
    }
}

impl From<TagsetError> for CliError {
    fn from(e: TagsetError) -> Self {
        let code = match &e {
            TagsetError::MalformedTag { .. } => "MalformedTag",
            TagsetError::DuplicateTag(_) => "DuplicateTag",
            TagsetError::EmptyInventory => "EmptyInventory",
            _ => "TagsetError",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        let code = match &e {
            CorpusError::EmptySentence(_) => "EmptySentence",
            CorpusError::DuplicateSentenceId(_) => "DuplicateSentenceId",
            CorpusError::MissingGold { .. } => "MissingGold",
            CorpusError::TooManyReadings { .. } => "TooManyReadings",
            CorpusError::EmptyCorpus => "EmptyCorpus",
            _ => "CorpusError",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<AxisError> for CliError {
    fn from(e: AxisError) -> Self {
        let code = match &e {
            AxisError::MissingGold(_) => "MissingGold",
            AxisError::EmptyCorpus => "EmptyCorpus",
            AxisError::EmptyLayer(_) => "EmptyLayer",
            AxisError::NoLayers | AxisError::DuplicateLayerId(_) => "ConfigError",
            _ => "AxisError",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<JointError> for CliError {
    fn from(e: JointError) -> Self {
        let code = match &e {
            JointError::InvalidParams(_) => "InvalidParams",
            JointError::MissingGold { .. } => "MissingGold",
            JointError::EmptyCorpus => "EmptyCorpus",
            JointError::PrefixClosureViolation { .. } => "PrefixClosureViolation",
            _ => "JointError",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ParserError> for CliError {
    fn from(e: ParserError) -> Self {
        let code = match &e {
            ParserError::TooManyReadings { .. } => "TooManyReadings",
            ParserError::EmptyReadingSet => "EmptyReadingSet",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        let code = match &e {
            EvalError::AlignmentMismatch { .. } => "AlignmentMismatch",
            EvalError::NotDisambiguated { .. } => "NotDisambiguated",
            EvalError::MissingGold { .. } => "MissingGold",
        };
        CliError::new(code, e.to_string())
    }
}
