//! Axis database format.
//!
//! One block per layer:
//!
//! ```text
//! LAYER verbs PRIORITY 20 GENERALISE yes
//! TAGS +FAUXV +FMAINV -FMAINV INFMARK>
//! CLASS nonfinv = -FMAINV <NOM-FMAINV
//! AXIS ... +FAUXV [ ... nonfinv ]+ ...
//! ```
//!
//! Layers render strictest first, tags and classes sorted, axes in their
//! stored order, so rendering is canonical and round-trips exactly.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use synpat_core::axis::{Axis, AxisDb, AxisError, AxisLayer, LayerConfig};
use synpat_core::tagset::EquivalenceClassMap;

use super::blocks::{self, LineError};
use crate::error::CliError;

#[derive(Debug)]
pub enum AdbError {
    Malformed { line: usize, reason: String },
    Model(AxisError),
}

impl fmt::Display for AdbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdbError::Malformed { line, reason } => write!(f, "line {line}: {reason}"),
            AdbError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AdbError {}

impl From<AdbError> for CliError {
    fn from(e: AdbError) -> Self {
        match e {
            AdbError::Malformed { .. } => CliError::new("MalformedAxisFile", e.to_string()),
            AdbError::Model(inner) => CliError::from(inner),
        }
    }
}

fn lift(e: LineError) -> AdbError {
    AdbError::Malformed {
        line: e.0,
        reason: e.1,
    }
}

pub fn render_axis_db(db: &AxisDb) -> String {
    let mut out = String::new();
    for (i, layer) in db.layers().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!(
            "LAYER {} PRIORITY {} GENERALISE {}\n",
            layer.id(),
            layer.priority(),
            if layer.generalise() { "yes" } else { "no" },
        ));
        out.push_str("TAGS");
        for tag in layer.tagset() {
            out.push(' ');
            out.push_str(tag.as_str());
        }
        out.push('\n');
        for (symbol, members) in layer.eq().iter() {
            out.push_str("CLASS ");
            out.push_str(symbol.as_str());
            out.push_str(" =");
            for m in members {
                out.push(' ');
                out.push_str(m.as_str());
            }
            out.push('\n');
        }
        for axis in layer.axes() {
            out.push_str("AXIS ");
            out.push_str(&axis.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn parse_axis_db(text: &str) -> Result<AxisDb, AdbError> {
    let blocks = blocks::parse_blocks(text, |_, _| Ok(false)).map_err(lift)?;
    if blocks.is_empty() {
        return Err(AdbError::Malformed {
            line: 1,
            reason: "no LAYER blocks".into(),
        });
    }
    let mut layers = Vec::with_capacity(blocks.len());
    for block in blocks {
        let eq = EquivalenceClassMap::new(block.classes).map_err(|e| AdbError::Malformed {
            line: block.line,
            reason: e.to_string(),
        })?;
        let config = LayerConfig {
            id: block.id,
            tagset: block.tags,
            eq,
            priority: block.priority,
            generalise: block.generalise,
        };
        let mut axes = BTreeSet::new();
        for (line, elements) in block.axes {
            let axis = Axis::new(config.id.clone(), elements).map_err(|e| {
                AdbError::Malformed {
                    line,
                    reason: e.to_string(),
                }
            })?;
            axes.insert(axis);
        }
        layers.push(AxisLayer::new(config, axes).map_err(AdbError::Model)?);
    }
    AxisDb::new(layers).map_err(AdbError::Model)
}

pub fn read_axis_db_file(path: &Path) -> Result<AxisDb, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_axis_db(&text)?)
}

pub fn write_axis_db_file(db: &AxisDb, path: &Path) -> Result<(), CliError> {
    fs::write(path, render_axis_db(db))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use synpat_core::axis::{build_axis_db, LayerConfig};
    use synpat_core::corpus::{Corpus, Sentence, Token};
    use synpat_core::tagset::Tag;

    fn tag(s: &str) -> Tag {
        Tag::parse(s).unwrap()
    }

    fn gold_sentence(id: &str, tags: &[&str]) -> Sentence {
        let tokens = tags
            .iter()
            .enumerate()
            .map(|(i, t)| Token::new(format!("w{i}"), vec![tag(t)], Some(tag(t))).unwrap())
            .collect();
        Sentence::new(id, tokens).unwrap()
    }

    fn sample_db() -> AxisDb {
        let corpus = Corpus::new(
            "t",
            vec![
                gold_sentence("a", &["DN>", "SUBJ", "+FMAINV", "OBJ"]),
                gold_sentence("b", &["SUBJ", "+FAUXV", "-FMAINV", "-FMAINV", "OBJ"]),
            ],
        )
        .unwrap();
        let nonfinv = EquivalenceClassMap::new([(
            tag("nonfinv"),
            vec![tag("-FMAINV"), tag("<NOM-FMAINV")],
        )])
        .unwrap();
        let configs = vec![
            LayerConfig {
                id: "clause".into(),
                tagset: ["SUBJ", "OBJ", "+FMAINV", "+FAUXV", "-FMAINV"]
                    .iter()
                    .map(|s| tag(s))
                    .collect(),
                eq: nonfinv,
                priority: 10,
                generalise: true,
            },
            LayerConfig {
                id: "sv".into(),
                tagset: ["SUBJ", "+FMAINV"].iter().map(|s| tag(s)).collect(),
                eq: EquivalenceClassMap::empty(),
                priority: 0,
                generalise: false,
            },
        ];
        build_axis_db(&corpus, &configs).unwrap()
    }

    #[test]
    fn rendering_round_trips() {
        let db = sample_db();
        let rendered = render_axis_db(&db);
        let parsed = parse_axis_db(&rendered).unwrap();
        assert_eq!(db, parsed);
        assert_eq!(rendered, render_axis_db(&parsed));
    }

    #[test]
    fn repeats_render_in_bracket_notation() {
        let db = sample_db();
        let rendered = render_axis_db(&db);
        assert!(rendered.contains("AXIS SUBJ +FAUXV [ nonfinv ]+ OBJ"), "{rendered}");
    }

    #[test]
    fn empty_layer_is_rejected() {
        let text = "LAYER l PRIORITY 0 GENERALISE no\nTAGS SUBJ\n";
        match parse_axis_db(text) {
            Err(AdbError::Model(AxisError::EmptyLayer(id))) => assert_eq!(id, "l"),
            other => panic!("expected EmptyLayer, got {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_carry_their_number() {
        let text = "LAYER l PRIORITY x GENERALISE no\n";
        match parse_axis_db(text) {
            Err(AdbError::Malformed { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected Malformed, got {other:?}"),
        }
        let text = "LAYER l PRIORITY 0 GENERALISE no\nTAGS SUBJ\nAXIS [ SUBJ\n";
        match parse_axis_db(text) {
            Err(AdbError::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected Malformed, got {other:?}"),
        }
    }

    #[test]
    fn axis_symbols_must_fit_the_projected_alphabet() {
        let text = "LAYER l PRIORITY 0 GENERALISE no\nTAGS SUBJ\nAXIS ... OBJ ...\n";
        assert!(matches!(
            parse_axis_db(text),
            Err(AdbError::Model(AxisError::SymbolOutsideAlphabet { .. }))
        ));
    }
}
