//! Line-level parsing shared by the axis-database and configuration
//! formats: `LAYER` headers with `TAGS`, `CLASS`, and `AXIS` lines.

use std::collections::BTreeSet;

use synpat_core::axis::AxisElement;
use synpat_core::tagset::Tag;

#[derive(Debug)]
pub(crate) struct LayerBlock {
    pub line: usize,
    pub id: String,
    pub priority: i32,
    pub generalise: bool,
    pub tags: BTreeSet<Tag>,
    pub classes: Vec<(Tag, Vec<Tag>)>,
    /// `(line, elements)` per AXIS line.
    pub axes: Vec<(usize, Vec<AxisElement>)>,
}

pub(crate) type LineError = (usize, String);

fn err(line: usize, reason: impl Into<String>) -> LineError {
    (line, reason.into())
}

/// Walks the file, collecting layer blocks. Lines outside any block are
/// offered to `on_global`, which returns whether it consumed the line.
pub(crate) fn parse_blocks(
    text: &str,
    mut on_global: impl FnMut(usize, &str) -> Result<bool, LineError>,
) -> Result<Vec<LayerBlock>, LineError> {
    let mut blocks: Vec<LayerBlock> = Vec::new();
    let mut current: Option<LayerBlock> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "LAYER" => {
                if let Some(block) = current.take() {
                    blocks.push(finish(block)?);
                }
                current = Some(parse_layer_header(line_no, &tokens)?);
            }
            "TAGS" => {
                let block = current
                    .as_mut()
                    .ok_or_else(|| err(line_no, "TAGS outside a LAYER block"))?;
                if !block.tags.is_empty() {
                    return Err(err(line_no, "duplicate TAGS line"));
                }
                for tok in &tokens[1..] {
                    let tag = Tag::parse(tok).map_err(|e| err(line_no, e.to_string()))?;
                    if !block.tags.insert(tag) {
                        return Err(err(line_no, format!("tag {tok} listed twice")));
                    }
                }
                if block.tags.is_empty() {
                    return Err(err(line_no, "TAGS line lists no tags"));
                }
            }
            "CLASS" => {
                let block = current
                    .as_mut()
                    .ok_or_else(|| err(line_no, "CLASS outside a LAYER block"))?;
                if tokens.len() < 4 || tokens[2] != "=" {
                    return Err(err(line_no, "expected CLASS <symbol> = <tag> ..."));
                }
                let symbol = Tag::parse(tokens[1]).map_err(|e| err(line_no, e.to_string()))?;
                let members = tokens[3..]
                    .iter()
                    .map(|t| Tag::parse(t).map_err(|e| err(line_no, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                block.classes.push((symbol, members));
            }
            "AXIS" => {
                let block = current
                    .as_mut()
                    .ok_or_else(|| err(line_no, "AXIS outside a LAYER block"))?;
                let elements = parse_elements(&tokens[1..]).map_err(|r| err(line_no, r))?;
                block.axes.push((line_no, elements));
            }
            _ => {
                if !on_global(line_no, line)? {
                    return Err(err(line_no, format!("unknown directive {:?}", tokens[0])));
                }
            }
        }
    }
    if let Some(block) = current.take() {
        blocks.push(finish(block)?);
    }
    Ok(blocks)
}

fn finish(block: LayerBlock) -> Result<LayerBlock, LineError> {
    if block.tags.is_empty() {
        return Err(err(block.line, format!("layer {:?} has no TAGS line", block.id)));
    }
    Ok(block)
}

fn parse_layer_header(line_no: usize, tokens: &[&str]) -> Result<LayerBlock, LineError> {
    if tokens.len() != 6 || tokens[2] != "PRIORITY" || tokens[4] != "GENERALISE" {
        return Err(err(
            line_no,
            "expected LAYER <id> PRIORITY <int> GENERALISE <yes|no>",
        ));
    }
    let priority: i32 = tokens[3]
        .parse()
        .map_err(|_| err(line_no, format!("bad priority {:?}", tokens[3])))?;
    let generalise = match tokens[5] {
        "yes" => true,
        "no" => false,
        other => return Err(err(line_no, format!("bad GENERALISE value {other:?}"))),
    };
    Ok(LayerBlock {
        line: line_no,
        id: tokens[1].to_string(),
        priority,
        generalise,
        tags: BTreeSet::new(),
        classes: Vec::new(),
        axes: Vec::new(),
    })
}

/// Parses axis notation: whitespace-separated symbols, `...` for a gap,
/// `[` ... `]+` for a repeat group.
pub(crate) fn parse_elements(tokens: &[&str]) -> Result<Vec<AxisElement>, String> {
    let mut cursor = 0;
    let elements = parse_sequence(tokens, &mut cursor, false)?;
    if elements.is_empty() {
        return Err("empty axis".into());
    }
    Ok(elements)
}

fn parse_sequence(
    tokens: &[&str],
    cursor: &mut usize,
    nested: bool,
) -> Result<Vec<AxisElement>, String> {
    let mut out = Vec::new();
    while *cursor < tokens.len() {
        match tokens[*cursor] {
            "]+" => {
                if !nested {
                    return Err("']+' without a matching '['".into());
                }
                *cursor += 1;
                return Ok(out);
            }
            "[" => {
                *cursor += 1;
                out.push(AxisElement::Repeat(parse_sequence(tokens, cursor, true)?));
            }
            "..." => {
                *cursor += 1;
                out.push(AxisElement::Gap);
            }
            sym => {
                *cursor += 1;
                out.push(AxisElement::Sym(
                    Tag::parse(sym).map_err(|e| e.to_string())?,
                ));
            }
        }
    }
    if nested {
        return Err("'[' without a closing ']+'".into());
    }
    Ok(out)
}
