//! Pipeline configuration: axis layer definitions plus optional defaults
//! for joint generation and disambiguation, in one file.
//!
//! ```text
//! # optional global keys
//! ERROR_MARGIN 0.01
//! ABSOLUTE_MARGIN 5
//! MAX_LEN 4
//! ALGORITHM incremental
//! READING_CAP 100000
//! STRICT_GAPS no
//! LAYER_SKIP yes
//!
//! LAYER clause PRIORITY 30 GENERALISE yes
//! TAGS SUBJ OBJ +FAUXV +FMAINV -FMAINV
//! CLASS nonfinv = -FMAINV <NOM-FMAINV <P-FMAINV
//! ```
//!
//! Layer blocks use the axis-database syntax without `AXIS` lines (axes
//! are learned, not configured).

use std::fmt;
use std::fs;
use std::path::Path;

use synpat_core::axis::LayerConfig;
use synpat_core::joint::{Algorithm, JointParams};
use synpat_core::parser::DisambiguationConfig;
use synpat_core::tagset::{EquivalenceClassMap, TagInventory};

use super::blocks;
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub layers: Vec<LayerConfig>,
    pub joint_params: JointParams,
    pub algorithm: Algorithm,
    pub disambiguation: DisambiguationConfig,
}

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

impl std::error::Error for ConfigError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::new("ConfigError", e.to_string())
    }
}

fn yes_no(value: &str, line: usize) -> Result<bool, ConfigError> {
    match value {
        "yes" => Ok(true),
        "no" => Ok(false),
        other => Err(ConfigError {
            line,
            reason: format!("expected yes or no, got {other:?}"),
        }),
    }
}

pub fn parse_config(text: &str) -> Result<PipelineConfig, ConfigError> {
    let mut joint_params = JointParams::default();
    let mut algorithm = Algorithm::default();
    let mut disambiguation = DisambiguationConfig::default();

    let blocks = {
        let joint_params = &mut joint_params;
        let algorithm = &mut algorithm;
        let disambiguation = &mut disambiguation;
        blocks::parse_blocks(text, move |line, content| {
            let (key, value) = match content.split_once(char::is_whitespace) {
                Some((k, v)) => (k, v.trim()),
                None => return Ok(false),
            };
            let bad = |what: &str| (line, format!("bad {what} value {value:?}"));
            match key {
                "ERROR_MARGIN" => {
                    joint_params.error_margin =
                        value.parse().map_err(|_| bad("ERROR_MARGIN"))?;
                }
                "ABSOLUTE_MARGIN" => {
                    joint_params.absolute_margin =
                        value.parse().map_err(|_| bad("ABSOLUTE_MARGIN"))?;
                }
                "MAX_LEN" => {
                    joint_params.max_len = value.parse().map_err(|_| bad("MAX_LEN"))?;
                }
                "ALGORITHM" => {
                    *algorithm = value.parse().map_err(|_| bad("ALGORITHM"))?;
                }
                "READING_CAP" => {
                    disambiguation.reading_cap =
                        value.parse().map_err(|_| bad("READING_CAP"))?;
                }
                "STRICT_GAPS" => {
                    disambiguation.strict_gaps =
                        yes_no(value, line).map_err(|e| (e.line, e.reason))?;
                }
                "LAYER_SKIP" => {
                    disambiguation.layer_skip =
                        yes_no(value, line).map_err(|e| (e.line, e.reason))?;
                }
                _ => return Ok(false),
            }
            Ok(true)
        })
        .map_err(|(line, reason)| ConfigError { line, reason })?
    };

    let mut layers = Vec::with_capacity(blocks.len());
    for block in blocks {
        if let Some((line, _)) = block.axes.first() {
            return Err(ConfigError {
                line: *line,
                reason: "AXIS lines belong in axis databases, not configuration".into(),
            });
        }
        let eq = EquivalenceClassMap::new(block.classes).map_err(|e| ConfigError {
            line: block.line,
            reason: e.to_string(),
        })?;
        layers.push(LayerConfig {
            id: block.id,
            tagset: block.tags,
            eq,
            priority: block.priority,
            generalise: block.generalise,
        });
    }
    Ok(PipelineConfig {
        layers,
        joint_params,
        algorithm,
        disambiguation,
    })
}

/// Checks every configured tag against the inventory and every class
/// symbol against collisions with it.
pub fn validate_against_inventory(
    config: &PipelineConfig,
    inventory: &TagInventory,
) -> Result<(), CliError> {
    for layer in &config.layers {
        for tag in &layer.tagset {
            if !inventory.contains(tag) && !tag.is_punct() {
                return Err(CliError::new(
                    "ConfigError",
                    format!("layer {:?}: tag {tag} is not in the inventory", layer.id),
                ));
            }
        }
        for (_, members) in layer.eq.iter() {
            for m in members {
                if !inventory.contains(m) {
                    return Err(CliError::new(
                        "ConfigError",
                        format!("layer {:?}: class member {m} is not in the inventory", layer.id),
                    ));
                }
            }
        }
        layer
            .eq
            .validate_against(inventory)
            .map_err(|e| CliError::new("ConfigError", e.to_string()))?;
    }
    Ok(())
}

pub fn read_config_file(path: &Path) -> Result<PipelineConfig, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_config(&text)?)
}
