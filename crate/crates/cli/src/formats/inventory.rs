//! Tag inventory files: one `SYMBOL<TAB>gloss` per line, `#` comments.

use std::fs;
use std::path::Path;

use synpat_core::tagset::{default_inventory, TagInventory};

use crate::error::CliError;

/// Loads the inventory at `path`, or the built-in tag set when `None`.
pub fn load_inventory(path: Option<&Path>) -> Result<TagInventory, CliError> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            Ok(TagInventory::parse_str(&text)?)
        }
        None => Ok(default_inventory()),
    }
}
