//! File formats and command implementations for the pattern-parsing
//! toolkit. The algorithms live in `synpat-core`; this crate adds the
//! corpus (`.vrt`), axis database (`.adb`), joint database (`.jdb`), and
//! pipeline configuration formats, plus the `synpat` command-line tool.

pub mod commands;
pub mod error;
pub mod formats;

pub use error::CliError;
