//! Textual formats: vertical corpora (`.vrt`), axis databases (`.adb`),
//! joint databases (`.jdb`), pipeline configuration, and tag inventories.
//! Every format renders deterministically, and rendering then parsing
//! reproduces the value exactly.

pub mod adb;
mod blocks;
pub mod config;
pub mod inventory;
pub mod jdb;
pub mod vrt;
