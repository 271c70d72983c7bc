//! Pattern-based disambiguation of shallow-parsed text.
//!
//! A rule-based surface-syntactic analyser typically leaves a residue of
//! ambiguity: some words carry two or more candidate function tags. This
//! crate mines two kinds of patterns from tagged corpora and applies them
//! to drive that residue to zero:
//!
//! * **sentence axes** ([`axis`]): global patterns recording the order in
//!   which a chosen subset of tags may appear across a sentence, with gaps
//!   (`...`) for intervening material and repeat groups (`[ ... ]+`) for
//!   material that may recur;
//! * **joints** ([`joint`]): local patterns recording which tag contexts
//!   surround each tag, mined with frequency and support thresholds.
//!
//! The [`parser`] module combines the two: axes filter the alternative
//! readings of a sentence (strictest layer first, falling back to more
//! general layers), then joints rank the survivors by preferring readings
//! whose tags sit in the longest known contexts.
//!
//! The crate is `no_std` (with `alloc`) and contains no I/O; file formats
//! and the command-line front end live in the companion `synpat` crate.
//!
//! # Example
//!
//! Extract and generalise the verb axis of one annotated sentence:
//!
//! ```
//! use std::collections::BTreeSet;
//! use synpat_core::axis::{extract_axis, generalize_repeats, AxisLayer, LayerConfig};
//! use synpat_core::corpus::{Sentence, Token};
//! use synpat_core::tagset::{EquivalenceClassMap, Tag};
//!
//! let tag = |s: &str| Tag::parse(s).unwrap();
//! let words = [
//!     ("she", "SUBJ"), ("would", "+FAUXV"), ("read", "-FMAINV"),
//!     ("and", "CC"), ("sign", "-FMAINV"), ("letters", "OBJ"),
//! ];
//! let tokens = words
//!     .map(|(form, t)| Token::new(form, vec![tag(t)], Some(tag(t))).unwrap())
//!     .to_vec();
//! let sentence = Sentence::new("s1", tokens).unwrap();
//!
//! let layer = AxisLayer::new(
//!     LayerConfig {
//!         id: "verbs".into(),
//!         tagset: ["+FAUXV", "-FMAINV"].map(tag).into_iter().collect(),
//!         eq: EquivalenceClassMap::empty(),
//!         priority: 0,
//!         generalise: true,
//!     },
//!     BTreeSet::new(),
//! )
//! .unwrap();
//!
//! let axis = extract_axis(&sentence, &layer).unwrap();
//! assert_eq!(axis.to_string(), "... +FAUXV -FMAINV ... -FMAINV ...");
//! assert_eq!(
//!     generalize_repeats(&axis).to_string(),
//!     "... +FAUXV [ ... -FMAINV ]+ ...",
//! );
//! ```

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod axis;
pub mod corpus;
pub mod eval;
pub mod joint;
pub mod parser;
pub mod tagset;

pub use axis::{Axis, AxisDb, AxisElement, AxisLayer};
pub use corpus::{Corpus, Reading, Sentence, Token};
pub use joint::{Joint, JointDb, JointParams};
pub use parser::{DisambiguationConfig, ParseResult};
pub use tagset::{EquivalenceClassMap, Tag, TagInventory};
