//! Two-stage disambiguation: axis filtering, then joint ranking.
//!
//! All readings of a sentence are laid out first. Axis layers are visited
//! strictest first; a layer keeps the readings whose projection matches
//! one of its axes and is skipped entirely when it would reject them all.
//! The surviving readings are then ranked by their joint score, longest
//! matched contexts winning, with candidate order as the final
//! deterministic tie-break. The result always assigns exactly one tag per
//! token.
//!
//! [`oracle_disambiguate`] replays the same definitions with deliberately
//! naive machinery (brute-force axis matching, per-joint scoring scans)
//! and must agree with [`disambiguate`] wherever enumeration is feasible.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::axis::{self, AxisDb, AxisLayer, CompiledAxis, GapMode, ProjectionItem};
use crate::corpus::{enumerate_readings, Corpus, CorpusError, Reading, Sentence, Token};
use crate::joint::{self, Context, CtxSym, JointDb};
use crate::tagset::Tag;

/// Knobs for the disambiguation pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisambiguationConfig {
    /// Hard ceiling on enumerated readings per sentence.
    pub reading_cap: u64,
    /// Require every axis gap to consume intervening material.
    pub strict_gaps: bool,
    /// Skip layers that reject every current reading; with this off,
    /// filtering stops at the first such layer.
    pub layer_skip: bool,
}

impl Default for DisambiguationConfig {
    fn default() -> Self {
        DisambiguationConfig {
            reading_cap: 100_000,
            strict_gaps: false,
            layer_skip: true,
        }
    }
}

impl DisambiguationConfig {
    fn gap_mode(&self) -> GapMode {
        if self.strict_gaps {
            GapMode::Strict
        } else {
            GapMode::Lenient
        }
    }
}

/// Outcome of the axis stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    /// Readings that survived, in enumeration order.
    pub survivors: Vec<Reading>,
    /// Ids of the layers that accepted, strictest first.
    pub matched_layers: Vec<String>,
    /// Number of layers skipped because nothing matched them.
    pub fallback_depth: usize,
}

/// The chosen reading with the trace of how it was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub chosen: Reading,
    pub survivors_after_axes: usize,
    pub matched_layers: Vec<String>,
    pub score: u64,
    pub fallback_depth: usize,
}

/// Axis layers compiled once for matching many sentences.
pub struct PreparedAxes<'a> {
    layers: Vec<(&'a AxisLayer, Vec<CompiledAxis>)>,
}

impl<'a> PreparedAxes<'a> {
    pub fn prepare(db: &'a AxisDb, mode: GapMode) -> Self {
        PreparedAxes {
            layers: db
                .layers()
                .iter()
                .map(|layer| {
                    let programs = layer
                        .axes()
                        .iter()
                        .map(|axis| CompiledAxis::compile(axis, mode))
                        .collect();
                    (layer, programs)
                })
                .collect(),
        }
    }
}

/// Filters the readings of one sentence through the axis layers.
pub fn filter_by_axes(
    sentence: &Sentence,
    db: &AxisDb,
    config: &DisambiguationConfig,
) -> Result<FilterOutcome, ParserError> {
    let prepared = PreparedAxes::prepare(db, config.gap_mode());
    filter_prepared(sentence, &prepared, config)
}

pub fn filter_prepared(
    sentence: &Sentence,
    axes: &PreparedAxes<'_>,
    config: &DisambiguationConfig,
) -> Result<FilterOutcome, ParserError> {
    let readings = enumerate_readings(sentence, config.reading_cap)
        .map_err(ParserError::from_corpus)?;
    let mut current: Vec<Reading> = readings.collect();
    let mut matched_layers = Vec::new();
    let mut fallback_depth = 0;
    for (layer, programs) in &axes.layers {
        // Readings differing only outside the layer's tagset share one
        // projection; cache the match verdict per projection.
        let mut verdicts: BTreeMap<Vec<ProjectionItem>, bool> = BTreeMap::new();
        let mut survivors = Vec::new();
        for reading in &current {
            let projection = axis::project_reading(reading, layer);
            let ok = *verdicts
                .entry(projection)
                .or_insert_with_key(|p| programs.iter().any(|prog| prog.matches(p)));
            if ok {
                survivors.push(reading.clone());
            }
        }
        if !survivors.is_empty() {
            current = survivors;
            matched_layers.push(String::from(layer.id()));
        } else if config.layer_skip {
            fallback_depth += 1;
        } else {
            break;
        }
    }
    Ok(FilterOutcome {
        survivors: current,
        matched_layers,
        fallback_depth,
    })
}

/// Orders readings best first: higher score, then position by position the
/// tag that came earlier in the token's candidate list.
pub fn rank_by_joints(
    sentence: &Sentence,
    readings: Vec<Reading>,
    db: &JointDb,
) -> Result<Vec<(Reading, u64)>, ParserError> {
    if readings.is_empty() {
        return Err(ParserError::EmptyReadingSet);
    }
    let mut scored: Vec<(Reading, u64)> = readings
        .into_iter()
        .map(|r| {
            let score = joint::score_reading(db, &r);
            (r, score)
        })
        .collect();
    scored.sort_by(|(a, sa), (b, sb)| {
        sb.cmp(sa).then_with(|| candidate_order(sentence, a, b))
    });
    Ok(scored)
}

fn candidate_order(sentence: &Sentence, a: &Reading, b: &Reading) -> Ordering {
    for ((ta, tb), token) in a.tags().iter().zip(b.tags()).zip(sentence.tokens()) {
        let ia = token.candidate_index(ta).unwrap_or(usize::MAX);
        let ib = token.candidate_index(tb).unwrap_or(usize::MAX);
        match ia.cmp(&ib) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// Reduces a sentence to exactly one reading.
pub fn disambiguate(
    sentence: &Sentence,
    axes: &AxisDb,
    joints: &JointDb,
    config: &DisambiguationConfig,
) -> Result<ParseResult, ParserError> {
    let prepared = PreparedAxes::prepare(axes, config.gap_mode());
    disambiguate_prepared(sentence, &prepared, joints, config)
}

pub fn disambiguate_prepared(
    sentence: &Sentence,
    axes: &PreparedAxes<'_>,
    joints: &JointDb,
    config: &DisambiguationConfig,
) -> Result<ParseResult, ParserError> {
    let outcome = filter_prepared(sentence, axes, config)?;
    let survivors_after_axes = outcome.survivors.len();
    let ranked = rank_by_joints(sentence, outcome.survivors, joints)?;
    let (chosen, score) = ranked.into_iter().next().expect("ranked set is non-empty");
    Ok(ParseResult {
        chosen,
        survivors_after_axes,
        matched_layers: outcome.matched_layers,
        score,
        fallback_depth: outcome.fallback_depth,
    })
}

/// Joints-only resolution for sentences whose reading count exceeds the
/// cap: tokens are fixed left to right, scoring each candidate in a
/// context of already-chosen tags on the left and first candidates on the
/// right. Deterministic, linear in sentence length, and oblivious to axes.
pub fn greedy_disambiguate(sentence: &Sentence, joints: &JointDb) -> Reading {
    let mut tags: Vec<Tag> = sentence
        .tokens()
        .iter()
        .map(|t| t.candidates()[0].clone())
        .collect();
    for pos in 0..tags.len() {
        let token = &sentence.tokens()[pos];
        if token.candidates().len() == 1 {
            continue;
        }
        let mut best = 0usize;
        let mut best_len = 0usize;
        for (i, candidate) in token.candidates().iter().enumerate() {
            tags[pos] = candidate.clone();
            let len = joint::longest_context_match_tags(joints, &tags, pos);
            if len > best_len {
                best_len = len;
                best = i;
            }
        }
        tags[pos] = token.candidates()[best].clone();
    }
    Reading::new(sentence, tags).expect("tags drawn from candidate sets")
}

/// Corpus-level run summary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseStats {
    pub sentences: u64,
    pub tokens: u64,
    /// Sentences over the reading cap, resolved joints-only.
    pub overflow_sentences: u64,
}

/// Disambiguates every sentence of a corpus. Sentences over the reading
/// cap fall back to the greedy joints-only path and are counted rather
/// than failing the run. Gold annotation is carried through untouched.
pub fn parse_corpus(
    corpus: &Corpus,
    axes: &AxisDb,
    joints: &JointDb,
    config: &DisambiguationConfig,
) -> (Corpus, ParseStats) {
    let prepared = PreparedAxes::prepare(axes, config.gap_mode());
    let mut stats = ParseStats::default();
    let mut sentences = Vec::with_capacity(corpus.sentences().len());
    for sentence in corpus.sentences() {
        stats.sentences += 1;
        stats.tokens += sentence.len() as u64;
        let chosen = match disambiguate_prepared(sentence, &prepared, joints, config) {
            Ok(result) => result.chosen,
            Err(ParserError::TooManyReadings { .. }) => {
                stats.overflow_sentences += 1;
                greedy_disambiguate(sentence, joints)
            }
            Err(ParserError::EmptyReadingSet) => {
                unreachable!("filtering never empties the reading set")
            }
        };
        let tokens = sentence
            .tokens()
            .iter()
            .zip(chosen.tags())
            .map(|(tok, tag)| {
                Token::new(
                    tok.form(),
                    alloc::vec![tag.clone()],
                    tok.gold().cloned(),
                )
                .expect("rebuilding a token from a valid one")
            })
            .collect();
        sentences.push(
            Sentence::new(sentence.id(), tokens).expect("sentence was non-empty"),
        );
    }
    let parsed = Corpus::new(corpus.name(), sentences)
        .expect("ids were unique in the source corpus");
    (parsed, stats)
}

// ---------------------------------------------------------------------------
// Oracle: the same contract replayed literally with independent machinery.
// ---------------------------------------------------------------------------

/// Hard ceiling on the oracle's enumeration.
pub const ORACLE_READING_CAP: u64 = 64;

/// Exhaustive reference implementation of [`disambiguate`]. Enumerates
/// every reading, re-derives each layer's verdict with the brute-force
/// axis matcher, scores every survivor by scanning the stored joints
/// directly, and applies the same tie-break.
pub fn oracle_disambiguate(
    sentence: &Sentence,
    axes: &AxisDb,
    joints: &JointDb,
    config: &DisambiguationConfig,
) -> Result<ParseResult, ParserError> {
    let readings =
        enumerate_readings(sentence, ORACLE_READING_CAP.min(config.reading_cap))
            .map_err(ParserError::from_corpus)?;
    let mut current: Vec<Reading> = readings.collect();
    let mut matched_layers = Vec::new();
    let mut fallback_depth = 0;
    for layer in axes.layers() {
        let survivors: Vec<Reading> = current
            .iter()
            .filter(|r| oracle_layer_accepts(layer, r, config.gap_mode()))
            .cloned()
            .collect();
        if !survivors.is_empty() {
            current = survivors;
            matched_layers.push(String::from(layer.id()));
        } else if config.layer_skip {
            fallback_depth += 1;
        } else {
            break;
        }
    }
    let survivors_after_axes = current.len();
    let mut scored: Vec<(Reading, u64)> = current
        .into_iter()
        .map(|r| {
            let score = oracle_score(joints, &r);
            (r, score)
        })
        .collect();
    scored.sort_by(|(a, sa), (b, sb)| {
        sb.cmp(sa).then_with(|| candidate_order(sentence, a, b))
    });
    let (chosen, score) = scored.into_iter().next().ok_or(ParserError::EmptyReadingSet)?;
    Ok(ParseResult {
        chosen,
        survivors_after_axes,
        matched_layers,
        score,
        fallback_depth,
    })
}

fn oracle_layer_accepts(layer: &AxisLayer, reading: &Reading, mode: GapMode) -> bool {
    let projection = axis::project_reading(reading, layer);
    layer
        .axes()
        .iter()
        .any(|a| axis::reference::axis_matches(a, &projection, mode))
}

/// Per-position maximum over a direct scan of the stored joints, checking
/// each context symbol by symbol around the position.
fn oracle_score(db: &JointDb, reading: &Reading) -> u64 {
    let tags = reading.tags();
    let mut total = 0u64;
    for pos in 0..tags.len() {
        let mut best = 0usize;
        for joint in db.joints_for(&tags[pos]) {
            if joint.total_len() > best && context_holds_at(&joint.context, tags, pos) {
                best = joint.total_len();
            }
        }
        total += best as u64;
    }
    total
}

fn context_holds_at(ctx: &Context, tags: &[Tag], pos: usize) -> bool {
    let mut cursor = pos as isize;
    for sym in ctx.left.iter().rev() {
        cursor -= 1;
        match sym {
            CtxSym::Tag(t) => {
                if cursor < 0 || &tags[cursor as usize] != t {
                    return false;
                }
            }
            CtxSym::Bos => {
                if cursor != -1 {
                    return false;
                }
            }
            CtxSym::Eos => return false,
        }
    }
    let mut cursor = pos;
    for sym in &ctx.right {
        cursor += 1;
        match sym {
            CtxSym::Tag(t) => {
                if cursor >= tags.len() || &tags[cursor] != t {
                    return false;
                }
            }
            CtxSym::Eos => {
                if cursor != tags.len() {
                    return false;
                }
            }
            CtxSym::Bos => return false,
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParserError {
    TooManyReadings {
        sentence: String,
        readings: u128,
        cap: u64,
    },
    EmptyReadingSet,
}

impl ParserError {
    fn from_corpus(e: CorpusError) -> Self {
        match e {
            CorpusError::TooManyReadings {
                sentence,
                readings,
                cap,
            } => ParserError::TooManyReadings {
                sentence,
                readings,
                cap,
            },
            other => unreachable!("enumerate_readings only reports the cap: {other}"),
        }
    }
}

impl fmt::Display for ParserError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParserError::TooManyReadings {
                sentence,
                readings,
                cap,
            } => write!(
                f,
                "sentence {sentence:?} has {readings} readings, over the cap of {cap}"
            ),
            ParserError::EmptyReadingSet => write!(f, "no readings to rank"),
        }
    }
}

impl core::error::Error for ParserError {}
