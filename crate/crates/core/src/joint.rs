//! Joints: local context patterns mined per syntactic tag.
//!
//! A joint records that a tag was seen between a particular left and right
//! tag context often enough to be trusted: its support must reach the
//! absolute margin and its relative frequency among the tag's occurrences
//! must reach the error margin. Contexts of every length up to a maximum
//! are kept side by side, and whenever a longer context has been stored so
//! has some one-shorter truncation of it, so matching can always fall back
//! from long evidence to short. No probabilities are computed: scoring is
//! by matched context length alone.
//!
//! Context items are the tags of neighbouring tokens, with `<s>` and
//! `</s>` marking the sentence boundaries. Word-form contexts are out of
//! scope at this corpus scale.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::corpus::{Corpus, Reading, Token};
use crate::tagset::Tag;

/// One symbol of a joint context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CtxSym {
    /// Sentence start, printed `<s>`; only valid as the outermost left item.
    Bos,
    Tag(Tag),
    /// Sentence end, printed `</s>`; only valid as the outermost right item.
    Eos,
}

impl fmt::Display for CtxSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CtxSym::Bos => f.write_str("<s>"),
            CtxSym::Tag(t) => write!(f, "{t}"),
            CtxSym::Eos => f.write_str("</s>"),
        }
    }
}

/// A left/right context shape. Left items run outermost to innermost,
/// right items innermost to outermost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    pub left: Vec<CtxSym>,
    pub right: Vec<CtxSym>,
}

impl Context {
    pub fn total_len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    fn validate(&self, max_len: usize) -> Result<(), JointError> {
        let n = self.total_len();
        if n == 0 || n > max_len {
            return Err(JointError::InvalidContext("context length out of range"));
        }
        for (i, sym) in self.left.iter().enumerate() {
            match sym {
                CtxSym::Bos if i == 0 => {}
                CtxSym::Bos => {
                    return Err(JointError::InvalidContext("<s> must be outermost on the left"))
                }
                CtxSym::Eos => {
                    return Err(JointError::InvalidContext("</s> cannot appear on the left"))
                }
                CtxSym::Tag(_) => {}
            }
        }
        for (i, sym) in self.right.iter().enumerate() {
            match sym {
                CtxSym::Eos if i + 1 == self.right.len() => {}
                CtxSym::Eos => {
                    return Err(JointError::InvalidContext(
                        "</s> must be outermost on the right",
                    ))
                }
                CtxSym::Bos => {
                    return Err(JointError::InvalidContext("<s> cannot appear on the right"))
                }
                CtxSym::Tag(_) => {}
            }
        }
        Ok(())
    }
}

// Canonical order: shorter contexts first, then left-heavier shapes, then
// contents. This fixes the joint file's line order.
impl Ord for Context {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_len()
            .cmp(&other.total_len())
            .then_with(|| self.left.len().cmp(&other.left.len()))
            .then_with(|| self.left.cmp(&other.left))
            .then_with(|| self.right.cmp(&other.right))
    }
}

impl PartialOrd for Context {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Mining thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct JointParams {
    /// Minimum relative frequency among the target tag's occurrences.
    pub error_margin: f64,
    /// Minimum number of supporting occurrences.
    pub absolute_margin: u64,
    /// Maximum total context length.
    pub max_len: usize,
}

impl JointParams {
    pub fn validate(&self) -> Result<(), JointError> {
        if !(0.0..=1.0).contains(&self.error_margin) {
            return Err(JointError::InvalidParams("error_margin must be in [0, 1]"));
        }
        if self.absolute_margin < 1 {
            return Err(JointError::InvalidParams("absolute_margin must be at least 1"));
        }
        if self.max_len < 1 {
            return Err(JointError::InvalidParams("max_len must be at least 1"));
        }
        Ok(())
    }
}

impl Default for JointParams {
    fn default() -> Self {
        JointParams {
            error_margin: 0.01,
            absolute_margin: 5,
            max_len: 4,
        }
    }
}

/// Which generation algorithm to run. Both produce the same database when
/// the thresholds are uniform across context lengths, so the choice is not
/// recorded in the database itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    Exhaustive,
    #[default]
    Incremental,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::Incremental => "incremental",
        })
    }
}

impl core::str::FromStr for Algorithm {
    type Err = JointError;

    fn from_str(s: &str) -> Result<Self, JointError> {
        match s {
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "incremental" => Ok(Algorithm::Incremental),
            _ => Err(JointError::InvalidParams(
                "algorithm must be 'exhaustive' or 'incremental'",
            )),
        }
    }
}

/// One stored pattern, materialised for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub target: Tag,
    pub context: Context,
    pub support: u64,
    /// support / occurrences of the target in the training corpus.
    pub freq: f64,
}

impl Joint {
    pub fn total_len(&self) -> usize {
        self.context.total_len()
    }
}

/// Per-tag sets of joints with their mining parameters and the target
/// occurrence counts the frequencies derive from.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDb {
    params: JointParams,
    target_counts: BTreeMap<Tag, u64>,
    by_target: BTreeMap<Tag, BTreeMap<Context, u64>>,
}

impl JointDb {
    /// A database with no joints; every reading scores zero against it.
    pub fn empty(params: JointParams) -> Self {
        JointDb {
            params,
            target_counts: BTreeMap::new(),
            by_target: BTreeMap::new(),
        }
    }

    /// Assembles a database from already-counted parts, enforcing the
    /// margin, shape, and prefix-closure invariants. This is the loading
    /// path for the on-disk format.
    pub fn from_parts(
        params: JointParams,
        target_counts: BTreeMap<Tag, u64>,
        by_target: BTreeMap<Tag, BTreeMap<Context, u64>>,
    ) -> Result<Self, JointError> {
        params.validate()?;
        for (target, contexts) in &by_target {
            let occurrences = *target_counts.get(target).ok_or_else(|| {
                JointError::MissingTargetCount(target.clone())
            })?;
            for (ctx, &support) in contexts {
                ctx.validate(params.max_len)?;
                if support > occurrences {
                    return Err(JointError::InvalidContext(
                        "support exceeds the target's occurrence count",
                    ));
                }
                if support < params.absolute_margin
                    || (support as f64) < params.error_margin * occurrences as f64
                {
                    return Err(JointError::BelowMargins {
                        target: target.clone(),
                        context: ctx.clone(),
                    });
                }
            }
        }
        let db = JointDb {
            params,
            target_counts,
            by_target,
        };
        db.verify_prefix_closure()?;
        Ok(db)
    }

    pub fn params(&self) -> &JointParams {
        &self.params
    }

    pub fn target_counts(&self) -> &BTreeMap<Tag, u64> {
        &self.target_counts
    }

    pub fn targets(&self) -> impl Iterator<Item = &Tag> {
        self.by_target.keys()
    }

    pub fn len(&self) -> usize {
        self.by_target.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_target.is_empty()
    }

    pub fn support(&self, target: &Tag, ctx: &Context) -> Option<u64> {
        self.by_target.get(target)?.get(ctx).copied()
    }

    pub fn joints_for<'a>(&'a self, target: &'a Tag) -> impl Iterator<Item = Joint> + 'a {
        let occurrences = self.target_counts.get(target).copied().unwrap_or(0);
        self.by_target
            .get(target)
            .into_iter()
            .flat_map(move |m| {
                m.iter().map(move |(ctx, &support)| Joint {
                    target: target.clone(),
                    context: ctx.clone(),
                    support,
                    freq: support as f64 / occurrences as f64,
                })
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = Joint> + '_ {
        self.by_target.keys().flat_map(|t| self.joints_for(t))
    }

    /// Every stored joint of length two or more must have a stored parent
    /// reachable by dropping its outermost left or outermost right item.
    pub fn verify_prefix_closure(&self) -> Result<(), JointError> {
        for (target, contexts) in &self.by_target {
            for ctx in contexts.keys() {
                if ctx.total_len() < 2 {
                    continue;
                }
                let left_parent = (!ctx.left.is_empty()).then(|| Context {
                    left: ctx.left[1..].to_vec(),
                    right: ctx.right.clone(),
                });
                let right_parent = (!ctx.right.is_empty()).then(|| Context {
                    left: ctx.left.clone(),
                    right: ctx.right[..ctx.right.len() - 1].to_vec(),
                });
                let covered = [left_parent, right_parent]
                    .into_iter()
                    .flatten()
                    .any(|p| contexts.contains_key(&p));
                if !covered {
                    return Err(JointError::PrefixClosureViolation {
                        target: target.clone(),
                        context: ctx.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The tag a token resolves to in a disambiguated corpus: its gold tag, or
/// its single candidate.
fn resolved_tag<'a>(token: &'a Token, sentence_id: &str, position: usize) -> Result<&'a Tag, JointError> {
    if let Some(g) = token.gold() {
        return Ok(g);
    }
    if token.candidates().len() == 1 {
        return Ok(&token.candidates()[0]);
    }
    Err(JointError::MissingGold {
        sentence: sentence_id.into(),
        position,
    })
}

/// One training observation: a token's tag with its maximal surrounding
/// windows, boundary symbols included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingEvent {
    pub target: Tag,
    /// Up to `max_len` symbols, outermost first.
    pub left: Vec<CtxSym>,
    /// Up to `max_len` symbols, innermost first.
    pub right: Vec<CtxSym>,
}

/// Emits one event per token of a disambiguated corpus.
pub fn training_events(corpus: &Corpus, max_len: usize) -> Result<Vec<TrainingEvent>, JointError> {
    let mut events = Vec::with_capacity(corpus.token_count());
    for sentence in corpus.sentences() {
        let mut tags = Vec::with_capacity(sentence.len());
        for (i, tok) in sentence.tokens().iter().enumerate() {
            tags.push(resolved_tag(tok, sentence.id(), i)?.clone());
        }
        for pos in 0..tags.len() {
            events.push(TrainingEvent {
                target: tags[pos].clone(),
                left: left_window(&tags, pos, max_len),
                right: right_window(&tags, pos, max_len),
            });
        }
    }
    Ok(events)
}

fn left_window(tags: &[Tag], pos: usize, max_len: usize) -> Vec<CtxSym> {
    let mut out = Vec::new();
    if pos < max_len {
        out.push(CtxSym::Bos);
        out.extend(tags[..pos].iter().cloned().map(CtxSym::Tag));
    } else {
        out.extend(tags[pos - max_len..pos].iter().cloned().map(CtxSym::Tag));
    }
    out
}

fn right_window(tags: &[Tag], pos: usize, max_len: usize) -> Vec<CtxSym> {
    let mut out = Vec::new();
    let after = tags.len() - pos - 1;
    if after < max_len {
        out.extend(tags[pos + 1..].iter().cloned().map(CtxSym::Tag));
        out.push(CtxSym::Eos);
    } else {
        out.extend(
            tags[pos + 1..pos + 1 + max_len]
                .iter()
                .cloned()
                .map(CtxSym::Tag),
        );
    }
    out
}

/// The length-`l` left sub-context of an event window: its innermost `l`
/// symbols. `None` when the window is too short.
fn left_sub(window: &[CtxSym], l: usize) -> Option<Vec<CtxSym>> {
    (l <= window.len()).then(|| window[window.len() - l..].to_vec())
}

fn right_sub(window: &[CtxSym], r: usize) -> Option<Vec<CtxSym>> {
    (r <= window.len()).then(|| window[..r].to_vec())
}

fn count_targets(events: &[TrainingEvent]) -> BTreeMap<Tag, u64> {
    let mut counts = BTreeMap::new();
    for e in events {
        *counts.entry(e.target.clone()).or_insert(0u64) += 1;
    }
    counts
}

fn passes(support: u64, occurrences: u64, error_margin: f64, absolute_margin: u64) -> bool {
    support >= absolute_margin && support as f64 >= error_margin * occurrences as f64
}

/// Counts every realised context of every length in one pass and keeps
/// those meeting both margins. Prefix closure follows from the margins
/// being uniform: an extension can never out-support its truncation.
pub fn generate_exhaustive(corpus: &Corpus, params: &JointParams) -> Result<JointDb, JointError> {
    params.validate()?;
    if corpus.is_empty() {
        return Err(JointError::EmptyCorpus);
    }
    let events = training_events(corpus, params.max_len)?;
    let target_counts = count_targets(&events);
    let mut counts: BTreeMap<Tag, BTreeMap<Context, u64>> = BTreeMap::new();
    for e in &events {
        for l in 0..=e.left.len() {
            for r in 0..=e.right.len() {
                let n = l + r;
                if n == 0 || n > params.max_len {
                    continue;
                }
                let ctx = Context {
                    left: left_sub(&e.left, l).expect("l bounded by window"),
                    right: right_sub(&e.right, r).expect("r bounded by window"),
                };
                *counts
                    .entry(e.target.clone())
                    .or_default()
                    .entry(ctx)
                    .or_insert(0) += 1;
            }
        }
    }
    let mut by_target: BTreeMap<Tag, BTreeMap<Context, u64>> = BTreeMap::new();
    for (target, contexts) in counts {
        let occurrences = target_counts[&target];
        let kept: BTreeMap<Context, u64> = contexts
            .into_iter()
            .filter(|(_, support)| {
                passes(*support, occurrences, params.error_margin, params.absolute_margin)
            })
            .collect();
        if !kept.is_empty() {
            by_target.insert(target, kept);
        }
    }
    Ok(JointDb {
        params: params.clone(),
        target_counts,
        by_target,
    })
}

/// Starts from the length-1 contexts that meet the margins and repeatedly
/// lengthens every selected context by one symbol on the left or on the
/// right, filtering each new level by the margins, up to the maximum
/// length.
pub fn generate_incremental(corpus: &Corpus, params: &JointParams) -> Result<JointDb, JointError> {
    incremental_with_level_margins(corpus, params, &|_| {
        (params.error_margin, params.absolute_margin)
    })
}

/// Generation entry point dispatching on the requested algorithm.
pub fn generate_joints(
    corpus: &Corpus,
    params: &JointParams,
    algorithm: Algorithm,
) -> Result<JointDb, JointError> {
    match algorithm {
        Algorithm::Exhaustive => generate_exhaustive(corpus, params),
        Algorithm::Incremental => generate_incremental(corpus, params),
    }
}

/// Incremental generation with per-level margins. With uniform margins
/// this equals the exhaustive algorithm; with non-uniform margins the two
/// diverge, because a level pruned here can never be extended (see the
/// regression test below).
fn incremental_with_level_margins(
    corpus: &Corpus,
    params: &JointParams,
    margins_for_level: &dyn Fn(usize) -> (f64, u64),
) -> Result<JointDb, JointError> {
    params.validate()?;
    if corpus.is_empty() {
        return Err(JointError::EmptyCorpus);
    }
    let events = training_events(corpus, params.max_len)?;
    let target_counts = count_targets(&events);
    let mut by_target: BTreeMap<Tag, BTreeMap<Context, u64>> = BTreeMap::new();
    let mut previous: BTreeMap<Tag, BTreeSet<Context>> = BTreeMap::new();

    for level in 1..=params.max_len {
        let (error_margin, absolute_margin) = margins_for_level(level);
        let mut counts: BTreeMap<Tag, BTreeMap<Context, u64>> = BTreeMap::new();
        for e in &events {
            for l in 0..=level.min(e.left.len()) {
                let r = level - l;
                if r > e.right.len() {
                    continue;
                }
                let ctx = Context {
                    left: left_sub(&e.left, l).expect("l bounded by window"),
                    right: right_sub(&e.right, r).expect("r bounded by window"),
                };
                if level > 1 && !extends_selected(&previous, &e.target, &ctx) {
                    continue;
                }
                *counts
                    .entry(e.target.clone())
                    .or_default()
                    .entry(ctx)
                    .or_insert(0) += 1;
            }
        }
        let mut selected: BTreeMap<Tag, BTreeSet<Context>> = BTreeMap::new();
        for (target, contexts) in counts {
            let occurrences = target_counts[&target];
            for (ctx, support) in contexts {
                if passes(support, occurrences, error_margin, absolute_margin) {
                    selected
                        .entry(target.clone())
                        .or_default()
                        .insert(ctx.clone());
                    by_target
                        .entry(target.clone())
                        .or_default()
                        .insert(ctx, support);
                }
            }
        }
        if selected.is_empty() {
            break;
        }
        previous = selected;
    }
    Ok(JointDb {
        params: params.clone(),
        target_counts,
        by_target,
    })
}

/// Whether a context is a one-symbol extension of some context selected at
/// the previous level.
fn extends_selected(
    previous: &BTreeMap<Tag, BTreeSet<Context>>,
    target: &Tag,
    ctx: &Context,
) -> bool {
    let Some(prev) = previous.get(target) else {
        return false;
    };
    if !ctx.left.is_empty() {
        let parent = Context {
            left: ctx.left[1..].to_vec(),
            right: ctx.right.clone(),
        };
        if prev.contains(&parent) {
            return true;
        }
    }
    if !ctx.right.is_empty() {
        let parent = Context {
            left: ctx.left.clone(),
            right: ctx.right[..ctx.right.len() - 1].to_vec(),
        };
        if prev.contains(&parent) {
            return true;
        }
    }
    false
}

/// The greatest total length of any stored joint for the tag at `pos`
/// whose context equals the reading's own tags (and boundaries) around
/// that position; zero when nothing matches.
pub fn longest_context_match(db: &JointDb, reading: &Reading, pos: usize) -> usize {
    longest_context_match_tags(db, reading.tags(), pos)
}

pub fn longest_context_match_tags(db: &JointDb, tags: &[Tag], pos: usize) -> usize {
    let Some(contexts) = db.by_target.get(&tags[pos]) else {
        return 0;
    };
    let left = left_window(tags, pos, db.params.max_len);
    let right = right_window(tags, pos, db.params.max_len);
    let top = db.params.max_len.min(left.len() + right.len());
    for n in (1..=top).rev() {
        for l in 0..=n.min(left.len()) {
            let r = n - l;
            if r > right.len() {
                continue;
            }
            let ctx = Context {
                left: left_sub(&left, l).expect("l bounded"),
                right: right_sub(&right, r).expect("r bounded"),
            };
            if contexts.contains_key(&ctx) {
                return n;
            }
        }
    }
    0
}

/// Sum of the longest context match over every position; higher is better.
pub fn score_reading(db: &JointDb, reading: &Reading) -> u64 {
    (0..reading.len())
        .map(|pos| longest_context_match(db, reading, pos) as u64)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub enum JointError {
    InvalidParams(&'static str),
    InvalidContext(&'static str),
    MissingGold { sentence: String, position: usize },
    MissingTargetCount(Tag),
    BelowMargins { target: Tag, context: Context },
    PrefixClosureViolation { target: Tag, context: Context },
    EmptyCorpus,
}

impl fmt::Display for JointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JointError::InvalidParams(reason) => write!(f, "invalid parameters: {reason}"),
            JointError::InvalidContext(reason) => write!(f, "invalid context: {reason}"),
            JointError::MissingGold { sentence, position } => write!(
                f,
                "sentence {sentence:?} token {position} is not disambiguated"
            ),
            JointError::MissingTargetCount(tag) => {
                write!(f, "no occurrence count for target {tag}")
            }
            JointError::BelowMargins { target, context } => write!(
                f,
                "joint for {target} (length {}) falls below the margins",
                context.total_len()
            ),
            JointError::PrefixClosureViolation { target, context } => write!(
                f,
                "joint for {target} (length {}) has no stored one-shorter parent",
                context.total_len()
            ),
            JointError::EmptyCorpus => write!(f, "corpus has no sentences"),
        }
    }
}

impl core::error::Error for JointError {}
