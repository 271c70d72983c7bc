//! Data model for sentences whose tokens carry one or more candidate
//! syntactic tags, plus reading enumeration and baseline statistics.
//!
//! Punctuation is carried as ordinary tokens bearing the reserved `PUNCT`
//! tag; such tokens take part in axis gaps but are excluded from the
//! denominators of ambiguity, error, and success rates.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::tagset::Tag;

/// A word form with its candidate tags and, when known, the correct tag.
///
/// Candidate order is preserved from the input and is the final
/// deterministic tie-breaker everywhere downstream. The gold tag need not
/// be among the candidates: that is exactly an annotation error in the
/// upstream analysis, and it is carried through rather than repaired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    form: String,
    candidates: Vec<Tag>,
    gold: Option<Tag>,
}

impl Token {
    pub fn new(
        form: impl Into<String>,
        candidates: Vec<Tag>,
        gold: Option<Tag>,
    ) -> Result<Self, CorpusError> {
        let form = form.into();
        if form.is_empty()
            || form.starts_with('#')
            || form.contains('\t')
            || form.contains('\n')
        {
            return Err(CorpusError::BadForm(form));
        }
        if candidates.is_empty() {
            return Err(CorpusError::NoCandidates(form));
        }
        let mut seen = BTreeSet::new();
        for c in &candidates {
            if !seen.insert(c.clone()) {
                return Err(CorpusError::DuplicateCandidate {
                    form,
                    tag: c.clone(),
                });
            }
        }
        Ok(Token {
            form,
            candidates,
            gold,
        })
    }

    pub fn form(&self) -> &str {
        &self.form
    }

    pub fn candidates(&self) -> &[Tag] {
        &self.candidates
    }

    pub fn gold(&self) -> Option<&Tag> {
        self.gold.as_ref()
    }

    pub fn is_ambiguous(&self) -> bool {
        self.candidates.len() > 1
    }

    /// Punctuation is a token whose only candidate is `PUNCT`.
    pub fn is_punct(&self) -> bool {
        self.candidates.len() == 1 && self.candidates[0].is_punct()
    }

    /// Position of `tag` in the candidate list, used for tie-breaking.
    pub fn candidate_index(&self, tag: &Tag) -> Option<usize> {
        self.candidates.iter().position(|c| c == tag)
    }
}

/// A sentence: a non-empty ordered list of tokens with a corpus-unique id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    id: String,
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(id: impl Into<String>, tokens: Vec<Token>) -> Result<Self, CorpusError> {
        let id = id.into();
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence(id));
        }
        Ok(Sentence { id, tokens })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Always false: sentences are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of alternative readings, i.e. the product of candidate-set
    /// sizes. Saturates at `u128::MAX`.
    pub fn reading_count(&self) -> u128 {
        self.tokens
            .iter()
            .fold(1u128, |acc, t| acc.saturating_mul(t.candidates.len() as u128))
    }

    /// The reading formed by every token's gold tag.
    pub fn gold_reading(&self) -> Result<Reading, CorpusError> {
        let mut tags = Vec::with_capacity(self.tokens.len());
        for (i, tok) in self.tokens.iter().enumerate() {
            match &tok.gold {
                Some(g) => tags.push(g.clone()),
                None => {
                    return Err(CorpusError::MissingGold {
                        sentence: self.id.clone(),
                        position: i,
                    })
                }
            }
        }
        Ok(Reading { tags })
    }

    /// True when every token has exactly one candidate.
    pub fn is_disambiguated(&self) -> bool {
        self.tokens.iter().all(|t| t.candidates.len() == 1)
    }
}

/// One assignment of a single candidate tag to every token of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Reading {
    tags: Vec<Tag>,
}

impl Reading {
    /// Builds a reading, checking each tag against the sentence's
    /// candidate sets.
    pub fn new(sentence: &Sentence, tags: Vec<Tag>) -> Result<Self, CorpusError> {
        if tags.len() != sentence.len() {
            return Err(CorpusError::ReadingLengthMismatch {
                sentence: sentence.id.clone(),
                expected: sentence.len(),
                got: tags.len(),
            });
        }
        for (i, (tag, tok)) in tags.iter().zip(sentence.tokens()).enumerate() {
            if tok.candidate_index(tag).is_none() {
                return Err(CorpusError::TagNotACandidate {
                    sentence: sentence.id.clone(),
                    position: i,
                    tag: tag.clone(),
                });
            }
        }
        Ok(Reading { tags })
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }
}

/// An ordered collection of sentences with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    name: String,
    sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, sentences: Vec<Sentence>) -> Result<Self, CorpusError> {
        let mut ids = BTreeSet::new();
        for s in &sentences {
            if !ids.insert(s.id.clone()) {
                return Err(CorpusError::DuplicateSentenceId(s.id.clone()));
            }
        }
        Ok(Corpus {
            name: name.into(),
            sentences,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }
}

/// Enumerates all readings of a sentence in candidate order, leftmost
/// token varying slowest. Errs up front when the product of candidate-set
/// sizes exceeds `cap`.
pub fn enumerate_readings(
    sentence: &Sentence,
    cap: u64,
) -> Result<ReadingsIter<'_>, CorpusError> {
    debug_assert!(cap >= 1);
    let total = sentence.reading_count();
    if total > cap as u128 {
        return Err(CorpusError::TooManyReadings {
            sentence: sentence.id().to_owned(),
            readings: total,
            cap,
        });
    }
    Ok(ReadingsIter {
        sentence,
        indices: alloc::vec![0; sentence.len()],
        remaining: total as u64,
    })
}

/// Odometer over candidate indices; the rightmost position varies fastest.
#[derive(Debug)]
pub struct ReadingsIter<'a> {
    sentence: &'a Sentence,
    indices: Vec<usize>,
    remaining: u64,
}

impl ReadingsIter<'_> {
    pub fn total(&self) -> u64 {
        self.remaining
    }
}

impl Iterator for ReadingsIter<'_> {
    type Item = Reading;

    fn next(&mut self) -> Option<Reading> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let tags = self
            .indices
            .iter()
            .zip(self.sentence.tokens())
            .map(|(&i, tok)| tok.candidates()[i].clone())
            .collect();
        for pos in (0..self.indices.len()).rev() {
            self.indices[pos] += 1;
            if self.indices[pos] < self.sentence.tokens()[pos].candidates().len() {
                break;
            }
            self.indices[pos] = 0;
        }
        Some(Reading { tags })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

/// Word count plus ambiguity and error rates, punctuation excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusStats {
    /// Non-punctuation tokens.
    pub words: u64,
    /// Words with two or more candidates.
    pub ambiguous: u64,
    /// Words whose gold tag is missing from the candidate set; `None` when
    /// some word has no gold tag at all.
    pub gold_missing: Option<u64>,
}

impl CorpusStats {
    pub fn ambiguity_rate(&self) -> f64 {
        if self.words == 0 {
            0.0
        } else {
            self.ambiguous as f64 / self.words as f64
        }
    }

    /// `None` when the corpus carries no gold annotation.
    pub fn error_rate(&self) -> Option<f64> {
        self.gold_missing.map(|m| {
            if self.words == 0 {
                0.0
            } else {
                m as f64 / self.words as f64
            }
        })
    }
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut words = 0u64;
    let mut ambiguous = 0u64;
    let mut missing = 0u64;
    let mut all_gold = true;
    for sentence in corpus.sentences() {
        for tok in sentence.tokens() {
            if tok.is_punct() {
                continue;
            }
            words += 1;
            if tok.is_ambiguous() {
                ambiguous += 1;
            }
            match tok.gold() {
                Some(g) => {
                    if tok.candidate_index(g).is_none() {
                        missing += 1;
                    }
                }
                None => all_gold = false,
            }
        }
    }
    CorpusStats {
        words,
        ambiguous,
        gold_missing: all_gold.then_some(missing),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    BadForm(String),
    NoCandidates(String),
    DuplicateCandidate { form: String, tag: Tag },
    EmptySentence(String),
    DuplicateSentenceId(String),
    MissingGold { sentence: String, position: usize },
    ReadingLengthMismatch { sentence: String, expected: usize, got: usize },
    TagNotACandidate { sentence: String, position: usize, tag: Tag },
    TooManyReadings { sentence: String, readings: u128, cap: u64 },
    EmptyCorpus,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::BadForm(form) => write!(f, "unusable token form {form:?}"),
            CorpusError::NoCandidates(form) => {
                write!(f, "token {form:?} has no candidate tags")
            }
            CorpusError::DuplicateCandidate { form, tag } => {
                write!(f, "token {form:?} lists candidate {tag} twice")
            }
            CorpusError::EmptySentence(id) => write!(f, "sentence {id:?} has no tokens"),
            CorpusError::DuplicateSentenceId(id) => {
                write!(f, "duplicate sentence id {id:?}")
            }
            CorpusError::MissingGold { sentence, position } => {
                write!(f, "sentence {sentence:?} token {position} has no gold tag")
            }
            CorpusError::ReadingLengthMismatch {
                sentence,
                expected,
                got,
            } => write!(
                f,
                "reading for sentence {sentence:?} has {got} tags, expected {expected}"
            ),
            CorpusError::TagNotACandidate {
                sentence,
                position,
                tag,
            } => write!(
                f,
                "tag {tag} is not a candidate at {sentence:?}[{position}]"
            ),
            CorpusError::TooManyReadings {
                sentence,
                readings,
                cap,
            } => write!(
                f,
                "sentence {sentence:?} has {readings} readings, over the cap of {cap}"
            ),
            CorpusError::EmptyCorpus => write!(f, "corpus has no sentences"),
        }
    }
}

impl core::error::Error for CorpusError {}


#[cfg(test)]
mod tests {
    use super::testutil::{sentence, tok};
    use super::*;

    #[test]
    fn token_invariants_hold() {
        assert!(Token::new("x", alloc::vec![], None).is_err());
        let t = Tag::parse("SUBJ").unwrap();
        assert!(Token::new("x", alloc::vec![t.clone(), t.clone()], None).is_err());
        assert!(Token::new("", alloc::vec![t.clone()], None).is_err());
        assert!(Token::new("a\tb", alloc::vec![t], None).is_err());
    }

    #[test]
    fn unambiguous_sentence_has_one_reading() {
        let s = sentence("s1", &["the/DN>", "cat/SUBJ", "sleeps/+FMAINV"]);
        let readings: Vec<_> = enumerate_readings(&s, 10).unwrap().collect();
        assert_eq!(readings.len(), 1);
        assert_eq!(readings[0], s.gold_reading().unwrap());
    }

    #[test]
    fn reading_product_counts_and_order() {
        let s = sentence("s1", &["a/X/Y", "b/P/Q/R"]);
        let readings: Vec<_> = enumerate_readings(&s, 10).unwrap().collect();
        assert_eq!(readings.len(), 6);
        // Leftmost token varies slowest.
        let first: Vec<&str> = readings[0].tags().iter().map(Tag::as_str).collect();
        let second: Vec<&str> = readings[1].tags().iter().map(Tag::as_str).collect();
        assert_eq!(first, ["X", "P"]);
        assert_eq!(second, ["X", "Q"]);
        let all: BTreeSet<_> = readings.iter().collect();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn paper_fragment_has_four_raw_readings() {
        let s = sentence("s1", &["less/PCOMPL-S/AD-A>", "attentive/<NOM/PCOMPL-S"]);
        assert_eq!(enumerate_readings(&s, 100).unwrap().count(), 4);
    }

    #[test]
    fn reading_cap_is_enforced_up_front() {
        let s = sentence("s1", &["a/X/Y", "b/P/Q/R"]);
        match enumerate_readings(&s, 5) {
            Err(CorpusError::TooManyReadings { readings, cap, .. }) => {
                assert_eq!(readings, 6);
                assert_eq!(cap, 5);
            }
            other => panic!("expected TooManyReadings, got {other:?}"),
        }
    }

    #[test]
    fn stats_count_ambiguity_and_errors() {
        let mut tokens: Vec<Token> = (0..6).map(|i| tok(&alloc::format!("w{i}/ADVL"))).collect();
        tokens.extend((0..4).map(|i| tok(&alloc::format!("a{i}/SUBJ/OBJ=SUBJ"))));
        let c = Corpus::new("t", alloc::vec![Sentence::new("s1", tokens).unwrap()]).unwrap();
        let stats = corpus_stats(&c);
        assert_eq!(stats.words, 10);
        assert!((stats.ambiguity_rate() - 0.4).abs() < 1e-12);
        assert_eq!(stats.error_rate(), Some(0.0));
    }

    #[test]
    fn stats_exclude_punctuation_and_report_gold_misses() {
        let s = sentence("s1", &["I/SUBJ", "run/+FMAINV/OBJ=ADVL", "./PUNCT"]);
        let c = Corpus::new("t", alloc::vec![s]).unwrap();
        let stats = corpus_stats(&c);
        assert_eq!(stats.words, 2);
        assert_eq!(stats.gold_missing, Some(1));
        assert_eq!(stats.error_rate(), Some(0.5));
    }

    #[test]
    fn stats_are_invariant_under_sentence_reordering() {
        let a = sentence("a", &["x/SUBJ/OBJ=SUBJ", "y/ADVL"]);
        let b = sentence("b", &["z/+FMAINV"]);
        let c1 = Corpus::new("t", alloc::vec![a.clone(), b.clone()]).unwrap();
        let c2 = Corpus::new("t", alloc::vec![b, a]).unwrap();
        assert_eq!(corpus_stats(&c1), corpus_stats(&c2));
    }

    #[test]
    fn gold_reading_requires_every_token_annotated() {
        let s = sentence("s1", &["a/X/Y", "b/P"]);
        assert!(matches!(
            s.gold_reading(),
            Err(CorpusError::MissingGold { position: 0, .. })
        ));
    }
}
