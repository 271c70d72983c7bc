//! Property suite for axis extraction, generalisation, and matching.

use std::collections::BTreeSet;

use proptest::prelude::*;

use synpat_core::axis::{
    self, axis_matches, axis_matches_with, build_axis_db, compare_strictness, extract_axis,
    generalize_repeats, project_reading, relax_adjacency, reference, Axis, AxisElement,
    AxisLayer, GapMode, LayerConfig, ProjectionItem,
};
use synpat_core::corpus::{Corpus, Sentence, Token};
use synpat_core::tagset::{EquivalenceClassMap, Tag};

const ALPHABET: [&str; 4] = ["A", "B", "C", "D"];

fn tag(s: &str) -> Tag {
    Tag::parse(s).unwrap()
}

fn arb_sym() -> impl Strategy<Value = AxisElement> {
    prop::sample::select(ALPHABET.to_vec()).prop_map(|s| AxisElement::Sym(tag(s)))
}

fn arb_item(depth: u32) -> BoxedStrategy<AxisElement> {
    if depth == 0 {
        arb_sym().boxed()
    } else {
        prop_oneof![
            4 => arb_sym(),
            1 => arb_seq(depth - 1).prop_map(AxisElement::Repeat),
        ]
        .boxed()
    }
}

/// Gap placement by construction: optional gap before each item plus an
/// optional trailing gap, so no two gaps are ever adjacent.
fn arb_seq(depth: u32) -> BoxedStrategy<Vec<AxisElement>> {
    (
        prop::collection::vec((any::<bool>(), arb_item(depth)), 1..5),
        any::<bool>(),
    )
        .prop_map(|(pairs, trail)| {
            let mut out = Vec::new();
            for (i, (gap, item)) in pairs.into_iter().enumerate() {
                if gap && i > 0 || gap && i == 0 {
                    out.push(AxisElement::Gap);
                }
                out.push(item);
            }
            if trail {
                out.push(AxisElement::Gap);
            }
            out
        })
        .boxed()
}

// Depth 2 lets repeat bodies contain further repeat groups, which the
// generaliser produces for nested tandems.
fn arb_axis() -> impl Strategy<Value = Axis> {
    arb_seq(2).prop_filter_map("axis invariants", |elements| {
        Axis::new("l", elements).ok()
    })
}

fn arb_projection() -> impl Strategy<Value = Vec<ProjectionItem>> {
    (
        prop::collection::vec((any::<bool>(), prop::sample::select(ALPHABET.to_vec())), 0..7),
        any::<bool>(),
    )
        .prop_map(|(pairs, trail)| {
            let mut out = Vec::new();
            for (gap, s) in pairs {
                if gap {
                    out.push(ProjectionItem::Gap);
                }
                out.push(ProjectionItem::Sym(tag(s)));
            }
            if trail && !out.is_empty() {
                out.push(ProjectionItem::Gap);
            }
            if out.is_empty() {
                out.push(ProjectionItem::Gap);
            }
            out
        })
}

/// Samples a member of the axis's language, driven by a choice stream.
fn next_choice(choices: &[u8], cursor: &mut usize, n: u8) -> u8 {
    let c = choices.get(*cursor).copied().unwrap_or(0);
    *cursor += 1;
    c % n
}

fn sample_language(elements: &[AxisElement], choices: &[u8], cursor: &mut usize) -> Vec<ProjectionItem> {
    let mut out: Vec<ProjectionItem> = Vec::new();
    for e in elements {
        match e {
            AxisElement::Sym(t) => out.push(ProjectionItem::Sym(t.clone())),
            AxisElement::Gap => {
                if next_choice(choices, cursor, 2) == 1
                    && !matches!(out.last(), Some(ProjectionItem::Gap))
                {
                    out.push(ProjectionItem::Gap);
                }
            }
            AxisElement::Repeat(body) => {
                let copies = 1 + next_choice(choices, cursor, 3);
                for _ in 0..copies {
                    let copy = sample_language(body, choices, cursor);
                    for item in copy {
                        if matches!(item, ProjectionItem::Gap)
                            && matches!(out.last(), Some(ProjectionItem::Gap))
                        {
                            continue;
                        }
                        out.push(item);
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// The compiled matcher and the brute-force expander agree everywhere.
    #[test]
    fn compiled_matcher_agrees_with_brute_force(
        axis in arb_axis(),
        projection in arb_projection(),
        strict in any::<bool>(),
    ) {
        let mode = if strict { GapMode::Strict } else { GapMode::Lenient };
        prop_assert_eq!(
            axis_matches_with(&axis, &projection, mode),
            reference::axis_matches(&axis, &projection, mode),
            "axis {} vs projection {:?}", axis, projection
        );
    }

    /// Anything matched before generalisation is matched after.
    #[test]
    fn generalisation_widens(
        axis in arb_axis(),
        choices in prop::collection::vec(any::<u8>(), 0..24),
        random_projection in arb_projection(),
    ) {
        let mut cursor = 0;
        let sampled = sample_language(axis.elements(), &choices, &mut cursor);
        let generalised = generalize_repeats(&axis);
        let relaxed = relax_adjacency(&axis);
        for projection in [&sampled, &random_projection] {
            if projection.is_empty() {
                continue;
            }
            if axis_matches(&axis, projection) {
                prop_assert!(
                    axis_matches(&generalised, projection),
                    "{} lost {:?} after generalisation to {}", axis, projection, generalised
                );
                prop_assert!(
                    axis_matches(&relaxed, projection),
                    "{} lost {:?} after relaxation to {}", axis, projection, relaxed
                );
            }
        }
        // The sampled projection is in the language by construction.
        if !sampled.is_empty() {
            prop_assert!(axis_matches(&axis, &sampled));
        }
    }
}

fn arb_gold_sentence() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(
        prop::sample::select(vec!["A", "B", "C", "D", "X", "Y"]),
        1..9,
    )
}

fn gold_corpus(id_prefix: &str, sentences: &[Vec<&'static str>]) -> Corpus {
    let sents = sentences
        .iter()
        .enumerate()
        .map(|(i, tags)| {
            let tokens = tags
                .iter()
                .enumerate()
                .map(|(j, t)| {
                    Token::new(format!("w{j}"), vec![tag(t)], Some(tag(t))).unwrap()
                })
                .collect();
            Sentence::new(format!("{id_prefix}{i}"), tokens).unwrap()
        })
        .collect();
    Corpus::new("gen", sents).unwrap()
}

fn layer(id: &str, symbols: &[&str]) -> AxisLayer {
    AxisLayer::new(
        LayerConfig {
            id: id.into(),
            tagset: symbols.iter().map(|s| tag(s)).collect(),
            eq: EquivalenceClassMap::empty(),
            priority: 0,
            generalise: false,
        },
        BTreeSet::new(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// An extracted axis always accepts its own source projection, and so
    /// does its generalisation.
    #[test]
    fn extraction_is_idempotent(
        tags_seq in arb_gold_sentence(),
        subset in prop::collection::btree_set(prop::sample::select(vec!["A", "B", "C"]), 1..3),
    ) {
        let corpus = gold_corpus("s", &[tags_seq]);
        let sentence = &corpus.sentences()[0];
        let symbols: Vec<&str> = subset.into_iter().collect();
        let layer = layer("l", &symbols);
        let projection = project_reading(&sentence.gold_reading().unwrap(), &layer);
        match extract_axis(sentence, &layer) {
            Ok(axis) => {
                prop_assert!(axis_matches(&axis, &projection));
                prop_assert!(axis_matches(&generalize_repeats(&axis), &projection));
            }
            Err(_) => {
                // No layer symbol in the sentence: the projection must be
                // the bare gap.
                prop_assert_eq!(projection, vec![ProjectionItem::Gap]);
            }
        }
    }

    /// Building from a corpus concatenated with itself changes nothing.
    #[test]
    fn dedup_makes_build_idempotent(
        sentences in prop::collection::vec(arb_gold_sentence(), 1..6),
    ) {
        let single = gold_corpus("a", &sentences);
        let mut doubled_sents = sentences.clone();
        doubled_sents.extend(sentences.iter().cloned());
        let doubled = gold_corpus("b", &doubled_sents);
        let configs = vec![LayerConfig {
            id: "l".into(),
            tagset: ["A", "B"].iter().map(|s| tag(s)).collect(),
            eq: EquivalenceClassMap::empty(),
            priority: 0,
            generalise: true,
        }];
        let db1 = build_axis_db(&single, &configs);
        let db2 = build_axis_db(&doubled, &configs);
        match (db1, db2) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "build divergence: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    /// Strictness comparison is a strict total order on distinct layers.
    #[test]
    fn strictness_is_a_total_order(
        specs in prop::collection::vec(
            (
                prop::collection::btree_set(prop::sample::select(vec!["A", "B", "C", "D"]), 1..4),
                -2i32..2,
            ),
            3,
        ),
    ) {
        let layers: Vec<AxisLayer> = specs
            .iter()
            .enumerate()
            .map(|(i, (tags, priority))| {
                let symbols: Vec<&str> = tags.iter().copied().collect();
                let mut l = layer(&format!("layer{i}"), &symbols);
                l = AxisLayer::new(
                    LayerConfig { priority: *priority, ..l.config() },
                    BTreeSet::new(),
                )
                .unwrap();
                l
            })
            .collect();
        use std::cmp::Ordering;
        // Antisymmetry and totality: distinct ids never compare equal.
        for a in &layers {
            for b in &layers {
                let ab = compare_strictness(a, b);
                let ba = compare_strictness(b, a);
                prop_assert_eq!(ab, ba.reverse());
                if a.id() != b.id() {
                    prop_assert_ne!(ab, Ordering::Equal);
                }
            }
        }
        // Transitivity over every triple.
        for a in &layers {
            for b in &layers {
                for c in &layers {
                    if compare_strictness(a, b) == Ordering::Less
                        && compare_strictness(b, c) == Ordering::Less
                    {
                        prop_assert_eq!(compare_strictness(a, c), Ordering::Less);
                    }
                }
            }
        }
    }

    /// Gold-projection round trip: projecting a reading and re-reading the
    /// items never yields adjacent gaps and preserves symbol order.
    #[test]
    fn projections_are_well_formed(
        tags_seq in arb_gold_sentence(),
    ) {
        let corpus = gold_corpus("s", std::slice::from_ref(&tags_seq));
        let sentence = &corpus.sentences()[0];
        let layer = layer("l", &["A", "B"]);
        let projection = project_reading(&sentence.gold_reading().unwrap(), &layer);
        for pair in projection.windows(2) {
            prop_assert!(
                !(pair[0] == ProjectionItem::Gap && pair[1] == ProjectionItem::Gap)
            );
        }
        let expected: Vec<&str> = tags_seq
            .iter()
            .filter(|t| ["A", "B"].contains(t))
            .copied()
            .collect();
        let got: Vec<String> = projection
            .iter()
            .filter_map(|item| match item {
                ProjectionItem::Sym(t) => Some(t.as_str().to_string()),
                ProjectionItem::Gap => None,
            })
            .collect();
        prop_assert_eq!(expected, got);
    }
}

/// Parses "A ... [ B ]+" notation for fixed test cases.
fn axis_from_text(text: &str) -> Axis {
    fn parse_seq<'a>(
        tokens: &mut std::iter::Peekable<std::str::SplitWhitespace<'a>>,
        nested: bool,
    ) -> Vec<AxisElement> {
        let mut out = Vec::new();
        while let Some(&tok) = tokens.peek() {
            match tok {
                "]+" => {
                    assert!(nested);
                    tokens.next();
                    return out;
                }
                "[" => {
                    tokens.next();
                    out.push(AxisElement::Repeat(parse_seq(tokens, true)));
                }
                "..." => {
                    tokens.next();
                    out.push(AxisElement::Gap);
                }
                sym => {
                    tokens.next();
                    out.push(AxisElement::Sym(tag(sym)));
                }
            }
        }
        assert!(!nested);
        out
    }
    let mut tokens = text.split_whitespace().peekable();
    Axis::new("l", parse_seq(&mut tokens, false)).unwrap()
}

/// The generalisation of an axis never shrinks its language, checked
/// exhaustively over every projection up to length 5 on a 2-symbol
/// alphabet for a handful of fixed axes.
#[test]
fn generalisation_widens_exhaustively_on_small_space() {
    let axes = [
        "A ... B A B",
        "A A A",
        "... A ... A ...",
        "A B A B C",
        "A ... A ... A",
    ];
    for text in axes {
        let axis = axis_from_text(text);
        let generalised = generalize_repeats(&axis);
        let symbols = [
            ProjectionItem::Sym(tag("A")),
            ProjectionItem::Sym(tag("B")),
            ProjectionItem::Sym(tag("C")),
            ProjectionItem::Gap,
        ];
        let mut stack: Vec<Vec<ProjectionItem>> = symbols.iter().map(|s| vec![s.clone()]).collect();
        let mut widened = 0u32;
        while let Some(p) = stack.pop() {
            if axis::axis_matches(&axis, &p) {
                assert!(
                    axis::axis_matches(&generalised, &p),
                    "{axis} lost {p:?} generalising to {generalised}"
                );
                widened += 1;
            }
            if p.len() < 5 {
                for s in &symbols {
                    if matches!(s, ProjectionItem::Gap)
                        && matches!(p.last(), Some(ProjectionItem::Gap))
                    {
                        continue;
                    }
                    let mut q = p.clone();
                    q.push(s.clone());
                    stack.push(q);
                }
            }
        }
        assert!(widened > 0, "no matching projection found for {axis}");
    }
}
