//! The production parser against its exhaustive oracle, plus structural
//! properties of the axis filter.

use proptest::prelude::*;

use synpat_core::axis::{self, build_axis_db, AxisDb, GapMode, LayerConfig};
use synpat_core::corpus::{enumerate_readings, Corpus, Sentence, Token};
use synpat_core::joint::{generate_exhaustive, JointDb, JointParams};
use synpat_core::parser::{
    disambiguate, filter_by_axes, oracle_disambiguate, DisambiguationConfig,
};
use synpat_core::tagset::{EquivalenceClassMap, Tag};

const ALPHABET: [&str; 4] = ["A", "B", "C", "D"];

fn tag(s: &str) -> Tag {
    Tag::parse(s).unwrap()
}

/// An ambiguous sentence over the test alphabet with at most 64 readings.
fn arb_sentence() -> impl Strategy<Value = Sentence> {
    prop::collection::vec(
        prop::collection::btree_set(prop::sample::select(ALPHABET.to_vec()), 1..3),
        1..8,
    )
    .prop_filter_map("reading cap", |candidate_sets| {
        let product: u128 = candidate_sets
            .iter()
            .map(|s| s.len() as u128)
            .product();
        if product > 64 {
            return None;
        }
        let tokens: Vec<Token> = candidate_sets
            .into_iter()
            .enumerate()
            .map(|(i, set)| {
                let candidates: Vec<Tag> = set.into_iter().map(tag).collect();
                Token::new(format!("w{i}"), candidates, None).unwrap()
            })
            .collect();
        Some(Sentence::new("s", tokens).unwrap())
    })
}

/// A tiny gold corpus to train random axis and joint databases from.
fn arb_gold_corpus() -> impl Strategy<Value = Corpus> {
    prop::collection::vec(
        prop::collection::vec(prop::sample::select(ALPHABET.to_vec()), 1..7),
        1..6,
    )
    .prop_map(|sentences| {
        let sents = sentences
            .into_iter()
            .enumerate()
            .map(|(i, tags)| {
                let tokens = tags
                    .into_iter()
                    .enumerate()
                    .map(|(j, t)| Token::new(format!("w{j}"), vec![tag(t)], Some(tag(t))).unwrap())
                    .collect();
                Sentence::new(format!("g{i}"), tokens).unwrap()
            })
            .collect();
        Corpus::new("gold", sents).unwrap()
    })
}

fn arb_axis_db() -> impl Strategy<Value = AxisDb> {
    (
        arb_gold_corpus(),
        prop::collection::vec(
            (
                prop::collection::btree_set(prop::sample::select(ALPHABET.to_vec()), 1..4),
                any::<bool>(),
            ),
            1..3,
        ),
    )
        .prop_map(|(corpus, layer_specs)| {
            let configs: Vec<LayerConfig> = layer_specs
                .into_iter()
                .enumerate()
                .map(|(i, (tags, generalise))| LayerConfig {
                    id: format!("layer{i}"),
                    tagset: tags.into_iter().map(tag).collect(),
                    eq: EquivalenceClassMap::empty(),
                    priority: 0,
                    generalise,
                })
                .collect();
            build_axis_db(&corpus, &configs).unwrap_or_else(|_| AxisDb::empty())
        })
}

fn arb_joint_db() -> impl Strategy<Value = JointDb> {
    (arb_gold_corpus(), 1usize..4, 1u64..3).prop_map(|(corpus, max_len, am)| {
        let params = JointParams {
            error_margin: 0.0,
            absolute_margin: am,
            max_len,
        };
        generate_exhaustive(&corpus, &params)
            .unwrap_or_else(|_| JointDb::empty(params))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// The production pipeline agrees with the literal-replay oracle.
    #[test]
    fn disambiguate_equals_oracle(
        sentence in arb_sentence(),
        axes in arb_axis_db(),
        joints in arb_joint_db(),
        strict in any::<bool>(),
    ) {
        let config = DisambiguationConfig {
            strict_gaps: strict,
            ..DisambiguationConfig::default()
        };
        let fast = disambiguate(&sentence, &axes, &joints, &config).unwrap();
        let slow = oracle_disambiguate(&sentence, &axes, &joints, &config).unwrap();
        prop_assert_eq!(fast, slow);
    }

    /// Filtering only shrinks the reading set; accepted layers accept all
    /// survivors and skipped layers accept none of the readings they saw.
    #[test]
    fn filtering_is_sound(
        sentence in arb_sentence(),
        axes in arb_axis_db(),
    ) {
        let config = DisambiguationConfig::default();
        let all: Vec<_> = enumerate_readings(&sentence, config.reading_cap)
            .unwrap()
            .collect();
        let outcome = filter_by_axes(&sentence, &axes, &config).unwrap();
        prop_assert!(!outcome.survivors.is_empty());
        prop_assert!(outcome.survivors.len() <= all.len());
        prop_assert_eq!(
            outcome.matched_layers.len() + outcome.fallback_depth,
            axes.layers().len()
        );

        // Independent replay of the layer walk: a layer is skipped only
        // when zero of the readings it saw match it.
        let mode = GapMode::Lenient;
        let mut current = all.clone();
        let mut matched_replay: Vec<String> = Vec::new();
        for layer in axes.layers() {
            let survivors: Vec<_> = current
                .iter()
                .filter(|r| {
                    let projection = axis::project_reading(r, layer);
                    layer
                        .axes()
                        .iter()
                        .any(|a| axis::axis_matches_with(a, &projection, mode))
                })
                .cloned()
                .collect();
            if survivors.is_empty() {
                prop_assert!(
                    !outcome.matched_layers.iter().any(|id| id == layer.id()),
                    "a layer with no matching readings was recorded as matched"
                );
            } else {
                current = survivors;
                matched_replay.push(layer.id().to_string());
            }
        }
        prop_assert_eq!(&matched_replay, &outcome.matched_layers);
        prop_assert_eq!(&current, &outcome.survivors);

        // Exactly one reading wins in the end, whatever the joint DB.
        let result = disambiguate(
            &sentence,
            &axes,
            &JointDb::empty(JointParams::default()),
            &config,
        )
        .unwrap();
        prop_assert_eq!(result.chosen.len(), sentence.len());
    }
}
