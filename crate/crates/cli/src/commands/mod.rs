//! Implementations behind the `synpat` subcommands. Each returns the text
//! to print on stdout; failures carry a stable error code for stderr.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use synpat_core::axis::build_axis_db;
use synpat_core::corpus::{Corpus, Sentence};
use synpat_core::eval::{build_report, EvalSample};
use synpat_core::joint::{generate_joints, Algorithm, JointDb, JointParams};
use synpat_core::parser::{parse_corpus, DisambiguationConfig, ParseStats};
use synpat_core::tagset::Tag;

use crate::error::CliError;
use crate::formats::{adb, config, inventory, jdb, vrt};

pub struct BuildJointsOverrides {
    pub error_margin: Option<f64>,
    pub absolute_margin: Option<u64>,
    pub max_len: Option<usize>,
    pub algorithm: Option<Algorithm>,
}

pub struct ParseOptions {
    pub stats: bool,
    pub reading_cap: Option<u64>,
    pub strict_gaps: bool,
    pub threads: usize,
    /// Configuration supplying disambiguation defaults; flags override it.
    pub config: Option<std::path::PathBuf>,
}

pub fn build_axes(
    corpus_path: &Path,
    config_path: &Path,
    out: &Path,
    inventory_path: Option<&Path>,
) -> Result<String, CliError> {
    let inv = inventory::load_inventory(inventory_path)?;
    let cfg = config::read_config_file(config_path)?;
    if cfg.layers.is_empty() {
        return Err(CliError::new(
            "ConfigError",
            "configuration defines no axis layers",
        ));
    }
    config::validate_against_inventory(&cfg, &inv)?;
    let corpus = vrt::read_corpus_file(corpus_path, vrt::ReadMode::Gold)?;
    let db = build_axis_db(&corpus, &cfg.layers)?;
    adb::write_axis_db_file(&db, out)?;
    let mut msg = String::new();
    for layer in db.layers() {
        writeln!(msg, "layer {}: {} axes", layer.id(), layer.axes().len()).unwrap();
    }
    writeln!(msg, "wrote {}", out.display()).unwrap();
    Ok(msg)
}

pub fn build_joints(
    corpus_path: &Path,
    out: &Path,
    config_path: Option<&Path>,
    overrides: BuildJointsOverrides,
) -> Result<String, CliError> {
    let (mut params, mut algorithm) = match config_path {
        Some(p) => {
            let cfg = config::read_config_file(p)?;
            (cfg.joint_params, cfg.algorithm)
        }
        None => (JointParams::default(), Algorithm::default()),
    };
    if let Some(v) = overrides.error_margin {
        params.error_margin = v;
    }
    if let Some(v) = overrides.absolute_margin {
        params.absolute_margin = v;
    }
    if let Some(v) = overrides.max_len {
        params.max_len = v;
    }
    if let Some(v) = overrides.algorithm {
        algorithm = v;
    }
    params.validate().map_err(CliError::from)?;
    let corpus = vrt::read_corpus_file(corpus_path, vrt::ReadMode::Ambiguous)?;
    let db = generate_joints(&corpus, &params, algorithm)?;
    jdb::write_joint_db_file(&db, out)?;
    let mut msg = String::new();
    for target in db.targets() {
        let count = db.joints_for(target).count();
        writeln!(msg, "target {target}: {count} joints").unwrap();
    }
    writeln!(msg, "wrote {}", out.display()).unwrap();
    Ok(msg)
}

pub fn parse(
    axes_path: Option<&Path>,
    joints_path: Option<&Path>,
    input: &Path,
    out: &Path,
    options: ParseOptions,
) -> Result<String, CliError> {
    let axes = match axes_path {
        Some(p) => adb::read_axis_db_file(p)?,
        None => synpat_core::axis::AxisDb::empty(),
    };
    let joints = match joints_path {
        Some(p) => jdb::read_joint_db_file(p)?,
        None => JointDb::empty(JointParams::default()),
    };
    let corpus = vrt::read_corpus_file(input, vrt::ReadMode::Ambiguous)?;
    let mut config = match &options.config {
        Some(p) => config::read_config_file(p)?.disambiguation,
        None => DisambiguationConfig::default(),
    };
    if let Some(cap) = options.reading_cap {
        config.reading_cap = cap;
    }
    if options.strict_gaps {
        config.strict_gaps = true;
    }

    let started = Instant::now();
    let (parsed, stats) = parse_threaded(&corpus, &axes, &joints, &config, options.threads);
    let elapsed = started.elapsed();

    vrt::write_corpus_file(&parsed, out, true)?;

    let mut msg = String::new();
    if stats.overflow_sentences > 0 {
        eprintln!(
            "synpat: warning: {} sentences exceeded the reading cap and were resolved joints-only",
            stats.overflow_sentences
        );
    }
    if options.stats {
        let secs = elapsed.as_secs_f64();
        let rate = if secs > 0.0 {
            stats.tokens as f64 / secs
        } else {
            f64::INFINITY
        };
        writeln!(
            msg,
            "parsed {} sentences, {} words in {:.2}s ({:.0} words/sec)",
            stats.sentences, stats.tokens, secs, rate
        )
        .unwrap();
        writeln!(msg, "overflow sentences: {}", stats.overflow_sentences).unwrap();
    }
    writeln!(msg, "wrote {}", out.display()).unwrap();
    Ok(msg)
}

/// Splits the corpus into contiguous chunks, one worker per chunk, and
/// reassembles the results in input order, so the output is identical to
/// a single-threaded run.
fn parse_threaded(
    corpus: &Corpus,
    axes: &synpat_core::axis::AxisDb,
    joints: &JointDb,
    config: &DisambiguationConfig,
    threads: usize,
) -> (Corpus, ParseStats) {
    let n = corpus.sentences().len();
    if threads <= 1 || n < 2 {
        return parse_corpus(corpus, axes, joints, config);
    }
    let threads = threads.min(n);
    let chunk_size = n.div_ceil(threads);
    let chunks: Vec<&[Sentence]> = corpus.sentences().chunks(chunk_size).collect();
    let results: Vec<(Corpus, ParseStats)> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let sub = Corpus::new(corpus.name(), chunk.to_vec())
                        .expect("chunk ids are unique");
                    parse_corpus(&sub, axes, joints, config)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut sentences = Vec::with_capacity(n);
    let mut stats = ParseStats::default();
    for (chunk, chunk_stats) in results {
        sentences.extend(chunk.sentences().iter().cloned());
        stats.sentences += chunk_stats.sentences;
        stats.tokens += chunk_stats.tokens;
        stats.overflow_sentences += chunk_stats.overflow_sentences;
    }
    let merged = Corpus::new(corpus.name(), sentences).expect("ids unchanged");
    (merged, stats)
}

pub fn eval(
    gold_path: &Path,
    pred_path: &Path,
    input_path: Option<&Path>,
    by_text: bool,
    csv: bool,
) -> Result<String, CliError> {
    let gold = vrt::read_corpus_file(gold_path, vrt::ReadMode::Gold)?;
    let pred = vrt::read_corpus_file(pred_path, vrt::ReadMode::Ambiguous)?;
    let input = input_path
        .map(|p| vrt::read_corpus_file(p, vrt::ReadMode::Ambiguous))
        .transpose()?;

    let report = if by_text {
        let groups = text_groups(&gold);
        let gold_parts = partition(&gold, &groups)?;
        let pred_parts = partition(&pred, &groups)?;
        let input_parts = input
            .as_ref()
            .map(|c| partition(c, &groups))
            .transpose()?;
        let samples: Vec<EvalSample> = groups
            .iter()
            .enumerate()
            .map(|(i, (name, _))| EvalSample {
                name: name.clone(),
                input: input_parts.as_ref().map(|p| &p[i]),
                pred: &pred_parts[i],
                gold: &gold_parts[i],
            })
            .collect();
        build_report(&samples)?
    } else {
        build_report(&[EvalSample {
            name: gold.name().to_string(),
            input: input.as_ref(),
            pred: &pred,
            gold: &gold,
        }])?
    };
    Ok(if csv {
        report.render_csv()
    } else {
        report.render_table()
    })
}

/// Text groups by sentence-id prefix before `/`, in order of first
/// appearance; ids without a prefix group under the corpus name.
fn text_groups(corpus: &Corpus) -> Vec<(String, Vec<usize>)> {
    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    for (i, sentence) in corpus.sentences().iter().enumerate() {
        let name = sentence
            .id()
            .split_once('/')
            .map(|(prefix, _)| prefix.to_string())
            .unwrap_or_else(|| corpus.name().to_string());
        match groups.iter_mut().find(|(n, _)| *n == name) {
            Some((_, indices)) => indices.push(i),
            None => groups.push((name, vec![i])),
        }
    }
    groups
}

fn partition(corpus: &Corpus, groups: &[(String, Vec<usize>)]) -> Result<Vec<Corpus>, CliError> {
    let total: usize = groups.iter().map(|(_, idx)| idx.len()).sum();
    if total != corpus.sentences().len() {
        return Err(CliError::new(
            "AlignmentMismatch",
            format!(
                "corpus {} has {} sentences, expected {}",
                corpus.name(),
                corpus.sentences().len(),
                total
            ),
        ));
    }
    groups
        .iter()
        .map(|(name, indices)| {
            let sentences = indices
                .iter()
                .map(|&i| corpus.sentences()[i].clone())
                .collect();
            Corpus::new(name.clone(), sentences).map_err(CliError::from)
        })
        .collect()
}

pub fn inspect(
    axes_path: Option<&Path>,
    joints_path: Option<&Path>,
    tag_filter: Option<&str>,
) -> Result<String, CliError> {
    let filter = tag_filter.map(Tag::parse).transpose()?;
    let mut out = String::new();
    match (axes_path, joints_path) {
        (Some(path), None) => {
            let db = adb::read_axis_db_file(path)?;
            let mut printed = false;
            for layer in db.layers() {
                let mut rendered: Vec<String> = layer
                    .axes()
                    .iter()
                    .filter(|a| {
                        filter
                            .as_ref()
                            .map(|t| a.symbols().contains(t))
                            .unwrap_or(true)
                    })
                    .map(|a| a.to_string())
                    .collect();
                rendered.sort();
                if rendered.is_empty() {
                    continue;
                }
                printed = true;
                writeln!(
                    out,
                    "LAYER {} PRIORITY {} GENERALISE {} ({} axes)",
                    layer.id(),
                    layer.priority(),
                    if layer.generalise() { "yes" } else { "no" },
                    rendered.len()
                )
                .unwrap();
                for axis in rendered {
                    writeln!(out, "  AXIS {axis}").unwrap();
                }
            }
            if !printed {
                out.push_str("no patterns\n");
            }
        }
        (None, Some(path)) => {
            let db = jdb::read_joint_db_file(path)?;
            let mut joints: Vec<_> = db
                .iter()
                .filter(|j| filter.as_ref().map(|t| &j.target == t).unwrap_or(true))
                .collect();
            joints.sort_by(|a, b| {
                a.target
                    .cmp(&b.target)
                    .then_with(|| b.total_len().cmp(&a.total_len()))
                    .then_with(|| b.support.cmp(&a.support))
                    .then_with(|| a.context.cmp(&b.context))
            });
            if joints.is_empty() {
                out.push_str("no patterns\n");
            }
            for joint in joints {
                write!(out, "JOINT {} :", joint.target).unwrap();
                for sym in &joint.context.left {
                    write!(out, " {sym}").unwrap();
                }
                out.push_str(" _");
                for sym in &joint.context.right {
                    write!(out, " {sym}").unwrap();
                }
                writeln!(out, " | COUNT {} FREQ {:.4}", joint.support, joint.freq).unwrap();
            }
        }
        _ => {
            return Err(CliError::new(
                "ConfigError",
                "pass exactly one of --axes or --joints",
            ));
        }
    }
    Ok(out)
}

