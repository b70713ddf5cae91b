//! The `crimelens` binary: every pipeline stage as a subcommand, plus
//! `pipeline` to run them all in order. Configuration comes from an optional
//! flat key=value file with command-line flags overriding it; config
//! problems exit 1, data problems exit 2, and artifacts are written
//! atomically (temp file + rename) so a failed run never leaves a torn file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analytics::{self, CrimeCube, CubeOptions, UNKNOWN_ZONE};
use crate::classify::{self, Categorization, NBModel};
use crate::config::{ConfigError, PipelineConfig};
use crate::corpus::{self, Document, RawRecord};
use crate::geodate;
use crate::lexicon::{self, Gazetteer, Lexicon};
use crate::maprender;
use crate::similarity::{self, DedupReport};
use crate::textpipe;

#[derive(Debug, Parser)]
#[command(name = "crimelens", version, about = "Crime analytics over crawled Bangla news")]
pub struct Cli {
    /// Flat `key = value` config file; the flags below override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

/// Per-key overrides mirroring the config file. Values go through the same
/// parser as file entries, so the validation is identical.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// Directory of crawled record files.
    #[arg(long, global = true, value_name = "DIR")]
    corpus_dir: Option<String>,
    /// Stop list, one term per line.
    #[arg(long, global = true, value_name = "FILE")]
    stop_words: Option<String>,
    /// Stem dictionary, `inflected root` per line.
    #[arg(long, global = true, value_name = "FILE")]
    stem_map: Option<String>,
    /// Gazetteer CSV.
    #[arg(long, global = true, value_name = "FILE")]
    gazetteer: Option<String>,
    /// Model file (output of `train`, input everywhere else).
    #[arg(long, global = true, value_name = "FILE")]
    model: Option<String>,
    /// Artifact directory (default `out`).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<String>,
    /// Background image reference for the map.
    #[arg(long, global = true, value_name = "PATH")]
    background: Option<String>,
    /// Top-word count threshold (strictly-greater comparison).
    #[arg(long, global = true, value_name = "N")]
    top_word_threshold: Option<String>,
    /// Duplicate cosine threshold in [0,1].
    #[arg(long, global = true, value_name = "T")]
    dup_threshold: Option<String>,
    /// IDF weighting: `smoothed` or `plain`.
    #[arg(long, global = true, value_name = "MODE")]
    idf_mode: Option<String>,
    /// Aggregation zones: `district` or `thana`.
    #[arg(long, global = true, value_name = "LEVEL")]
    zone_level: Option<String>,
    /// Map canvas width in pixels.
    #[arg(long, global = true, value_name = "PX")]
    canvas_w: Option<String>,
    /// Map canvas height in pixels.
    #[arg(long, global = true, value_name = "PX")]
    canvas_h: Option<String>,
    /// Comma-separated category labels, tie-break order.
    #[arg(long, global = true, value_name = "LIST")]
    categories: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the corpus and report ingest statistics.
    Ingest,
    /// Dump normalized tokens, one per line.
    Tokens,
    /// Build the feature vocabulary, train the categorizer, save the model.
    Train,
    /// Label every document; writes categorized.csv.
    Categorize,
    /// Resolve locations; prints doc_id<TAB>thana<TAB>district rows.
    Locate,
    /// Drop duplicate stories; writes dedup_report.txt and the surviving records.
    Dedup,
    /// Aggregate crime counts per zone; writes rank.csv.
    Rank,
    /// Evaluate the occurrence score; writes predict.csv.
    Predict {
        /// Restrict to one month (1-12); all twelve otherwise.
        #[arg(long)]
        month: Option<u32>,
        /// Restrict to one zone; all ranked zones otherwise.
        #[arg(long)]
        zone: Option<String>,
    },
    /// Render the dot map; writes map.svg.
    Render,
    /// Run ingest, normalize, categorize, locate, dedup, cube, rank,
    /// predict, and render in order; writes every artifact.
    Pipeline,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{stage} stage: {message}")]
    Data { stage: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data { .. } => 2,
        }
    }

    fn data(stage: &'static str, err: impl std::fmt::Display) -> CliError {
        CliError::Data {
            stage,
            message: err.to_string(),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> CliError {
        CliError::Config(err.0)
    }
}

fn apply_overrides(config: &mut PipelineConfig, o: &Overrides) -> Result<(), ConfigError> {
    let pairs = [
        ("corpus_dir", &o.corpus_dir),
        ("stop_words", &o.stop_words),
        ("stem_map", &o.stem_map),
        ("gazetteer", &o.gazetteer),
        ("model", &o.model),
        ("out_dir", &o.out_dir),
        ("background", &o.background),
        ("top_word_threshold", &o.top_word_threshold),
        ("dup_threshold", &o.dup_threshold),
        ("idf_mode", &o.idf_mode),
        ("zone_level", &o.zone_level),
        ("canvas_w", &o.canvas_w),
        ("canvas_h", &o.canvas_h),
        ("categories", &o.categories),
    ];
    for (key, value) in pairs {
        if let Some(value) = value {
            config.set(key, value)?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Need {
    Dir,
    File,
    /// Output destination; only needs to be configured.
    Dest,
}

/// Every path the chosen subcommand will touch, checked before any work.
fn check_required_paths(command: &Command, config: &PipelineConfig) -> Result<(), CliError> {
    let corpus = ("corpus_dir", &config.corpus_dir, Need::Dir);
    let stop = ("stop_words", &config.stop_words, Need::File);
    let stem = ("stem_map", &config.stem_map, Need::File);
    let gaz = ("gazetteer", &config.gazetteer, Need::File);
    let model_in = ("model", &config.model, Need::File);
    let model_out = ("model", &config.model, Need::Dest);

    let needs: Vec<(&str, &Option<PathBuf>, Need)> = match command {
        Command::Ingest => vec![corpus],
        Command::Tokens => vec![corpus, stop, stem],
        Command::Train => vec![corpus, stop, stem, model_out],
        Command::Categorize => vec![corpus, stop, stem, model_in],
        Command::Locate | Command::Dedup => vec![corpus, stop, stem, gaz],
        Command::Rank | Command::Predict { .. } | Command::Render | Command::Pipeline => {
            vec![corpus, stop, stem, gaz, model_in]
        }
    };
    for (key, path, need) in needs {
        let path = path.as_ref().ok_or_else(|| {
            CliError::Config(format!(
                "missing required setting '{key}' (set it in the config file or pass --{})",
                key.replace('_', "-")
            ))
        })?;
        match need {
            Need::Dir if !path.is_dir() => {
                return Err(CliError::Config(format!(
                    "{key}: {} is not a readable directory",
                    path.display()
                )))
            }
            Need::File if !path.is_file() => {
                return Err(CliError::Config(format!(
                    "{key}: {} is not a readable file",
                    path.display()
                )))
            }
            _ => {}
        }
    }
    if let Command::Predict { month: Some(m), .. } = command {
        if !(1..=12).contains(m) {
            return Err(CliError::Config(format!("--month {m} is outside 1..=12")));
        }
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::from_file(path)?,
        None => PipelineConfig::default(),
    };
    apply_overrides(&mut config, &cli.overrides)?;
    config.validate()?;
    check_required_paths(&cli.command, &config)?;

    match &cli.command {
        Command::Ingest => cmd_ingest(&config),
        Command::Tokens => cmd_tokens(&config),
        Command::Train => cmd_train(&config),
        Command::Categorize => cmd_categorize(&config),
        Command::Locate => cmd_locate(&config),
        Command::Dedup => cmd_dedup(&config),
        Command::Rank => cmd_rank(&config),
        Command::Predict { month, zone } => cmd_predict(&config, *month, zone.as_deref()),
        Command::Render => cmd_render(&config),
        Command::Pipeline => cmd_pipeline(&config),
    }
}

// ---------- stages ----------

struct Ingested {
    documents: Vec<Document>,
    /// Source record for `documents[i]` is `records[i]`.
    records: Vec<RawRecord>,
    skipped_files: usize,
    skipped_dates: usize,
}

fn stage_ingest(config: &PipelineConfig) -> Result<Ingested, CliError> {
    let dir = config.corpus_dir.as_ref().expect("checked");
    let loaded = corpus::load_corpus(dir).map_err(|e| CliError::data("ingest", e))?;
    let mut documents = Vec::with_capacity(loaded.records.len());
    let mut records = Vec::with_capacity(loaded.records.len());
    let mut skipped_dates = 0;
    for record in loaded.records {
        match Document::from_record(documents.len(), &record) {
            Ok(doc) => {
                documents.push(doc);
                records.push(record);
            }
            Err(_) => skipped_dates += 1,
        }
    }
    Ok(Ingested {
        documents,
        records,
        skipped_files: loaded.skipped,
        skipped_dates,
    })
}

fn require_documents(ingested: &Ingested, config: &PipelineConfig) -> Result<(), CliError> {
    if ingested.documents.is_empty() {
        return Err(CliError::Data {
            stage: "ingest",
            message: format!(
                "produced no records from {}",
                config.corpus_dir.as_ref().expect("checked").display()
            ),
        });
    }
    Ok(())
}

fn stage_lexicon(config: &PipelineConfig) -> Result<Lexicon, CliError> {
    Lexicon::load(
        config.stop_words.as_ref().expect("checked"),
        config.stem_map.as_ref().expect("checked"),
    )
    .map_err(|e| CliError::data("lexicon", e))
}

fn stage_gazetteer(config: &PipelineConfig) -> Result<Gazetteer, CliError> {
    lexicon::load_gazetteer(config.gazetteer.as_ref().expect("checked"))
        .map_err(|e| CliError::data("gazetteer", e))
}

fn stage_model(config: &PipelineConfig) -> Result<NBModel, CliError> {
    NBModel::load(config.model.as_ref().expect("checked"))
        .map_err(|e| CliError::data("model", e))
}

fn stage_normalize(documents: &mut [Document], lexicon: &Lexicon) {
    for doc in documents.iter_mut() {
        textpipe::normalize_document(doc, lexicon);
    }
}

fn stage_categorize(documents: &mut [Document], model: &NBModel) -> Vec<Categorization> {
    documents
        .iter_mut()
        .map(|doc| {
            let result = model.categorize(doc);
            doc.category = Some(result.category.clone());
            result
        })
        .collect()
}

fn stage_locate(documents: &mut [Document], gazetteer: &Gazetteer, lexicon: &Lexicon) {
    for doc in documents.iter_mut() {
        let resolved = geodate::find_location(doc, gazetteer, lexicon);
        doc.location = Some(resolved);
    }
}

fn stage_dedup(documents: &[Document], config: &PipelineConfig) -> DedupReport {
    similarity::dedup(documents, config.dup_threshold, config.idf_mode)
}

fn stage_cube(survivors: &[Document], config: &PipelineConfig) -> CrimeCube {
    let options = CubeOptions {
        zone_level: config.zone_level,
        crime_category: config
            .categories
            .first()
            .cloned()
            .unwrap_or_else(|| "crime".to_string()),
    };
    analytics::build_cube(survivors, &options)
}

// ---------- artifact writers ----------

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::data("write", format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path)
        .map_err(|e| CliError::data("write", format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn categorized_csv(
    documents: &[Document],
    results: &[Categorization],
    categories: &[String],
) -> String {
    // scores are natural logarithms; the column prefix records the base
    let mut out = String::from("id,category,margin");
    for category in categories {
        let _ = write!(out, ",ln_score_{category}");
    }
    out.push('\n');
    for (doc, result) in documents.iter().zip(results) {
        let _ = write!(out, "{},{},{:.6}", doc.id, result.category, result.margin);
        for (_, score) in &result.log_scores {
            let _ = write!(out, ",{score:.6}");
        }
        out.push('\n');
    }
    out
}

fn locate_table(documents: &[Document]) -> String {
    let mut out = String::from("doc_id\tthana\tdistrict\n");
    for doc in documents {
        let resolved = doc.location.as_ref();
        let thana = resolved
            .and_then(|l| l.thana.as_ref())
            .map(|t| t.name.as_str())
            .unwrap_or("-");
        let district = resolved
            .and_then(|l| l.district.as_ref())
            .map(|d| d.name.as_str())
            .unwrap_or("-");
        let _ = writeln!(out, "{}\t{}\t{}", doc.id, thana, district);
    }
    out
}

fn dedup_report_text(report: &DedupReport, total: usize) -> String {
    let mut out = String::new();
    let mut removed = 0;
    for group in &report.groups {
        for (dup, sim) in &group.removed {
            let _ = writeln!(out, "{} <- {} ({:.6})", group.survivor, dup, sim);
            removed += 1;
        }
    }
    let _ = writeln!(
        out,
        "pairs={} groups={} removed={}",
        report.pairs_evaluated,
        report.groups.len(),
        removed
    );
    let _ = writeln!(out, "documents={} survivors={}", total, report.survivors.len());
    out
}

fn rank_csv(ranking: &[(String, u64)]) -> String {
    let total: u64 = ranking.iter().map(|(_, n)| n).sum();
    let mut out = String::from("zone,count,share\n");
    for (zone, count) in ranking {
        let share = if total > 0 {
            *count as f64 / total as f64
        } else {
            0.0
        };
        let _ = writeln!(out, "{zone},{count},{share:.6}");
    }
    out
}

fn predict_csv(
    cube: &CrimeCube,
    month_filter: Option<u32>,
    zone_filter: Option<&str>,
) -> Result<String, CliError> {
    let mut out = String::from("zone,month,c_zm,c_tm,c_z,c_t,score\n");
    let zones: Vec<&String> = cube
        .zones()
        .iter()
        .filter(|z| z.as_str() != UNKNOWN_ZONE)
        .collect();
    if let Some(zone) = zone_filter {
        if !zones.iter().any(|z| z.as_str() == zone) {
            return Err(CliError::Data {
                stage: "predict",
                message: format!("zone {zone:?} has no crime data in this corpus"),
            });
        }
    }
    for month in 1..=12u32 {
        if month_filter.is_some_and(|m| m != month) {
            continue;
        }
        for zone in &zones {
            if zone_filter.is_some_and(|z| z != zone.as_str()) {
                continue;
            }
            let p = analytics::predict(cube, month, zone)
                .map_err(|e| CliError::data("predict", e))?;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{:.6}",
                p.zone, p.month, p.zone_month, p.month_total, p.zone_total, p.grand_total, p.score
            );
        }
    }
    Ok(out)
}

// ---------- subcommands ----------

fn cmd_ingest(config: &PipelineConfig) -> Result<(), CliError> {
    let ingested = stage_ingest(config)?;
    println!(
        "records={} skipped_files={} skipped_dates={}",
        ingested.documents.len(),
        ingested.skipped_files,
        ingested.skipped_dates
    );
    if let (Some(first), Some(last)) = (ingested.documents.first(), ingested.documents.last()) {
        println!("first={} last={}", first.published_day, last.published_day);
    }
    let mut domains: BTreeMap<&str, usize> = BTreeMap::new();
    let mut hints: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in &ingested.documents {
        *domains.entry(doc.source_domain.as_str()).or_insert(0) += 1;
        if !doc.category_hint.is_empty() {
            *hints.entry(doc.category_hint.as_str()).or_insert(0) += 1;
        }
    }
    println!("domains={}", domains.len());
    for (hint, n) in hints {
        println!("hint {hint}={n}");
    }
    Ok(())
}

fn cmd_tokens(config: &PipelineConfig) -> Result<(), CliError> {
    let mut ingested = stage_ingest(config)?;
    let lexicon = stage_lexicon(config)?;
    stage_normalize(&mut ingested.documents, &lexicon);
    let mut out = String::new();
    for doc in &ingested.documents {
        let _ = writeln!(out, "# doc {} {}", doc.id, doc.url);
        for token in &doc.tokens {
            let _ = writeln!(out, "{token}");
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_train(config: &PipelineConfig) -> Result<(), CliError> {
    let mut ingested = stage_ingest(config)?;
    require_documents(&ingested, config)?;
    let lexicon = stage_lexicon(config)?;
    stage_normalize(&mut ingested.documents, &lexicon);

    let labeled: Vec<(&Document, &str)> = ingested
        .documents
        .iter()
        .filter(|d| !d.category_hint.is_empty())
        .map(|d| (d, d.category_hint.as_str()))
        .collect();
    let unlabeled = ingested.documents.len() - labeled.len();
    if unlabeled > 0 {
        eprintln!("train: skipping {unlabeled} documents without a CATEGORY hint");
    }
    if labeled.is_empty() {
        return Err(CliError::Data {
            stage: "train",
            message: "no labeled documents (CATEGORY hints are empty)".to_string(),
        });
    }

    let vocabulary = textpipe::extract_top_words(&labeled, &lexicon, config.top_word_threshold);
    let model = classify::train(&labeled, &vocabulary, &config.categories)
        .map_err(|e| CliError::data("train", e))?;
    let model_path = config.model.as_ref().expect("checked");
    write_atomic(model_path, model.to_text().as_bytes())?;
    println!(
        "trained on {} documents: {} vocabulary terms, categories {}",
        labeled.len(),
        model.vocabulary_size(),
        model.categories().join(",")
    );
    println!("wrote {}", model_path.display());
    Ok(())
}

fn cmd_categorize(config: &PipelineConfig) -> Result<(), CliError> {
    let mut ingested = stage_ingest(config)?;
    require_documents(&ingested, config)?;
    let lexicon = stage_lexicon(config)?;
    let model = stage_model(config)?;
    stage_normalize(&mut ingested.documents, &lexicon);
    let results = stage_categorize(&mut ingested.documents, &model);
    let path = config.out_dir.join("categorized.csv");
    write_atomic(
        &path,
        categorized_csv(&ingested.documents, &results, model.categories()).as_bytes(),
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_locate(config: &PipelineConfig) -> Result<(), CliError> {
    let mut ingested = stage_ingest(config)?;
    let lexicon = stage_lexicon(config)?;
    let gazetteer = stage_gazetteer(config)?;
    stage_locate(&mut ingested.documents, &gazetteer, &lexicon);
    print!("{}", locate_table(&ingested.documents));
    Ok(())
}

fn cmd_dedup(config: &PipelineConfig) -> Result<(), CliError> {
    let mut ingested = stage_ingest(config)?;
    require_documents(&ingested, config)?;
    let lexicon = stage_lexicon(config)?;
    let gazetteer = stage_gazetteer(config)?;
    stage_normalize(&mut ingested.documents, &lexicon);
    stage_locate(&mut ingested.documents, &gazetteer, &lexicon);
    let report = stage_dedup(&ingested.documents, config);

    let report_path = config.out_dir.join("dedup_report.txt");
    write_atomic(
        &report_path,
        dedup_report_text(&report, ingested.documents.len()).as_bytes(),
    )?;
    // the surviving corpus, re-emitted in the crawl format
    let survivors_dir = config.out_dir.join("survivors");
    for doc in &report.survivors {
        let record = &ingested.records[doc.id];
        let path = survivors_dir.join(format!("{:04}.rec", doc.id));
        write_atomic(&path, corpus::write_record(record).as_bytes())?;
    }
    println!(
        "removed {} of {} documents; wrote {} and {}/",
        ingested.documents.len() - report.survivors.len(),
        ingested.documents.len(),
        report_path.display(),
        survivors_dir.display()
    );
    Ok(())
}

/// The shared tail of rank/predict/render/pipeline: everything up to the
/// deduplicated, categorized, located survivor set.
fn survivors_with_cube(
    config: &PipelineConfig,
) -> Result<(Ingested, Vec<Categorization>, DedupReport, CrimeCube), CliError> {
    let mut ingested = stage_ingest(config)?;
    require_documents(&ingested, config)?;
    let lexicon = stage_lexicon(config)?;
    let gazetteer = stage_gazetteer(config)?;
    let model = stage_model(config)?;
    stage_normalize(&mut ingested.documents, &lexicon);
    let results = stage_categorize(&mut ingested.documents, &model);
    stage_locate(&mut ingested.documents, &gazetteer, &lexicon);
    let report = stage_dedup(&ingested.documents, config);
    let cube = stage_cube(&report.survivors, config);
    Ok((ingested, results, report, cube))
}

fn cmd_rank(config: &PipelineConfig) -> Result<(), CliError> {
    let (_, _, _, cube) = survivors_with_cube(config)?;
    let path = config.out_dir.join("rank.csv");
    write_atomic(&path, rank_csv(&analytics::rank_zones(&cube)).as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_predict(
    config: &PipelineConfig,
    month: Option<u32>,
    zone: Option<&str>,
) -> Result<(), CliError> {
    let (_, _, _, cube) = survivors_with_cube(config)?;
    let path = config.out_dir.join("predict.csv");
    write_atomic(&path, predict_csv(&cube, month, zone)?.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_render(config: &PipelineConfig) -> Result<(), CliError> {
    let (_, _, _, cube) = survivors_with_cube(config)?;
    let gazetteer = stage_gazetteer(config)?;
    let svg = render_map(config, &cube, &gazetteer)?;
    let path = config.out_dir.join("map.svg");
    write_atomic(&path, &svg)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn render_map(
    config: &PipelineConfig,
    cube: &CrimeCube,
    gazetteer: &Gazetteer,
) -> Result<Vec<u8>, CliError> {
    let ranking = analytics::rank_zones(cube);
    let dots = maprender::layout_dots(
        &ranking,
        gazetteer,
        config.canvas_w,
        config.canvas_h,
        &config.render,
    )
    .map_err(|e| CliError::data("render", e))?;
    Ok(maprender::render_svg(
        &dots,
        config.background.as_deref(),
        config.canvas_w,
        config.canvas_h,
    ))
}

fn cmd_pipeline(config: &PipelineConfig) -> Result<(), CliError> {
    let mut ingested = stage_ingest(config)?;
    require_documents(&ingested, config)?;
    let lexicon = stage_lexicon(config)?;
    let gazetteer = stage_gazetteer(config)?;
    let model = stage_model(config)?;
    println!(
        "ingest: {} records (skipped_files={} skipped_dates={})",
        ingested.documents.len(),
        ingested.skipped_files,
        ingested.skipped_dates
    );

    stage_normalize(&mut ingested.documents, &lexicon);
    let results = stage_categorize(&mut ingested.documents, &model);
    write_atomic(
        &config.out_dir.join("categorized.csv"),
        categorized_csv(&ingested.documents, &results, model.categories()).as_bytes(),
    )?;

    stage_locate(&mut ingested.documents, &gazetteer, &lexicon);
    write_atomic(
        &config.out_dir.join("locate.tsv"),
        locate_table(&ingested.documents).as_bytes(),
    )?;

    let report = stage_dedup(&ingested.documents, config);
    write_atomic(
        &config.out_dir.join("dedup_report.txt"),
        dedup_report_text(&report, ingested.documents.len()).as_bytes(),
    )?;
    println!(
        "dedup: removed {} of {} ({} pairs)",
        ingested.documents.len() - report.survivors.len(),
        ingested.documents.len(),
        report.pairs_evaluated
    );

    let cube = stage_cube(&report.survivors, config);
    write_atomic(
        &config.out_dir.join("rank.csv"),
        rank_csv(&analytics::rank_zones(&cube)).as_bytes(),
    )?;
    write_atomic(
        &config.out_dir.join("predict.csv"),
        predict_csv(&cube, None, None)?.as_bytes(),
    )?;
    write_atomic(&config.out_dir.join("map.svg"), &render_map(config, &cube, &gazetteer)?)?;

    println!(
        "pipeline: wrote categorized.csv locate.tsv dedup_report.txt rank.csv predict.csv map.svg under {}",
        config.out_dir.display()
    );
    Ok(())
}
