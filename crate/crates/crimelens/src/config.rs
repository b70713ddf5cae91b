//! Pipeline configuration: a flat `key = value` text file plus command-line
//! overrides, flags winning. Keeping the config in a file makes a run
//! reproducible from one artifact.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analytics::ZoneLevel;
use crate::classify::DEFAULT_CATEGORIES;
use crate::maprender::{RenderOptions, Rgb};
use crate::similarity::IdfMode;

#[derive(Debug, Error)]
#[error("config: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus_dir: Option<PathBuf>,
    pub stop_words: Option<PathBuf>,
    pub stem_map: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Optional background image reference for the map.
    pub background: Option<String>,
    /// A term is a feature iff its corpus count strictly exceeds this.
    pub top_word_threshold: u64,
    /// Cosine similarity must strictly exceed this for a duplicate.
    pub dup_threshold: f64,
    pub idf_mode: IdfMode,
    pub zone_level: ZoneLevel,
    pub canvas_w: u32,
    pub canvas_h: u32,
    pub render: RenderOptions,
    /// Category labels in declared (tie-break) order.
    pub categories: Vec<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus_dir: None,
            stop_words: None,
            stem_map: None,
            gazetteer: None,
            model: None,
            out_dir: PathBuf::from("out"),
            background: None,
            top_word_threshold: 5,
            dup_threshold: 0.60,
            idf_mode: IdfMode::Smoothed,
            zone_level: ZoneLevel::District,
            canvas_w: 800,
            canvas_h: 1000,
            render: RenderOptions::default(),
            categories: DEFAULT_CATEGORIES.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl PipelineConfig {
    /// Read a config file and fold it over the defaults.
    pub fn from_file(path: impl AsRef<Path>) -> Result<PipelineConfig, ConfigError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let mut config = PipelineConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!(
                    "{}:{}: expected 'key = value', got {line:?}",
                    path.display(),
                    i + 1
                ))
            })?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    /// Apply one key. Shared by the file reader and the flag overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |what: &str| ConfigError(format!("key {key:?}: {what}: {value:?}"));
        match key {
            "corpus_dir" => self.corpus_dir = Some(PathBuf::from(value)),
            "stop_words" => self.stop_words = Some(PathBuf::from(value)),
            "stem_map" => self.stem_map = Some(PathBuf::from(value)),
            "gazetteer" => self.gazetteer = Some(PathBuf::from(value)),
            "model" => self.model = Some(PathBuf::from(value)),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "background" => self.background = Some(value.to_string()),
            "top_word_threshold" => {
                self.top_word_threshold =
                    value.parse().map_err(|_| bad("not a nonnegative integer"))?;
            }
            "dup_threshold" => {
                let t: f64 = value.parse().map_err(|_| bad("not a number"))?;
                if !(0.0..=1.0).contains(&t) {
                    return Err(bad("must be in [0, 1]"));
                }
                self.dup_threshold = t;
            }
            "idf_mode" => {
                self.idf_mode = match value {
                    "smoothed" => IdfMode::Smoothed,
                    "plain" => IdfMode::Plain,
                    _ => return Err(bad("expected 'smoothed' or 'plain'")),
                };
            }
            "zone_level" => {
                self.zone_level = match value {
                    "district" => ZoneLevel::District,
                    "thana" => ZoneLevel::Thana,
                    _ => return Err(bad("expected 'district' or 'thana'")),
                };
            }
            "canvas_w" | "canvas_h" => {
                let px: u32 = value.parse().map_err(|_| bad("not a pixel count"))?;
                if px == 0 {
                    return Err(bad("must be positive"));
                }
                if key == "canvas_w" {
                    self.canvas_w = px;
                } else {
                    self.canvas_h = px;
                }
            }
            "dot_min_radius" | "dot_radius_step" | "dot_max_radius" => {
                let r: f64 = value.parse().map_err(|_| bad("not a number"))?;
                if !r.is_finite() || r < 0.0 {
                    return Err(bad("must be nonnegative"));
                }
                match key {
                    "dot_min_radius" => self.render.min_radius = r,
                    "dot_radius_step" => self.render.radius_step = r,
                    _ => self.render.max_radius = r,
                }
            }
            "ramp_from" => {
                self.render.ramp_from = Rgb::parse(value).map_err(|e| bad(&e.to_string()))?;
            }
            "ramp_to" => {
                self.render.ramp_to = Rgb::parse(value).map_err(|e| bad(&e.to_string()))?;
            }
            "categories" => {
                let categories: Vec<String> = value
                    .split(',')
                    .map(|c| c.trim().to_string())
                    .filter(|c| !c.is_empty())
                    .collect();
                if categories.is_empty() {
                    return Err(bad("no category labels"));
                }
                self.categories = categories;
            }
            _ => return Err(ConfigError(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Cross-field checks that single `set` calls cannot see.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.render.min_radius > self.render.max_radius {
            return Err(ConfigError(format!(
                "dot_min_radius {} exceeds dot_max_radius {}",
                self.render.min_radius, self.render.max_radius
            )));
        }
        Ok(())
    }
}
