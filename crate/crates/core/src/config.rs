//! Run configuration, read from and written as TOML.
//!
//! Relative paths are resolved against the directory holding the config
//! file. Unknown keys anywhere are rejected. A minimal config:
//!
//! ```toml
//! output_dir = "out"
//! rng_seed = 7
//!
//! [corpus]
//! metadata = "metadata.jsonl"
//! text_root = "texts"
//!
//! [windows]
//! half_width = 4
//!
//! [descriptors]
//! cutoff = 30
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analyses::AnalysisConfig;
use crate::descriptors::DescriptorConfig;
use crate::embedding::EmbeddingConfig;
use crate::error::{Error, Result};
use crate::text::TaggerBackend;
use crate::windows::WindowConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusConfig {
    /// JSON Lines or JSON array of book records.
    pub metadata: PathBuf,
    pub text_root: PathBuf,
    pub language: String,
    pub fiction_only: bool,
    pub strip_boilerplate: bool,
    pub tagger: TaggerBackend,
    /// Length of the author and genre frequency tables.
    pub top_k: usize,
    pub birth_bin_width: u32,
    /// Earlier birth years share one bin.
    pub birth_floor_year: i32,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            metadata: PathBuf::from("metadata.jsonl"),
            text_root: PathBuf::from("texts"),
            language: "en".into(),
            fiction_only: true,
            strip_boilerplate: true,
            tagger: TaggerBackend::Baseline,
            top_k: 20,
            birth_bin_width: 50,
            birth_floor_year: 1500,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LexiconConfig {
    /// Directory of `<sense>.txt` seed lists; the bundled lists when unset.
    pub seed_dir: Option<PathBuf>,
    /// Stop-word file; the bundled list when unset.
    pub stopwords: Option<PathBuf>,
    /// Skip inflecting seeds when true.
    pub no_morphology: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    /// Components of the combined projection used by the analyses and plot.
    pub n_components: usize,
    /// Component counts fitted per sense for the explained-variance table.
    pub variance_components: Vec<usize>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            n_components: 2,
            variance_components: vec![2, 3, 4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportConfig {
    /// Label this many highest-count descriptors per sense in the scatter plot.
    pub annotate_top: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { annotate_top: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    /// Overrides `embedding.rng_seed` when set.
    pub rng_seed: Option<u64>,
    /// Overrides `embedding.threads` when set; also bounds per-book parallelism.
    pub threads: Option<usize>,
    pub corpus: CorpusConfig,
    pub lexicon: LexiconConfig,
    pub windows: WindowConfig,
    pub descriptors: DescriptorConfig,
    pub embedding: EmbeddingConfig,
    pub geometry: GeometryConfig,
    pub analysis: AnalysisConfig,
    pub report: ReportConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            output_dir: PathBuf::from("out"),
            rng_seed: None,
            threads: None,
            corpus: CorpusConfig::default(),
            lexicon: LexiconConfig::default(),
            windows: WindowConfig::default(),
            descriptors: DescriptorConfig::default(),
            embedding: EmbeddingConfig::default(),
            geometry: GeometryConfig::default(),
            analysis: AnalysisConfig::default(),
            report: ReportConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    /// Reads, path-resolves and validates a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let base = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        let base = std::path::absolute(base).map_err(|e| Error::io(base, e))?;
        cfg.resolve_paths(&base);
        cfg.apply_overrides();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }

    /// Makes relative paths absolute against `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        fix(&mut self.corpus.metadata);
        fix(&mut self.corpus.text_root);
        if let Some(p) = &mut self.lexicon.seed_dir {
            fix(p);
        }
        if let Some(p) = &mut self.lexicon.stopwords {
            fix(p);
        }
    }

    /// Copies top-level seed and thread settings into the embedding config.
    pub fn apply_overrides(&mut self) {
        match self.rng_seed {
            Some(seed) => self.embedding.rng_seed = seed,
            None => self.rng_seed = Some(self.embedding.rng_seed),
        }
        match self.threads {
            Some(t) => self.embedding.threads = t,
            None => self.threads = Some(self.embedding.threads),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.windows.validate()?;
        self.descriptors.validate()?;
        self.embedding.validate()?;
        self.analysis.validate()?;
        let g = &self.geometry;
        if !(2..=4).contains(&g.n_components) {
            return Err(Error::Config("geometry.n_components must be in 2..=4".into()));
        }
        if g.variance_components.iter().any(|k| !(2..=4).contains(k)) {
            return Err(Error::Config(
                "geometry.variance_components entries must be in 2..=4".into(),
            ));
        }
        if self.corpus.birth_bin_width == 0 {
            return Err(Error::Config("corpus.birth_bin_width must be positive".into()));
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).map_err(|e| Error::io(path, e))
    }
}
