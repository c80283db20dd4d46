use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use speclain::WeightScheme;

/// Which document representation feeds the k-means step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmbeddingRoute {
    #[serde(rename = "direct_glove")]
    DirectGlove,
    #[serde(rename = "direct_tvs")]
    DirectTvs,
    #[serde(rename = "spectral_L")]
    SpectralL,
    #[serde(rename = "spectral_N")]
    SpectralN,
    #[serde(rename = "spectral_R")]
    SpectralR,
    #[serde(rename = "gower_K")]
    GowerK,
    #[serde(rename = "gower_B")]
    GowerB,
}

impl EmbeddingRoute {
    pub fn name(&self) -> &'static str {
        match self {
            EmbeddingRoute::DirectGlove => "direct_glove",
            EmbeddingRoute::DirectTvs => "direct_tvs",
            EmbeddingRoute::SpectralL => "spectral_L",
            EmbeddingRoute::SpectralN => "spectral_N",
            EmbeddingRoute::SpectralR => "spectral_R",
            EmbeddingRoute::GowerK => "gower_K",
            EmbeddingRoute::GowerB => "gower_B",
        }
    }
}

fn default_seeds() -> Vec<u64> {
    (0..10).collect()
}

fn default_verify_trials() -> usize {
    50
}

/// One declarative run: corpus in, report files out.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub corpus_path: PathBuf,
    /// Absent selects the term-vector-space baseline.
    #[serde(default)]
    pub vectors_path: Option<PathBuf>,
    #[serde(default)]
    pub weight_scheme: WeightScheme,
    pub embedding_route: EmbeddingRoute,
    pub k: usize,
    /// Eigenvalue truncation for the Gower embeddings.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub shift_negative: bool,
    #[serde(default = "default_verify_trials")]
    pub verify_trials: usize,
    pub output_dir: PathBuf,
}

impl PipelineConfig {
    /// Loads a config file, resolving relative paths against its directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let raw = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut config: PipelineConfig = serde_json::from_str(&raw)
            .with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.corpus_path = resolve(base, &config.corpus_path);
        config.vectors_path = config.vectors_path.map(|p| resolve(base, &p));
        config.output_dir = resolve(base, &config.output_dir);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.k < 2 {
            anyhow::bail!("k must be at least 2, got {}", self.k);
        }
        if self.seeds.is_empty() {
            anyhow::bail!("seeds must not be empty");
        }
        if self.embedding_route == EmbeddingRoute::DirectGlove && self.vectors_path.is_none() {
            anyhow::bail!("embedding_route direct_glove requires vectors_path");
        }
        if self.embedding_route == EmbeddingRoute::DirectTvs && self.vectors_path.is_some() {
            anyhow::bail!("embedding_route direct_tvs expects no vectors_path");
        }
        Ok(())
    }

    pub fn base_space_name(&self) -> &'static str {
        if self.vectors_path.is_some() {
            "glove"
        } else {
            "tvs"
        }
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
