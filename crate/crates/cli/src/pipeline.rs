//! The batch pipeline: corpus → embedding → similarity graph → (spectral /
//! Gower) embedding → k-means → explanations + metrics + equivalence report,
//! all written as deterministic files under the config's output_dir.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use speclain::cluster::{
    criterion_values, kmeans_restarts, verify_equivalences, ClusteringResult, CriterionValues,
    KMeansFlavor, KMeansOptions,
};
use speclain::corpus::{Corpus, SkippedDocument, TokenizerConfig};
use speclain::docembed::{embed_corpus, embed_corpus_tvs, CorpusEmbedding, EmbeddingMatrix};
use speclain::eval::{confusion, f_measure, f_measure_macro, similarity_diagnostics};
use speclain::explain::{
    build_profiles, cluster_distinctness, ClusterProfile, GloveSpace, ImpactMode, TvsSpace,
    WordExplanation, WordSpace,
};
use speclain::gower::{b_row_weights, gower_embed, GowerKind};
use speclain::simgraph::{build_similarity, shift_nonnegative, volumes};
use speclain::spectral::{build_laplacian, spectral_embed, LaplacianKind};
use speclain::wordvec::WordVectorTable;
use speclain::EquivalenceReport;

use crate::config::{EmbeddingRoute, PipelineConfig};

#[derive(Debug, Clone, Serialize)]
pub struct ShiftNote {
    pub applied: bool,
    pub min_similarity_before: f64,
}

#[derive(Debug, Clone, Serialize)]
struct RunManifest<'a> {
    version: &'static str,
    config: &'a PipelineConfig,
    base_space: &'static str,
    strict_sequential: bool,
    shift: ShiftNote,
    corpus_docs: usize,
    skipped_at_load: &'a [SkippedDocument],
    embedded_docs: usize,
    skipped_at_embed: &'a [SkippedDocument],
}

#[derive(Debug, Clone, Serialize)]
struct ClustersFile<'a> {
    embedding_route: &'static str,
    result: &'a ClusteringResult,
    doc_ids: &'a [String],
    criteria: &'a CriterionValues,
    gower_kept_eigenvalues: Option<usize>,
    lingoes_sigma: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct ClusterExplanation {
    cluster_id: usize,
    size: usize,
    distinctness: Option<f64>,
    top_words: Vec<WordExplanation>,
    diff_words: Vec<WordExplanation>,
}

#[derive(Debug, Clone, Serialize)]
struct MetricsFile {
    labels_present: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correct: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_pct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    confusion: Option<speclain::ConfusionTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f_measure_pairwise: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f_measure_macro: Option<f64>,
}

/// What `run` hands back to callers (the grid tabulates these).
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub route: &'static str,
    pub base_space: &'static str,
    pub scheme: String,
    pub k: usize,
    pub m: Option<usize>,
    pub n_docs: usize,
    pub objective: f64,
    pub error_pct: Option<f64>,
    pub f_measure_pairwise: Option<f64>,
    pub equivalence_passed: bool,
}

fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

enum ExplainSpace<'a> {
    Glove(GloveSpace<'a>),
    Tvs(TvsSpace<'a>),
}

impl WordSpace for ExplainSpace<'_> {
    fn word_center_dot(&self, word: &str, v: &ndarray::ArrayView1<f64>) -> Option<f64> {
        match self {
            ExplainSpace::Glove(s) => s.word_center_dot(word, v),
            ExplainSpace::Tvs(s) => s.word_center_dot(word, v),
        }
    }
}

/// Renders the word table row with rank markers at 1, 10, 20, ...
fn format_word_row(words: &[WordExplanation]) -> String {
    let mut out = String::new();
    for w in words {
        if w.rank == 1 || w.rank % 10 == 0 {
            out.push_str(&format!("[{}] ", w.rank));
        }
        out.push_str(&format!("\"{}\"", w.word));
        if w.rank != words.len() {
            out.push_str(", ");
        }
    }
    out
}

pub fn run(
    config: &PipelineConfig,
    strict_sequential: bool,
    verify_only: bool,
) -> anyhow::Result<RunSummary> {
    config.validate()?;
    fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("creating {}", config.output_dir.display()))?;

    // corpus
    let tokenizer = TokenizerConfig::default();
    let is_jsonl = config
        .corpus_path
        .extension()
        .map(|e| e == "jsonl" || e == "ndjson")
        .unwrap_or(false);
    let (corpus, skipped_at_load) = if is_jsonl {
        Corpus::from_jsonl(&config.corpus_path, &tokenizer)?
    } else {
        Corpus::from_plain_text(&config.corpus_path, &tokenizer)?
    };

    // word vectors (kept for the explanation stage) and base embedding
    let glove_table: Option<WordVectorTable> = match &config.vectors_path {
        Some(path) => {
            let vocab: BTreeSet<String> = corpus.vocabulary().iter().cloned().collect();
            Some(WordVectorTable::load_glove_text(path, Some(&vocab))?)
        }
        None => None,
    };
    let base: CorpusEmbedding = match &glove_table {
        Some(table) => embed_corpus(&corpus, table, config.weight_scheme)?,
        None => embed_corpus_tvs(&corpus, config.weight_scheme)?,
    };

    let raw_graph = build_similarity(&base.matrix)?;
    let min_before = raw_graph.min_off_diagonal();
    let (graph, shift) = if config.shift_negative && min_before < 0.0 {
        (
            shift_nonnegative(&raw_graph)?,
            ShiftNote {
                applied: true,
                min_similarity_before: min_before,
            },
        )
    } else {
        (
            raw_graph,
            ShiftNote {
                applied: false,
                min_similarity_before: min_before,
            },
        )
    };

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        config,
        base_space: config.base_space_name(),
        strict_sequential,
        shift,
        corpus_docs: corpus.n_docs(),
        skipped_at_load: &skipped_at_load,
        embedded_docs: base.matrix.n(),
        skipped_at_embed: &base.skipped,
    };
    write_json(&config.output_dir.join("run_manifest.json"), &manifest)?;

    // the equivalence report always runs on the constructed graph
    let verify_seed = config.seeds[0];
    let report: EquivalenceReport = verify_equivalences(&graph, config.verify_trials, verify_seed)?;
    write_json(&config.output_dir.join("equivalence_report.json"), &report)?;

    if verify_only {
        return Ok(RunSummary {
            route: config.embedding_route.name(),
            base_space: config.base_space_name(),
            scheme: config.weight_scheme.to_string(),
            k: config.k,
            m: config.m,
            n_docs: base.matrix.n(),
            objective: f64::NAN,
            error_pct: None,
            f_measure_pairwise: None,
            equivalence_passed: report.passed,
        });
    }

    // route-specific clustering embedding
    let doc_ids = base.matrix.doc_ids.clone();
    let mut gower_info: Option<(usize, f64)> = None;
    let (cluster_matrix, flavor): (EmbeddingMatrix, KMeansFlavor) = match config.embedding_route {
        EmbeddingRoute::DirectGlove | EmbeddingRoute::DirectTvs => {
            (base.matrix.clone(), KMeansFlavor::Euclidean)
        }
        EmbeddingRoute::SpectralL | EmbeddingRoute::SpectralN | EmbeddingRoute::SpectralR => {
            let kind = match config.embedding_route {
                EmbeddingRoute::SpectralL => LaplacianKind::Combinatorial,
                EmbeddingRoute::SpectralN => LaplacianKind::Normalized,
                _ => LaplacianKind::Rationormalized,
            };
            let lap = build_laplacian(&graph, kind)?;
            let emb = spectral_embed(&lap, config.k)?;
            (emb.into_matrix(doc_ids.clone()), KMeansFlavor::Euclidean)
        }
        EmbeddingRoute::GowerK => {
            let emb = gower_embed(&graph, GowerKind::K, config.m)?;
            if emb.m_clamped {
                eprintln!(
                    "warning: m = {:?} exceeds the positive spectrum; kept {}",
                    config.m,
                    emb.kept_eigenvalues.len()
                );
            }
            gower_info = Some((emb.kept_eigenvalues.len(), emb.lingoes_sigma));
            (emb.into_matrix(doc_ids.clone()), KMeansFlavor::Euclidean)
        }
        EmbeddingRoute::GowerB => {
            let emb = gower_embed(&graph, GowerKind::B, config.m)?;
            if emb.m_clamped {
                eprintln!(
                    "warning: m = {:?} exceeds the positive spectrum; kept {}",
                    config.m,
                    emb.kept_eigenvalues.len()
                );
            }
            gower_info = Some((emb.kept_eigenvalues.len(), emb.lingoes_sigma));
            let omega = b_row_weights(&graph)?;
            let matrix = emb.into_matrix(doc_ids.clone()).with_row_weights(omega)?;
            (matrix, KMeansFlavor::WeightedEuclidean)
        }
    };

    let opts = KMeansOptions::default();
    let result = kmeans_restarts(
        &cluster_matrix,
        config.k,
        &config.seeds,
        &opts,
        flavor,
        !strict_sequential,
    )?;
    let criteria = criterion_values(&graph, &result.partition)?;
    let clusters_file = ClustersFile {
        embedding_route: config.embedding_route.name(),
        result: &result,
        doc_ids: &doc_ids,
        criteria: &criteria,
        gower_kept_eigenvalues: gower_info.map(|(m, _)| m),
        lingoes_sigma: gower_info.map(|(_, s)| s),
    };
    write_json(&config.output_dir.join("clusters.json"), &clusters_file)?;

    // explanations score words in the base word space; clusterings found in
    // spectral/Gower spaces are mapped back through their partition
    let space = match (&glove_table, &base.vocab_index) {
        (Some(table), _) => ExplainSpace::Glove(GloveSpace(table)),
        (None, Some(index)) => ExplainSpace::Tvs(TvsSpace { vocab_index: index }),
        (None, None) => anyhow::bail!("no word space available for explanations"),
    };
    let (mode, cluster_volumes) = if config.embedding_route == EmbeddingRoute::GowerB {
        let vols = volumes(&graph, &result.partition)?;
        (ImpactMode::Volume, Some(vols.volume_prime))
    } else {
        (ImpactMode::Cardinality, None)
    };
    let profiles: Vec<ClusterProfile> = build_profiles(
        &result.partition,
        &base.docs,
        &space,
        mode,
        cluster_volumes.as_deref(),
        50,
    )?;
    let sizes = result.partition.sizes();
    let explanations: Vec<ClusterExplanation> = profiles
        .iter()
        .map(|p| ClusterExplanation {
            cluster_id: p.cluster_id,
            size: sizes[p.cluster_id],
            distinctness: cluster_distinctness(&profiles, p.cluster_id).ok(),
            top_words: p.top_words.clone(),
            diff_words: p.diff_words.clone(),
        })
        .collect();
    write_json(&config.output_dir.join("explanations.json"), &explanations)?;

    let mut text = String::new();
    for e in &explanations {
        text.push_str(&format!(
            "Cluster {} (size {}, distinctness {})\n",
            e.cluster_id + 1,
            e.size,
            e.distinctness
                .map(|d| format!("{d:.6}"))
                .unwrap_or_else(|| "n/a".to_string())
        ));
        text.push_str(&format!(
            "Top {} explaining words:\n{}\n",
            e.top_words.len(),
            format_word_row(&e.top_words)
        ));
        if !e.diff_words.is_empty() {
            text.push_str(&format!(
                "Differentiating words:\n{}\n",
                format_word_row(&e.diff_words)
            ));
        }
        text.push('\n');
    }
    let mut file = fs::File::create(config.output_dir.join("explanations.txt"))?;
    file.write_all(text.as_bytes())?;

    // metrics and diagnostics need a fully labeled corpus
    let labels: Option<Vec<String>> = base.labels.iter().cloned().collect();
    let (metrics, error_pct, f_pairwise) = match &labels {
        Some(labels) => {
            let table = confusion(&result.partition, labels)?;
            table.write_csv(&config.output_dir.join("confusion.csv"))?;
            let f_pair = f_measure(&result.partition, labels)?;
            let f_macro = f_measure_macro(&result.partition, labels)?;
            let diagnostics = similarity_diagnostics(&graph, labels)?;
            diagnostics.write_csv(&config.output_dir.join("diagnostics.csv"), &doc_ids)?;
            let error = table.error_pct;
            (
                MetricsFile {
                    labels_present: true,
                    n: Some(table.n),
                    correct: Some(table.correct),
                    error_pct: Some(table.error_pct),
                    confusion: Some(table),
                    f_measure_pairwise: Some(f_pair),
                    f_measure_macro: Some(f_macro),
                },
                Some(error),
                Some(f_pair),
            )
        }
        None => (
            MetricsFile {
                labels_present: false,
                n: None,
                correct: None,
                error_pct: None,
                confusion: None,
                f_measure_pairwise: None,
                f_measure_macro: None,
            },
            None,
            None,
        ),
    };
    write_json(&config.output_dir.join("metrics.json"), &metrics)?;

    Ok(RunSummary {
        route: config.embedding_route.name(),
        base_space: config.base_space_name(),
        scheme: config.weight_scheme.to_string(),
        k: config.k,
        m: config.m,
        n_docs: base.matrix.n(),
        objective: result.objective,
        error_pct,
        f_measure_pairwise: f_pairwise,
        equivalence_passed: report.passed,
    })
}

/// Exit code mapping: 0 success, 2 equivalence-check failure. Input and
/// module errors surface as Err and map to 1 in main.
pub fn exit_code(summary: &RunSummary) -> u8 {
    if summary.equivalence_passed {
        0
    } else {
        2
    }
}
