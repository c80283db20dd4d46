//! Document embeddings: the GloVe path (weighted average of word vectors,
//! unit-normalized) and the term-vector-space baseline, plus the per-word
//! weight* coefficients that drive every explanation downstream.

use std::collections::BTreeMap;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::corpus::{inverse_document_frequency, Corpus, Document, SkippedDocument, WeightScheme};
use crate::error::{Error, Result};
use crate::simgraph::SimilarityGraph;
use crate::wordvec::WordVectorTable;

/// Which space an embedding matrix lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceTag {
    Glove,
    Tvs,
    SpectralL,
    SpectralN,
    SpectralR,
    GowerK,
    GowerB,
}

impl std::fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SpaceTag::Glove => "glove",
            SpaceTag::Tvs => "tvs",
            SpaceTag::SpectralL => "spectral_L",
            SpaceTag::SpectralN => "spectral_N",
            SpaceTag::SpectralR => "spectral_R",
            SpaceTag::GowerK => "gower_K",
            SpaceTag::GowerB => "gower_B",
        };
        f.write_str(name)
    }
}

/// A single document's unit embedding together with the linear coefficient
/// weight*(w) of each distinct in-vocabulary word, so that
/// vector = Σ_w weight*(w)·g(w) holds with the same summation order.
#[derive(Debug, Clone)]
pub struct DocEmbedding {
    pub doc_id: String,
    pub vector: Array1<f64>,
    pub weight_star: BTreeMap<String, f64>,
}

/// n×m matrix of document representations with optional per-row weights.
#[derive(Debug, Clone)]
pub struct EmbeddingMatrix {
    pub rows: Array2<f64>,
    pub row_weights: Option<Array1<f64>>,
    pub space: SpaceTag,
    /// Set when rows were rescaled by apply_row_weights.
    pub weighted: bool,
    pub doc_ids: Vec<String>,
}

impl EmbeddingMatrix {
    pub fn new(rows: Array2<f64>, space: SpaceTag, doc_ids: Vec<String>) -> Self {
        EmbeddingMatrix {
            rows,
            row_weights: None,
            space,
            weighted: false,
            doc_ids,
        }
    }

    pub fn n(&self) -> usize {
        self.rows.nrows()
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn with_row_weights(mut self, weights: Array1<f64>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(Error::InvalidInput(format!(
                "row weight vector has length {}, expected {}",
                weights.len(),
                self.n()
            )));
        }
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                return Err(Error::NonPositiveWeight { index: i, value: w });
            }
        }
        self.row_weights = Some(weights);
        Ok(self)
    }

    /// CSV dump: header `doc_id,v1,...,vd`, one row per document.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer =
            csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut header = vec!["doc_id".to_string()];
        header.extend((1..=self.dim()).map(|i| format!("v{i}")));
        writer
            .write_record(&header)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for (i, row) in self.rows.rows().into_iter().enumerate() {
            let mut record = vec![self.doc_ids[i].clone()];
            record.extend(row.iter().map(|v| format!("{v}")));
            writer
                .write_record(&record)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        writer
            .flush()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(())
    }
}

/// Effective per-distinct-word weights with tf folded in: Uniform and Tf give
/// tf(w), Idf gives idf(w), TfIdf gives tf·idf. Only words passing `keep`
/// participate (the OOV filter on the GloVe path).
fn effective_weights(
    doc: &Document,
    corpus: &Corpus,
    scheme: WeightScheme,
    mut keep: impl FnMut(&str) -> bool,
) -> BTreeMap<String, f64> {
    let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
    for token in &doc.tokens {
        if keep(token) {
            *tf.entry(token.as_str()).or_insert(0) += 1;
        }
    }
    tf.into_iter()
        .map(|(word, count)| {
            let weight = match scheme {
                WeightScheme::Uniform | WeightScheme::Tf => count as f64,
                WeightScheme::Idf => inverse_document_frequency(word, corpus),
                WeightScheme::TfIdf => count as f64 * inverse_document_frequency(word, corpus),
            };
            (word.to_string(), weight)
        })
        .collect()
}

/// Core of the embedding: given per-word weights W(w) and word vectors, form
/// g' = Σ W(w)·g(w) / Σ W(w), normalize to unit length, and record
/// weight*(w) = α·W(w)/ΣW. The stored vector is re-summed from weight* so the
/// linear identity holds bit-exactly.
fn embed_from_weights(
    doc_id: &str,
    weights: &BTreeMap<String, f64>,
    dim: usize,
    mut word_vector: impl FnMut(&str) -> Array1<f64>,
) -> Result<DocEmbedding> {
    let total: f64 = weights.values().sum();
    if total.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::ZeroNormDocument {
            doc_id: doc_id.to_string(),
        });
    }
    let mut numerator = Array1::<f64>::zeros(dim);
    for (word, &w) in weights {
        numerator.scaled_add(w, &word_vector(word));
    }
    let g_prime = numerator / total;
    let norm = g_prime.dot(&g_prime).sqrt();
    if norm <= 1e-12 {
        return Err(Error::ZeroNormDocument {
            doc_id: doc_id.to_string(),
        });
    }
    let alpha = 1.0 / norm;
    let weight_star: BTreeMap<String, f64> = weights
        .iter()
        .map(|(word, &w)| (word.clone(), alpha * w / total))
        .collect();
    let mut vector = Array1::<f64>::zeros(dim);
    for (word, &ws) in &weight_star {
        vector.scaled_add(ws, &word_vector(word));
    }
    Ok(DocEmbedding {
        doc_id: doc_id.to_string(),
        vector,
        weight_star,
    })
}

/// Embeds one document into GloVe space. OOV tokens are dropped first; a
/// document with no in-vocabulary token is unembeddable.
pub fn embed_document(
    doc: &Document,
    table: &WordVectorTable,
    corpus: &Corpus,
    scheme: WeightScheme,
) -> Result<DocEmbedding> {
    let weights = effective_weights(doc, corpus, scheme, |w| table.contains(w));
    if weights.is_empty() {
        return Err(Error::UnembeddableDocument {
            doc_id: doc.id.clone(),
        });
    }
    embed_from_weights(&doc.id, &weights, table.dim(), |w| {
        Array1::from_vec(table.get(w).expect("filtered to in-vocabulary").to_vec())
    })
}

/// sim(w,δ) = weight*(w)·g(w)ᵀg(δ).
pub fn word_doc_similarity(word: &str, emb: &DocEmbedding, table: &WordVectorTable) -> Result<f64> {
    let ws = emb
        .weight_star
        .get(word)
        .ok_or_else(|| Error::WordNotInEmbedding {
            word: word.to_string(),
        })?;
    let g = table.get(word).ok_or_else(|| Error::WordNotInEmbedding {
        word: word.to_string(),
    })?;
    let dot: f64 = g.iter().zip(emb.vector.iter()).map(|(a, b)| a * b).sum();
    Ok(ws * dot)
}

/// A batch embedding: matrix rows aligned with `docs`, plus skip records for
/// documents that could not be embedded.
#[derive(Debug, Clone)]
pub struct CorpusEmbedding {
    pub matrix: EmbeddingMatrix,
    pub docs: Vec<DocEmbedding>,
    pub labels: Vec<Option<String>>,
    pub skipped: Vec<SkippedDocument>,
    /// Vocabulary coordinate map, present for the TVS space.
    pub vocab_index: Option<BTreeMap<String, usize>>,
}

/// Embeds every document of the corpus into GloVe space, skipping (and
/// reporting) unembeddable ones.
pub fn embed_corpus(
    corpus: &Corpus,
    table: &WordVectorTable,
    scheme: WeightScheme,
) -> Result<CorpusEmbedding> {
    let mut docs = Vec::new();
    let mut labels = Vec::new();
    let mut skipped = Vec::new();
    for doc in corpus.documents() {
        match embed_document(doc, table, corpus, scheme) {
            Ok(emb) => {
                docs.push(emb);
                labels.push(doc.label.clone());
            }
            Err(e @ (Error::UnembeddableDocument { .. } | Error::ZeroNormDocument { .. })) => {
                skipped.push(SkippedDocument {
                    id: doc.id.clone(),
                    reason: e.to_string(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    if docs.is_empty() {
        return Err(Error::InvalidInput(
            "no embeddable documents in corpus".to_string(),
        ));
    }
    let matrix = stack_rows(&docs, table.dim(), SpaceTag::Glove);
    Ok(CorpusEmbedding {
        matrix,
        docs,
        labels,
        skipped,
        vocab_index: None,
    })
}

/// Embeds the corpus into term vector space: one coordinate per vocabulary
/// word, unit-normalized rows. Word "vectors" in this space are the standard
/// basis, so weight*(w) is the row's coordinate at w.
pub fn embed_corpus_tvs(corpus: &Corpus, scheme: WeightScheme) -> Result<CorpusEmbedding> {
    if corpus.n_docs() == 0 {
        return Err(Error::InvalidInput("empty corpus".to_string()));
    }
    let vocab_index: BTreeMap<String, usize> = corpus
        .vocabulary()
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let dim = vocab_index.len();
    let mut docs = Vec::new();
    let mut labels = Vec::new();
    let mut skipped = Vec::new();
    for doc in corpus.documents() {
        let weights = effective_weights(doc, corpus, scheme, |_| true);
        if weights.is_empty() {
            skipped.push(SkippedDocument {
                id: doc.id.clone(),
                reason: "empty document".to_string(),
            });
            continue;
        }
        let emb = embed_from_weights(&doc.id, &weights, dim, |w| {
            let mut e = Array1::<f64>::zeros(dim);
            e[vocab_index[w]] = 1.0;
            e
        })?;
        docs.push(emb);
        labels.push(doc.label.clone());
    }
    if docs.is_empty() {
        return Err(Error::InvalidInput(
            "no embeddable documents in corpus".to_string(),
        ));
    }
    let matrix = stack_rows(&docs, dim, SpaceTag::Tvs);
    Ok(CorpusEmbedding {
        matrix,
        docs,
        labels,
        skipped,
        vocab_index: Some(vocab_index),
    })
}

fn stack_rows(docs: &[DocEmbedding], dim: usize, space: SpaceTag) -> EmbeddingMatrix {
    let mut rows = Array2::<f64>::zeros((docs.len(), dim));
    for (i, doc) in docs.iter().enumerate() {
        rows.row_mut(i).assign(&doc.vector);
    }
    EmbeddingMatrix::new(rows, space, docs.iter().map(|d| d.doc_id.clone()).collect())
}

/// How to derive the per-document weights ωᵢ from a similarity graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMode {
    /// ωᵢ = Σ_ℓ s_iℓ
    Degree,
    /// ωᵢ = 1 + Σ_ℓ s_iℓ
    DegreePlusOne,
}

pub fn omega_from_graph(graph: &SimilarityGraph, mode: OmegaMode) -> Array1<f64> {
    match mode {
        OmegaMode::Degree => graph.d().to_owned(),
        OmegaMode::DegreePlusOne => graph.d_prime().to_owned(),
    }
}

/// g_ω(δᵢ) = g(δᵢ)/ωᵢ: divides each row by its weight and records ω as the
/// matrix's row weights. Errors on any nonpositive ωᵢ.
pub fn apply_row_weights(emb: &EmbeddingMatrix, omega: &Array1<f64>) -> Result<EmbeddingMatrix> {
    if omega.len() != emb.n() {
        return Err(Error::InvalidInput(format!(
            "omega has length {}, expected {}",
            omega.len(),
            emb.n()
        )));
    }
    for (i, &w) in omega.iter().enumerate() {
        if w <= 0.0 {
            return Err(Error::NonPositiveWeight { index: i, value: w });
        }
    }
    let mut rows = emb.rows.clone();
    for (i, mut row) in rows.rows_mut().into_iter().enumerate() {
        row.mapv_inplace(|v| v / omega[i]);
    }
    Ok(EmbeddingMatrix {
        rows,
        row_weights: Some(omega.clone()),
        space: emb.space,
        weighted: true,
        doc_ids: emb.doc_ids.clone(),
    })
}
