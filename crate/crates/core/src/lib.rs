//! Explainable graph spectral clustering of text documents under GloVe-style
//! word embeddings.
//!
//! The pipeline: embed documents (GloVe average or term vector space), build
//! a cosine similarity graph, embed again via Laplacian eigenvectors or
//! double-centered Gower embeddings, cluster with (weighted) k-means, verify
//! the objective-equivalence identities numerically, and explain every
//! cluster with word-level tables.
//!
//! ```
//! use speclain::corpus::{Corpus, Document, WeightScheme};
//! use speclain::wordvec::WordVectorTable;
//!
//! let table = WordVectorTable::from_entries(
//!     2,
//!     [
//!         ("sun".to_string(), vec![0.9, 0.1]),
//!         ("moon".to_string(), vec![0.8, 0.2]),
//!         ("tax".to_string(), vec![0.1, 0.9]),
//!         ("law".to_string(), vec![0.2, 0.8]),
//!     ],
//!     "toy",
//! )?;
//! let (corpus, _skipped) = Corpus::from_documents(vec![
//!     Document::new("a", vec!["sun".into(), "moon".into()], None),
//!     Document::new("b", vec!["moon".into(), "sun".into(), "sun".into()], None),
//!     Document::new("c", vec!["tax".into(), "law".into()], None),
//!     Document::new("d", vec!["law".into(), "tax".into(), "law".into()], None),
//! ])?;
//! let embedded = speclain::embed_corpus(&corpus, &table, WeightScheme::Tf)?;
//! let graph = speclain::build_similarity(&embedded.matrix)?;
//!
//! // the objective identities hold on every partition, optimal or not
//! let report = speclain::verify_equivalences(&graph, 20, 7)?;
//! assert!(report.passed);
//!
//! // cluster in the distance-faithful Gower space, explain with words
//! let gower = speclain::gower_embed(&graph, speclain::GowerKind::K, None)?;
//! let matrix = gower.into_matrix(embedded.matrix.doc_ids.clone());
//! let result = speclain::kmeans(&matrix, 2, 0, &speclain::KMeansOptions::default())?;
//! let profiles = speclain::build_profiles(
//!     &result.partition,
//!     &embedded.docs,
//!     &speclain::GloveSpace(&table),
//!     speclain::ImpactMode::Cardinality,
//!     None,
//!     50,
//! )?;
//! assert_eq!(profiles.len(), 2);
//! assert!(!profiles[0].top_words.is_empty());
//! # Ok::<(), speclain::Error>(())
//! ```

// index arithmetic over symmetric matrices reads better with explicit loops
#![allow(clippy::needless_range_loop)]

pub mod cluster;
pub mod corpus;
pub mod docembed;
pub mod error;
pub mod eval;
pub mod explain;
pub mod gower;
pub mod simgraph;
pub mod spectral;
pub mod wordvec;

pub use cluster::{
    criterion_values, cut_value, kmeans, kmeans_objective, kmeans_restarts, ncut, nrcut, q_bbased,
    q_glove, q_kbased, q_wglove, rcut, spherical_kmeans, verify_equivalences, weighted_kmeans,
    weighted_kmeans_objective, ClusteringResult, CriterionValues, EquivalenceReport, KMeansFlavor,
    KMeansOptions, Partition,
};
pub use corpus::{
    inverse_document_frequency, term_frequency, tokenize, weight, Corpus, Document,
    SkippedDocument, TokenizerConfig, WeightScheme,
};
pub use docembed::{
    apply_row_weights, embed_corpus, embed_corpus_tvs, embed_document, omega_from_graph,
    word_doc_similarity, CorpusEmbedding, DocEmbedding, EmbeddingMatrix, OmegaMode, SpaceTag,
};
pub use error::{Error, Result};
pub use eval::{
    confusion, f_measure, f_measure_macro, similarity_diagnostics, ConfusionTable,
    DiagnosticsBundle,
};
pub use explain::{
    build_profiles, cluster_distinctness, cluster_word_impact, differentiating_words,
    membership_contributions, top_words_by_similarity, ClusterProfile, GloveSpace, ImpactMode,
    TvsSpace, WordExplanation, WordSpace,
};
pub use gower::{
    b_pseudodistance, b_row_weights, double_center, gower_embed, k_pseudodistance, lingoes_correct,
    GowerEmbedding, GowerKind,
};
pub use simgraph::{build_similarity, shift_nonnegative, volumes, ClusterVolumes, SimilarityGraph};
pub use spectral::{
    build_laplacian, eigendecompose_symmetric, spectral_embed, Laplacian, LaplacianKind,
    SpectralEmbedding,
};
