use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("corpus parse error at {path}:{line}: {reason}")]
    CorpusParse {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("duplicate document id {id:?}")]
    DuplicateDocId { id: String },

    #[error("word vector parse error at {path}:{line}: {reason}")]
    VectorParse {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("word {word:?} does not occur in document {doc_id:?}")]
    WordNotInDocument { word: String, doc_id: String },

    #[error("unembeddable document {doc_id:?}: no in-vocabulary tokens")]
    UnembeddableDocument { doc_id: String },

    #[error("zero-norm document vector for {doc_id:?}")]
    ZeroNormDocument { doc_id: String },

    #[error("word {word:?} absent from document embedding")]
    WordNotInEmbedding { word: String },

    #[error("row {index} is not unit length (norm {norm})")]
    NonUnitRow { index: usize, norm: f64 },

    #[error("nonpositive row weight at index {index}: {value} (consider shift_nonnegative)")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("nonpositive d' entry at index {index}: {value} (consider shift_nonnegative)")]
    NonPositiveDegree { index: usize, value: f64 },

    #[error("similarity shift not applicable: {reason}")]
    ShiftNotApplicable { reason: String },

    #[error("node {index} has zero degree; normalized Laplacian undefined")]
    IsolatedNode { index: usize },

    #[error("eigendecomposition failed to converge (max residual {residual})")]
    EigenConvergence { residual: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("cluster {cluster} is empty")]
    EmptyCluster { cluster: usize },

    #[error("zero volume for cluster {cluster}")]
    ZeroVolume { cluster: usize },

    #[error("cluster differentiation requires at least two clusters")]
    NoContrastClusters,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
