//! GloVe-format word vector tables and corpus coverage reporting.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// word → d-dimensional vector store. Lookups of missing words return None,
/// never a silent zero vector.
#[derive(Debug, Clone)]
pub struct WordVectorTable {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
    pub source_name: String,
}

impl WordVectorTable {
    /// Builds a table from in-memory entries (fixtures, tests). All vectors
    /// must share `dim`; duplicate words keep their first occurrence.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (String, Vec<f64>)>,
        source_name: impl Into<String>,
    ) -> Result<Self> {
        let mut vectors = BTreeMap::new();
        for (word, vec) in entries {
            if vec.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "vector for {word:?} has length {}, expected {dim}",
                    vec.len()
                )));
            }
            vectors.entry(word).or_insert(vec);
        }
        Ok(WordVectorTable {
            dim,
            vectors,
            source_name: source_name.into(),
        })
    }

    /// Streams a GloVe text file: one `word v1 v2 ... vd` entry per line,
    /// single-space separated, no header. Dimension is inferred from the
    /// first line. With `limit_vocab`, only matching words are retained.
    pub fn load_glove_text(path: &Path, limit_vocab: Option<&BTreeSet<String>>) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut dim = None;
        let mut vectors = BTreeMap::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(' ');
            let word = fields.next().unwrap_or("");
            if word.is_empty() {
                return Err(Error::VectorParse {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    reason: "missing word field".to_string(),
                });
            }
            let values: std::result::Result<Vec<f64>, _> =
                fields.map(|f| f.parse::<f64>()).collect();
            let values = values.map_err(|e| Error::VectorParse {
                path: path.display().to_string(),
                line: lineno + 1,
                reason: format!("unparsable float: {e}"),
            })?;
            match dim {
                None => {
                    if values.is_empty() {
                        return Err(Error::VectorParse {
                            path: path.display().to_string(),
                            line: lineno + 1,
                            reason: "no vector components on first line".to_string(),
                        });
                    }
                    dim = Some(values.len());
                }
                Some(d) if values.len() != d => {
                    return Err(Error::VectorParse {
                        path: path.display().to_string(),
                        line: lineno + 1,
                        reason: format!(
                            "dimension mismatch at line {}: expected {d} components, found {}",
                            lineno + 1,
                            values.len()
                        ),
                    });
                }
                _ => {}
            }
            if let Some(vocab) = limit_vocab {
                if !vocab.contains(word) {
                    continue;
                }
            }
            // First occurrence wins on duplicate tokens.
            vectors.entry(word.to_string()).or_insert(values);
        }
        let dim = dim.ok_or_else(|| Error::VectorParse {
            path: path.display().to_string(),
            line: 0,
            reason: "empty vector file".to_string(),
        })?;
        let source_name = path
            .file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| path.display().to_string());
        Ok(WordVectorTable {
            dim,
            vectors,
            source_name,
        })
    }

    /// Writes the table back in the same text format (sorted by word).
    /// Floats use the shortest representation that round-trips exactly.
    pub fn write_glove_text(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = BufWriter::new(file);
        for (word, vec) in &self.vectors {
            write!(writer, "{word}").map_err(|e| Error::io(path, e))?;
            for v in vec {
                write!(writer, " {v}").map_err(|e| Error::io(path, e))?;
            }
            writeln!(writer).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(|v| v.as_slice())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.vectors.keys().map(|s| s.as_str())
    }
}

/// In-vocabulary / out-of-vocabulary statistics of a corpus against a table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageStats {
    pub vocab_size: usize,
    pub in_table: usize,
    pub coverage: f64,
    /// (doc id, fraction of the document's tokens that are OOV)
    pub per_doc_oov_ratio: Vec<(String, f64)>,
    /// Documents whose tokens are entirely OOV.
    pub fully_oov_docs: Vec<String>,
}

pub fn coverage_report(table: &WordVectorTable, corpus: &Corpus) -> CoverageStats {
    let vocab_size = corpus.vocabulary().len();
    let in_table = corpus
        .vocabulary()
        .iter()
        .filter(|w| table.contains(w))
        .count();
    let coverage = if vocab_size == 0 {
        0.0
    } else {
        in_table as f64 / vocab_size as f64
    };
    let mut per_doc_oov_ratio = Vec::with_capacity(corpus.n_docs());
    let mut fully_oov_docs = Vec::new();
    for doc in corpus.documents() {
        let total = doc.tokens.len();
        let oov = doc.tokens.iter().filter(|t| !table.contains(t)).count();
        let ratio = if total == 0 {
            0.0
        } else {
            oov as f64 / total as f64
        };
        per_doc_oov_ratio.push((doc.id.clone(), ratio));
        if total > 0 && oov == total {
            fully_oov_docs.push(doc.id.clone());
        }
    }
    CoverageStats {
        vocab_size,
        in_table,
        coverage,
        per_doc_oov_ratio,
        fully_oov_docs,
    }
}
