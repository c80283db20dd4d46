//! Corpus ingestion: tokenization, vocabulary and df/idf statistics, word
//! weighting schemes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tokenizer knobs. Defaults: lowercase, strip leading '#'/'@' from tokens,
/// drop whole whitespace chunks that look like URLs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub strip_handle_prefixes: bool,
    pub drop_urls: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            strip_handle_prefixes: true,
            drop_urls: true,
        }
    }
}

fn looks_like_url(chunk: &str) -> bool {
    let lower = chunk.to_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Lowercases and splits on non-alphanumeric characters. Pure-punctuation
/// chunks vanish, stopwords are kept, order and duplicates are preserved.
pub fn tokenize(raw_text: &str, rules: &TokenizerConfig) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in raw_text.split_whitespace() {
        if rules.drop_urls && looks_like_url(chunk) {
            continue;
        }
        let mut chunk = chunk;
        if rules.strip_handle_prefixes {
            chunk = chunk.trim_start_matches(['#', '@']);
        }
        let lowered;
        let chunk = if rules.lowercase {
            lowered = chunk.to_lowercase();
            &lowered
        } else {
            chunk
        };
        for piece in chunk.split(|c: char| !c.is_alphanumeric()) {
            if !piece.is_empty() {
                tokens.push(piece.to_string());
            }
        }
    }
    tokens
}

/// A tokenized document with an optional gold label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub tokens: Vec<String>,
    pub label: Option<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, tokens: Vec<String>, label: Option<String>) -> Self {
        Document {
            id: id.into(),
            tokens,
            label,
        }
    }
}

/// Word weighting schemes. Uniform and Tf coincide once occurrences are
/// accounted for: each occurrence contributes the unit weight, so the
/// per-distinct-word effective weight is tf in both cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[derive(Default)]
pub enum WeightScheme {
    Uniform,
    #[default]
    Tf,
    Idf,
    TfIdf,
}

impl std::fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            WeightScheme::Uniform => "uniform",
            WeightScheme::Tf => "tf",
            WeightScheme::Idf => "idf",
            WeightScheme::TfIdf => "tfidf",
        };
        f.write_str(name)
    }
}

/// A document skipped during corpus load or embedding, with the reason.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkippedDocument {
    pub id: String,
    pub reason: String,
}

/// An immutable collection of documents with vocabulary and df statistics.
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    vocabulary: BTreeSet<String>,
    df: BTreeMap<String, usize>,
    n_docs: usize,
}

impl Corpus {
    /// Builds a corpus from pre-tokenized documents. Documents with no tokens
    /// are rejected into the skip report (a zero vector cannot be normalized).
    pub fn from_documents(documents: Vec<Document>) -> Result<(Self, Vec<SkippedDocument>)> {
        let mut kept = Vec::with_capacity(documents.len());
        let mut skipped = Vec::new();
        let mut seen_ids = HashMap::new();
        for doc in documents {
            if let Some(_prev) = seen_ids.insert(doc.id.clone(), ()) {
                return Err(Error::DuplicateDocId { id: doc.id });
            }
            if doc.tokens.is_empty() {
                skipped.push(SkippedDocument {
                    id: doc.id,
                    reason: "empty after tokenization".to_string(),
                });
            } else {
                kept.push(doc);
            }
        }

        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in &kept {
            let distinct: BTreeSet<&String> = doc.tokens.iter().collect();
            for word in distinct {
                *df.entry(word.clone()).or_insert(0) += 1;
            }
        }
        let vocabulary: BTreeSet<String> = df.keys().cloned().collect();
        let n_docs = kept.len();
        Ok((
            Corpus {
                documents: kept,
                vocabulary,
                df,
                n_docs,
            },
            skipped,
        ))
    }

    /// Loads a JSON-lines file, one `{"id","text","label"}` object per line.
    pub fn from_jsonl(
        path: &Path,
        rules: &TokenizerConfig,
    ) -> Result<(Self, Vec<SkippedDocument>)> {
        #[derive(Deserialize)]
        struct RawDoc {
            id: String,
            text: String,
            #[serde(default)]
            label: Option<String>,
        }

        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut documents = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let raw: RawDoc = serde_json::from_str(&line).map_err(|e| Error::CorpusParse {
                path: path.display().to_string(),
                line: lineno + 1,
                reason: e.to_string(),
            })?;
            documents.push(Document::new(raw.id, tokenize(&raw.text, rules), raw.label));
        }
        Self::from_documents(documents)
    }

    /// Loads a plain-text file, one document per line; ids are 1-based line
    /// numbers and no labels are attached.
    pub fn from_plain_text(
        path: &Path,
        rules: &TokenizerConfig,
    ) -> Result<(Self, Vec<SkippedDocument>)> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut documents = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            documents.push(Document::new(
                (lineno + 1).to_string(),
                tokenize(&line, rules),
                None,
            ));
        }
        Self::from_documents(documents)
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn df(&self, word: &str) -> usize {
        self.df.get(word).copied().unwrap_or(0)
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }
}

/// Number of occurrences of `word` in the document.
pub fn term_frequency(word: &str, doc: &Document) -> usize {
    doc.tokens.iter().filter(|t| t.as_str() == word).count()
}

/// idf(w,𝒟) = |𝒟| / (ln df(w,𝒟) + 1) when the word occurs somewhere, 0
/// otherwise. Natural logarithm; see [`inverse_document_frequency_log_base`]
/// for other bases.
pub fn inverse_document_frequency(word: &str, corpus: &Corpus) -> f64 {
    inverse_document_frequency_log_base(word, corpus, std::f64::consts::E)
}

pub fn inverse_document_frequency_log_base(word: &str, corpus: &Corpus, base: f64) -> f64 {
    let df = corpus.df(word);
    if df == 0 {
        return 0.0;
    }
    corpus.n_docs() as f64 / ((df as f64).log(base) + 1.0)
}

/// The raw per-word weighting function. Errors when the word does not occur
/// in the document: explanation code must never weight absent words.
pub fn weight(word: &str, doc: &Document, corpus: &Corpus, scheme: WeightScheme) -> Result<f64> {
    let tf = term_frequency(word, doc);
    if tf == 0 {
        return Err(Error::WordNotInDocument {
            word: word.to_string(),
            doc_id: doc.id.clone(),
        });
    }
    Ok(match scheme {
        WeightScheme::Uniform => 1.0,
        WeightScheme::Tf => tf as f64,
        WeightScheme::Idf => inverse_document_frequency(word, corpus),
        WeightScheme::TfIdf => tf as f64 * inverse_document_frequency(word, corpus),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn cfg() -> TokenizerConfig {
        TokenizerConfig::default()
    }

    #[test]
    fn tokenize_lowercases_and_strips_punctuation() {
        assert_eq!(tokenize("God is LOVE.", &cfg()), vec!["god", "is", "love"]);
    }

    #[test]
    fn tokenize_empty_input() {
        assert_eq!(tokenize("", &cfg()), Vec::<String>::new());
    }

    #[test]
    fn tokenize_golden_hyphen_and_duplicates() {
        // Golden: hand application of the rules to this exact string.
        assert_eq!(
            tokenize("now-playing  remix remix", &cfg()),
            vec!["now", "playing", "remix", "remix"]
        );
    }

    #[test]
    fn tokenize_strips_hashtags_and_drops_urls() {
        assert_eq!(
            tokenize("#NowPlaying check https://t.co/xyz @dj_bob", &cfg()),
            vec!["nowplaying", "check", "dj", "bob"]
        );
    }

    #[test]
    fn term_frequency_counts_occurrences() {
        let doc = Document::new("d", tokenize("now-playing  remix remix", &cfg()), None);
        assert_eq!(term_frequency("remix", &doc), 2);
        assert_eq!(term_frequency("absent", &doc), 0);
        let god = Document::new("g", tokenize("God is LOVE.", &cfg()), None);
        assert_eq!(term_frequency("god", &god), 1);
    }

    fn corpus_with_df(word_df: usize, n_docs: usize) -> Corpus {
        // `word` appears in the first `word_df` documents; fillers pad n_docs.
        let mut docs = Vec::new();
        for i in 0..n_docs {
            let mut tokens = vec![format!("filler{i}")];
            if i < word_df {
                tokens.push("word".to_string());
            }
            docs.push(Document::new(i.to_string(), tokens, None));
        }
        Corpus::from_documents(docs).unwrap().0
    }

    #[test]
    fn idf_df_one() {
        let corpus = corpus_with_df(1, 10);
        assert_abs_diff_eq!(
            inverse_document_frequency("word", &corpus),
            10.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn idf_absent_word_is_zero() {
        let corpus = corpus_with_df(1, 10);
        assert_eq!(inverse_document_frequency("nothere", &corpus), 0.0);
    }

    #[test]
    fn idf_pinned_value() {
        // Independent evaluation of 12/(ln 3 + 1) = 5.718064296486052.
        let corpus = corpus_with_df(3, 12);
        assert_abs_diff_eq!(
            inverse_document_frequency("word", &corpus),
            5.718064296486052,
            epsilon = 1e-6
        );
    }

    #[test]
    fn weight_uniform_and_tf() {
        let corpus = corpus_with_df(1, 4);
        let doc = Document::new("d", vec!["remix".into(), "remix".into()], None);
        assert_eq!(
            weight("remix", &doc, &corpus, WeightScheme::Uniform).unwrap(),
            1.0
        );
        assert_eq!(
            weight("remix", &doc, &corpus, WeightScheme::Tf).unwrap(),
            2.0
        );
    }

    #[test]
    fn weight_tfidf_pinned() {
        // 2 * 12/(ln 3 + 1) = 11.436128592972103, independently evaluated.
        let corpus = corpus_with_df(3, 12);
        let doc = Document::new("d", vec!["word".into(), "word".into()], None);
        assert_abs_diff_eq!(
            weight("word", &doc, &corpus, WeightScheme::TfIdf).unwrap(),
            11.436128592972103,
            epsilon = 1e-6
        );
    }

    #[test]
    fn weight_rejects_absent_word() {
        let corpus = corpus_with_df(1, 4);
        let doc = Document::new("d", vec!["here".into()], None);
        assert!(matches!(
            weight("gone", &doc, &corpus, WeightScheme::Tf),
            Err(Error::WordNotInDocument { .. })
        ));
    }

    #[test]
    fn idf_constant_across_documents() {
        let corpus = corpus_with_df(3, 12);
        let a = inverse_document_frequency("word", &corpus);
        let b = inverse_document_frequency("word", &corpus);
        assert_eq!(a, b);
    }

    #[test]
    fn weight_sum_positive_for_nonempty_docs() {
        let corpus = corpus_with_df(3, 12);
        for doc in corpus.documents() {
            for scheme in [
                WeightScheme::Uniform,
                WeightScheme::Tf,
                WeightScheme::Idf,
                WeightScheme::TfIdf,
            ] {
                let distinct: BTreeSet<&String> = doc.tokens.iter().collect();
                let total: f64 = distinct
                    .iter()
                    .map(|w| weight(w, doc, &corpus, scheme).unwrap())
                    .sum();
                assert!(total > 0.0, "scheme {scheme} on {}", doc.id);
            }
        }
    }

    #[test]
    fn empty_documents_are_rejected_with_report() {
        let docs = vec![
            Document::new("a", vec!["x".into()], None),
            Document::new("b", vec![], None),
        ];
        let (corpus, skipped) = Corpus::from_documents(docs).unwrap();
        assert_eq!(corpus.n_docs(), 1);
        assert_eq!(skipped.len(), 1);
        assert_eq!(skipped[0].id, "b");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let docs = vec![
            Document::new("a", vec!["x".into()], None),
            Document::new("a", vec!["y".into()], None),
        ];
        assert!(matches!(
            Corpus::from_documents(docs),
            Err(Error::DuplicateDocId { .. })
        ));
    }

    #[test]
    fn df_bounds_hold() {
        let corpus = corpus_with_df(3, 12);
        for word in corpus.vocabulary() {
            let df = corpus.df(word);
            assert!(df >= 1 && df <= corpus.n_docs());
        }
    }

    proptest! {
        #[test]
        fn tokenize_idempotent_on_own_output(raw in ".{0,200}") {
            let rules = cfg();
            let once = tokenize(&raw, &rules);
            let twice = tokenize(&once.join(" "), &rules);
            prop_assert_eq!(once, twice);
        }
    }
}
