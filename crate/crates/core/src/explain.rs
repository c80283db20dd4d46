//! Word-level explanations of cluster membership: top words by similarity to
//! the cluster center, per-document membership contributions, and words that
//! differentiate a cluster from the rest.
//!
//! Centers here always live in the original word space (GloVe or TVS), never
//! in a spectral/Gower space: partitions found elsewhere are mapped back
//! before scoring words.

use std::collections::BTreeMap;

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::cluster::Partition;
use crate::docembed::DocEmbedding;
use crate::error::{Error, Result};
use crate::wordvec::WordVectorTable;

/// Normalization for impact and centers: divide by |C| or by the cluster
/// volume (𝒱' when clustering ran with ω' = d' weights).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImpactMode {
    Cardinality,
    Volume,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordExplanation {
    pub word: String,
    pub score: f64,
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct ClusterProfile {
    pub cluster_id: usize,
    pub center: Array1<f64>,
    pub impact: BTreeMap<String, f64>,
    pub top_words: Vec<WordExplanation>,
    pub diff_words: Vec<WordExplanation>,
}

/// Provides g(w)ᵀv for whichever word space the explanation runs in.
pub trait WordSpace {
    fn word_center_dot(&self, word: &str, v: &ArrayView1<f64>) -> Option<f64>;
}

/// Dense GloVe vectors.
pub struct GloveSpace<'a>(pub &'a WordVectorTable);

impl WordSpace for GloveSpace<'_> {
    fn word_center_dot(&self, word: &str, v: &ArrayView1<f64>) -> Option<f64> {
        let g = self.0.get(word)?;
        Some(g.iter().zip(v.iter()).map(|(a, b)| a * b).sum())
    }
}

/// Term vector space: word vectors are the standard basis, so the dot product
/// is a single coordinate read.
pub struct TvsSpace<'a> {
    pub vocab_index: &'a BTreeMap<String, usize>,
}

impl WordSpace for TvsSpace<'_> {
    fn word_center_dot(&self, word: &str, v: &ArrayView1<f64>) -> Option<f64> {
        self.vocab_index.get(word).map(|&i| v[i])
    }
}

/// impact(w;C): per-word sums of weight* over member documents containing w,
/// divided by |C| (cardinality mode) or by the supplied volume.
pub fn cluster_word_impact(
    members: &[&DocEmbedding],
    mode: ImpactMode,
    volume: Option<f64>,
) -> Result<BTreeMap<String, f64>> {
    if members.is_empty() {
        return Err(Error::InvalidInput("empty cluster".to_string()));
    }
    let denom = match mode {
        ImpactMode::Cardinality => members.len() as f64,
        ImpactMode::Volume => volume.ok_or_else(|| {
            Error::InvalidInput("volume mode requires a cluster volume".to_string())
        })?,
    };
    let mut impact: BTreeMap<String, f64> = BTreeMap::new();
    for doc in members {
        for (word, &ws) in &doc.weight_star {
            *impact.entry(word.clone()).or_insert(0.0) += ws;
        }
    }
    for v in impact.values_mut() {
        *v /= denom;
    }
    Ok(impact)
}

/// μ(C) = Σ_{δ∈C} g(δ) / |C| (or / volume), matching the impact mode so that
/// Σ_w sim(w,C) = ‖μ(C)‖² holds.
pub fn cluster_center(
    members: &[&DocEmbedding],
    mode: ImpactMode,
    volume: Option<f64>,
) -> Result<Array1<f64>> {
    if members.is_empty() {
        return Err(Error::InvalidInput("empty cluster".to_string()));
    }
    let denom = match mode {
        ImpactMode::Cardinality => members.len() as f64,
        ImpactMode::Volume => volume.ok_or_else(|| {
            Error::InvalidInput("volume mode requires a cluster volume".to_string())
        })?,
    };
    let dim = members[0].vector.len();
    let mut center = Array1::<f64>::zeros(dim);
    for doc in members {
        center += &doc.vector;
    }
    Ok(center / denom)
}

fn ranked(mut scored: Vec<(String, f64)>, n: usize) -> Vec<WordExplanation> {
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("finite scores")
            .then_with(|| a.0.cmp(&b.0))
    });
    scored
        .into_iter()
        .take(n)
        .enumerate()
        .map(|(i, (word, score))| WordExplanation {
            word,
            score,
            rank: i + 1,
        })
        .collect()
}

/// sim(w,C) = impact(w;C)·g(w)ᵀμ(C), top N by score (ties lexicographic).
pub fn top_words_by_similarity(
    impact: &BTreeMap<String, f64>,
    center: &Array1<f64>,
    space: &impl WordSpace,
    n: usize,
) -> Vec<WordExplanation> {
    let scored: Vec<(String, f64)> = impact
        .iter()
        .filter_map(|(word, &imp)| {
            space
                .word_center_dot(word, &center.view())
                .map(|dot| (word.clone(), imp * dot))
        })
        .collect();
    ranked(scored, n)
}

/// Per-word contributions weight*(w)·g(w)ᵀμ(C) to the document–center
/// similarity; they sum to g(δ)ᵀμ(C). Sorted descending.
pub fn membership_contributions(
    doc: &DocEmbedding,
    center: &Array1<f64>,
    space: &impl WordSpace,
) -> Vec<WordExplanation> {
    let scored: Vec<(String, f64)> = doc
        .weight_star
        .iter()
        .filter_map(|(word, &ws)| {
            space
                .word_center_dot(word, &center.view())
                .map(|dot| (word.clone(), ws * dot))
        })
        .collect();
    let n = scored.len();
    ranked(scored, n)
}

/// Differentiating strength: 2k·impact(w;C)·g(w)ᵀ(μ(C) − mean of all k
/// centers), where k−1 clusters form the contrast set.
pub fn differentiating_words(
    profiles: &[ClusterProfile],
    target: usize,
    space: &impl WordSpace,
    n: usize,
) -> Result<Vec<WordExplanation>> {
    let k = profiles.len();
    if k < 2 {
        return Err(Error::NoContrastClusters);
    }
    if target >= k {
        return Err(Error::InvalidInput(format!(
            "cluster {target} out of range for k = {k}"
        )));
    }
    let dim = profiles[0].center.len();
    let mut mean = Array1::<f64>::zeros(dim);
    for profile in profiles {
        mean += &profile.center;
    }
    mean /= k as f64;
    let contrast = &profiles[target].center - &mean;
    let factor = 2.0 * k as f64;
    let scored: Vec<(String, f64)> = profiles[target]
        .impact
        .iter()
        .filter_map(|(word, &imp)| {
            space
                .word_center_dot(word, &contrast.view())
                .map(|dot| (word.clone(), factor * imp * dot))
        })
        .collect();
    Ok(ranked(scored, n))
}

/// ClDiff(C) = Σ_{C'≠C} ‖μ(C)−μ(C')‖².
pub fn cluster_distinctness(profiles: &[ClusterProfile], target: usize) -> Result<f64> {
    if profiles.len() < 2 {
        return Err(Error::NoContrastClusters);
    }
    if target >= profiles.len() {
        return Err(Error::InvalidInput(format!(
            "cluster {target} out of range for k = {}",
            profiles.len()
        )));
    }
    let mu = &profiles[target].center;
    Ok(profiles
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != target)
        .map(|(_, p)| {
            let diff = mu - &p.center;
            diff.dot(&diff)
        })
        .sum())
}

/// Builds one profile per cluster: centers and impacts in the word space,
/// then the top-N and differentiating-N tables. Volume mode needs one 𝒱'
/// value per cluster.
pub fn build_profiles(
    partition: &Partition,
    docs: &[DocEmbedding],
    space: &impl WordSpace,
    mode: ImpactMode,
    volumes: Option<&[f64]>,
    top_n: usize,
) -> Result<Vec<ClusterProfile>> {
    if docs.len() != partition.n() {
        return Err(Error::InvalidInput(format!(
            "{} embeddings for a partition of {}",
            docs.len(),
            partition.n()
        )));
    }
    if mode == ImpactMode::Volume {
        let vols = volumes.ok_or_else(|| {
            Error::InvalidInput("volume mode requires per-cluster volumes".to_string())
        })?;
        if vols.len() != partition.k() {
            return Err(Error::InvalidInput(format!(
                "{} volumes for k = {}",
                vols.len(),
                partition.k()
            )));
        }
    }
    let clusters = partition.clusters();
    let mut profiles = Vec::with_capacity(partition.k());
    for (j, member_ids) in clusters.iter().enumerate() {
        let members: Vec<&DocEmbedding> = member_ids.iter().map(|&i| &docs[i]).collect();
        let volume = volumes.map(|v| v[j]);
        let impact = cluster_word_impact(&members, mode, volume)?;
        let center = cluster_center(&members, mode, volume)?;
        let top_words = top_words_by_similarity(&impact, &center, space, top_n);
        profiles.push(ClusterProfile {
            cluster_id: j,
            center,
            impact,
            top_words,
            diff_words: Vec::new(),
        });
    }
    if partition.k() >= 2 {
        for j in 0..profiles.len() {
            profiles[j].diff_words = differentiating_words(&profiles, j, space, top_n)?;
        }
    }
    Ok(profiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Document, WeightScheme};
    use crate::docembed::{embed_corpus_tvs, embed_document};
    use approx::assert_abs_diff_eq;

    fn toy_table() -> WordVectorTable {
        WordVectorTable::from_entries(
            2,
            [
                ("w1".to_string(), vec![1.0, 0.0]),
                ("w2".to_string(), vec![0.0, 1.0]),
            ],
            "toy",
        )
        .unwrap()
    }

    fn toy_docs() -> (Corpus, Vec<DocEmbedding>) {
        let corpus = Corpus::from_documents(vec![
            Document::new("a", vec!["w1".into(), "w1".into(), "w2".into()], None),
            Document::new("b", vec!["w1".into()], None),
            Document::new("c", vec!["w2".into()], None),
        ])
        .unwrap()
        .0;
        let table = toy_table();
        let docs: Vec<DocEmbedding> = corpus
            .documents()
            .iter()
            .map(|d| embed_document(d, &table, &corpus, WeightScheme::Uniform).unwrap())
            .collect();
        (corpus, docs)
    }

    #[test]
    fn singleton_single_word_impact_is_one() {
        let (_, docs) = toy_docs();
        let impact = cluster_word_impact(&[&docs[1]], ImpactMode::Cardinality, None).unwrap();
        assert_abs_diff_eq!(impact["w1"], 1.0, epsilon = 1e-12);
        assert!(!impact.contains_key("w2"));
    }

    #[test]
    fn two_doc_impact_is_half_the_weight_star_sum() {
        let (_, docs) = toy_docs();
        // cluster {a, b}: impact(w1) = (0.894427 + 1)/2, impact(w2) = 0.447214/2
        let impact =
            cluster_word_impact(&[&docs[0], &docs[1]], ImpactMode::Cardinality, None).unwrap();
        assert_abs_diff_eq!(
            impact["w1"],
            (0.894427190999916 + 1.0) / 2.0,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(impact["w2"], 0.447213595499958 / 2.0, epsilon = 1e-6);
    }

    #[test]
    fn similarity_conservation_per_cluster() {
        let (_, docs) = toy_docs();
        let table = toy_table();
        let space = GloveSpace(&table);
        let members: Vec<&DocEmbedding> = docs.iter().collect();
        let impact = cluster_word_impact(&members, ImpactMode::Cardinality, None).unwrap();
        let center = cluster_center(&members, ImpactMode::Cardinality, None).unwrap();
        let words = top_words_by_similarity(&impact, &center, &space, usize::MAX);
        let total: f64 = words.iter().map(|w| w.score).sum();
        assert_abs_diff_eq!(total, center.dot(&center), epsilon = 1e-6);
    }

    #[test]
    fn singleton_single_word_cluster_scores_one() {
        let (_, docs) = toy_docs();
        let table = toy_table();
        let space = GloveSpace(&table);
        let impact = cluster_word_impact(&[&docs[1]], ImpactMode::Cardinality, None).unwrap();
        let center = cluster_center(&[&docs[1]], ImpactMode::Cardinality, None).unwrap();
        let words = top_words_by_similarity(&impact, &center, &space, 50);
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].rank, 1);
        assert_abs_diff_eq!(words[0].score, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn full_ranking_matches_brute_force() {
        let (_, docs) = toy_docs();
        let table = toy_table();
        let space = GloveSpace(&table);
        let members: Vec<&DocEmbedding> = docs.iter().collect();
        let impact = cluster_word_impact(&members, ImpactMode::Cardinality, None).unwrap();
        let center = cluster_center(&members, ImpactMode::Cardinality, None).unwrap();
        let words = top_words_by_similarity(&impact, &center, &space, 50);
        // brute force: score each word independently and sort by hand
        let mut expected: Vec<(String, f64)> = impact
            .iter()
            .map(|(w, &imp)| {
                let g = table.get(w).unwrap();
                let dot: f64 = g.iter().zip(center.iter()).map(|(a, b)| a * b).sum();
                (w.clone(), imp * dot)
            })
            .collect();
        expected.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        assert_eq!(words.len(), expected.len());
        for (got, (word, score)) in words.iter().zip(expected) {
            assert_eq!(got.word, word);
            assert_abs_diff_eq!(got.score, score, epsilon = 1e-12);
        }
    }

    #[test]
    fn contributions_sum_to_doc_center_dot() {
        let (_, docs) = toy_docs();
        let table = toy_table();
        let space = GloveSpace(&table);
        let members: Vec<&DocEmbedding> = docs.iter().collect();
        let center = cluster_center(&members, ImpactMode::Cardinality, None).unwrap();
        for doc in &docs {
            let contributions = membership_contributions(doc, &center, &space);
            let total: f64 = contributions.iter().map(|c| c.score).sum();
            assert_abs_diff_eq!(total, doc.vector.dot(&center), epsilon = 1e-8);
        }
        // single-word doc: exactly one entry equal to the full dot product
        let contributions = membership_contributions(&docs[1], &center, &space);
        assert_eq!(contributions.len(), 1);
        assert_abs_diff_eq!(
            contributions[0].score,
            docs[1].vector.dot(&center),
            epsilon = 1e-12
        );
    }

    #[test]
    fn pinned_two_contributions() {
        let (_, docs) = toy_docs();
        let table = toy_table();
        let space = GloveSpace(&table);
        let center = Array1::from_vec(vec![0.6, 0.8]);
        let contributions = membership_contributions(&docs[0], &center, &space);
        // weight*(w1)=0.894427·0.6, weight*(w2)=0.447214·0.8, hand-computed
        let by_word: BTreeMap<&str, f64> = contributions
            .iter()
            .map(|c| (c.word.as_str(), c.score))
            .collect();
        assert_abs_diff_eq!(by_word["w1"], 0.894427190999916 * 0.6, epsilon = 1e-6);
        assert_abs_diff_eq!(by_word["w2"], 0.447213595499958 * 0.8, epsilon = 1e-6);
    }

    fn profiles_from(
        centers: &[Array1<f64>],
        impacts: &[BTreeMap<String, f64>],
    ) -> Vec<ClusterProfile> {
        centers
            .iter()
            .zip(impacts)
            .enumerate()
            .map(|(j, (c, imp))| ClusterProfile {
                cluster_id: j,
                center: c.clone(),
                impact: imp.clone(),
                top_words: Vec::new(),
                diff_words: Vec::new(),
            })
            .collect()
    }

    #[test]
    fn identical_centers_zero_differentiation() {
        let table = toy_table();
        let space = GloveSpace(&table);
        let center = Array1::from_vec(vec![0.5, 0.5]);
        let impact: BTreeMap<String, f64> = [("w1".to_string(), 0.7)].into();
        let profiles = profiles_from(
            &[center.clone(), center.clone(), center],
            &[impact.clone(), impact.clone(), impact],
        );
        for j in 0..3 {
            let words = differentiating_words(&profiles, j, &space, 10).unwrap();
            for w in words {
                assert_abs_diff_eq!(w.score, 0.0, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(
                cluster_distinctness(&profiles, j).unwrap(),
                0.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn antipodal_centers_sign_follows_target_dot() {
        let table = toy_table();
        let space = GloveSpace(&table);
        let mu = Array1::from_vec(vec![0.3, 0.4]);
        let impact: BTreeMap<String, f64> =
            [("w1".to_string(), 0.5), ("w2".to_string(), 0.5)].into();
        let profiles = profiles_from(&[mu.clone(), -&mu], &[impact.clone(), impact]);
        let words = differentiating_words(&profiles, 0, &space, 10).unwrap();
        for w in &words {
            let g = table.get(&w.word).unwrap();
            let dot: f64 = g.iter().zip(mu.iter()).map(|(a, b)| a * b).sum();
            assert_eq!(w.score.signum(), dot.signum(), "word {}", w.word);
        }
    }

    #[test]
    fn three_cluster_scores_match_brute_force_formula() {
        let table = toy_table();
        let space = GloveSpace(&table);
        let centers = [
            Array1::from_vec(vec![1.0, 0.0]),
            Array1::from_vec(vec![0.0, 1.0]),
            Array1::from_vec(vec![0.5, 0.5]),
        ];
        let impacts: Vec<BTreeMap<String, f64>> = (0..3)
            .map(|j| {
                [
                    ("w1".to_string(), 0.2 + 0.1 * j as f64),
                    ("w2".to_string(), 0.9 - 0.2 * j as f64),
                ]
                .into()
            })
            .collect();
        let profiles = profiles_from(&centers, &impacts);
        let k = 3.0;
        for target in 0..3 {
            let words = differentiating_words(&profiles, target, &space, 10).unwrap();
            for w in &words {
                let g = table.get(&w.word).unwrap();
                // independent evaluation: 2(|𝒞|+1)·impact·gᵀ(μ(C) − (1/(|𝒞|+1))Σ μ(C'))
                let mean: Array1<f64> = (&centers[0] + &centers[1] + &centers[2]) / k;
                let contrast = &centers[target] - &mean;
                let dot: f64 = g.iter().zip(contrast.iter()).map(|(a, b)| a * b).sum();
                let expected = 2.0 * k * impacts[target][&w.word] * dot;
                assert_abs_diff_eq!(w.score, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn differentiation_invariant_under_common_center_shift() {
        let table = toy_table();
        let space = GloveSpace(&table);
        let centers = [
            Array1::from_vec(vec![1.0, 0.0]),
            Array1::from_vec(vec![0.0, 1.0]),
        ];
        let impact: BTreeMap<String, f64> =
            [("w1".to_string(), 0.4), ("w2".to_string(), 0.6)].into();
        let base = profiles_from(&centers, &[impact.clone(), impact.clone()]);
        let shift = Array1::from_vec(vec![3.7, -1.2]);
        let shifted_centers: Vec<Array1<f64>> = centers.iter().map(|c| c + &shift).collect();
        let shifted = profiles_from(&shifted_centers, &[impact.clone(), impact]);
        for target in 0..2 {
            let a = differentiating_words(&base, target, &space, 10).unwrap();
            let b = differentiating_words(&shifted, target, &space, 10).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.word, y.word);
                assert_abs_diff_eq!(x.score, y.score, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn distinctness_two_and_three_clusters() {
        let table = toy_table();
        let _space = GloveSpace(&table);
        let impact: BTreeMap<String, f64> = BTreeMap::new();
        let d = 2.5f64;
        let profiles = profiles_from(
            &[
                Array1::from_vec(vec![0.0, 0.0]),
                Array1::from_vec(vec![d, 0.0]),
            ],
            &[impact.clone(), impact.clone()],
        );
        assert_abs_diff_eq!(
            cluster_distinctness(&profiles, 0).unwrap(),
            d * d,
            epsilon = 1e-12
        );

        // 3 pinned centers, hand sum: ‖μ0−μ1‖² + ‖μ0−μ2‖²
        let profiles = profiles_from(
            &[
                Array1::from_vec(vec![0.0, 0.0]),
                Array1::from_vec(vec![1.0, 2.0]),
                Array1::from_vec(vec![-1.0, 1.0]),
            ],
            &[impact.clone(), impact.clone(), impact],
        );
        assert_abs_diff_eq!(
            cluster_distinctness(&profiles, 0).unwrap(),
            5.0 + 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn distinctness_matches_expanded_form() {
        let impact: BTreeMap<String, f64> = BTreeMap::new();
        let centers = [
            Array1::from_vec(vec![0.3, -0.7]),
            Array1::from_vec(vec![1.1, 0.4]),
            Array1::from_vec(vec![-0.5, 0.9]),
        ];
        let profiles = profiles_from(&centers, &[impact.clone(), impact.clone(), impact]);
        for target in 0..3 {
            let direct = cluster_distinctness(&profiles, target).unwrap();
            // expanded: Σ‖μ(C')‖² + |𝒞|·‖μ(C)‖² − 2μ(C)ᵀΣμ(C')
            let mu = &centers[target];
            let others: Vec<&Array1<f64>> = centers
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != target)
                .map(|(_, c)| c)
                .collect();
            let sum_norms: f64 = others.iter().map(|c| c.dot(*c)).sum();
            let sum_centers = others
                .iter()
                .fold(Array1::<f64>::zeros(2), |acc, c| acc + *c);
            let expanded =
                sum_norms + others.len() as f64 * mu.dot(mu) - 2.0 * mu.dot(&sum_centers);
            assert_abs_diff_eq!(direct, expanded, epsilon = 1e-10);
        }
    }

    #[test]
    fn k_one_errors() {
        let impact: BTreeMap<String, f64> = BTreeMap::new();
        let profiles = profiles_from(&[Array1::from_vec(vec![0.0, 0.0])], &[impact]);
        let table = toy_table();
        let space = GloveSpace(&table);
        assert!(matches!(
            differentiating_words(&profiles, 0, &space, 10),
            Err(Error::NoContrastClusters)
        ));
    }

    #[test]
    fn tvs_reduction_matches_dense_basis_route() {
        // In TVS the similarity formula collapses to one coordinate; the
        // efficient coordinate read must agree with an explicit basis-vector
        // dot product.
        let corpus = Corpus::from_documents(vec![
            Document::new("a", vec!["x".into(), "y".into(), "x".into()], None),
            Document::new("b", vec!["y".into(), "z".into()], None),
            Document::new("c", vec!["z".into(), "z".into(), "x".into()], None),
        ])
        .unwrap()
        .0;
        let tvs = embed_corpus_tvs(&corpus, WeightScheme::Tf).unwrap();
        let vocab_index = tvs.vocab_index.as_ref().unwrap();
        let space = TvsSpace { vocab_index };
        let partition = Partition::new(vec![0, 1, 0], 2).unwrap();
        let profiles = build_profiles(
            &partition,
            &tvs.docs,
            &space,
            ImpactMode::Cardinality,
            None,
            50,
        )
        .unwrap();
        for profile in &profiles {
            for word in profile.impact.keys() {
                let fast = space.word_center_dot(word, &profile.center.view()).unwrap();
                // dense basis route
                let mut basis = Array1::<f64>::zeros(vocab_index.len());
                basis[vocab_index[word]] = 1.0;
                let dense = basis.dot(&profile.center);
                assert_abs_diff_eq!(fast, dense, epsilon = 1e-15);
            }
            // conservation holds in TVS too
            let total: f64 =
                top_words_by_similarity(&profile.impact, &profile.center, &space, usize::MAX)
                    .iter()
                    .map(|w| w.score)
                    .sum();
            assert_abs_diff_eq!(total, profile.center.dot(&profile.center), epsilon = 1e-6);
        }
    }

    #[test]
    fn volume_mode_conservation() {
        let (_, docs) = toy_docs();
        let table = toy_table();
        let space = GloveSpace(&table);
        let partition = Partition::new(vec![0, 0, 1], 2).unwrap();
        let volumes = vec![2.7, 1.3];
        let profiles = build_profiles(
            &partition,
            &docs,
            &space,
            ImpactMode::Volume,
            Some(&volumes),
            50,
        )
        .unwrap();
        for profile in &profiles {
            let total: f64 = profile.top_words.iter().map(|w| w.score).sum();
            assert_abs_diff_eq!(total, profile.center.dot(&profile.center), epsilon = 1e-6);
        }
    }
}
