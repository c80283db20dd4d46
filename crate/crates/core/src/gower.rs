//! Classical-MDS-style embeddings from double-centered pseudo-distances:
//! the K-embedding (squared distances reproduce 1−s) and the B-embedding
//! (squared distances reproduce the degree-normalized 𝓐), with Lingoes
//! correction when the centered matrix is not positive semidefinite.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::docembed::{EmbeddingMatrix, SpaceTag};
use crate::error::{Error, Result};
use crate::simgraph::SimilarityGraph;
use crate::spectral::eigendecompose_symmetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GowerKind {
    K,
    B,
}

/// A = 11ᵀ − I − S: off-diagonal 1 − s_iℓ, zero diagonal.
pub fn k_pseudodistance(graph: &SimilarityGraph) -> Array2<f64> {
    let n = graph.n();
    let mut a = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for l in 0..n {
            if i != l {
                a[[i, l]] = 1.0 - graph.s()[[i, l]];
            }
        }
    }
    a
}

/// 𝓐 = ℰD'^{-2} + D'^{-2}ℰ − 2D'^{-1}SD'^{-1} evaluated entrywise:
/// 𝓐_iℓ = 1/d'ᵢᵢ² + 1/d'ₗₗ² − 2s_iℓ/(d'ᵢᵢd'ₗₗ) off-diagonal, zero diagonal.
pub fn b_pseudodistance(graph: &SimilarityGraph) -> Result<Array2<f64>> {
    let n = graph.n();
    let dp = graph.d_prime();
    for (i, &v) in dp.iter().enumerate() {
        if v <= 0.0 {
            return Err(Error::NonPositiveDegree { index: i, value: v });
        }
    }
    let mut a = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for l in 0..n {
            if i != l {
                a[[i, l]] = 1.0 / (dp[i] * dp[i]) + 1.0 / (dp[l] * dp[l])
                    - 2.0 * graph.s()[[i, l]] / (dp[i] * dp[l]);
            }
        }
    }
    Ok(a)
}

/// K = −½ (I − (1/n)11ᵀ) A (I − (1/n)11ᵀ). The result is symmetric and
/// annihilates the all-ones vector.
pub fn double_center(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let row_means = a.mean_axis(ndarray::Axis(1)).expect("nonempty");
    let col_means = a.mean_axis(ndarray::Axis(0)).expect("nonempty");
    let grand = a.mean().expect("nonempty");
    let mut k = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for l in 0..n {
            k[[i, l]] = -0.5 * (a[[i, l]] - row_means[i] - col_means[l] + grand);
        }
    }
    k
}

/// Adds 2σ to all off-diagonal entries of A with σ = −λ_min(K) (plus a hair
/// of slack) so the recomputed centered matrix is PSD. No-op with σ=0 when K
/// already is.
pub fn lingoes_correct(a: &Array2<f64>, k: &Array2<f64>) -> Result<(Array2<f64>, f64)> {
    let n = k.nrows();
    let (eigenvalues, _) = eigendecompose_symmetric(k, n)?;
    let lambda_min = eigenvalues[0];
    if lambda_min >= -1e-9 {
        return Ok((a.clone(), 0.0));
    }
    let sigma = -lambda_min + 1e-12;
    let mut corrected = a.clone();
    for i in 0..n {
        for l in 0..n {
            if i != l {
                corrected[[i, l]] += 2.0 * sigma;
            }
        }
    }
    Ok((corrected, sigma))
}

/// Rows are the embedded points zᵢ (kind=K) or ζᵢ (kind=B).
#[derive(Debug, Clone)]
pub struct GowerEmbedding {
    pub z: Array2<f64>,
    /// Retained eigenvalues, descending, all nonnegative.
    pub kept_eigenvalues: Vec<f64>,
    /// 0 when no correction was applied.
    pub lingoes_sigma: f64,
    pub kind: GowerKind,
    /// True when a requested truncation exceeded the positive spectrum.
    pub m_clamped: bool,
}

/// Embeds via eigendecomposition of the double-centered pseudo-distance,
/// keeping the `m` largest eigenvalues (all numerically positive ones when
/// `m` is absent): Z = V_m Λ_m^{1/2}.
pub fn gower_embed(
    graph: &SimilarityGraph,
    kind: GowerKind,
    m: Option<usize>,
) -> Result<GowerEmbedding> {
    let a = match kind {
        GowerKind::K => k_pseudodistance(graph),
        GowerKind::B => b_pseudodistance(graph)?,
    };
    let n = a.nrows();
    let centered = double_center(&a);
    let (a_used, sigma) = lingoes_correct(&a, &centered)?;
    let centered = if sigma > 0.0 {
        double_center(&a_used)
    } else {
        centered
    };
    let (mut eigenvalues, vectors) = eigendecompose_symmetric(&centered, n)?;
    for v in eigenvalues.iter_mut() {
        // noise floor: [-1e-8, 0) counts as zero
        if *v < 0.0 && *v >= -1e-8 {
            *v = 0.0;
        }
    }
    if eigenvalues[0] < 0.0 {
        return Err(Error::EigenConvergence {
            residual: eigenvalues[0],
        });
    }

    // positive spectrum, descending
    let mut order: Vec<usize> = (0..n).rev().collect();
    order.retain(|&i| eigenvalues[i] > 0.0);
    let lambda_max = order.first().map(|&i| eigenvalues[i]).unwrap_or(0.0);
    let default_m = order
        .iter()
        .filter(|&&i| eigenvalues[i] >= 1e-12 * lambda_max)
        .count();
    let (keep, m_clamped) = match m {
        None => (default_m, false),
        Some(req) if req > order.len() => (order.len(), true),
        Some(req) => (req, false),
    };
    let cols: Vec<usize> = order.into_iter().take(keep).collect();
    let mut z = Array2::<f64>::zeros((n, cols.len()));
    let mut kept_eigenvalues = Vec::with_capacity(cols.len());
    for (j, &src) in cols.iter().enumerate() {
        let scale = eigenvalues[src].sqrt();
        kept_eigenvalues.push(eigenvalues[src]);
        for i in 0..n {
            z[[i, j]] = vectors[[i, src]] * scale;
        }
    }
    Ok(GowerEmbedding {
        z,
        kept_eigenvalues,
        lingoes_sigma: sigma,
        kind,
        m_clamped,
    })
}

impl GowerEmbedding {
    pub fn into_matrix(self, doc_ids: Vec<String>) -> EmbeddingMatrix {
        let space = match self.kind {
            GowerKind::K => SpaceTag::GowerK,
            GowerKind::B => SpaceTag::GowerB,
        };
        EmbeddingMatrix::new(self.z, space, doc_ids)
    }

    /// Squared distance between embedded points i and ℓ.
    pub fn dist_sq(&self, i: usize, l: usize) -> f64 {
        let a = self.z.row(i);
        let b = self.z.row(l);
        a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
    }
}

/// Row weights ω' = d' for weighted k-means over the B-embedding.
pub fn b_row_weights(graph: &SimilarityGraph) -> Result<Array1<f64>> {
    let dp = graph.d_prime();
    for (i, &v) in dp.iter().enumerate() {
        if v <= 0.0 {
            return Err(Error::NonPositiveDegree { index: i, value: v });
        }
    }
    Ok(dp.to_owned())
}
