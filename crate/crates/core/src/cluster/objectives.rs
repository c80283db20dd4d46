//! Closed-form evaluation of the clustering criteria from S and Γ:
//! the cut family (RCut/NCut/NRCut) and the Q functionals whose pairwise
//! equivalences the verify module checks.

use serde::{Deserialize, Serialize};

use super::Partition;
use crate::error::{Error, Result};
use crate::simgraph::{volumes, SimilarityGraph};

fn check_dims(graph: &SimilarityGraph, partition: &Partition) -> Result<()> {
    if partition.n() != graph.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} items, graph has {}",
            partition.n(),
            graph.n()
        )));
    }
    Ok(())
}

/// cut(C_j, C̄_j) = Σ_{i∈C_j} Σ_{ℓ∉C_j} s_iℓ
pub fn cut_value(graph: &SimilarityGraph, partition: &Partition, j: usize) -> Result<f64> {
    check_dims(graph, partition)?;
    if j >= partition.k() {
        return Err(Error::InvalidPartition(format!(
            "cluster {j} out of range for k = {}",
            partition.k()
        )));
    }
    let assignment = partition.assignment();
    let mut cut = 0.0;
    for i in 0..graph.n() {
        if assignment[i] != j {
            continue;
        }
        for l in 0..graph.n() {
            if assignment[l] != j {
                cut += graph.s()[[i, l]];
            }
        }
    }
    Ok(cut)
}

fn cuts_and_withins(graph: &SimilarityGraph, partition: &Partition) -> (Vec<f64>, Vec<f64>) {
    let k = partition.k();
    let assignment = partition.assignment();
    let mut within = vec![0.0; k];
    let mut cut = vec![0.0; k];
    for i in 0..graph.n() {
        for l in 0..graph.n() {
            if i == l {
                continue;
            }
            if assignment[i] == assignment[l] {
                within[assignment[i]] += graph.s()[[i, l]];
            } else {
                cut[assignment[i]] += graph.s()[[i, l]];
            }
        }
    }
    (cut, within)
}

/// RCut(Γ) = Σ_j cut(C_j, C̄_j)/|C_j|
pub fn rcut(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    check_dims(graph, partition)?;
    let (cuts, _) = cuts_and_withins(graph, partition);
    Ok(cuts
        .iter()
        .zip(partition.sizes())
        .map(|(c, sz)| c / sz as f64)
        .sum())
}

/// NCut(Γ) = Σ_j cut(C_j, C̄_j)/𝒱_j; errors on a zero cluster volume.
pub fn ncut(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    check_dims(graph, partition)?;
    let vols = volumes(graph, partition)?;
    let (cuts, _) = cuts_and_withins(graph, partition);
    let mut total = 0.0;
    for (j, (c, v)) in cuts.iter().zip(&vols.volume).enumerate() {
        if *v == 0.0 {
            return Err(Error::ZeroVolume { cluster: j });
        }
        total += c / v;
    }
    Ok(total)
}

/// NRCut(Γ) = Σ_j cut(C_j, C̄_j)/𝒱'_j with 𝒱'_j = 𝒱_j + |C_j|.
pub fn nrcut(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    check_dims(graph, partition)?;
    let vols = volumes(graph, partition)?;
    let (cuts, _) = cuts_and_withins(graph, partition);
    let mut total = 0.0;
    for (j, (c, v)) in cuts.iter().zip(&vols.volume_prime).enumerate() {
        if *v <= 0.0 {
            return Err(Error::ZeroVolume { cluster: j });
        }
        total += c / v;
    }
    Ok(total)
}

/// Q^GloVe(Γ) = (n−k) − Σ_j (1/|C_j|) Σ_{i,ℓ∈C_j, ℓ≠i} s_iℓ
pub fn q_glove(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    check_dims(graph, partition)?;
    let (_, within) = cuts_and_withins(graph, partition);
    let base = (graph.n() - partition.k()) as f64;
    Ok(base
        - within
            .iter()
            .zip(partition.sizes())
            .map(|(w, sz)| w / sz as f64)
            .sum::<f64>())
}

/// Q^Kbased(Γ) = (n−k)/2 − Σ_j (1/(2|C_j|)) Σ_{i,ℓ∈C_j, ℓ≠i} s_iℓ
pub fn q_kbased(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    check_dims(graph, partition)?;
    let (_, within) = cuts_and_withins(graph, partition);
    let base = (graph.n() - partition.k()) as f64 / 2.0;
    Ok(base
        - within
            .iter()
            .zip(partition.sizes())
            .map(|(w, sz)| w / (2.0 * sz as f64))
            .sum::<f64>())
}

fn f_total(graph: &SimilarityGraph) -> Result<f64> {
    let mut f = 0.0;
    for (i, &dp) in graph.d_prime().iter().enumerate() {
        if dp <= 0.0 {
            return Err(Error::NonPositiveDegree {
                index: i,
                value: dp,
            });
        }
        f += 1.0 / dp;
    }
    Ok(f)
}

/// Q^𝓑based(Γ) = F − k + NRCut(Γ)
pub fn q_bbased(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    let f = f_total(graph)?;
    Ok(f - partition.k() as f64 + nrcut(graph, partition)?)
}

/// Q^ω'GloVe(Γ) from the pairwise form:
/// Σ_j (1/(2𝒱'_j)) Σ_{i,ℓ∈C_j} (d'ᵢᵢ/d'ₗₗ + d'ₗₗ/d'ᵢᵢ − 2s'ᵢₗ)
/// where s' has ones on the diagonal.
pub fn q_wglove(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    check_dims(graph, partition)?;
    let dp = graph.d_prime();
    for (i, &v) in dp.iter().enumerate() {
        if v <= 0.0 {
            return Err(Error::NonPositiveDegree { index: i, value: v });
        }
    }
    let vols = volumes(graph, partition)?;
    let clusters = partition.clusters();
    let mut total = 0.0;
    for (j, members) in clusters.iter().enumerate() {
        let vp = vols.volume_prime[j];
        if vp <= 0.0 {
            return Err(Error::ZeroVolume { cluster: j });
        }
        let mut acc = 0.0;
        for &i in members {
            for &l in members {
                let s_prime = graph.s()[[i, l]] + if i == l { 1.0 } else { 0.0 };
                acc += dp[i] / dp[l] + dp[l] / dp[i] - 2.0 * s_prime;
            }
        }
        total += acc / (2.0 * vp);
    }
    Ok(total)
}

/// Every criterion the pipeline reports for one clustering. B-family values
/// are None when undefined on the graph (nonpositive volumes or degrees).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionValues {
    pub rcut: f64,
    pub ncut: Option<f64>,
    pub nrcut: Option<f64>,
    pub q_glove: f64,
    pub q_kbased: f64,
    pub q_bbased: Option<f64>,
    pub q_wglove: Option<f64>,
}

pub fn criterion_values(graph: &SimilarityGraph, partition: &Partition) -> Result<CriterionValues> {
    Ok(CriterionValues {
        rcut: rcut(graph, partition)?,
        ncut: ncut(graph, partition).ok(),
        nrcut: nrcut(graph, partition).ok(),
        q_glove: q_glove(graph, partition)?,
        q_kbased: q_kbased(graph, partition)?,
        q_bbased: q_bbased(graph, partition).ok(),
        q_wglove: q_wglove(graph, partition).ok(),
    })
}
