//! Cosine similarity graph: symmetric S with zero diagonal plus the derived
//! degree vectors d, d' and per-cluster volumes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::cluster::Partition;
use crate::docembed::EmbeddingMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SimilarityGraph {
    s: Array2<f64>,
    d: Array1<f64>,
    d_prime: Array1<f64>,
    n: usize,
}

impl SimilarityGraph {
    /// Wraps an existing similarity matrix, validating symmetry (1e-12), a
    /// zero diagonal, and the cosine range (±1 with a tiny slack that gets
    /// clamped away).
    pub fn from_matrix(mut s: Array2<f64>) -> Result<Self> {
        let n = s.nrows();
        if s.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "similarity matrix is {}x{}, expected square",
                n,
                s.ncols()
            )));
        }
        for i in 0..n {
            if s[[i, i]] != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry ({i},{i}) is {}, expected 0",
                    s[[i, i]]
                )));
            }
            for l in (i + 1)..n {
                if (s[[i, l]] - s[[l, i]]).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({i},{l})"
                    )));
                }
                if s[[i, l]].abs() > 1.0 + 1e-9 {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{l}) = {} outside [-1,1]",
                        s[[i, l]]
                    )));
                }
                let v = s[[i, l]].clamp(-1.0, 1.0);
                s[[i, l]] = v;
                s[[l, i]] = v;
            }
        }
        let d = s.sum_axis(ndarray::Axis(1));
        let d_prime = &d + 1.0;
        Ok(SimilarityGraph { s, d, d_prime, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> &Array2<f64> {
        &self.s
    }

    /// dᵢᵢ = Σ_ℓ s_iℓ
    pub fn d(&self) -> &Array1<f64> {
        &self.d
    }

    /// d'ᵢᵢ = dᵢᵢ + 1
    pub fn d_prime(&self) -> &Array1<f64> {
        &self.d_prime
    }

    pub fn min_off_diagonal(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..self.n {
            for l in 0..self.n {
                if i != l && self.s[[i, l]] < min {
                    min = self.s[[i, l]];
                }
            }
        }
        min
    }

    /// Binary dump: 8-byte little-endian n header, then row-major f64 values.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = BufWriter::new(file);
        writer
            .write_all(&(self.n as u64).to_le_bytes())
            .map_err(|e| Error::io(path, e))?;
        for v in self.s.iter() {
            writer
                .write_all(&v.to_le_bytes())
                .map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = BufReader::new(file);
        let mut header = [0u8; 8];
        reader
            .read_exact(&mut header)
            .map_err(|e| Error::io(path, e))?;
        let n = u64::from_le_bytes(header) as usize;
        let mut values = vec![0.0f64; n * n];
        let mut buf = [0u8; 8];
        for v in values.iter_mut() {
            reader
                .read_exact(&mut buf)
                .map_err(|e| Error::io(path, e))?;
            *v = f64::from_le_bytes(buf);
        }
        let s = Array2::from_shape_vec((n, n), values)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::from_matrix(s)
    }
}

/// Builds S from unit-length embedding rows: s_iℓ = rowᵢᵀrow_ℓ for i≠ℓ, zero
/// diagonal. The upper triangle is computed once and mirrored.
pub fn build_similarity(emb: &EmbeddingMatrix) -> Result<SimilarityGraph> {
    let n = emb.n();
    for (i, row) in emb.rows.rows().into_iter().enumerate() {
        let norm = row.dot(&row).sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NonUnitRow { index: i, norm });
        }
    }
    let mut s = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for l in (i + 1)..n {
            let v = emb.rows.row(i).dot(&emb.rows.row(l)).clamp(-1.0, 1.0);
            s[[i, l]] = v;
            s[[l, i]] = v;
        }
    }
    SimilarityGraph::from_matrix(s)
}

/// Affine rescue for negative similarities: s ↦ (s − s_min)/(1 − s_min)
/// off-diagonal. Refuses when the minimum is already nonnegative.
pub fn shift_nonnegative(graph: &SimilarityGraph) -> Result<SimilarityGraph> {
    let s_min = graph.min_off_diagonal();
    if s_min >= 0.0 {
        return Err(Error::ShiftNotApplicable {
            reason: format!("minimum off-diagonal similarity {s_min} is nonnegative"),
        });
    }
    if s_min >= 1.0 {
        return Err(Error::ShiftNotApplicable {
            reason: "all similarities equal 1 (degenerate)".to_string(),
        });
    }
    let n = graph.n();
    let mut s = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for l in 0..n {
            if i != l {
                s[[i, l]] = (graph.s[[i, l]] - s_min) / (1.0 - s_min);
            }
        }
    }
    SimilarityGraph::from_matrix(s)
}

/// Per-cluster volumes: 𝒱_j = Σ_{i∈C_j} dᵢᵢ, 𝒱'_j = 𝒱_j + |C_j|,
/// F_j = Σ_{i∈C_j} 1/d'ᵢᵢ, and F = Σ_j F_j.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterVolumes {
    pub volume: Vec<f64>,
    pub volume_prime: Vec<f64>,
    pub f: Vec<f64>,
    pub f_total: f64,
}

pub fn volumes(graph: &SimilarityGraph, partition: &Partition) -> Result<ClusterVolumes> {
    if partition.n() != graph.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} items, graph has {}",
            partition.n(),
            graph.n()
        )));
    }
    let k = partition.k();
    let mut volume = vec![0.0; k];
    let mut volume_prime = vec![0.0; k];
    let mut f = vec![0.0; k];
    let mut sizes = vec![0usize; k];
    for (i, &j) in partition.assignment().iter().enumerate() {
        volume[j] += graph.d[i];
        f[j] += 1.0 / graph.d_prime[i];
        sizes[j] += 1;
    }
    for j in 0..k {
        if sizes[j] == 0 {
            return Err(Error::EmptyCluster { cluster: j });
        }
        volume_prime[j] = volume[j] + sizes[j] as f64;
    }
    let f_total = f.iter().sum();
    Ok(ClusterVolumes {
        volume,
        volume_prime,
        f,
        f_total,
    })
}

#[cfg(test)]
pub(crate) fn fixture_graph() -> SimilarityGraph {
    // Canonical 3-doc fixture: rows (1,0),(0,1),(√.5,√.5).
    let h = 0.5f64.sqrt();
    let rows = ndarray::array![[1.0, 0.0], [0.0, 1.0], [h, h]];
    let emb = EmbeddingMatrix::new(
        rows,
        crate::docembed::SpaceTag::Glove,
        vec!["1".into(), "2".into(), "3".into()],
    );
    build_similarity(&emb).unwrap()
}
