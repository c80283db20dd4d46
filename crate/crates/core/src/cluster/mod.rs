//! k-means over any embedding, the graph cut and Q objectives, and numerical
//! verification of the objective-equivalence identities.

mod kmeans;
mod objectives;
mod verify;

pub use kmeans::{
    kmeans, kmeans_objective, kmeans_restarts, spherical_kmeans, spherical_objective,
    weighted_kmeans, weighted_kmeans_objective, KMeansFlavor, KMeansOptions,
};
pub use objectives::{
    criterion_values, cut_value, ncut, nrcut, q_bbased, q_glove, q_kbased, q_wglove, rcut,
    CriterionValues,
};
pub use verify::{verify_equivalences, EquivalenceCheck, EquivalenceReport};

use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition Γ of the index set `0..n` into k nonempty clusters,
/// stored as 0-based cluster ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPartition("k must be at least 1".to_string()));
        }
        if assignment.len() < k {
            return Err(Error::InvalidPartition(format!(
                "{} items cannot form {k} nonempty clusters",
                assignment.len()
            )));
        }
        let mut seen = vec![false; k];
        for (i, &c) in assignment.iter().enumerate() {
            if c >= k {
                return Err(Error::InvalidPartition(format!(
                    "item {i} assigned to cluster {c}, but k = {k}"
                )));
            }
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::EmptyCluster { cluster: missing });
        }
        Ok(Partition { assignment, k })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut clusters = vec![Vec::new(); self.k];
        for (i, &c) in self.assignment.iter().enumerate() {
            clusters[c].push(i);
        }
        clusters
    }

    /// A uniformly random partition with every cluster guaranteed nonempty:
    /// one distinct anchor item per cluster, the rest assigned uniformly.
    pub fn random(n: usize, k: usize, rng: &mut impl Rng) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidPartition(format!(
                "cannot split {n} items into {k} nonempty clusters"
            )));
        }
        let mut assignment: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let mut anchors: Vec<usize> = (0..n).collect();
        for j in 0..k {
            let pick = rng.random_range(0..anchors.len());
            let item = anchors.swap_remove(pick);
            assignment[item] = j;
        }
        Partition::new(assignment, k)
    }
}

/// The outcome of one k-means run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub partition: Partition,
    pub centers: Array2Ser,
    pub objective: f64,
    pub iterations: usize,
    pub seed: u64,
    pub embedding_tag: String,
}

/// Serializable dense matrix wrapper (rows of centers).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Array2Ser {
    pub rows: Vec<Vec<f64>>,
}

impl Array2Ser {
    pub fn from_array(a: &Array2<f64>) -> Self {
        Array2Ser {
            rows: a.rows().into_iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn to_array(&self) -> Array2<f64> {
        let nrows = self.rows.len();
        let ncols = self.rows.first().map(|r| r.len()).unwrap_or(0);
        let flat: Vec<f64> = self.rows.iter().flatten().copied().collect();
        Array2::from_shape_vec((nrows, ncols), flat).expect("rectangular")
    }
}
