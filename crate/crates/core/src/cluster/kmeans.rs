//! Lloyd iterations with k-means++ seeding: unweighted, weighted (volume
//! centers), and spherical flavors. Every run is deterministic for a fixed
//! seed; restarts merge to the lowest (objective, seed) pair.

use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Array2Ser, ClusteringResult, Partition};
use crate::docembed::EmbeddingMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KMeansOptions {
    pub max_iter: usize,
    /// Stop once the relative objective improvement drops below this.
    pub tol: f64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions {
            max_iter: 300,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KMeansFlavor {
    Euclidean,
    /// Requires row weights on the embedding; ω-weighted objective and
    /// volume-normalized centers.
    WeightedEuclidean,
    /// Cosine assignment, normalized-mean centers; requires unit rows.
    Spherical,
}

fn dist_sq(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Walks the cumulative sum of `weights` to the first index where it reaches
/// `target`; the deterministic core of the k-means++ sampler.
fn cumulative_pick(weights: &[f64], target: f64) -> usize {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if acc >= target {
            return i;
        }
    }
    weights.len() - 1
}

/// k-means++: first center sampled ∝ ω, later centers ∝ ω·D² against the
/// nearest already-chosen center.
fn kmeanspp_init(
    x: &ArrayView2<f64>,
    omega: &[f64],
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Array2<f64> {
    let n = x.nrows();
    let dim = x.ncols();
    let mut centers = Array2::<f64>::zeros((k, dim));
    let total: f64 = omega.iter().sum();
    let first = cumulative_pick(omega, rng.random::<f64>() * total);
    centers.row_mut(0).assign(&x.row(first));

    let mut d2: Vec<f64> = (0..n).map(|i| dist_sq(x.row(i), centers.row(0))).collect();
    for c in 1..k {
        let weights: Vec<f64> = (0..n).map(|i| omega[i] * d2[i]).collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            cumulative_pick(&weights, rng.random::<f64>() * total)
        } else {
            // all mass sits on existing centers; take the first distinct row
            (0..n)
                .find(|&i| (0..c).all(|j| dist_sq(x.row(i), centers.row(j)) > 0.0))
                .unwrap_or(c % n)
        };
        centers.row_mut(c).assign(&x.row(pick));
        for i in 0..n {
            let d = dist_sq(x.row(i), centers.row(c));
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centers
}

/// Moves the point farthest from its current center into each empty cluster,
/// never emptying a donor cluster.
fn repair_empty_clusters(
    x: &ArrayView2<f64>,
    assignment: &mut [usize],
    sizes: &mut [usize],
    centers: &ArrayView2<f64>,
) {
    let n = x.nrows();
    loop {
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if sizes[assignment[i]] <= 1 {
                continue;
            }
            let d = dist_sq(x.row(i), centers.row(assignment[i]));
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (mover, _) = best.expect("some cluster has more than one member");
        sizes[assignment[mover]] -= 1;
        assignment[mover] = empty;
        sizes[empty] = 1;
    }
}

fn lloyd(
    x: &ArrayView2<f64>,
    omega: &[f64],
    k: usize,
    seed: u64,
    opts: &KMeansOptions,
) -> Result<(Vec<usize>, Array2<f64>, f64, usize)> {
    let n = x.nrows();
    let dim = x.ncols();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} is outside 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = kmeanspp_init(x, omega, k, &mut rng);
    let mut assignment = vec![0usize; n];
    let mut prev_objective = f64::INFINITY;
    let mut iterations = 0;

    for iter in 1..=opts.max_iter.max(1) {
        iterations = iter;
        let mut changed = false;
        let mut sizes = vec![0usize; k];
        for i in 0..n {
            let mut best = 0usize;
            let mut best_d = dist_sq(x.row(i), centers.row(0));
            for j in 1..k {
                let d = dist_sq(x.row(i), centers.row(j));
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
            if assignment[i] != best {
                changed = true;
            }
            assignment[i] = best;
            sizes[best] += 1;
        }
        repair_empty_clusters(x, &mut assignment, &mut sizes, &centers.view());

        centers.fill(0.0);
        let mut mass = vec![0.0f64; k];
        for i in 0..n {
            let j = assignment[i];
            mass[j] += omega[i];
            for c in 0..dim {
                centers[[j, c]] += omega[i] * x[[i, c]];
            }
        }
        for j in 0..k {
            for c in 0..dim {
                centers[[j, c]] /= mass[j];
            }
        }

        let objective: f64 = (0..n)
            .map(|i| omega[i] * dist_sq(x.row(i), centers.row(assignment[i])))
            .sum();
        if !changed {
            prev_objective = objective;
            break;
        }
        if prev_objective.is_finite()
            && prev_objective - objective <= opts.tol * prev_objective.abs()
        {
            prev_objective = objective;
            break;
        }
        prev_objective = objective;
    }
    Ok((assignment, centers, prev_objective, iterations))
}

/// Plain k-means: minimizes Σ_j Σ_{i∈C_j} ‖xᵢ−μ_j‖².
pub fn kmeans(
    emb: &EmbeddingMatrix,
    k: usize,
    seed: u64,
    opts: &KMeansOptions,
) -> Result<ClusteringResult> {
    let ones = vec![1.0; emb.n()];
    let (assignment, centers, objective, iterations) =
        lloyd(&emb.rows.view(), &ones, k, seed, opts)?;
    Ok(ClusteringResult {
        partition: Partition::new(assignment, k)?,
        centers: Array2Ser::from_array(&centers),
        objective,
        iterations,
        seed,
        embedding_tag: emb.space.to_string(),
    })
}

/// Weighted k-means: minimizes Σ_j Σ_{i∈C_j} ωᵢ‖xᵢ−μ_j‖² with
/// μ_j = Σωx/Σω. The embedding must carry strictly positive row weights.
pub fn weighted_kmeans(
    emb: &EmbeddingMatrix,
    k: usize,
    seed: u64,
    opts: &KMeansOptions,
) -> Result<ClusteringResult> {
    let omega = emb.row_weights.as_ref().ok_or_else(|| {
        Error::InvalidInput("weighted_kmeans requires row weights on the embedding".to_string())
    })?;
    for (i, &w) in omega.iter().enumerate() {
        if w <= 0.0 {
            return Err(Error::NonPositiveWeight { index: i, value: w });
        }
    }
    let (assignment, centers, objective, iterations) =
        lloyd(&emb.rows.view(), omega.as_slice().unwrap(), k, seed, opts)?;
    Ok(ClusteringResult {
        partition: Partition::new(assignment, k)?,
        centers: Array2Ser::from_array(&centers),
        objective,
        iterations,
        seed,
        embedding_tag: emb.space.to_string(),
    })
}

/// Spherical k-means: max-cosine assignment, normalized-mean centers,
/// objective Σ (1 − cos(xᵢ, μ)). Rows must be unit length.
pub fn spherical_kmeans(
    emb: &EmbeddingMatrix,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<ClusteringResult> {
    let x = &emb.rows;
    let n = x.nrows();
    let dim = x.ncols();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} is outside 1..={n}")));
    }
    for (i, row) in x.rows().into_iter().enumerate() {
        let norm = row.dot(&row).sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NonUnitRow { index: i, norm });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ones = vec![1.0; n];
    let mut centers = kmeanspp_init(&x.view(), &ones, k, &mut rng);
    let mut assignment = vec![0usize; n];
    let mut prev_objective = f64::INFINITY;
    let mut iterations = 0;

    for iter in 1..=max_iter.max(1) {
        iterations = iter;
        let mut changed = false;
        let mut sizes = vec![0usize; k];
        for i in 0..n {
            let mut best = 0usize;
            let mut best_cos = x.row(i).dot(&centers.row(0));
            for j in 1..k {
                let cos = x.row(i).dot(&centers.row(j));
                if cos > best_cos {
                    best_cos = cos;
                    best = j;
                }
            }
            if assignment[i] != best {
                changed = true;
            }
            assignment[i] = best;
            sizes[best] += 1;
        }
        // farthest-by-cosine point rescues empty clusters
        while let Some(empty) = sizes.iter().position(|&s| s == 0) {
            let mut best: Option<(usize, f64)> = None;
            for i in 0..n {
                if sizes[assignment[i]] <= 1 {
                    continue;
                }
                let gap = 1.0 - x.row(i).dot(&centers.row(assignment[i]));
                if best.is_none_or(|(_, bg)| gap > bg) {
                    best = Some((i, gap));
                }
            }
            let (mover, _) = best.expect("donor cluster exists");
            sizes[assignment[mover]] -= 1;
            assignment[mover] = empty;
            sizes[empty] = 1;
        }

        centers.fill(0.0);
        for i in 0..n {
            let j = assignment[i];
            for c in 0..dim {
                centers[[j, c]] += x[[i, c]];
            }
        }
        for j in 0..k {
            let norm = centers.row(j).dot(&centers.row(j)).sqrt();
            if norm <= 1e-12 {
                // antipodal members cancelled; reseed from the first member
                let member = assignment.iter().position(|&a| a == j).expect("nonempty");
                let row = x.row(member).to_owned();
                centers.row_mut(j).assign(&row);
            } else {
                centers.row_mut(j).mapv_inplace(|v| v / norm);
            }
        }

        let objective: f64 = (0..n)
            .map(|i| 1.0 - x.row(i).dot(&centers.row(assignment[i])))
            .sum();
        if !changed {
            prev_objective = objective;
            break;
        }
        prev_objective = objective;
    }
    Ok(ClusteringResult {
        partition: Partition::new(assignment, k)?,
        centers: Array2Ser::from_array(&centers),
        objective: prev_objective,
        iterations,
        seed,
        embedding_tag: emb.space.to_string(),
    })
}

/// Best-of-restarts: lowest objective wins, ties broken by lowest seed.
/// Each restart is independently deterministic, so the merge is too.
pub fn kmeans_restarts(
    emb: &EmbeddingMatrix,
    k: usize,
    seeds: &[u64],
    opts: &KMeansOptions,
    flavor: KMeansFlavor,
    parallel: bool,
) -> Result<ClusteringResult> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("no seeds given".to_string()));
    }
    let run = |&seed: &u64| -> Result<ClusteringResult> {
        match flavor {
            KMeansFlavor::Euclidean => kmeans(emb, k, seed, opts),
            KMeansFlavor::WeightedEuclidean => weighted_kmeans(emb, k, seed, opts),
            KMeansFlavor::Spherical => spherical_kmeans(emb, k, seed, opts.max_iter),
        }
    };
    let results: Vec<ClusteringResult> = if parallel {
        seeds.par_iter().map(run).collect::<Result<_>>()?
    } else {
        seeds.iter().map(run).collect::<Result<_>>()?
    };
    Ok(results
        .into_iter()
        .min_by(|a, b| {
            (a.objective, a.seed)
                .partial_cmp(&(b.objective, b.seed))
                .expect("finite objectives")
        })
        .expect("nonempty"))
}

/// Recomputes the unweighted objective from scratch for a given partition
/// (centers re-derived as cluster means).
pub fn kmeans_objective(x: &Array2<f64>, partition: &Partition) -> f64 {
    let ones = vec![1.0; x.nrows()];
    weighted_kmeans_objective(x, &ones, partition)
}

/// Σ_j Σ_{i∈C_j} ωᵢ‖xᵢ−μ_ω(C_j)‖² with μ_ω(C_j) = Σωx/Σω.
pub fn weighted_kmeans_objective(x: &Array2<f64>, omega: &[f64], partition: &Partition) -> f64 {
    let k = partition.k();
    let dim = x.ncols();
    let mut centers = Array2::<f64>::zeros((k, dim));
    let mut mass = vec![0.0f64; k];
    for (i, &j) in partition.assignment().iter().enumerate() {
        mass[j] += omega[i];
        for c in 0..dim {
            centers[[j, c]] += omega[i] * x[[i, c]];
        }
    }
    for j in 0..k {
        for c in 0..dim {
            centers[[j, c]] /= mass[j];
        }
    }
    partition
        .assignment()
        .iter()
        .enumerate()
        .map(|(i, &j)| omega[i] * dist_sq(x.row(i), centers.row(j)))
        .sum()
}

/// Σ (1 − cos(xᵢ, μ_j)) with normalized-mean centers.
pub fn spherical_objective(x: &Array2<f64>, partition: &Partition) -> f64 {
    let k = partition.k();
    let dim = x.ncols();
    let mut centers = Array2::<f64>::zeros((k, dim));
    for (i, &j) in partition.assignment().iter().enumerate() {
        for c in 0..dim {
            centers[[j, c]] += x[[i, c]];
        }
    }
    for j in 0..k {
        let norm = centers.row(j).dot(&centers.row(j)).sqrt();
        if norm > 1e-12 {
            centers.row_mut(j).mapv_inplace(|v| v / norm);
        }
    }
    partition
        .assignment()
        .iter()
        .enumerate()
        .map(|(i, &j)| 1.0 - x.row(i).dot(&centers.row(j)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::docembed::SpaceTag;
    use approx::assert_abs_diff_eq;
    use ndarray::{array, Array1};

    fn emb_of(rows: Array2<f64>) -> EmbeddingMatrix {
        let ids = (0..rows.nrows()).map(|i| i.to_string()).collect();
        EmbeddingMatrix::new(rows, SpaceTag::Glove, ids)
    }

    #[test]
    fn k_equals_n_gives_zero_objective() {
        let emb = emb_of(array![[0.0, 0.0], [5.0, 0.0], [0.0, 7.0]]);
        let res = kmeans(&emb, 3, 0, &KMeansOptions::default()).unwrap();
        assert_abs_diff_eq!(res.objective, 0.0, epsilon = 1e-12);
        assert_eq!(res.partition.sizes(), vec![1, 1, 1]);
    }

    #[test]
    fn separated_blobs_recovered_for_all_seeds() {
        // two 2-point blobs, inter-blob distance 100x the blob diameter
        let emb = emb_of(array![[0.0, 0.0], [1.0, 0.0], [100.0, 0.0], [101.0, 0.0]]);
        for seed in 0..20 {
            let res = kmeans(&emb, 2, seed, &KMeansOptions::default()).unwrap();
            let a = res.partition.assignment();
            assert_eq!(a[0], a[1], "seed {seed}");
            assert_eq!(a[2], a[3], "seed {seed}");
            assert_ne!(a[0], a[2], "seed {seed}");
        }
    }

    #[test]
    fn objective_matches_recomputation() {
        let emb = emb_of(array![
            [0.0, 0.0],
            [1.0, 0.5],
            [9.0, 9.0],
            [10.0, 8.5],
            [5.0, 5.0]
        ]);
        let res = kmeans(&emb, 2, 3, &KMeansOptions::default()).unwrap();
        let recomputed = kmeans_objective(&emb.rows, &res.partition);
        let scale = res.objective.abs().max(1.0);
        assert!((res.objective - recomputed).abs() <= 1e-8 * scale);
    }

    #[test]
    fn lloyd_objective_nonincreasing() {
        // instrumented re-run: track objective across iterations
        let rows = array![
            [0.0, 0.0],
            [1.0, 0.2],
            [0.3, 0.9],
            [8.0, 8.0],
            [9.0, 7.5],
            [4.0, 4.2],
            [4.2, 3.9]
        ];
        let ones = vec![1.0; rows.nrows()];
        let opts = KMeansOptions::default();
        // run Lloyd manually, capturing the per-iteration objective
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut centers = kmeanspp_init(&rows.view(), &ones, 2, &mut rng);
        let mut prev = f64::INFINITY;
        for _ in 0..opts.max_iter {
            let mut assignment = vec![0usize; rows.nrows()];
            for i in 0..rows.nrows() {
                let d0 = dist_sq(rows.row(i), centers.row(0));
                let d1 = dist_sq(rows.row(i), centers.row(1));
                assignment[i] = if d1 < d0 { 1 } else { 0 };
            }
            let part = match Partition::new(assignment.clone(), 2) {
                Ok(p) => p,
                Err(_) => break,
            };
            centers.fill(0.0);
            let mut count = [0.0f64; 2];
            for (i, &j) in assignment.iter().enumerate() {
                count[j] += 1.0;
                for c in 0..2 {
                    centers[[j, c]] += rows[[i, c]];
                }
            }
            for j in 0..2 {
                for c in 0..2 {
                    centers[[j, c]] /= count[j];
                }
            }
            let obj = kmeans_objective(&rows, &part);
            assert!(obj <= prev + 1e-12, "objective rose: {prev} -> {obj}");
            if prev - obj <= 1e-12 {
                break;
            }
            prev = obj;
        }
    }

    #[test]
    fn weighted_equal_weights_matches_unweighted_trajectory() {
        let rows = array![
            [0.0, 0.0],
            [1.0, 0.2],
            [0.3, 0.9],
            [8.0, 8.0],
            [9.0, 7.5],
            [4.0, 4.2]
        ];
        let plain = emb_of(rows.clone());
        // 2.0 is a power of two, so the weighted arithmetic is bit-identical
        let weighted = emb_of(rows)
            .with_row_weights(Array1::from_vec(vec![2.0; 6]))
            .unwrap();
        let opts = KMeansOptions::default();
        for seed in 0..5 {
            let a = kmeans(&plain, 2, seed, &opts).unwrap();
            let b = weighted_kmeans(&weighted, 2, seed, &opts).unwrap();
            assert_eq!(a.partition, b.partition, "seed {seed}");
            assert_eq!(a.iterations, b.iterations, "seed {seed}");
            assert_abs_diff_eq!(b.objective, 2.0 * a.objective, epsilon = 1e-12);
        }
    }

    #[test]
    fn dominant_weight_pins_center() {
        let rows = array![[0.0, 0.0], [1.0, 0.0], [10.0, 10.0], [11.0, 10.0]];
        let weights = Array1::from_vec(vec![1.0, 1e6, 1.0, 1.0]);
        let emb = emb_of(rows).with_row_weights(weights.clone()).unwrap();
        let res = weighted_kmeans(&emb, 2, 1, &KMeansOptions::default()).unwrap();
        let j = res.partition.assignment()[1];
        let centers = res.centers.to_array();
        assert!((centers[[j, 0]] - 1.0).abs() < 1e-3);
        assert!(centers[[j, 1]].abs() < 1e-3);
        // reported objective matches a from-scratch recomputation
        let recomputed =
            weighted_kmeans_objective(&emb.rows, weights.as_slice().unwrap(), &res.partition);
        let scale = res.objective.abs().max(1.0);
        assert!((res.objective - recomputed).abs() <= 1e-8 * scale);
    }

    #[test]
    fn weighted_objective_matches_pairwise_form() {
        // center form == Σ_j (1/2V_j) Σ_{i,ℓ∈C_j} ωᵢωₗ‖xᵢ−xₗ‖², brute force
        let rows = array![
            [0.1, 0.9],
            [0.4, 0.2],
            [0.8, 0.3],
            [0.2, 0.5],
            [0.9, 0.9],
            [0.5, 0.1]
        ];
        let omega = [1.0, 2.0, 0.5, 1.5, 3.0, 1.0];
        let part = Partition::new(vec![0, 1, 0, 1, 0, 1], 2).unwrap();
        let center_form = weighted_kmeans_objective(&rows, &omega, &part);
        let mut pairwise = 0.0;
        for members in part.clusters() {
            let v: f64 = members.iter().map(|&i| omega[i]).sum();
            let mut acc = 0.0;
            for &i in &members {
                for &l in &members {
                    acc += omega[i] * omega[l] * dist_sq(rows.row(i), rows.row(l));
                }
            }
            pairwise += acc / (2.0 * v);
        }
        assert_abs_diff_eq!(center_form, pairwise, epsilon = 1e-8);
    }

    #[test]
    fn spherical_identical_rows_and_antipodal_pairs() {
        let h = 0.5f64.sqrt();
        let same = emb_of(array![[h, h], [h, h], [h, h]]);
        let res = spherical_kmeans(&same, 1, 0, 100).unwrap();
        assert_abs_diff_eq!(res.objective, 0.0, epsilon = 1e-9);

        let anti = emb_of(array![
            [1.0, 0.0],
            [-1.0, 0.0],
            [0.99503719, 0.09950372],
            [-0.99503719, -0.09950372]
        ]);
        let res = spherical_kmeans(&anti, 2, 0, 100).unwrap();
        let a = res.partition.assignment();
        assert_eq!(a[0], a[2]);
        assert_eq!(a[1], a[3]);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn spherical_agrees_with_euclidean_on_unit_blobs() {
        // For unit rows, ‖x−μ‖² = 2−2cos up to center normalization; on a
        // well-separated fixture both flavors find the same split.
        let angle = |t: f64| array![t.cos(), t.sin()];
        let mut rows = Array2::<f64>::zeros((6, 2));
        for (i, t) in [0.0, 0.05, 0.1, 1.5, 1.55, 1.6].iter().enumerate() {
            rows.row_mut(i).assign(&angle(*t));
        }
        let emb = emb_of(rows);
        let e = kmeans(&emb, 2, 4, &KMeansOptions::default()).unwrap();
        let s = spherical_kmeans(&emb, 2, 4, 300).unwrap();
        let ea = e.partition.assignment();
        let sa = s.partition.assignment();
        let agree = (0..6).all(|i| ea[i] == sa[i]);
        let flipped = (0..6).all(|i| ea[i] == 1 - sa[i]);
        assert!(agree || flipped);
    }

    #[test]
    fn restarts_pick_lowest_objective_then_seed() {
        let emb = emb_of(array![
            [0.0, 0.0],
            [1.0, 0.2],
            [0.3, 0.9],
            [8.0, 8.0],
            [9.0, 7.5],
            [4.0, 4.2]
        ]);
        let seeds: Vec<u64> = (0..10).collect();
        let opts = KMeansOptions::default();
        let seq = kmeans_restarts(&emb, 2, &seeds, &opts, KMeansFlavor::Euclidean, false).unwrap();
        let par = kmeans_restarts(&emb, 2, &seeds, &opts, KMeansFlavor::Euclidean, true).unwrap();
        assert_eq!(seq.partition, par.partition);
        assert_eq!(seq.seed, par.seed);
        assert_eq!(seq.objective, par.objective);
        for &s in &seeds {
            let single = kmeans(&emb, 2, s, &opts).unwrap();
            assert!(
                (seq.objective, seq.seed) <= (single.objective, single.seed),
                "restart merge not minimal"
            );
        }
    }

    #[test]
    fn k_larger_than_n_errors() {
        let emb = emb_of(array![[0.0, 0.0], [1.0, 0.0]]);
        assert!(kmeans(&emb, 3, 0, &KMeansOptions::default()).is_err());
    }

    #[test]
    fn objective_nonincreasing_in_iteration_budget_for_all_flavors() {
        // Running with max_iter = t yields the t-th Lloyd iterate for a fixed
        // seed, so the objective must be nonincreasing in t for every flavor.
        let mut rows = Array2::<f64>::zeros((9, 3));
        let mut state = 7u64;
        for mut row in rows.rows_mut() {
            let mut norm = 0.0;
            for v in row.iter_mut() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                *v = (state as f64 / u64::MAX as f64) + 0.05;
                norm += *v * *v;
            }
            let norm = norm.sqrt();
            row.mapv_inplace(|v| v / norm);
        }
        let plain = emb_of(rows.clone());
        let weighted = emb_of(rows)
            .with_row_weights(Array1::from_vec((1..=9).map(|i| i as f64 / 3.0).collect()))
            .unwrap();
        for seed in [0u64, 1] {
            let mut prev = [f64::INFINITY; 3];
            for t in 1..=12 {
                let opts = KMeansOptions {
                    max_iter: t,
                    tol: 0.0,
                };
                let objs = [
                    kmeans(&plain, 3, seed, &opts).unwrap().objective,
                    weighted_kmeans(&weighted, 3, seed, &opts)
                        .unwrap()
                        .objective,
                    spherical_kmeans(&plain, 3, seed, t).unwrap().objective,
                ];
                for (f, (o, p)) in objs.iter().zip(prev.iter()).enumerate() {
                    assert!(
                        o <= &(p + 1e-10),
                        "flavor {f}, seed {seed}, t={t}: {o} > {p}"
                    );
                }
                prev = objs;
            }
        }
    }
}
