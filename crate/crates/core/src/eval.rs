//! Scoring against gold labels: confusion tables under optimal label↔cluster
//! matching, pairwise and macro F measures, and per-document similarity
//! diagnostics for plotting.

use std::collections::BTreeMap;
use std::path::Path;

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use serde::{Deserialize, Serialize};

use crate::cluster::Partition;
use crate::error::{Error, Result};
use crate::simgraph::SimilarityGraph;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfusionTable {
    /// Distinct gold labels, sorted; table rows.
    pub labels: Vec<String>,
    /// `counts[row][col]` = documents with this label in predicted cluster col.
    pub counts: Vec<Vec<usize>>,
    /// Optimal one-to-one (label row, cluster col) matching over the smaller
    /// dimension, maximizing the matched diagonal.
    pub matching: Vec<(usize, usize)>,
    pub correct: usize,
    pub n: usize,
    pub error_pct: f64,
}

impl ConfusionTable {
    /// TRUE/PRED layout: one row per gold label, one column per cluster.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer =
            csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let k = self.counts.first().map(|r| r.len()).unwrap_or(0);
        let mut header = vec!["true_label".to_string()];
        header.extend((1..=k).map(|j| format!("cluster_{j}")));
        writer
            .write_record(&header)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for (label, row) in self.labels.iter().zip(&self.counts) {
            let mut record = vec![label.clone()];
            record.extend(row.iter().map(|c| c.to_string()));
            writer
                .write_record(&record)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        writer
            .flush()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(())
    }
}

fn contingency(partition: &Partition, labels: &[String]) -> (Vec<String>, Vec<Vec<usize>>) {
    let mut distinct: Vec<String> = {
        let set: std::collections::BTreeSet<&String> = labels.iter().collect();
        set.into_iter().cloned().collect()
    };
    distinct.sort();
    let index: BTreeMap<&str, usize> = distinct
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut counts = vec![vec![0usize; partition.k()]; distinct.len()];
    for (i, label) in labels.iter().enumerate() {
        counts[index[label.as_str()]][partition.assignment()[i]] += 1;
    }
    (distinct, counts)
}

/// Optimal assignment-problem matching between labels and clusters; the
/// error percentage counts everything off the matched diagonal.
pub fn confusion(partition: &Partition, labels: &[String]) -> Result<ConfusionTable> {
    if labels.len() != partition.n() {
        return Err(Error::InvalidInput(format!(
            "{} labels for a partition of {}",
            labels.len(),
            partition.n()
        )));
    }
    let (distinct, counts) = contingency(partition, labels);
    let n_labels = distinct.len();
    let k = partition.k();

    // kuhn_munkres wants rows <= columns; transpose when labels outnumber clusters
    let matching: Vec<(usize, usize)> = if n_labels <= k {
        let weights = Matrix::from_rows(
            counts
                .iter()
                .map(|row| row.iter().map(|&c| c as i64).collect::<Vec<_>>()),
        )
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let (_, assignment) = kuhn_munkres(&weights);
        assignment.into_iter().enumerate().collect()
    } else {
        let weights = Matrix::from_rows((0..k).map(|col| {
            (0..n_labels)
                .map(|row| counts[row][col] as i64)
                .collect::<Vec<_>>()
        }))
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let (_, assignment) = kuhn_munkres(&weights);
        assignment
            .into_iter()
            .enumerate()
            .map(|(col, row)| (row, col))
            .collect()
    };

    let correct: usize = matching.iter().map(|&(row, col)| counts[row][col]).sum();
    let n = labels.len();
    let error_pct = 100.0 * (n - correct) as f64 / n as f64;
    Ok(ConfusionTable {
        labels: distinct,
        counts,
        matching,
        correct,
        n,
        error_pct,
    })
}

fn pairs(count: usize) -> u64 {
    (count as u64) * (count.saturating_sub(1) as u64) / 2
}

/// Pairwise F1 over document pairs: precision/recall of co-clustered vs
/// co-labeled pairs, F = 2PR/(P+R). Undefined precision (all singleton
/// clusters) falls back to 0.
pub fn f_measure(partition: &Partition, labels: &[String]) -> Result<f64> {
    if labels.len() != partition.n() {
        return Err(Error::InvalidInput(format!(
            "{} labels for a partition of {}",
            labels.len(),
            partition.n()
        )));
    }
    let (_, counts) = contingency(partition, labels);
    let tp: u64 = counts.iter().flatten().map(|&c| pairs(c)).sum();
    let same_cluster: u64 = (0..partition.k())
        .map(|j| pairs(counts.iter().map(|row| row[j]).sum()))
        .sum();
    let same_label: u64 = counts.iter().map(|row| pairs(row.iter().sum())).sum();
    let precision = if same_cluster == 0 {
        0.0
    } else {
        tp as f64 / same_cluster as f64
    };
    let recall = if same_label == 0 {
        0.0
    } else {
        tp as f64 / same_label as f64
    };
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

/// Macro F1 over labels under the optimal matching; unmatched labels score 0.
pub fn f_measure_macro(partition: &Partition, labels: &[String]) -> Result<f64> {
    let table = confusion(partition, labels)?;
    let n_labels = table.labels.len();
    let mut per_label = vec![0.0; n_labels];
    for &(row, col) in &table.matching {
        let cell = table.counts[row][col] as f64;
        let row_total: usize = table.counts[row].iter().sum();
        let col_total: usize = table.counts.iter().map(|r| r[col]).sum();
        if cell == 0.0 {
            continue;
        }
        let p = cell / col_total as f64;
        let r = cell / row_total as f64;
        per_label[row] = 2.0 * p * r / (p + r);
    }
    Ok(per_label.iter().sum::<f64>() / n_labels as f64)
}

/// Per-document similarity diagnostics, one record per document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocDiagnostics {
    pub index: usize,
    /// Mean of the top 5% similarities to other documents.
    pub top_mean: f64,
    /// Mean of the bottom 5%.
    pub bottom_mean: f64,
    pub top_bottom_diff: f64,
    /// None when the document's class has size 1.
    pub within_mean: Option<f64>,
    /// None when every document shares one class.
    pub outside_mean: Option<f64>,
    pub within_outside_diff: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsBundle {
    pub per_doc: Vec<DocDiagnostics>,
}

impl DiagnosticsBundle {
    /// A column sorted ascending, ready for plotting, skipping missing values.
    pub fn sorted_series(&self, pick: impl Fn(&DocDiagnostics) -> Option<f64>) -> Vec<f64> {
        let mut series: Vec<f64> = self.per_doc.iter().filter_map(pick).collect();
        series.sort_by(|a, b| a.partial_cmp(b).expect("finite diagnostics"));
        series
    }

    /// One row per document; missing within/outside means become empty fields.
    pub fn write_csv(&self, path: &Path, doc_ids: &[String]) -> Result<()> {
        let mut writer =
            csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(e.to_string()))?;
        writer
            .write_record([
                "doc_id",
                "top5_mean",
                "bottom5_mean",
                "top_bottom_diff",
                "within_mean",
                "outside_mean",
                "within_outside_diff",
            ])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        for d in &self.per_doc {
            writer
                .write_record([
                    doc_ids[d.index].clone(),
                    format!("{}", d.top_mean),
                    format!("{}", d.bottom_mean),
                    format!("{}", d.top_bottom_diff),
                    opt(d.within_mean),
                    opt(d.outside_mean),
                    opt(d.within_outside_diff),
                ])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        writer
            .flush()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(())
    }
}

/// Top/bottom-5% similarity means plus within/outside-class means per
/// document. The 5% quantile takes ceil(0.05·(n−1)) neighbors.
pub fn similarity_diagnostics(
    graph: &SimilarityGraph,
    labels: &[String],
) -> Result<DiagnosticsBundle> {
    let n = graph.n();
    if labels.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} labels for a graph of {n}",
            labels.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput(
            "diagnostics need at least 2 documents".to_string(),
        ));
    }
    let q = ((0.05 * (n - 1) as f64).ceil() as usize).max(1);
    let mut per_doc = Vec::with_capacity(n);
    for i in 0..n {
        let mut sims: Vec<f64> = (0..n)
            .filter(|&l| l != i)
            .map(|l| graph.s()[[i, l]])
            .collect();
        sims.sort_by(|a, b| a.partial_cmp(b).expect("finite similarities"));
        let bottom_mean = sims[..q].iter().sum::<f64>() / q as f64;
        let top_mean = sims[sims.len() - q..].iter().sum::<f64>() / q as f64;

        let mut within = Vec::new();
        let mut outside = Vec::new();
        for l in 0..n {
            if l == i {
                continue;
            }
            if labels[l] == labels[i] {
                within.push(graph.s()[[i, l]]);
            } else {
                outside.push(graph.s()[[i, l]]);
            }
        }
        let mean = |v: &[f64]| {
            if v.is_empty() {
                None
            } else {
                Some(v.iter().sum::<f64>() / v.len() as f64)
            }
        };
        let within_mean = mean(&within);
        let outside_mean = mean(&outside);
        let within_outside_diff = match (within_mean, outside_mean) {
            (Some(w), Some(o)) => Some(w - o),
            _ => None,
        };
        per_doc.push(DocDiagnostics {
            index: i,
            top_mean,
            bottom_mean,
            top_bottom_diff: top_mean - bottom_mean,
            within_mean,
            outside_mean,
            within_outside_diff,
        });
    }
    Ok(DiagnosticsBundle { per_doc })
}
