//! Comparative grid runs: every config in a directory, one summary row each.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::pipeline::{run, RunSummary};

pub struct GridRow {
    pub config_file: String,
    pub summary: RunSummary,
}

pub struct GridOutcome {
    pub rows: Vec<GridRow>,
}

impl GridOutcome {
    pub fn all_equivalences_passed(&self) -> bool {
        self.rows.iter().all(|r| r.summary.equivalence_passed)
    }
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Runs every `*.json` config under `configs_dir` (sorted by file name) and
/// tabulates route/space/scheme/m against error % and F measure.
pub fn grid(configs_dir: &Path, strict_sequential: bool) -> anyhow::Result<GridOutcome> {
    let mut config_paths: Vec<PathBuf> = fs::read_dir(configs_dir)
        .with_context(|| format!("reading {}", configs_dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "json").unwrap_or(false))
        .collect();
    config_paths.sort();
    if config_paths.is_empty() {
        anyhow::bail!("no *.json configs under {}", configs_dir.display());
    }

    let run_one = |path: &PathBuf| -> anyhow::Result<GridRow> {
        let config = PipelineConfig::load(path)?;
        let summary = run(&config, strict_sequential, false)
            .with_context(|| format!("running {}", path.display()))?;
        Ok(GridRow {
            config_file: path
                .file_name()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_default(),
            summary,
        })
    };
    let rows: Vec<GridRow> = if strict_sequential {
        config_paths
            .iter()
            .map(run_one)
            .collect::<anyhow::Result<_>>()?
    } else {
        config_paths
            .par_iter()
            .map(run_one)
            .collect::<anyhow::Result<_>>()?
    };

    Ok(GridOutcome { rows })
}

pub fn write_summary_csv(outcome: &GridOutcome, path: &Path) -> anyhow::Result<()> {
    let mut out = String::new();
    out.push_str(
        "config,route,space,scheme,k,m,n_docs,objective,error_pct,f_measure,equivalence_passed\n",
    );
    for row in &outcome.rows {
        let s = &row.summary;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.config_file,
            s.route,
            s.base_space,
            s.scheme,
            s.k,
            fmt_opt(&s.m),
            s.n_docs,
            s.objective,
            fmt_opt(&s.error_pct),
            fmt_opt(&s.f_measure_pairwise),
            s.equivalence_passed,
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn print_table(outcome: &GridOutcome) {
    println!(
        "{:<28} {:<13} {:<6} {:<8} {:>3} {:>5} {:>7} {:>10} {:>10}  equiv",
        "config", "route", "space", "scheme", "k", "m", "n_docs", "error_pct", "f_measure"
    );
    for row in &outcome.rows {
        let s = &row.summary;
        println!(
            "{:<28} {:<13} {:<6} {:<8} {:>3} {:>5} {:>7} {:>10} {:>10}  {}",
            row.config_file,
            s.route,
            s.base_space,
            s.scheme,
            s.k,
            fmt_opt(&s.m),
            s.n_docs,
            s.error_pct.map(|e| format!("{e:.2}")).unwrap_or_default(),
            s.f_measure_pairwise
                .map(|f| format!("{f:.4}"))
                .unwrap_or_default(),
            if s.equivalence_passed { "pass" } else { "FAIL" },
        );
    }
}
