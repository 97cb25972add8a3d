use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use walkdir::WalkDir;

use super::{BenchError, BenchReport};
use crate::swarm::Variant;

/// Reads every `report.json` under `dir`, sorted by path.
pub fn load_reports(dir: &Path) -> Result<Vec<(PathBuf, BenchReport)>, BenchError> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| BenchError::Io {
            path: dir.to_path_buf(),
            source: e.into(),
        })?;
        if !entry.file_type().is_file() || entry.file_name() != "report.json" {
            continue;
        }
        let path = entry.into_path();
        let bytes = fs::read(&path).map_err(|source| BenchError::Io {
            path: path.clone(),
            source,
        })?;
        let report = serde_json::from_slice(&bytes).map_err(|source| BenchError::Json {
            path: path.clone(),
            source,
        })?;
        out.push((path, report));
    }
    if out.is_empty() {
        return Err(BenchError::NoReports(dir.to_path_buf()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedRow {
    /// 1-based rank within the dataset, by mean final fitness.
    pub rank: usize,
    pub dataset: String,
    pub variant: Variant,
    pub mean: f64,
    pub sd: f64,
    pub best: f64,
    pub worst: f64,
    pub source: PathBuf,
}

/// One row per trial report, grouped by dataset and ranked by descending
/// mean.
pub fn rank_reports(reports: &[(PathBuf, BenchReport)]) -> Vec<RankedRow> {
    let mut rows: Vec<RankedRow> = reports
        .iter()
        .flat_map(|(path, br)| {
            br.reports.iter().map(move |r| RankedRow {
                rank: 0,
                dataset: r.dataset_label.clone(),
                variant: r.variant,
                mean: r.mean,
                sd: r.sd,
                best: r.best,
                worst: r.worst,
                source: path.clone(),
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        a.dataset
            .cmp(&b.dataset)
            .then(b.mean.total_cmp(&a.mean))
            .then(a.variant.index().cmp(&b.variant.index()))
            .then(a.source.cmp(&b.source))
    });
    let mut rank = 0;
    for i in 0..rows.len() {
        rank = if i > 0 && rows[i - 1].dataset == rows[i].dataset {
            rank + 1
        } else {
            1
        };
        rows[i].rank = rank;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{bench, emit_outputs, Dataset, GridSpec};
    use crate::fragments::FragmentSet;
    use crate::swarm::VariantConfig;

    #[test]
    fn empty_dir_has_no_reports() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_reports(dir.path()), Err(BenchError::NoReports(_))));
    }

    #[test]
    fn ranks_within_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let set = FragmentSet::from_sequences(["ATCGAA", "GCTAGG", "AGAGCT", "GGTCTA"]).unwrap();
        let mut base = VariantConfig::standard(Variant::Cpsolf);
        base.max_itr = 5;
        let spec = GridSpec {
            variants: vec![Variant::Cpsolf, Variant::Spso],
            trials_per_cell: 2,
            master_seed: 3,
            base,
            jobs: None,
        };
        let report = bench(&[Dataset::new("fig1", set)], &spec).unwrap();
        emit_outputs(&report, &dir.path().join("run1")).unwrap();
        let loaded = load_reports(dir.path()).unwrap();
        assert_eq!(loaded.len(), 1);
        let rows = rank_reports(&loaded);
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].rank, rows[1].rank), (1, 2));
        assert!(rows[0].mean >= rows[1].mean);
    }
}
