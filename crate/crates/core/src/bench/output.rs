use std::fs;
use std::path::{Path, PathBuf};

use super::{BenchError, BenchReport};

pub const OUTPUT_FILES: [&str; 6] = [
    "summary.csv",
    "ztests.csv",
    "convergence.csv",
    "finals.csv",
    "failures.csv",
    "report.json",
];

fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<(), BenchError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let csv_err = |source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the CSV tables and `report.json` into `out_dir`, creating it if
/// needed. Returns the paths written.
///
/// Floats use Rust's shortest round-trip formatting, so every CSV value
/// parses back to the exact value in `report.json`.
pub fn emit_outputs(report: &BenchReport, out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    fs::create_dir_all(out_dir).map_err(|source| BenchError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let path = |name: &str| out_dir.join(name);

    write_csv(
        &path("summary.csv"),
        &["dataset", "variant", "trials", "mean", "sd", "best", "worst"],
        report.reports.iter().map(|r| {
            vec![
                r.dataset_label.clone(),
                r.variant.to_string(),
                r.trials.len().to_string(),
                r.mean.to_string(),
                r.sd.to_string(),
                r.best.to_string(),
                r.worst.to_string(),
            ]
        }),
    )?;

    write_csv(
        &path("ztests.csv"),
        &[
            "dataset",
            "pair",
            "variant_a",
            "variant_b",
            "mean_a",
            "mean_b",
            "z",
            "p_value",
            "significant",
        ],
        report.ztests.iter().map(|t| {
            vec![
                t.dataset_label.clone(),
                t.pair(),
                t.variant_a.to_string(),
                t.variant_b.to_string(),
                t.mean_a.to_string(),
                t.mean_b.to_string(),
                t.z_statistic.to_string(),
                t.p_value.to_string(),
                t.significant.to_string(),
            ]
        }),
    )?;

    write_csv(
        &path("convergence.csv"),
        &["dataset", "variant", "trial", "iteration", "gbest"],
        report.reports.iter().flat_map(|r| {
            r.trials.iter().enumerate().flat_map(move |(k, t)| {
                t.gbest_per_iteration.iter().enumerate().map(move |(i, g)| {
                    vec![
                        r.dataset_label.clone(),
                        r.variant.to_string(),
                        k.to_string(),
                        i.to_string(),
                        g.to_string(),
                    ]
                })
            })
        }),
    )?;

    write_csv(
        &path("finals.csv"),
        &["dataset", "variant", "trial", "seed", "final_fitness"],
        report.reports.iter().flat_map(|r| {
            r.trials.iter().enumerate().map(move |(k, t)| {
                vec![
                    r.dataset_label.clone(),
                    r.variant.to_string(),
                    k.to_string(),
                    t.seed.to_string(),
                    t.best_fitness.to_string(),
                ]
            })
        }),
    )?;

    write_csv(
        &path("failures.csv"),
        &["dataset", "variant", "trial", "error"],
        report.failures.iter().map(|f| {
            vec![
                f.dataset_label.clone(),
                f.variant.to_string(),
                f.trial.to_string(),
                f.error.clone(),
            ]
        }),
    )?;

    let json_path = path("report.json");
    let json = serde_json::to_vec_pretty(report).map_err(|source| BenchError::Json {
        path: json_path.clone(),
        source,
    })?;
    fs::write(&json_path, json).map_err(|source| BenchError::Io {
        path: json_path.clone(),
        source,
    })?;

    Ok(OUTPUT_FILES.iter().map(|f| path(f)).collect())
}
