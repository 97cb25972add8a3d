//! Multi-trial experiment harness.
//!
//! A grid runs every (dataset, variant) cell for a fixed number of trials,
//! each with its own seed split from a master seed, then aggregates final
//! global-best values and compares CPSOLF against every baseline with a
//! two-sample z-test.

mod compare;
mod output;
mod stats;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use compare::{load_reports, rank_reports, RankedRow};
pub use output::{emit_outputs, OUTPUT_FILES};
pub use stats::{mean, sample_sd, two_tailed_p, z_test, ZTest, SIGNIFICANCE_LEVEL, Z_TEST_METHOD};

use crate::fragments::{build_overlap_matrix, DatasetInfo, FragmentSet, OverlapMatrix};
use crate::stochastic::{split_seed, RNG_ALGORITHM};
use crate::swarm::{run, RunTrace, Variant, VariantConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("sd undefined below 2 trials (got {0})")]
    TooFewTrials(usize),
    #[error("z-test needs at least 2 observations per sample (got {0})")]
    SampleTooSmall(usize),
    #[error("no variants selected")]
    NoVariants,
    #[error("cannot build a report from zero trials")]
    EmptyCell,
    #[error("no reports found in {0}")]
    NoReports(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// A fragment set ready for optimization.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub info: DatasetInfo,
    pub set: FragmentSet,
    pub matrix: OverlapMatrix,
}

impl Dataset {
    pub fn new(label: impl Into<String>, set: FragmentSet) -> Self {
        let matrix = build_overlap_matrix(&set);
        Self {
            info: DatasetInfo {
                label: label.into(),
                source: None,
                take: None,
                fragment_count: set.len(),
            },
            set,
            matrix,
        }
    }

    pub fn label(&self) -> &str {
        &self.info.label
    }
}

/// Aggregates over the final global-best values of one cell's trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub variant: Variant,
    pub dataset_label: String,
    pub trials: Vec<RunTrace>,
    pub mean: f64,
    pub sd: f64,
    pub best: f64,
    pub worst: f64,
}

impl TrialReport {
    pub fn from_traces(
        dataset_label: impl Into<String>,
        variant: Variant,
        trials: Vec<RunTrace>,
    ) -> Result<Self, BenchError> {
        if trials.is_empty() {
            return Err(BenchError::EmptyCell);
        }
        let finals: Vec<f64> = trials.iter().map(|t| t.best_fitness as f64).collect();
        let sd = if finals.len() < 2 { 0.0 } else { sample_sd(&finals) };
        Ok(Self {
            variant,
            dataset_label: dataset_label.into(),
            mean: mean(&finals),
            sd,
            best: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            worst: finals.iter().copied().fold(f64::INFINITY, f64::min),
            trials,
        })
    }

    pub fn finals(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.best_fitness as f64).collect()
    }
}

/// CPSOLF compared against one baseline on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTest {
    pub dataset_label: String,
    pub variant_a: Variant,
    pub variant_b: Variant,
    pub mean_a: f64,
    pub mean_b: f64,
    pub z_statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

impl PairwiseTest {
    /// Row label such as `CPSOLF-SPSO`.
    pub fn pair(&self) -> String {
        format!("{}-{}", self.variant_a, self.variant_b)
    }
}

/// One CPSOLF-vs-baseline test per baseline present, per dataset, in
/// dataset order and then canonical variant order.
pub fn cpsolf_pairwise_tests(reports: &[TrialReport]) -> Result<Vec<PairwiseTest>, BenchError> {
    let mut labels: Vec<&str> = Vec::new();
    for r in reports {
        if !labels.contains(&r.dataset_label.as_str()) {
            labels.push(&r.dataset_label);
        }
    }
    let mut out = Vec::new();
    for label in labels {
        let cell = |v: Variant| {
            reports
                .iter()
                .find(|r| r.dataset_label == label && r.variant == v)
        };
        let Some(ours) = cell(Variant::Cpsolf) else {
            continue;
        };
        for other in Variant::ALL.into_iter().filter(|&v| v != Variant::Cpsolf) {
            let Some(theirs) = cell(other) else { continue };
            let t = z_test(&ours.finals(), &theirs.finals())?;
            out.push(PairwiseTest {
                dataset_label: label.to_string(),
                variant_a: Variant::Cpsolf,
                variant_b: other,
                mean_a: ours.mean,
                mean_b: theirs.mean,
                z_statistic: t.z_statistic,
                p_value: t.p_value,
                significant: t.significant,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub variants: Vec<Variant>,
    pub trials_per_cell: usize,
    pub master_seed: u64,
    /// Shared parameters; only `variant` is overridden per cell.
    pub base: VariantConfig,
    /// Worker threads; `None` uses every logical processor.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFailure {
    pub dataset_label: String,
    pub variant: Variant,
    pub trial: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub reports: Vec<TrialReport>,
    pub failures: Vec<CellFailure>,
}

/// Seed of trial `trial` in cell (`dataset_index`, `variant`).
pub fn trial_seed(master_seed: u64, dataset_index: usize, variant: Variant, trial: usize) -> u64 {
    split_seed(
        master_seed,
        &[dataset_index as u64, variant.index() as u64, trial as u64],
    )
}

/// Runs the full grid with the swarm optimizer.
pub fn run_grid(datasets: &[Dataset], spec: &GridSpec) -> Result<GridOutcome, BenchError> {
    run_grid_with(datasets, spec, |cfg, ds, seed| {
        run(cfg, &ds.set, &ds.matrix, seed).map_err(|e| e.to_string())
    })
}

/// [`run_grid`] with a caller-supplied optimizer. A failing trial drops its
/// whole cell from the reports and is listed in the failures; other cells
/// are unaffected.
pub fn run_grid_with<F>(datasets: &[Dataset], spec: &GridSpec, runner: F) -> Result<GridOutcome, BenchError>
where
    F: Fn(&VariantConfig, &Dataset, u64) -> Result<RunTrace, String> + Sync,
{
    if spec.trials_per_cell < 2 {
        return Err(BenchError::TooFewTrials(spec.trials_per_cell));
    }
    if spec.variants.is_empty() {
        return Err(BenchError::NoVariants);
    }
    let jobs: Vec<(usize, Variant, usize)> = (0..datasets.len())
        .flat_map(|d| {
            spec.variants
                .iter()
                .flat_map(move |&v| (0..spec.trials_per_cell).map(move |k| (d, v, k)))
        })
        .collect();

    let execute = || -> Vec<Result<RunTrace, String>> {
        jobs.par_iter()
            .map(|&(d, v, k)| {
                let ds = &datasets[d];
                let seed = trial_seed(spec.master_seed, d, v, k);
                let mut trace = runner(&spec.base.with_variant(v), ds, seed)?;
                trace.dataset = Some(ds.info.clone());
                Ok(trace)
            })
            .collect()
    };
    let results = match spec.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| BenchError::Pool(e.to_string()))?
            .install(execute),
        None => execute(),
    };

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut results = results.into_iter();
    for ds in datasets {
        for &v in &spec.variants {
            let cell: Vec<Result<RunTrace, String>> =
                results.by_ref().take(spec.trials_per_cell).collect();
            let mut traces = Vec::with_capacity(cell.len());
            let mut failed = false;
            for (k, r) in cell.into_iter().enumerate() {
                match r {
                    Ok(t) => traces.push(t),
                    Err(error) => {
                        failed = true;
                        failures.push(CellFailure {
                            dataset_label: ds.label().to_string(),
                            variant: v,
                            trial: k,
                            error,
                        });
                    }
                }
            }
            if !failed {
                reports.push(TrialReport::from_traces(ds.label(), v, traces)?);
            }
        }
    }
    Ok(GridOutcome { reports, failures })
}

/// Everything a bench run produced; serialized as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub rng_algorithm: String,
    pub ztest_method: String,
    pub master_seed: u64,
    pub trials_per_cell: usize,
    pub base_config: VariantConfig,
    pub variants: Vec<Variant>,
    pub datasets: Vec<DatasetInfo>,
    pub reports: Vec<TrialReport>,
    pub ztests: Vec<PairwiseTest>,
    pub failures: Vec<CellFailure>,
}

impl BenchReport {
    pub fn new(
        spec: &GridSpec,
        datasets: &[Dataset],
        outcome: GridOutcome,
    ) -> Result<Self, BenchError> {
        let ztests = cpsolf_pairwise_tests(&outcome.reports)?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            rng_algorithm: RNG_ALGORITHM.to_string(),
            ztest_method: Z_TEST_METHOD.to_string(),
            master_seed: spec.master_seed,
            trials_per_cell: spec.trials_per_cell,
            base_config: spec.base.clone(),
            variants: spec.variants.clone(),
            datasets: datasets.iter().map(|d| d.info.clone()).collect(),
            reports: outcome.reports,
            ztests,
            failures: outcome.failures,
        })
    }
}

/// Runs the grid and assembles the report in one call.
pub fn bench(datasets: &[Dataset], spec: &GridSpec) -> Result<BenchReport, BenchError> {
    let outcome = run_grid(datasets, spec)?;
    BenchReport::new(spec, datasets, outcome)
}
