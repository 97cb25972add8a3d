mod args;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use fragswarm::bench::{bench, emit_outputs, load_reports, rank_reports, Dataset, GridSpec};
use fragswarm::fragments::{read_path, shear_reference, write_fasta, ShearParams};
use fragswarm::{build_overlap_matrix, run, DatasetInfo, FragmentSet};
use serde::Serialize;

use args::{BenchArgs, Cli, Command, CompareArgs, MatrixArgs, RunArgs, ShearArgs};

const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Shear(a) => cmd_shear(a),
        Command::Run(a) => cmd_run(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Matrix(a) => cmd_matrix(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

fn load(path: &Path, take: Option<usize>) -> Result<FragmentSet> {
    let set = read_path(path)?;
    Ok(match take {
        Some(k) => set.take(k)?,
        None => set,
    })
}

fn dataset_info(label: String, path: &Path, take: Option<usize>, set: &FragmentSet) -> DatasetInfo {
    DatasetInfo {
        label,
        source: Some(path.display().to_string()),
        take,
        fragment_count: set.len(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ShearSidecar<'a> {
    reference: String,
    #[serde(flatten)]
    params: &'a ShearParams,
    /// `true_order[k]` is the index of the k-th read from the left.
    true_order: &'a [usize],
}

fn cmd_shear(a: ShearArgs) -> Result<()> {
    let refs = read_path(&a.reference)?;
    let reference = &refs.fragments()[0];
    let params = ShearParams {
        fragment_count: a.count,
        mean_length: a.mean_length,
        min_overlap: a.min_overlap,
        seed: a.seed,
    };
    let sheared = shear_reference(reference, &params)?;
    let mut w = create(&a.out)?;
    write_fasta(&sheared.set, &mut w)?;
    w.flush()?;
    let sidecar = sidecar_path(&a.out);
    write_json(
        &sidecar,
        &ShearSidecar {
            reference: a.reference.display().to_string(),
            params: &params,
            true_order: &sheared.true_order,
        },
    )?;
    println!("wrote {} reads to {} (true order in {})", sheared.set.len(), a.out.display(), sidecar.display());
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let set = load(&a.reads, a.take)?;
    let cfg = a.params.config(a.variant);
    let matrix = build_overlap_matrix(&set);
    let mut trace = run(&cfg, &set, &matrix, a.seed)?;
    trace.dataset = Some(dataset_info(file_label(&a.reads), &a.reads, a.take, &set));
    let out = a
        .out
        .unwrap_or_else(|| a.out_dir.join(format!("run-{}-{}.json", a.variant, a.seed)));
    write_json(&out, &trace)?;
    println!("final fitness: {}", trace.best_fitness);
    println!("permutation length: {}", trace.best_permutation.len());
    println!("trace: {}", out.display());
    Ok(())
}

fn file_label(path: &Path) -> String {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("stdin");
    let trimmed = name.strip_suffix(".gz").unwrap_or(name);
    match trimmed.rsplit_once('.') {
        Some((stem, _)) if !stem.is_empty() => stem.to_string(),
        _ => trimmed.to_string(),
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let mut datasets = Vec::with_capacity(a.reads.len());
    for path in &a.reads {
        let set = load(path, a.take).with_context(|| format!("reading {}", path.display()))?;
        let mut label = file_label(path);
        if datasets.iter().any(|d: &Dataset| d.label() == label) {
            label = format!("{label}-{}", datasets.len() + 1);
        }
        let mut ds = Dataset::new(label.clone(), set);
        ds.info = dataset_info(label, path, a.take, &ds.set);
        datasets.push(ds);
    }
    let spec = GridSpec {
        variants: a.variants.0.clone(),
        trials_per_cell: a.trials,
        master_seed: a.seed,
        base: a.params.config(a.variants.0[0]),
        jobs: a.jobs,
    };
    let report = bench(&datasets, &spec)?;
    let written = emit_outputs(&report, &a.out)?;
    for r in &report.reports {
        println!(
            "{:<12} {:<7} mean {:>10.2}  sd {:>8.2}  best {:>6}  worst {:>6}",
            r.dataset_label, r.variant, r.mean, r.sd, r.best, r.worst
        );
    }
    if !report.failures.is_empty() {
        eprintln!("{} trial(s) failed; see failures.csv", report.failures.len());
    }
    println!("wrote {} files to {}", written.len(), a.out.display());
    Ok(())
}

fn cmd_matrix(a: MatrixArgs) -> Result<()> {
    let set = load(&a.reads, a.take)?;
    let m = build_overlap_matrix(&set);
    let mut w: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_compare(a: CompareArgs) -> Result<()> {
    let reports = load_reports(&a.reports)?;
    let rows = rank_reports(&reports);
    if rows.is_empty() {
        bail!("reports under {} contain no results", a.reports.display());
    }
    println!(
        "{:<12} {:>4} {:<7} {:>10} {:>8} {:>6} {:>6}  source",
        "dataset", "rank", "variant", "mean", "sd", "best", "worst"
    );
    for r in rows {
        println!(
            "{:<12} {:>4} {:<7} {:>10.2} {:>8.2} {:>6} {:>6}  {}",
            r.dataset,
            r.rank,
            r.variant,
            r.mean,
            r.sd,
            r.best,
            r.worst,
            r.source.display()
        );
    }
    Ok(())
}
