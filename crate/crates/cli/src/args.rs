use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fragswarm::{Variant, VariantConfig};

/// Particle swarm layout for DNA fragment assembly.
#[derive(Debug, Parser)]
#[command(name = "fragswarm", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cut a reference sequence into overlapping reads with known order.
    Shear(ShearArgs),
    /// Run one optimizer trial on a read file.
    Run(RunArgs),
    /// Run a variant x dataset grid and write summary tables.
    Bench(BenchArgs),
    /// Write the overlap matrix of a read file as CSV.
    Matrix(MatrixArgs),
    /// Rank the results of earlier bench runs.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct ShearArgs {
    /// FASTA file whose first record is the reference.
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub mean_length: usize,
    #[arg(long)]
    pub min_overlap: usize,
    #[arg(long)]
    pub seed: u64,
    /// Output FASTA; the true order goes to `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// FASTA or FASTQ file, optionally gzipped; `-` reads standard input.
    #[arg(long)]
    pub reads: PathBuf,
    /// Keep only the first K reads.
    #[arg(long)]
    pub take: Option<usize>,
    #[arg(long, value_parser = parse_variant)]
    pub variant: Variant,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trace file; defaults to `run-<VARIANT>-<seed>.json` in the output
    /// directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "FRAGSWARM_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub reads: Vec<PathBuf>,
    /// Comma-separated variant names, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_variant_list)]
    pub variants: VariantList,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "FRAGSWARM_OUT_DIR", default_value = "fragswarm-out")]
    pub out: PathBuf,
    /// Worker threads; defaults to the number of logical processors.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Keep only the first K reads of every file.
    #[arg(long)]
    pub take: Option<usize>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub reads: PathBuf,
    #[arg(long)]
    pub take: Option<usize>,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Directory searched recursively for `report.json` files.
    #[arg(long)]
    pub reports: PathBuf,
}

/// Overrides for the standard parameters.
#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    #[arg(long, default_value_t = 10)]
    pub pop: usize,
    #[arg(long)]
    pub c1_start: Option<f64>,
    #[arg(long)]
    pub c1_end: Option<f64>,
    #[arg(long)]
    pub c2_start: Option<f64>,
    #[arg(long)]
    pub c2_end: Option<f64>,
    #[arg(long)]
    pub w_const: Option<f64>,
    #[arg(long)]
    pub w_hi: Option<f64>,
    #[arg(long)]
    pub w_lo: Option<f64>,
    #[arg(long)]
    pub max_stagnancy: Option<u32>,
    #[arg(long)]
    pub levy_lambda: Option<f64>,
    #[arg(long)]
    pub levy_scale: Option<f64>,
    #[arg(long)]
    pub v_max: Option<f64>,
}

impl ParamArgs {
    pub fn config(&self, variant: Variant) -> VariantConfig {
        let mut cfg = VariantConfig::standard(variant);
        cfg.max_itr = self.iters;
        cfg.population = self.pop;
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.c1_start, self.c1_start);
        set(&mut cfg.c1_end, self.c1_end);
        set(&mut cfg.c2_start, self.c2_start);
        set(&mut cfg.c2_end, self.c2_end);
        set(&mut cfg.w_const, self.w_const);
        set(&mut cfg.w_hi, self.w_hi);
        set(&mut cfg.w_lo, self.w_lo);
        set(&mut cfg.levy.lambda, self.levy_lambda);
        set(&mut cfg.levy.step_scale, self.levy_scale);
        set(&mut cfg.v_max, self.v_max);
        if let Some(m) = self.max_stagnancy {
            cfg.max_stagnancy = m;
        }
        cfg
    }
}

#[derive(Debug, Clone)]
pub struct VariantList(pub Vec<Variant>);

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: fragswarm::swarm::UnknownVariant| e.to_string())
}

fn parse_variant_list(s: &str) -> Result<VariantList, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(VariantList(Variant::ALL.to_vec()));
    }
    let mut out = Vec::new();
    for name in s.split(',').filter(|n| !n.trim().is_empty()) {
        let v = parse_variant(name)?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err("no variants given".into());
    }
    Ok(VariantList(out))
}
