use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use mbdfl_core::diagnose::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Cfaults,
    Bugassist,
    Sniper,
    All,
}

/// Localize faults in a MiniC program from its failing tests.
#[derive(Debug, Clone, Parser)]
#[command(name = "mbdfl", version)]
pub struct Args {
    /// Program under diagnosis.
    #[arg(long, value_name = "FILE")]
    pub program_path: PathBuf,
    /// Directory of tN.in / tN.out test pairs.
    #[arg(long, value_name = "DIR")]
    pub tests_dir: PathBuf,
    #[arg(long, value_enum, default_value = "cfaults")]
    pub strategy: StrategyArg,
    /// Also refine the first cfaults diagnosis to sub-expressions.
    #[arg(long)]
    pub refine: bool,
    /// Loop iterations encoded per loop execution.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub unwind: u32,
    /// Bit width of `int`: 8, 16 or 32.
    #[arg(long, default_value_t = 16, value_parser = parse_width)]
    pub width: u32,
    /// Weight factor of input and output statements.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub io_multiplier: u64,
    /// Let loops run past the bound and weaken the assertions instead.
    #[arg(long)]
    pub unwind_assert: bool,
    /// Per-test limit on enumerated MCSes for the baselines.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub mcs_limit: Option<u64>,
    /// Largest number of aggregated diagnoses SNIPER may build.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub product_cap: u64,
    /// Conflict budget per SAT call.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub conflict_budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub output_path: Option<PathBuf>,
    /// Dump the multi-test MaxSAT instance in DIMACS WCNF format.
    #[arg(long)]
    pub emit_wcnf: bool,
    /// Where `--emit-wcnf` writes; defaults to the report path with a
    /// `.wcnf` extension, or `instance.wcnf`.
    #[arg(long, value_name = "FILE", requires = "emit_wcnf")]
    pub wcnf_path: Option<PathBuf>,
    /// Print one line per diagnosis instead of JSON on standard output.
    #[arg(long)]
    pub summary: bool,
    /// Leave wall-clock times out of the report.
    #[arg(long)]
    pub no_timings: bool,
}

impl Args {
    pub fn config(&self) -> Config {
        Config {
            refine: self.refine,
            unwind: self.unwind,
            width: self.width,
            io_multiplier: self.io_multiplier,
            unwind_assert: self.unwind_assert,
            mcs_limit: self.mcs_limit.map(|n| n as usize),
            product_cap: self.product_cap as usize,
            conflict_budget: self.conflict_budget,
            seed: self.seed,
            ..Config::default()
        }
    }

    pub fn wcnf_path(&self) -> PathBuf {
        match (&self.wcnf_path, &self.output_path) {
            (Some(p), _) => p.clone(),
            (None, Some(out)) => out.with_extension("wcnf"),
            (None, None) => PathBuf::from("instance.wcnf"),
        }
    }
}

fn parse_width(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(w @ (8 | 16 | 32)) => Ok(w),
        _ => Err(format!("`{s}` is not one of 8, 16, 32")),
    }
}
