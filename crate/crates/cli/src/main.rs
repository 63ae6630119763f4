mod args;
mod report;

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::Parser;
use mbdfl_core::diagnose::{
    encode_instance, failing_tests, localize_bugassist, localize_cfaults, localize_sniper, Config, DiagnoseError, DiagnosisReport,
    ErrorClass,
};
use mbdfl_core::encode::write_wcnf;
use mbdfl_core::frontend::{load_test_suite, parse_program, FrontendError, SuiteError};
use mbdfl_core::{Program, TestSuite};
use thiserror::Error;

use args::{Args, StrategyArg};
use report::{summary, ConfigSection, Report, Section, SCHEMA_VERSION};

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: FrontendError,
    },
    #[error("{0}")]
    Suite(#[from] SuiteError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Diagnose(#[from] DiagnoseError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Suite(_) => 3,
            CliError::Write { .. } => 2,
            CliError::Diagnose(e) => class_code(e.class()),
        }
    }
}

fn class_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Localization => 1,
        ErrorClass::Resource => 2,
        ErrorClass::Input => 3,
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load(args: &Args) -> Result<(Program, TestSuite), CliError> {
    let path = &args.program_path;
    let source = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    let program = parse_program(&source).map_err(|source| CliError::Parse {
        path: path.clone(),
        source,
    })?;
    if !args.tests_dir.is_dir() {
        return Err(CliError::Read {
            path: args.tests_dir.clone(),
            source: io::Error::new(io::ErrorKind::NotFound, "not a directory"),
        });
    }
    Ok((program, load_test_suite(&args.tests_dir)?))
}

type Localizer = fn(&Program, &TestSuite, &Config) -> Result<DiagnosisReport, DiagnoseError>;

/// Runs the requested strategies, concurrently when there are several.
fn localize(program: &Program, suite: &TestSuite, args: &Args) -> Vec<(&'static str, Result<DiagnosisReport, DiagnoseError>)> {
    let config = args.config();
    let mut jobs: Vec<(&'static str, Localizer)> = Vec::new();
    if matches!(args.strategy, StrategyArg::Cfaults | StrategyArg::All) {
        jobs.push(("cfaults", localize_cfaults));
    }
    if matches!(args.strategy, StrategyArg::Bugassist | StrategyArg::All) {
        jobs.push(("bugassist", localize_bugassist));
    }
    if matches!(args.strategy, StrategyArg::Sniper | StrategyArg::All) {
        jobs.push(("sniper", localize_sniper));
    }
    let config = &config;
    thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(name, f)| (name, s.spawn(move || f(program, suite, config))))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| (name, h.join().expect("strategy thread panicked")))
            .collect()
    })
}

fn run(args: &Args) -> Result<u8, CliError> {
    let (program, suite) = load(args)?;
    let config = args.config();
    if args.emit_wcnf {
        emit_wcnf(&program, &suite, &config, &args.wcnf_path())?;
    }
    let timings = !args.no_timings;
    let mut sections = BTreeMap::new();
    let mut code = 0;
    for (name, result) in localize(&program, &suite, args) {
        match result {
            Ok(mut r) => {
                if let Some(base) = r.unrefined.take() {
                    sections.insert(base.strategy.name().to_string(), Section::from_report(&base, timings));
                }
                sections.insert(r.strategy.name().to_string(), Section::from_report(&r, timings));
            }
            Err(e) => {
                eprintln!("error: {name}: {e}");
                code = code.max(class_code(e.class()));
                sections.insert(name.to_string(), Section::failed(name, &e));
            }
        }
    }
    let report = Report {
        schema: SCHEMA_VERSION,
        program: args.program_path.display().to_string(),
        tests: args.tests_dir.display().to_string(),
        config: ConfigSection {
            unwind: config.unwind,
            width: config.width,
            io_multiplier: config.io_multiplier,
            refine: config.refine,
            unwind_assert: config.unwind_assert,
            mcs_limit: args.mcs_limit,
            product_cap: args.product_cap,
            conflict_budget: config.conflict_budget,
            seed: config.seed,
        },
        failing_tests: failing_tests(&program, &suite, &config).into_iter().map(|t| t.id).collect(),
        sections,
    };
    emit_report(&report, args)?;
    Ok(code)
}

fn write_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    }
}

fn emit_report(report: &Report, args: &Args) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    if let Some(path) = &args.output_path {
        fs::write(path, &json).map_err(write_err(path))?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let text = if args.summary {
        summary(report)
    } else if args.output_path.is_none() {
        json
    } else {
        return Ok(());
    };
    out.write_all(text.as_bytes()).map_err(write_err(Path::new("<stdout>")))
}

/// Writes the multi-test cfaults instance over all failing tests; nothing
/// is written when no test fails.
fn emit_wcnf(program: &Program, suite: &TestSuite, config: &Config, path: &Path) -> Result<(), CliError> {
    let failing = failing_tests(program, suite, config);
    if failing.is_empty() {
        eprintln!("note: no failing tests, no instance written");
        return Ok(());
    }
    let enc = encode_instance(program, &failing, config)?;
    let file = File::create(path).map_err(write_err(path))?;
    let mut w = BufWriter::new(file);
    write_wcnf(&enc.wcnf, &mut w).map_err(write_err(path))?;
    w.flush().map_err(write_err(path))
}
