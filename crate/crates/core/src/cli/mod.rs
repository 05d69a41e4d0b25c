//! Command-line harness: Cantor tables, sampled primitives, radius sweeps on
//! saved grids and the named verification suites.
//!
//! Exit codes: 0 success, 1 a verification criterion failed, 2 any error
//! (usage, configuration, unreadable input, unwritable output).

pub mod suites;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::constructors::MeasurePrimitive;
use crate::error::{Error, Result};
use crate::lipest::io::{load_grid, save_grid, write_estimates};
use crate::lipest::{default_radii, llip_field};
use crate::realsets::{BuiltSet, IntervalSet, SetSpec};
use suites::{AxisSpec, ExperimentConfig, Suite, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lipone",
    version,
    about = "Fat Cantor sets, measure primitives and local Lipschitz estimates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the stage intervals of a Cantor set and its stage measures.
    Cantor {
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value_t = 3)]
        stage: usize,
        /// Write the stage intervals as JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the measure primitive `x -> measure([a, x] ∩ F)` on a grid.
    Primitive {
        #[command(flatten)]
        set: SetArg,
        /// Base point `a`.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        base: f64,
        #[arg(long, allow_hyphen_values = true)]
        grid: AxisSpec,
        #[arg(long)]
        stage: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// File stem for `<stem>.json` and `<stem>.csv`.
        #[arg(long, default_value = "primitive")]
        stem: String,
    },
    /// Radius sweeps at every point of a saved grid function.
    Lip {
        /// Directory holding `<stem>.json` and `<stem>.csv`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "primitive")]
        stem: String,
        #[arg(long)]
        radii: Option<SweepSpec>,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// List the verification suites.
    Suites,
}

#[derive(Debug, Args)]
pub struct SetArg {
    /// Set description: inline JSON or a path to a JSON file.
    #[arg(long = "set")]
    pub set: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: String,
    #[command(flatten)]
    pub set: SetArg,
    /// `lo,hi,h`; repeat for the second axis of planar suites.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Vec<AxisSpec>,
    /// `R,K` for the sweep `R, R/2, ..., R/2^K`.
    #[arg(long)]
    pub radii: Option<SweepSpec>,
    #[arg(long)]
    pub stage: Option<usize>,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<f64>,
    /// Directory for `summary.json` and `points.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Reads a set description given inline or as a file path.
pub fn load_set(arg: &str) -> Result<SetSpec<f64>> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)
            .map_err(|e| Error::Config(format!("cannot read set file `{arg}`: {e}")))?
    };
    SetSpec::parse(&text).map_err(|e| Error::Config(format!("malformed set description: {e}")))
}

fn required_set(arg: &SetArg) -> Result<SetSpec<f64>> {
    match &arg.set {
        Some(s) => load_set(s),
        None => Err(Error::Config("--set is required".into())),
    }
}

#[derive(Serialize)]
struct StageRow {
    stage: usize,
    measure: f64,
}

#[derive(Serialize)]
struct CantorOutput {
    stage: usize,
    intervals: Vec<[f64; 2]>,
    measures: Vec<StageRow>,
}

fn cmd_cantor(
    set: &SetArg,
    stage: usize,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let c = match required_set(set)?.build()? {
        BuiltSet::Cantor(c) => c,
        BuiltSet::Intervals(_) => {
            return Err(Error::Config(
                "`cantor` needs a Cantor set description".into(),
            ))
        }
    };
    let intervals: IntervalSet<f64> = c.stage(stage)?;
    let measures = (0..=stage)
        .map(|n| {
            Ok(StageRow {
                stage: n,
                measure: c.stage_measure(n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = CantorOutput {
        stage,
        intervals: intervals
            .to_pairs()
            .into_iter()
            .map(|(a, b)| [a, b])
            .collect(),
        measures,
    };
    let json = serde_json::to_string_pretty(&doc)? + "\n";
    match out {
        Some(p) => fs::write(p, json)?,
        None => stdout.write_all(json.as_bytes())?,
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_primitive(
    set: &SetArg,
    base: f64,
    grid: AxisSpec,
    stage: Option<usize>,
    out: &Path,
    stem: &str,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let line = required_set(set)?.build()?.into_line_set(stage)?;
    let cantor = matches!(line, crate::realsets::LineSet::Cantor { .. });
    let prim = MeasurePrimitive::new(line, base)?;
    let (f, width) = prim.sample(grid.axis()?)?;
    save_grid(&f, cantor.then_some(width), out, stem)?;
    writeln!(
        stdout,
        "wrote {} samples to {}",
        f.len(),
        out.join(format!("{stem}.csv")).display()
    )?;
    Ok(EXIT_OK)
}

fn cmd_lip(
    input: &Path,
    stem: &str,
    radii: Option<SweepSpec>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let (_, f) = load_grid::<f64>(input, stem)?;
    let radii = match radii {
        Some(s) => s.radii(),
        None => default_radii(&f),
    };
    let field = llip_field(&f, &radii)?;
    match out {
        Some(p) => write_estimates(
            &field.estimates,
            std::io::BufWriter::new(fs::File::create(p)?),
        )?,
        None => write_estimates(&field.estimates, &mut *stdout)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let suite: Suite = args.suite.parse()?;
    let cfg = ExperimentConfig {
        set: args.set.set.as_deref().map(load_set).transpose()?,
        grid: args.grid.clone(),
        radii: args.radii,
        stage: args.stage,
        budget: args.budget,
        resolution: args.resolution,
        tol: args.tol,
        seed: args.seed,
        base: args.base,
    };
    let started = std::time::Instant::now();
    let report = suite.run(&cfg)?;
    eprintln!("{suite}: {:.2?}", started.elapsed());
    for c in &report.criteria {
        writeln!(
            stdout,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&report)? + "\n",
        )?;
        let file = fs::File::create(dir.join("points.csv"))?;
        write_estimates(&report.rows, std::io::BufWriter::new(file))?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

/// Runs a parsed command, writing results to `stdout`. Returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> i32 {
    let outcome = match &cli.command {
        Command::Cantor { set, stage, out } => cmd_cantor(set, *stage, out.as_deref(), stdout),
        Command::Primitive {
            set,
            base,
            grid,
            stage,
            out,
            stem,
        } => cmd_primitive(set, *base, *grid, *stage, out, stem, stdout),
        Command::Lip {
            input,
            stem,
            radii,
            out,
        } => cmd_lip(input, stem, *radii, out.as_deref(), stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
        Command::Suites => Suite::ALL
            .iter()
            .try_for_each(|s| writeln!(stdout, "{:<30} {}", s.name(), s.alias()))
            .map(|_| EXIT_OK)
            .map_err(Error::from),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, S>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
