//! The `epsilon-forge` command line.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bound::{compute_bound, BoundError};
use crate::corpus::{gen_corpus, Limits};
use crate::eval::is_solving;
use crate::hprocess::{first_solution_index, run_hprocess_with, ValueRule, DEFAULT_BUDGET};
use crate::io::{analysis_json, bound_json, read_trace, write_trace, IoError};
use crate::series::SeriesError;
use crate::syntax::{parse_critical_set, print_expr, CriticalFormulaSet};
use crate::verify::{verify_all, VerifyOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "epsilon-forge",
    version,
    about = "Hilbert's epsilon-substitution method for arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the H-process and write the trace as JSON Lines.
    Run(RunArgs),
    /// Compute the bound H(Cr) = M(RANK-1, 0) with its descent audit.
    Bound(CommonArgs),
    /// Decompose the run into series and print the termination certificate.
    Analyze(AnalyzeArgs),
    /// Check every property of the run; exit 0 iff all hold.
    Verify(VerifyArgs),
    /// Write a seeded random corpus of critical-formula files.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// File of `(crit x F t)` forms.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, env = "EPSILON_FORGE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = ValueRule::Paper)]
    pub value_rule: ValueRule,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Write the trace here instead of standard output.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Analyse a saved trace instead of running the process.
    #[arg(long)]
    pub trace_in: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A `.crit` file or a directory of them. Without it a corpus is generated.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, env = "EPSILON_FORGE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = ValueRule::Paper)]
    pub value_rule: ValueRule,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Longest series enumerated by the pairwise checks.
    #[arg(long, default_value_t = 12)]
    pub max_span: usize,
    /// Directory for counterexample bundles.
    #[arg(long)]
    pub bundle_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// A failure with its exit status.
#[derive(Debug)]
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn input(msg: impl Into<String>) -> Self {
        Fail {
            code: EXIT_INPUT,
            msg: msg.into(),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Fail {
                code: EXIT_OK,
                msg: String::new(),
            };
        }
        Fail {
            code: EXIT_INPUT,
            msg: e.to_string(),
        }
    }
}

impl From<IoError> for Fail {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(e) => e.into(),
            e => Fail::input(e.to_string()),
        }
    }
}

impl From<BoundError> for Fail {
    fn from(e: BoundError) -> Self {
        let code = match e {
            BoundError::BudgetExceeded(_) | BoundError::DescentViolation(_) => EXIT_BUDGET,
            _ => EXIT_CHECK,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<SeriesError> for Fail {
    fn from(e: SeriesError) -> Self {
        let code = match e {
            SeriesError::NotTerminated | SeriesError::Unavailable(_) => EXIT_BUDGET,
            _ => EXIT_CHECK,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<u8, Fail> {
    match cmd {
        Command::Run(a) => cmd_run(a, out),
        Command::Bound(a) => cmd_bound(a, out),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Gen(a) => cmd_gen(a, out),
    }
}

fn load(path: &Path) -> Result<CriticalFormulaSet, Fail> {
    let text =
        fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    parse_critical_set(&text).map_err(|e| Fail::input(format!("{}:{e}", path.display())))
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    let c = &a.common;
    let cr = load(&c.input)?;
    let trace = run_hprocess_with(&cr, c.budget, c.value_rule);
    match &a.trace_out {
        Some(path) => write_trace(&trace, io::BufWriter::new(fs::File::create(path)?))?,
        None if c.format == Format::Json => write_trace(&trace, &mut *out)?,
        None => {
            for s in &trace.steps {
                match (&s.en, s.vn) {
                    (Some(e), Some(v)) => writeln!(
                        out,
                        "{:>4}  r={}  a={}  axiom {}: {} := {v}",
                        s.n,
                        s.rn,
                        s.an,
                        s.selected.unwrap_or(0),
                        print_expr(e)
                    )?,
                    _ => writeln!(out, "{:>4}  r={}  a={}  solving", s.n, s.rn, s.an)?,
                }
            }
        }
    }
    if trace.budget_exceeded {
        return Err(Fail {
            code: EXIT_BUDGET,
            msg: format!("no solution within {} steps", c.budget),
        });
    }
    if a.trace_out.is_some() || c.format == Format::Text {
        let h = trace.solution_index().expect("solved");
        writeln!(out, "solved at step {h}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_bound(a: CommonArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    let cr = load(&a.input)?;
    let res = compute_bound(&cr, a.budget, a.value_rule)?;
    let oracle = first_solution_index(&cr, a.budget, a.value_rule).ok();
    let solves = res
        .trace
        .step_at(res.h)
        .is_some_and(|s| is_solving(&s.subst, &cr));
    let clean = res.audit.is_clean() && res.table_mismatches().is_empty();
    match a.format {
        Format::Json => {
            let mut doc = bound_json(&res);
            doc["oracle"] = json!(oracle);
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Text => {
            writeln!(out, "H = {}", res.h)?;
            writeln!(out, "first solution = {oracle:?}")?;
            writeln!(
                out,
                "audit: {} calls, depth {}, {} violations",
                res.audit.entries.len(),
                res.audit.max_depth,
                res.audit.violations().count()
            )?;
        }
    }
    if !clean {
        return Ok(EXIT_BUDGET);
    }
    Ok(if oracle == Some(res.h) && solves {
        EXIT_OK
    } else {
        EXIT_CHECK
    })
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    let c = &a.common;
    let cr = load(&c.input)?;
    let trace = match &a.trace_in {
        Some(path) => {
            let f = fs::File::open(path)
                .map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
            read_trace(&cr, c.value_rule, BufReader::new(f))
                .map_err(|e| Fail::input(format!("{}: {e}", path.display())))?
        }
        None => run_hprocess_with(&cr, c.budget, c.value_rule),
    };
    let doc = analysis_json(&trace)?;
    match c.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Text => {
            writeln!(out, "H = {}, RANK = {}", doc["h"], doc["rankBound"])?;
            writeln!(out, "ranks {}", doc["ranks"])?;
            writeln!(out, "certificate at xi = {}:", doc["certificate"]["xi"])?;
            for e in doc["certificate"]["entries"]
                .as_array()
                .into_iter()
                .flatten()
            {
                writeln!(
                    out,
                    "  {}  beta={}  o={}",
                    e["span"],
                    e["beta"],
                    e["o"].as_str().unwrap_or("")
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn crit_files(dir: &Path) -> Result<Vec<PathBuf>, Fail> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "crit"))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    let instances: Vec<(String, CriticalFormulaSet)> = match &a.input {
        Some(path) if path.is_dir() => crit_files(path)?
            .into_iter()
            .map(|p| {
                Ok((
                    p.file_stem()
                        .unwrap_or_default()
                        .to_string_lossy()
                        .into_owned(),
                    load(&p)?,
                ))
            })
            .collect::<Result<_, Fail>>()?,
        Some(path) => vec![(path.display().to_string(), load(path)?)],
        None => gen_corpus(a.seed, a.count, Limits::default())
            .into_iter()
            .map(|i| (i.name, i.cr))
            .collect(),
    };
    let opts = VerifyOptions {
        budget: a.budget,
        rule: a.value_rule,
        max_span: a.max_span,
        bundle_dir: a.bundle_dir.clone(),
    };
    let report = verify_all(&instances, &opts);
    match a.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Text => writeln!(out, "{report}")?,
    }
    Ok(if report.passed() {
        EXIT_OK
    } else if report.budget_exhausted() {
        EXIT_BUDGET
    } else {
        EXIT_CHECK
    })
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    fs::create_dir_all(&a.out)?;
    let corpus = gen_corpus(a.seed, a.count, Limits::default());
    let mut summary = Vec::new();
    for inst in &corpus {
        fs::write(
            a.out.join(format!("{}.crit", inst.name)),
            inst.cr.to_string(),
        )?;
        if inst.resamples > 0 {
            eprintln!("{}: {} candidates resampled", inst.name, inst.resamples);
        }
        summary.push(json!({
            "name": inst.name,
            "axioms": inst.cr.len(),
            "solutionIndex": inst.solution_index,
            "maxRank": inst.max_subst_rank,
            "resamples": inst.resamples,
        }));
    }
    match a.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &summary).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Text => {
            for inst in &corpus {
                writeln!(out, "{inst}")?;
            }
        }
    }
    Ok(EXIT_OK)
}
