//! Command-line surface of hypverify: task construction from flags and
//! bit-stable reports.

pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypverify::exactnum::{parse_rational, rat, Rational};
use hypverify::hyper::Convention;
use hypverify::identities::{registry, Bindings, Identity, Mode};
use hypverify::realnum::Precision;
use hypverify::verify::{find_identity, plan, run_tasks, Report, Selection, Settings, Verdict};

pub const MIN_PRECISION: u32 = 30;

#[derive(Debug, Parser)]
#[command(name = "hypverify", version, about = "Verify hypergeometric identities exactly and numerically")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the registry as a table.
    List {
        #[arg(long)]
        id: Option<String>,
    },
    /// Verify selected identities.
    Verify(VerifyArgs),
    /// Verify every identity, variant, mode and proof chain.
    VerifyAll(RunArgs),
    /// Write the registry as JSON.
    DumpRegistry {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = DumpFormat::Json)]
        format: DumpFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpFormat {
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Naive,
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Numeric,
    Summation,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Highest series order compared in exact mode.
    #[arg(long, default_value_t = 40)]
    pub order: usize,
    /// Significant decimal digits for numeric comparison.
    #[arg(long, default_value_t = 40)]
    pub precision: u32,
    #[arg(long, default_value = "1e-30")]
    pub tol: String,
    /// Comma-separated rationals.
    #[arg(long, default_value = "1/4,1/2,1,2")]
    pub grid: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock time per result. Reports then differ between runs.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity ids, repeated or comma-separated; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub id: Vec<String>,
    #[arg(long)]
    pub variant: Option<String>,
    /// Fixed binding `name=value` instead of sampling; repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    pub bind: Vec<String>,
    /// Also run the proof-chain checkpoints of theorems that have them.
    #[arg(long)]
    pub chain: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

/// Validated settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub settings: Settings,
    pub selection: Selection,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timings: bool,
}

fn parse_grid(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(|t| parse_rational(t).ok_or_else(|| format!("bad grid point {t:?}")))
        .collect()
}

fn parse_bindings(items: &[String]) -> Result<Option<Bindings>, String> {
    if items.is_empty() {
        return Ok(None);
    }
    let mut b = Bindings::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("binding {item:?} is not name=value"))?;
        let q = parse_rational(v).ok_or_else(|| format!("binding {item:?} has no rational value"))?;
        if b.insert(k.trim().to_string(), q).is_some() {
            return Err(format!("parameter {} bound twice", k.trim()));
        }
    }
    Ok(Some(b))
}

fn check_bindings(ids: &[String], b: &Bindings) -> Result<(), String> {
    if ids.is_empty() {
        return Err("--bind needs --id".into());
    }
    for id in ids {
        let identity = find_identity(id).map_err(|e| e.to_string())?;
        for p in &identity.params {
            if !b.contains_key(&p.name) {
                return Err(format!("{id}: missing binding for {}", p.name));
            }
        }
        for k in b.keys() {
            if !identity.params.iter().any(|p| &p.name == k) {
                return Err(format!("{id}: unknown parameter {k}"));
            }
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn build(run: &RunArgs, ids: Vec<String>, variant: Option<String>, bind: &[String], chains: bool) -> Result<Self, String> {
        if run.precision < MIN_PRECISION {
            return Err(format!("precision must be at least {MIN_PRECISION}"));
        }
        if run.order < 1 {
            return Err("order must be at least 1".into());
        }
        let tolerance = parse_rational(&run.tol).ok_or_else(|| format!("bad tolerance {:?}", run.tol))?;
        if tolerance <= rat(0, 1) {
            return Err("tolerance must be positive".into());
        }
        let precision = Precision::new(run.precision).map_err(|e| e.to_string())?;
        let grid = parse_grid(&run.grid)?;
        let bindings = parse_bindings(bind)?;
        if let Some(b) = &bindings {
            check_bindings(&ids, b)?;
        }
        for id in &ids {
            find_identity(id).map_err(|e| e.to_string())?;
        }
        Ok(RunConfig {
            settings: Settings { order: run.order, precision, tolerance, grid, ..Settings::default() },
            selection: Selection {
                ids,
                variant,
                convention: run.convention.map(|c| match c {
                    ConventionArg::Naive => Convention::Naive,
                    ConventionArg::Limit => Convention::Limit,
                }),
                mode: run.mode.map(|m| match m {
                    ModeArg::Exact => Mode::Exact,
                    ModeArg::Numeric => Mode::Numeric,
                    ModeArg::Summation => Mode::Summation,
                }),
                bindings,
                chains,
                seed: run.seed,
                trials: run.trials,
            },
            out: run.out.clone(),
            format: run.format,
            timings: run.timings,
        })
    }
}

/// Runs a configuration and returns the reports in canonical order.
pub fn execute(cfg: &RunConfig) -> Result<Vec<Report>, String> {
    let tasks = plan(&cfg.selection).map_err(|e| e.to_string())?;
    Ok(run_tasks(&tasks, &cfg.settings, cfg.timings))
}

pub fn render(cfg: &RunConfig, reports: &[Report]) -> String {
    match cfg.format {
        Format::Json => output::reports_json(cfg, reports),
        Format::Csv => output::reports_csv(cfg, reports),
    }
}

fn summary(reports: &[Report]) -> String {
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    format!(
        "{} results: {} PASS, {} FAIL, {} SKIP, {} ERROR",
        reports.len(),
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Skip),
        count(Verdict::Error)
    )
}

fn list_rows(reg: &[Identity]) -> String {
    let mut s = format!("{:<4} {:<9} {:<22} {:<34} {}\n", "ID", "KIND", "MODES", "VARIANTS", "TITLE / CONSTRAINTS");
    for i in reg {
        let modes: Vec<&str> = i.modes.iter().map(|m| m.name()).collect();
        let variants: Vec<&str> = i.variants.iter().map(|v| v.name.as_str()).collect();
        let constraints: Vec<&str> = i.constraints.iter().map(|c| c.label.as_str()).collect();
        s.push_str(&format!(
            "{:<4} {:<9} {:<22} {:<34} {} [{}]\n",
            i.id,
            i.kind.name(),
            modes.join(","),
            variants.join(","),
            i.title,
            constraints.join("; ")
        ));
    }
    s
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn run_config(cfg: RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let reports = execute(&cfg)?;
    emit(&cfg.out, &render(&cfg, &reports), out)?;
    let _ = writeln!(err, "{}", summary(&reports));
    Ok(hypverify::verify::exit_code(&reports))
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    match cli.command {
        Command::List { id } => {
            let reg = registry();
            let rows = match id {
                Some(id) => list_rows(std::slice::from_ref(find_identity(&id).map_err(|e| e.to_string())?)),
                None => list_rows(reg),
            };
            emit(&None, &rows, out)?;
            Ok(0)
        }
        Command::DumpRegistry { out: path, format: DumpFormat::Json } => {
            emit(&path, &output::registry_json(registry()), out)?;
            Ok(0)
        }
        Command::Verify(a) => {
            let cfg = RunConfig::build(&a.run, a.id, a.variant, &a.bind, a.chain)?;
            run_config(cfg, out, err)
        }
        Command::VerifyAll(run) => {
            let cfg = RunConfig::build(&run, Vec::new(), None, &[], true)?;
            run_config(cfg, out, err)
        }
    }
}

/// Entry point shared by the binary and the tests. Returns the exit code:
/// 0 when nothing failed, 1 on any FAIL or ERROR, 2 on a configuration error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
