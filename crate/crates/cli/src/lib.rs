//! Command-line front end for hogeom-core: evaluation, sweeps, region and c-function
//! queries, boundedness checks and the verification suites.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hogeom_core::taufun::Method;

pub use commands::{run_job, run_suites, Report};
pub use config::{Function, JobConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hogeom", version, about = "Heckman-Opdam and tau-ell hypergeometric functions for BC_r")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F or G over points or a grid
    Eval(JobArgs),
    /// Evaluate while varying ell or one lambda coordinate
    Sweep(JobArgs),
    /// Region membership of a multiplicity
    Regions(JobArgs),
    /// Harish-Chandra c-function
    Cfunc(JobArgs),
    /// Boundedness verdict and tube membership
    Bounded(JobArgs),
    /// Run verification suites
    Verify(JobArgs),
}

#[derive(Debug, Args, Default)]
pub struct JobArgs {
    /// JSON job file; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the effective job config and exit
    #[arg(long)]
    pub emit_config: bool,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Multiplicities s,m,l
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub ell: Option<f64>,
    /// Comma-separated reals or re:im pairs, or "rho"
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, value_enum)]
    pub function: Option<Function>,
    /// Evaluation point, comma-separated; repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// start:stop:count per axis, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// auto, hcseries, taylor or rankone
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub max_height: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    /// JSON instead of CSV or text
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest accepted error estimate (eval, sweep) or comparison slack (verify)
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Sweep parameter: ell or lambda.K
    #[arg(long)]
    pub param: Option<String>,
    /// Sweep range start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Suite name, comma-separated list, or all
    #[arg(long)]
    pub suite: Option<String>,
}

fn parse_method(s: &str) -> Result<Method, CliError> {
    match s {
        "auto" => Ok(Method::Auto),
        "hcseries" => Ok(Method::HcSeries),
        "taylor" => Ok(Method::Taylor),
        "rankone" => Ok(Method::RankOne),
        _ => Err(CliError::config(format!("unknown method {s:?}"))),
    }
}

impl JobArgs {
    /// Merges the flags over the job file (or defaults).
    pub fn to_config(&self, command: &str) -> Result<JobConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => JobConfig::load(p)?,
            None => JobConfig::default(),
        };
        if !cfg.command.is_empty() && cfg.command != command {
            return Err(CliError::config(format!("job file is for {:?}, not {command:?}", cfg.command)));
        }
        cfg.command = command.to_string();
        if self.rank.is_some() {
            cfg.rank = self.rank;
        }
        if let Some(m) = &self.m {
            cfg.m = Some(config::parse_mult(m)?);
        }
        if let Some(l) = self.ell {
            cfg.ell = l;
        }
        if let Some(l) = &self.lambda {
            config::parse_lambda(l).or_else(|e| if l.trim() == "rho" { Ok(Vec::new()) } else { Err(e) })?;
            cfg.lambda = Some(l.clone());
        }
        if let Some(f) = self.function {
            cfg.function = f;
        }
        if !self.x.is_empty() {
            cfg.x = self.x.iter().map(|s| config::parse_reals(s)).collect::<Result<_, _>>()?;
        }
        if self.grid.is_some() {
            cfg.grid = self.grid.clone();
        }
        if let Some(m) = &self.method {
            cfg.method = parse_method(m)?;
        }
        if self.max_height.is_some() {
            cfg.max_height = self.max_height;
        }
        if self.degree.is_some() {
            cfg.degree = self.degree;
        }
        cfg.json |= self.json;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.tolerance.is_some() {
            cfg.tolerance = self.tolerance;
        }
        if self.param.is_some() {
            cfg.param = self.param.clone();
        }
        if self.range.is_some() {
            cfg.range = self.range.clone();
        }
        if self.suite.is_some() {
            cfg.suite = self.suite.clone();
        }
        Ok(cfg)
    }
}

/// Worker count from HOGEOM_THREADS, else the machine default.
pub fn init_threads() {
    if let Some(n) = std::env::var("HOGEOM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses arguments and runs the job; returns the exit code, stdout and stderr text.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    let (name, a) = match &cli.command {
        Command::Eval(a) => ("eval", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Regions(a) => ("regions", a),
        Command::Cfunc(a) => ("cfunc", a),
        Command::Bounded(a) => ("bounded", a),
        Command::Verify(a) => ("verify", a),
    };
    let result = a.to_config(name).and_then(|cfg| {
        if a.emit_config {
            return Ok(Report {
                text: serde_json::to_string_pretty(&cfg).expect("serializable") + "\n",
                failed: false,
            });
        }
        run_job(&cfg)
    });
    match result {
        Ok(rep) => {
            let code = i32::from(rep.failed);
            match &a.out {
                Some(path) => match std::fs::write(path, &rep.text) {
                    Ok(()) => (code, String::new(), String::new()),
                    Err(e) => {
                        let e = CliError::from(e);
                        (e.exit_code(), String::new(), e.to_json() + "\n")
                    }
                },
                None => (code, rep.text, String::new()),
            }
        }
        Err(e) => (e.exit_code(), String::new(), e.to_json() + "\n"),
    }
}
