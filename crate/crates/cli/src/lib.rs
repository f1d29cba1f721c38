//! Command-line front end: surface presets, config files, verification
//! suites and reports.
//!
//! Exit codes: 0 pass, 1 usage or config error, 2 mathematical rejection,
//! 3 tolerance failure.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_separate, cmd_surface_info, cmd_verify, Failure, Outcome};
use crate::config::{RawConfig, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Usage,
    Rejected,
    ToleranceFailure,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Usage => 1,
            Status::Rejected => 2,
            Status::ToleranceFailure => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Usage => "usage error",
            Status::Rejected => "rejected",
            Status::ToleranceFailure => "tolerance failure",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dirac2d", version, about = "Verify Dirac symmetry operators and separated solutions on Liouville surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build first- and second-order symmetry operators and check [K, D] = 0.
    Verify(RunArgs),
    /// Assemble the separated solution psi = (a1 b1, a2 b2) and check it.
    Separate(RunArgs),
    /// Curvature, Killing and integrability statistics.
    SurfaceInfo(RunArgs),
}

/// Flags mirror config keys and override them.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat key = value config file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// surface.preset: plane-cartesian, plane-polar, plane-parabolic, sphere, pseudosphere, torus, ellipsoid.
    #[arg(long)]
    pub preset: Option<String>,
    /// surface.A: A(u).
    #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
    pub a: Option<String>,
    /// surface.B: B(v).
    #[arg(long = "B", value_name = "EXPR", allow_hyphen_values = true)]
    pub b: Option<String>,
    /// surface.beta: beta(v), with A = 0 and B = beta^-2.
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// bind.<name>: parameter value, repeatable.
    #[arg(long = "bind", value_name = "NAME=VALUE")]
    pub bind: Vec<String>,
    /// jet.order
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub u0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub u1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v1: Option<f64>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    /// tol.residual
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// mass
    #[arg(long = "m", alias = "mass", allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Separation eigenvalue; complex values as `0.5+0.1i`.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: Option<String>,
    /// c1,c2,d1,d2
    #[arg(long, allow_hyphen_values = true)]
    pub amplitudes: Option<String>,
    /// sample.points
    #[arg(long)]
    pub points: Option<usize>,
    /// sample.fields
    #[arg(long)]
    pub fields: Option<usize>,
    /// pauli or separation
    #[arg(long)]
    pub representation: Option<String>,
    /// special.k
    #[arg(long, allow_negative_numbers = true)]
    pub special_k: Option<f64>,
    /// special.a: a0,a1,a2,a3
    #[arg(long, allow_hyphen_values = true)]
    pub special_a: Option<String>,
    /// special.b: b0,b1,b2,b3 (defaults to case II)
    #[arg(long, allow_hyphen_values = true)]
    pub special_b: Option<String>,
    /// Also write the report here.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Result<Vec<(String, String)>, String> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        put("surface.preset", self.preset.clone());
        put("surface.A", self.a.clone());
        put("surface.B", self.b.clone());
        put("surface.beta", self.beta.clone());
        put("jet.order", self.order.map(|x| x.to_string()));
        put("grid.u0", self.u0.map(|x| x.to_string()));
        put("grid.u1", self.u1.map(|x| x.to_string()));
        put("grid.v0", self.v0.map(|x| x.to_string()));
        put("grid.v1", self.v1.map(|x| x.to_string()));
        put("grid.nu", self.nu.map(|x| x.to_string()));
        put("grid.nv", self.nv.map(|x| x.to_string()));
        put("tol.residual", self.tol.map(|x| x.to_string()));
        put("seed", self.seed.map(|x| x.to_string()));
        put("mass", self.mass.map(|x| x.to_string()));
        put("mu", self.mu.clone());
        put("mu1", self.mu1.clone());
        put("amplitudes", self.amplitudes.clone());
        put("sample.points", self.points.map(|x| x.to_string()));
        put("sample.fields", self.fields.map(|x| x.to_string()));
        put("representation", self.representation.clone());
        put("special.k", self.special_k.map(|x| x.to_string()));
        put("special.a", self.special_a.clone());
        put("special.b", self.special_b.clone());
        put("report", self.report.as_ref().map(|p| p.display().to_string()));
        for b in &self.bind {
            let (name, value) = b.split_once('=').ok_or_else(|| format!("--bind expects NAME=VALUE, got `{b}`"))?;
            out.push((format!("bind.{}", name.trim()), value.trim().to_string()));
        }
        Ok(out)
    }

    /// Config file first, then flags.
    pub fn to_config(&self) -> Result<RunConfig, String> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                RawConfig::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => RawConfig::default(),
        };
        for (k, v) in self.overrides()? {
            raw.set(&k, &v).map_err(|e| e.to_string())?;
        }
        RunConfig::from_raw(&raw).map_err(|e| e.to_string())
    }
}

/// What the binary prints and how it exits.
#[derive(Debug)]
pub struct RunOutput {
    pub status: Status,
    /// Report or help text, for stdout.
    pub stdout: String,
    /// Error messages, for stderr.
    pub stderr: String,
}

impl RunOutput {
    fn usage(msg: String) -> Self {
        RunOutput { status: Status::Usage, stdout: String::new(), stderr: msg }
    }
}

type CommandFn = fn(&RunConfig) -> Result<Outcome, Failure>;

pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    RunOutput { status: Status::Pass, stdout: text, stderr: String::new() }
                }
                _ => RunOutput::usage(text),
            };
        }
    };
    let (args, cmd): (&RunArgs, CommandFn) = match &cli.command {
        Command::Verify(a) => (a, cmd_verify),
        Command::Separate(a) => (a, cmd_separate),
        Command::SurfaceInfo(a) => (a, cmd_surface_info),
    };
    let cfg = match args.to_config() {
        Ok(c) => c,
        Err(e) => return RunOutput::usage(format!("error: {e}\n")),
    };
    match cmd(&cfg) {
        Ok(outcome) => {
            let text = outcome.report.render();
            let mut stderr = String::new();
            if let Some(path) = &cfg.report {
                if let Err(e) = std::fs::write(path, &text) {
                    return RunOutput::usage(format!("error: cannot write report {}: {e}\n", path.display()));
                }
            }
            if outcome.status != Status::Pass {
                if let Some(reason) = outcome.report.get("reason") {
                    stderr = format!("{}: {reason}\n", outcome.status.label());
                }
            }
            RunOutput { status: outcome.status, stdout: text, stderr }
        }
        Err(f) => RunOutput { status: f.status, stdout: String::new(), stderr: format!("error: {}\n", f.reason) },
    }
}
