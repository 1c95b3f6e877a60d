//! Batch front-end for cotor-core.

pub mod cache;
pub mod commands;
pub mod report;

use clap::{Parser, Subcommand};

use commands::{Command, ConfigError, Session};
use report::{exit_code, Check, Format, RunConfig, EXIT_CONFIG};

#[derive(Parser, Debug)]
#[command(name = "cotor", version, about = "Exact Cotor computations over F3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,

    /// Largest total degree (default 80, or 60 for spectral).
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    #[arg(long, global = true, env = "COTOR_CACHE_DIR")]
    pub cache_dir: Option<String>,

    #[arg(long, global = true, default_value = "weight_s3",
          value_parser = ["weight_s3", "may_s5", "trivial"])]
    pub scheme: String,

    /// Page index, or `inf`.
    #[arg(long, global = true, default_value = "1")]
    pub page: String,

    #[arg(long, global = true, default_value = "all", value_parser = ["i", "ii", "iii", "all"])]
    pub group: String,

    /// `audit`, or `force:<rule>` with rule one of total-degree-parity, constant-plus, constant-minus.
    #[arg(long, global = true, default_value = "audit")]
    pub convention: String,

    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Candidate sign rules, x26, and the generator sign search.
    Audit,
    /// Enumerated additive basis per degree.
    Basis,
    /// Differential matrix sizes and ranks.
    Diff,
    /// dim H^n against the closed-form series.
    Homology,
    /// Coefficients of the closed-form series.
    Poincare,
    /// Relations and coboundary witnesses.
    Verify,
    /// Linear relations on a support of monomials.
    Discover {
        #[arg(long)]
        support: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        id: Option<String>,
    },
    /// Derivative table rows against machine ∂ and ∂².
    Table40,
    /// Spectral sequence page dimensions.
    Spectral,
    /// Ideal and splitting checks on the basis.
    IdealCheck,
}

impl Cmd {
    fn to_command(&self) -> Command {
        match self {
            Cmd::Audit => Command::Audit,
            Cmd::Basis => Command::Basis,
            Cmd::Diff => Command::Diff,
            Cmd::Homology => Command::Homology,
            Cmd::Poincare => Command::Poincare,
            Cmd::Verify => Command::Verify,
            Cmd::Discover { support, degree, id } => Command::Discover {
                support: support.clone(),
                degree: *degree,
                id: id.clone(),
            },
            Cmd::Table40 => Command::Table40,
            Cmd::Spectral => Command::Spectral,
            Cmd::IdealCheck => Command::IdealCheck,
        }
    }
}

pub fn config_of(cli: &Cli) -> RunConfig {
    let default_max = if matches!(cli.command, Cmd::Spectral) { 60 } else { 80 };
    RunConfig {
        max_degree: cli.max_degree.unwrap_or(default_max),
        scheme: cli.scheme.clone(),
        page: cli.page.clone(),
        group: cli.group.clone(),
        format: cli.format,
        cache_dir: cli.cache_dir.clone(),
        convention: cli.convention.clone(),
        jobs: cli.jobs,
    }
}

/// Runs one command; returns the rendered report (if any) and the exit code.
pub fn run(cli: &Cli) -> (Option<String>, i32) {
    let config = config_of(cli);
    if let Some(k) = config.jobs {
        if k == 0 {
            eprintln!("error: --jobs must be positive");
            return (None, EXIT_CONFIG);
        }
        // a second global init in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let outcome = Session::new(config.clone()).and_then(|mut s| s.run(&cli.command.to_command()));
    match outcome {
        Ok(report) => {
            let code = exit_code(false, &report.checks);
            (Some(report.render(&config)), code)
        }
        Err(e) => {
            let is_config = e.downcast_ref::<ConfigError>().is_some();
            eprintln!("error: {e}");
            let failed = [Check::new(e.to_string(), false)];
            (None, exit_code(is_config, &failed))
        }
    }
}
