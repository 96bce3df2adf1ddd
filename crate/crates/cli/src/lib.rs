//! Configuration, report writing and command drivers behind the `magres` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Verdict;
use config::RunConfig;
use error::CliResult;
use output::Reporter;

#[derive(Debug, Parser)]
#[command(name = "magres", version, about = "Resolvent laboratory for magnetic Schrodinger operators with complex potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; omitted keys take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed, overriding the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Do not read or write the matrix cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Standing conditions of the model on a radial sample.
    AuditModel,
    /// Symbol classes of the truncated Hessian and the ratio symbol.
    AuditSymbols,
    /// Weight inequality, weight bounds, localizer and ellipticity audits.
    AuditWeight,
    /// Wick identities, normalization and Weyl composition slopes.
    AuditWick,
    /// Smallest singular values of P - z across h and z.
    Sweep,
    /// Every audit followed by the sweep.
    ReportAll,
    /// Print the annotated default configuration.
    ConfigReference,
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

impl Cli {
    pub fn resolve_config(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if self.no_cache {
            cfg.cache = false;
        }
        Ok(cfg)
    }
}

fn dispatch(command: Command, cfg: &RunConfig, rep: &Reporter) -> CliResult<Verdict> {
    Ok(match command {
        Command::AuditModel => commands::audit_model(cfg, rep)?,
        Command::AuditSymbols => commands::audit_symbols(cfg, rep)?,
        Command::AuditWeight => commands::audit_weight(cfg, rep)?,
        Command::AuditWick => commands::audit_wick(cfg, rep)?,
        Command::Sweep => commands::run_sweep(cfg, rep)?,
        Command::ReportAll => {
            let mut verdict = Verdict::Pass;
            for c in [Command::AuditModel, Command::AuditSymbols, Command::AuditWeight, Command::AuditWick, Command::Sweep] {
                verdict = verdict & dispatch(c, cfg, rep)?;
            }
            verdict
        }
        Command::ConfigReference => unreachable!("handled before a reporter exists"),
    })
}

/// Runs one command and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    if cli.command == Command::ConfigReference {
        print!("{}", config::reference());
        return EXIT_PASS;
    }
    let result = cli.resolve_config().and_then(|cfg| {
        let rep = Reporter::new(&cfg.out, &cfg.hash(), cfg.seed)?;
        dispatch(cli.command, &cfg, &rep)
    });
    match result {
        Ok(Verdict::Pass) => EXIT_PASS,
        Ok(Verdict::Fail) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
