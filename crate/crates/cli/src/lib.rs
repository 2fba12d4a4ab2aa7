//! Command-line front end: flag parsing, config resolution, artifact framing.

pub mod artifact;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use lacunary_core::search::{MRule, SweepFamily};
use lacunary_core::Exponent;
use serde_json::json;

pub use artifact::{parse_artifact_config, render};
pub use config::{parse_exponent, parse_n_grid, parse_spectrum, Command, Format, PartialConfig, RunConfig};
pub use error::{CliError, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION};

/// A whole degree list given as one flag value.
type Degrees = Vec<u32>;

#[derive(Parser, Debug)]
#[command(name = "lacunary", version, about = "Nikolskii-type experiments for lacunary spherical polynomials")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,

    /// JSON file with default values; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Sphere S^d.
    #[arg(long)]
    pub d: Option<u32>,

    /// Gap parameter; spectra need gaps ≥ 2l+1.
    #[arg(long)]
    pub l: Option<u32>,

    #[arg(long, value_parser = parse_exponent)]
    pub p: Option<Exponent>,

    /// `inf` for the sup norm.
    #[arg(long, value_parser = parse_exponent)]
    pub q: Option<Exponent>,

    /// Comma-separated degrees, e.g. `0,3,6`.
    #[arg(long, value_parser = parse_spectrum)]
    pub spectrum: Option<Degrees>,

    /// Degree grid: `lo:hi:dyadic`, `lo:hi:step`, or a comma list.
    #[arg(long = "n", value_parser = parse_n_grid)]
    pub n_grid: Option<Degrees>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub grid_size: Option<usize>,

    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// single_harmonic, lacunary_random or lacunary_extremal.
    #[arg(long, value_parser = config::parse_family)]
    pub family: Option<SweepFamily>,

    /// `max-packed` or a fixed m.
    #[arg(long = "m", value_parser = config::parse_m_rule)]
    pub m_rule: Option<MRule>,

    #[arg(long)]
    pub restarts: Option<usize>,

    #[arg(long)]
    pub budget: Option<usize>,

    /// Search full S² blocks (d = 2).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub s2: Option<bool>,

    /// Write the artifact here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Args {
    fn flags(&self) -> PartialConfig {
        PartialConfig {
            d: self.d,
            l: self.l,
            p: self.p,
            q: self.q,
            spectrum: self.spectrum.clone(),
            n_grid: self.n_grid.clone(),
            seed: self.seed,
            grid_size: self.grid_size,
            tol: self.tol,
            format: self.format,
            family: self.family,
            m_rule: self.m_rule,
            restarts: self.restarts,
            budget: self.budget,
            s2: self.s2,
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let defaults = match &self.config {
            Some(path) => PartialConfig::from_json(&std::fs::read_to_string(path)?)?,
            None => PartialConfig::default(),
        };
        defaults.overlay(self.flags()).resolve(self.command)
    }
}

/// Runs a resolved config to the artifact text.
pub fn run_to_string(config: &RunConfig) -> Result<String, CliError> {
    render(config, &commands::run(config)?)
}

fn run_args(args: &Args, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = args.resolve()?;
    let text = run_to_string(&config)?;
    match &args.output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `argv`, runs, and returns the exit status. Errors go to `stderr` as JSON.
pub fn execute<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let err = CliError::validation("usage", e.kind().to_string())
                .with_context(json!({ "detail": e.to_string().trim_end() }));
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit;
        }
    };
    match run_args(&args, stdout) {
        Ok(()) => EXIT_OK,
        Err(mut err) => {
            if err.context.is_null() {
                err.context = json!({ "command": args.command.as_str() });
            }
            let _ = writeln!(stderr, "{}", err.to_json());
            err.exit
        }
    }
}
