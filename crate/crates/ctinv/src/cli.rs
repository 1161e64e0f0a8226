//! Argument parsing and I/O for the `ctinv` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand};

use ctinv_core::ctcore::AngularSet;
use ctinv_core::forward::SampledPotential;

use crate::commands::{self, Output};
use crate::config::{self, JobConfig};
use crate::error::{exit, CliError};
use crate::formats::{fmt_list, read_phase_file, read_potential_file, Metadata};

#[derive(Debug, Parser)]
#[command(
    name = "ctinv",
    version,
    about = "Fixed-energy inverse scattering with the Cox-Thompson method"
)]
pub struct Cli {
    /// Configuration file of `key = value` lines [default: $CTINV_CONFIG]
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Override one configuration key; may be repeated
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Write the JSON report to FILE [default: stdout for roundtrip and
    /// check, stderr for invert]
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,

    /// More log output (-v info, -vv debug)
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reconstruct the potential from a phase-shift file
    Invert {
        /// Lines of `l delta`
        #[arg(long, value_name = "FILE")]
        phases: PathBuf,
        /// Radial cutoff of the kernel grid
        #[arg(long, value_name = "R")]
        lambda: Option<f64>,
        /// Step of the kernel grid
        #[arg(long, value_name = "H")]
        step: Option<f64>,
        /// Branches `k` tried for a single phase shift
        #[arg(long, value_name = "N")]
        k_range: Option<i32>,
        /// Potential CSV [default: stdout]
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Phase shifts of a sampled or Woods-Saxon potential
    Forward {
        /// `r,q` CSV, as written by `invert`
        #[arg(
            long,
            value_name = "FILE",
            required_unless_present = "ws",
            conflicts_with = "ws"
        )]
        potential: Option<PathBuf>,
        /// Woods-Saxon `-depth / (1 + exp((r - R) / a))`
        #[arg(long, value_name = "DEPTH,R,A", allow_hyphen_values = true)]
        ws: Option<String>,
        /// Highest partial wave
        #[arg(long, value_name = "N")]
        ellmax: u32,
        /// Phase table CSV [default: stdout]
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Invert, then recompute the phase shifts of each admissible potential
    Roundtrip {
        /// Lines of `l delta`
        #[arg(long, value_name = "FILE")]
        phases: PathBuf,
    },
    /// Admissibility of T = {L1, L2} over a box, for a two-element S
    Map {
        /// The two members of S
        #[arg(long, value_name = "L1,L2", allow_hyphen_values = true)]
        ells: String,
        /// `L1` range then `L2` range [default: map_box]
        #[arg(long = "box", value_name = "A,B,C,D", allow_hyphen_values = true)]
        bounds: Option<String>,
        /// Cell size [default: map_resolution]
        #[arg(long, value_name = "R")]
        res: Option<f64>,
        /// Worker threads [default: the `threads` key, else all cores]
        #[arg(long, value_name = "N")]
        threads: Option<usize>,
        /// Map CSV [default: stdout]
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Admissibility, asymptotics and moment of an explicit pair (S, T)
    Check {
        /// The input set S
        #[arg(long, value_name = "L,...", allow_hyphen_values = true)]
        ells: String,
        /// The shifted set T
        #[arg(long = "T", value_name = "L,...", allow_hyphen_values = true)]
        t: String,
    },
    /// Evaluate J, Y and the Riccati-Bessel functions at one point
    Specfun {
        /// Order
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        /// Argument
        #[arg(long)]
        x: f64,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    init_logging(cli.verbose);
    match run(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

fn load_config(cli: &Cli) -> Result<JobConfig, CliError> {
    let mut config = JobConfig::load(cli.config.as_deref())?;
    for o in &cli.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{o}`")))?;
        config
            .set(k.trim(), v.trim())
            .map_err(|m| CliError::Usage(format!("--set {o}: {m}")))?;
    }
    Ok(config)
}

fn list(flag: &str, v: &str) -> Result<Vec<f64>, CliError> {
    config::numbers(v).map_err(|m| CliError::Usage(format!("{flag}: {m}")))
}

/// Where the report goes when `--report` is absent.
#[derive(Clone, Copy)]
enum ReportStream {
    Stdout,
    Stderr,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = load_config(&cli)?;
    let report_path = cli.report.clone();
    let (output, out, stream) = match cli.command {
        Command::Invert {
            phases,
            lambda,
            step,
            k_range,
            out,
        } => {
            config.lambda = lambda.unwrap_or(config.lambda);
            config.h = step.unwrap_or(config.h);
            config.k_range = k_range.unwrap_or(config.k_range);
            config.validate()?;
            let input = read_phase_file(&phases)?;
            (
                commands::invert(&input, &config)?,
                out,
                ReportStream::Stderr,
            )
        }
        Command::Forward {
            potential,
            ws,
            ellmax,
            out,
        } => {
            config.validate()?;
            let (q, meta) = match (potential, ws) {
                (Some(path), _) => {
                    let (g, source) = read_potential_file(&path)?;
                    (SampledPotential::Grid(g), grid_metadata(&source))
                }
                (None, Some(ws)) => commands::woods_saxon(&ws)?,
                (None, None) => {
                    return Err(CliError::Usage("forward needs --potential or --ws".into()))
                }
            };
            (
                commands::forward(&q, meta, ellmax, &config)?,
                out,
                ReportStream::Stdout,
            )
        }
        Command::Roundtrip { phases } => {
            config.validate()?;
            let input = read_phase_file(&phases)?;
            (
                commands::roundtrip(&input, &config)?,
                None,
                ReportStream::Stdout,
            )
        }
        Command::Map {
            ells,
            bounds,
            res,
            threads,
            out,
        } => {
            if let Some(b) = bounds {
                config.map_box =
                    config::map_box(&b).map_err(|m| CliError::Usage(format!("--box: {m}")))?;
            }
            config.map_resolution = res.unwrap_or(config.map_resolution);
            config.threads = threads.or(config.threads);
            config.validate()?;
            let s = AngularSet::new(list("--ells", &ells)?)?;
            (commands::map(&s, &config)?.0, out, ReportStream::Stdout)
        }
        Command::Check { ells, t } => {
            config.validate()?;
            let s = AngularSet::new(list("--ells", &ells)?)?;
            let t = AngularSet::new(list("--T", &t)?)?;
            (
                commands::check(&s, &t, &config)?,
                None,
                ReportStream::Stdout,
            )
        }
        Command::Specfun { nu, x } => (commands::specfun(nu, x)?, None, ReportStream::Stdout),
    };
    emit(output, out.as_deref(), report_path.as_deref(), stream)
}

/// The sampled potential's provenance, carried into the phase table.
fn grid_metadata(source: &Metadata) -> Metadata {
    let mut meta = Metadata::new();
    meta.push("potential", "sampled");
    for key in ["S", "T", "lambda", "h"] {
        if let Some(v) = source.get(key) {
            meta.push(&format!("source_{key}"), v);
        }
    }
    meta
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn write_stream(stream: ReportStream, bytes: &[u8]) -> Result<(), CliError> {
    let res = match stream {
        ReportStream::Stdout => std::io::stdout().lock().write_all(bytes),
        ReportStream::Stderr => std::io::stderr().lock().write_all(bytes),
    };
    res.map_err(|e| {
        CliError::io(
            Path::new(if matches!(stream, ReportStream::Stdout) {
                "<stdout>"
            } else {
                "<stderr>"
            }),
            e,
        )
    })
}

/// Writes every product, then returns the command's status.
fn emit(
    output: Output,
    out: Option<&Path>,
    report: Option<&Path>,
    stream: ReportStream,
) -> Result<(), CliError> {
    if let Some(csv) = &output.csv {
        let text = csv.to_text();
        match out {
            Some(path) => write_file(path, text.as_bytes())?,
            None => write_stream(ReportStream::Stdout, text.as_bytes())?,
        }
    }
    if let Some(r) = &output.report {
        let json = r.to_json();
        match report {
            Some(path) => write_file(path, json.as_bytes())?,
            None => write_stream(stream, json.as_bytes())?,
        }
        if let Some(t) = &r.chosen {
            log::info!("chosen T = {}", fmt_list(t));
        }
    }
    if let Some(text) = &output.text {
        write_stream(ReportStream::Stdout, text.as_bytes())?;
    }
    output.status
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_lists_parse() {
        let cli = Cli::try_parse_from(["ctinv", "check", "--ells", "0", "--T", "-0.4"]).unwrap();
        assert!(matches!(cli.command, Command::Check { ref t, .. } if t == "-0.4"));
        let cli = Cli::try_parse_from([
            "ctinv",
            "map",
            "--ells",
            "1,3",
            "--box",
            "-0.45,6,-0.45,6",
            "--res",
            "0.1",
        ]);
        assert!(cli.is_ok());
        assert!(Cli::try_parse_from(["ctinv", "forward", "--ellmax", "2"]).is_err());
    }
}
