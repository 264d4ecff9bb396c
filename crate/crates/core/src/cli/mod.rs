//! Command-line front end. Everything here is a thin layer over the
//! library; [`run`] is what the binary calls.

mod commands;

use crate::error::Error;
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "coprime", version, about = "Random coprime colourings of lattices")]
pub struct Cli {
    /// Plain-text `key = value` file; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for Monte Carlo trials (outputs do not depend on it)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct WindowArgs {
    /// Per-axis point counts, comma separated
    #[arg(long, value_delimiter = ',', default_value = "512,512")]
    pub extents: Vec<u64>,
    /// Lowest corner, comma separated (defaults to the origin)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub origin: Option<Vec<i64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a coset configuration and write it with its PGM colouring
    Sample {
        #[arg(long, default_value = "z2")]
        lattice: String,
        /// Truncation: primes up to P are used
        #[arg(long = "p", default_value_t = 997)]
        p_cut: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        window: WindowArgs,
        /// Colour by the gcd oracle from base point X, e.g. `X=(3,4)`
        #[arg(long, allow_hyphen_values = true)]
        oracle: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Render membership in B_p for up to three primes as a PPM
    Layers {
        #[arg(long, default_value = "z2")]
        lattice: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        #[arg(long = "p", default_value_t = 997)]
        p_cut: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Estimate the horizontal crossing probability of n rows by x columns
    Crossing {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Truncation; by default chosen so the bias is below a tenth of the SE
        #[arg(long = "p")]
        p_cut: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rigorous second-moment bound on r_n(x)
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        x: u64,
        #[arg(long = "p", default_value_t = 10_000)]
        p_cut: u64,
    },
    /// Annulus event frequency at scale k with per-sample cluster checks
    Annulus {
        #[arg(long)]
        k: i64,
        #[arg(long, default_value = "0")]
        margin: i64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long = "p")]
        p_cut: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Staircase events A_n for n in [n-min, n-max]
    Staircase {
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long = "p")]
        p_cut: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster statistics of one sampled colouring
    Clusters {
        #[arg(long, default_value = "z2")]
        lattice: String,
        #[arg(long = "p", default_value_t = 997)]
        p_cut: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, value_enum, default_value = "white")]
        colour: Colour,
    },
    /// Inspect a lattice: `info` or `dump` of the minimal vectors
    Lattice {
        #[arg(value_enum)]
        action: LatticeAction,
        #[arg(long)]
        lattice: String,
    },
    /// The extended binary Golay code
    Golay {
        #[arg(long, value_enum, default_value = "weights")]
        dump: GolayDump,
    },
    /// Check the structural hypotheses for a lattice and its minimal vectors
    Check {
        #[arg(long)]
        lattice: String,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        /// Radius certified for slice connectivity
        #[arg(long, default_value_t = 2)]
        radius: i64,
        /// Search radius for slice paths (defaults to the radius)
        #[arg(long)]
        search: Option<i64>,
    },
    /// Recover candidate cosets B_p from a PGM colouring
    Infer {
        #[arg(long)]
        pgm: PathBuf,
        #[arg(long, default_value_t = 13)]
        p_max: u64,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum Colour {
    White,
    Black,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum LatticeAction {
    Info,
    Dump,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum GolayDump {
    Weights,
    Generators,
    Codewords,
    Octads,
    Dodecads,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum TheoremArg {
    Setup,
    Setupblack,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Unsupported(_) => EXIT_DOMAIN,
        Error::Parse { .. } => EXIT_PARSE,
        Error::Io(_) => EXIT_IO,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> crate::Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| crate::error::parse_err(i + 1, format!("expected key = value, found '{line}'")))?;
        let k = k.trim();
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(crate::error::parse_err(i + 1, format!("bad key '{k}'")));
        }
        out.push((k.replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Appends file settings as flags unless the command line already has them.
fn merge_config(args: Vec<String>) -> crate::Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)?;
    let mut merged = args.clone();
    for (k, v) in parse_config_file(&text)? {
        if k == "config" {
            continue;
        }
        let flag = format!("--{k}");
        let given = args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !given {
            match v.as_str() {
                "true" => merged.push(flag),
                "false" => {}
                _ => merged.push(format!("{flag}={v}")),
            }
        }
    }
    Ok(merged)
}

/// Runs the CLI with `args` (including the program name) and returns the
/// exit code.
pub fn run(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = write!(err, "{}", e.render());
            }
            return code;
        }
    };
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let result = match cli.workers {
        Some(0) => Err(Error::Domain("workers must be >= 1".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))
            .and_then(|pool| pool.install(|| commands::dispatch(&cli.command, &mut o, &mut e))),
        None => commands::dispatch(&cli.command, &mut o, &mut e),
    };
    let _ = out.write_all(&o);
    let _ = err.write_all(&e);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
