mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{FileConfig, Overrides, RunConfig};

/// Multi-species q-boson process: identity checks, rates, simulation.
#[derive(Parser, Debug)]
#[command(name = "qboson", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Number of particles.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Number of colors N.
    #[arg(long, global = true)]
    n_colors: Option<u8>,
    /// Deformation parameter s, with q = s^2 (e.g. 1/2).
    #[arg(long, global = true, allow_hyphen_values = true)]
    s: Option<String>,
    /// Deformation parameter alpha, rational or "qboson" for -(1-q).
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Shorthand for --alpha qboson.
    #[arg(long, global = true)]
    q_boson: bool,
    /// Coordinates range over [-window, window].
    #[arg(long, global = true)]
    window: Option<i64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Simulation horizon.
    #[arg(long, global = true, allow_hyphen_values = true)]
    t_end: Option<f64>,
    /// Jump depth of the truncated generator.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file with the same keys (n_colors, t_end, ...); flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the exact identity suite.
    Verify {
        #[arg(long, hide = true)]
        corrupt_rates: bool,
    },
    /// Jump rates out of a configuration such as "2:1,2;-1:4".
    Rates { configuration: String },
    /// Simulate one trajectory and write it as JSON lines.
    Simulate {
        /// Initial configuration; defaults to k particles at the origin.
        configuration: Option<String>,
    },
    /// Eigenvalue residuals of a Bethe function.
    Eigencheck {
        /// Spectral parameters, comma separated; random when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Option<Vec<String>>,
        /// Use the one-dimensional trivial module instead of the color module.
        #[arg(long)]
        trivial: bool,
    },
    /// Export the truncated generator as CSV plus a JSON state index.
    Generator {
        configuration: String,
        #[arg(long, default_value_t = qboson_core::qboson::DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
}

fn run(cli: Cli) -> Result<(), commands::CliError> {
    let c = cli.common;
    let file = match &c.config {
        Some(p) => FileConfig::load(p).map_err(commands::CliError::Usage)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        k: c.k,
        n_colors: c.n_colors,
        s: c.s,
        alpha: c.alpha,
        q_boson: c.q_boson,
        window: c.window,
        seed: c.seed,
        t_end: c.t_end,
        depth: c.depth,
        out: c.out,
    };
    let cfg = RunConfig::resolve(file, flags).map_err(commands::CliError::Usage)?;
    match cli.command {
        Command::Verify { corrupt_rates } => commands::verify(&cfg, corrupt_rates),
        Command::Rates { configuration } => commands::rates(&cfg, &configuration),
        Command::Simulate { configuration } => commands::simulate(&cfg, configuration.as_deref()),
        Command::Eigencheck { z, trivial } => commands::eigencheck(&cfg, z.as_deref(), trivial),
        Command::Generator {
            configuration,
            state_cap,
        } => commands::generator(&cfg, &configuration, state_cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
