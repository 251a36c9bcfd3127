use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use rand::Rng;

use qboson_core::algebra::{Hecke, ModuleVector, ScalarSpec};
use qboson_core::bethe::{eigencheck as run_eigencheck, EigenMode, SpectralPoint};
use qboson_core::lattice::Window;
use qboson_core::qboson::{
    build_generator, exit_rate, simulate_with, trajectory_rng, transitions, Configuration,
    QBosonError, QBosonParams,
};
use qboson_core::scalar::{Rational, RealScalar};
use qboson_core::verify::{run_suite, SuiteConfig};

use crate::config::{parse_rational, RunConfig};

/// Residual bound of the eigencheck command.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or input literals.
    Usage(String),
    /// An identity or tolerance check failed.
    Failed(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn io_error(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn exact_params(cfg: &RunConfig) -> Result<QBosonParams<Rational>, CliError> {
    QBosonParams::new(cfg.s.clone()).map_err(usage)
}

fn float_params(cfg: &RunConfig) -> Result<QBosonParams<f64>, CliError> {
    exact_params(cfg)?;
    QBosonParams::new(cfg.s.to_f64()).map_err(usage)
}

fn parse_configuration(cfg: &RunConfig, literal: &str) -> Result<Configuration, CliError> {
    match cfg.n_colors {
        Some(n) => Configuration::parse(literal, n),
        None => literal.parse(),
    }
    .map_err(usage)
}

pub fn verify(cfg: &RunConfig, corrupt_rates: bool) -> Result<(), CliError> {
    if cfg.k < 2 {
        return Err(CliError::Usage(format!(
            "verify needs k >= 2, got {}",
            cfg.k
        )));
    }
    let suite = SuiteConfig {
        k: cfg.k,
        n_colors: cfg.colors(),
        s: cfg.s.clone(),
        alpha: cfg.alpha_value(),
        window: cfg.window,
        corrupt_rates,
    };
    println!(
        "k={} N={} s={} alpha={} window=[-{w},{w}]",
        suite.k,
        suite.n_colors,
        suite.s,
        suite.alpha,
        w = suite.window
    );
    let checks = run_suite(&suite);
    for c in &checks {
        println!("{c}");
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name.as_str())
        .collect();
    println!(
        "{} of {} identities hold",
        checks.len() - failed.len(),
        checks.len()
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("failed: {}", failed.join("; "))))
    }
}

pub fn rates(cfg: &RunConfig, literal: &str) -> Result<(), CliError> {
    let params = exact_params(cfg)?;
    let state = parse_configuration(cfg, literal)?;
    println!(
        "configuration {state} (k={}, N={}, q={})",
        state.k(),
        state.n_colors(),
        params.q
    );
    println!("{:>6} {:>6} {:>12}  target", "site", "color", "rate");
    for t in transitions(&params, &state) {
        println!(
            "{:>6} {:>6} {:>12}  {}",
            t.source_site,
            t.moved_color,
            t.rate.to_string(),
            t.target
        );
    }
    let parts: Vec<String> = state
        .sites()
        .iter()
        .rev()
        .map(|(site, counts)| format!("[{}]_q@{site}", counts.iter().sum::<u32>()))
        .collect();
    println!(
        "exit rate {} = {}",
        parts.join(" + "),
        exit_rate(&params, &state)
    );
    Ok(())
}

fn default_configuration(k: usize, n_colors: u8) -> Configuration {
    let mut counts = vec![0u32; n_colors as usize];
    for i in 0..k {
        counts[i % n_colors as usize] += 1;
    }
    Configuration::new(n_colors, [(0, counts)]).expect("k >= 1")
}

pub fn simulate(cfg: &RunConfig, literal: Option<&str>) -> Result<(), CliError> {
    let params = float_params(cfg)?;
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(CliError::Usage(format!(
            "t-end must be positive and finite, got {}",
            cfg.t_end
        )));
    }
    let start = match literal {
        Some(l) => parse_configuration(cfg, l)?,
        None if cfg.k >= 1 && cfg.colors() >= 1 => default_configuration(cfg.k, cfg.colors()),
        None => return Err(CliError::Usage("simulate needs k >= 1 and N >= 1".into())),
    };
    let mut sink: Box<dyn Write> = match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_error(p))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut count = 0usize;
    let mut write_err = None;
    let finish = simulate_with(
        &params,
        &start,
        cfg.t_end,
        &mut trajectory_rng(cfg.seed, 0),
        |e| {
            count += 1;
            if write_err.is_none() {
                let line = serde_json::to_string(e).expect("serializable");
                if let Err(err) = writeln!(sink, "{line}") {
                    write_err = Some(err);
                }
            }
        },
    )
    .map_err(|e| match e {
        QBosonError::InvalidTime(_) => usage(e),
        other => CliError::Failed(other.to_string()),
    })?;
    let target = cfg.out.as_deref().unwrap_or(Path::new("<stdout>"));
    if let Some(err) = write_err {
        return Err(io_error(target)(err));
    }
    sink.flush().map_err(io_error(target))?;
    let summary = format!("{count} events in [0, {}]; final state {finish}", cfg.t_end);
    if cfg.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn spectral_values(cfg: &RunConfig, z: Option<&[String]>) -> Result<Vec<f64>, CliError> {
    match z {
        Some(values) => values
            .iter()
            .map(|v| {
                parse_rational(v).map(|r| r.to_f64()).or_else(|_| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| format!("bad spectral parameter {v:?}"))
                })
            })
            .collect::<Result<_, _>>()
            .map_err(CliError::Usage),
        None => {
            let mut rng = trajectory_rng(cfg.seed, 1);
            Ok((0..cfg.k)
                .map(|_| {
                    let m = rng.random_range(0.5..2.0);
                    if rng.random::<bool>() {
                        m
                    } else {
                        -m
                    }
                })
                .collect())
        }
    }
}

pub fn eigencheck(cfg: &RunConfig, z: Option<&[String]>, trivial: bool) -> Result<(), CliError> {
    let values = spectral_values(cfg, z)?;
    let k = values.len();
    if k < 2 {
        return Err(CliError::Usage(format!(
            "eigencheck needs at least 2 spectral parameters, got {k}"
        )));
    }
    let spec = ScalarSpec::float(cfg.q().to_f64(), cfg.alpha_value().to_f64());
    let hecke = if trivial {
        Hecke::trivial(spec, k)
    } else {
        Hecke::jimbo(spec, cfg.colors(), k)
    }
    .map_err(usage)?;
    let hecke = Arc::new(hecke);
    let point = SpectralPoint::new(values.clone()).map_err(usage)?;
    let mut rng = trajectory_rng(cfg.seed, 2);
    let mut m = ModuleVector::zero(k);
    for mu in hecke.basis() {
        m.add_term(mu, rng.random_range(-1.0..1.0));
    }
    let window = Window::symmetric(cfg.window);
    println!("z = {values:?}, E = {}", point.eigenvalue());
    let mut worst: f64 = 0.0;
    for mode in [EigenMode::Full, EigenMode::Dominant] {
        let report = run_eigencheck(Arc::clone(&hecke), &point, &m, window, mode)
            .map_err(|e| CliError::Failed(e.to_string()))?;
        println!(
            "{mode:?}: {} points, residual {:.3e} relative to the summed terms, {:.3e} relative to max|h|",
            report.points,
            report.scaled_residual(),
            report.relative_residual()
        );
        worst = worst.max(report.scaled_residual());
    }
    if worst <= EIGEN_TOLERANCE {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "residual {worst:.3e} exceeds {EIGEN_TOLERANCE:e}"
        )))
    }
}

pub fn generator(cfg: &RunConfig, literal: &str, cap: usize) -> Result<(), CliError> {
    let params = float_params(cfg)?;
    let start = parse_configuration(cfg, literal)?;
    let matrix = build_generator(&params, &start, cfg.depth, cap).map_err(usage)?;
    matrix
        .check_invariants(1e-12)
        .map_err(|e| CliError::Failed(format!("generator invariants: {e}")))?;
    let csv_path = cfg.out.clone().unwrap_or_else(|| "generator.csv".into());
    let json_path = csv_path.with_extension("json");
    std::fs::write(&csv_path, matrix.to_csv()).map_err(io_error(&csv_path))?;
    let index = serde_json::to_string_pretty(&matrix.state_index_json()).expect("serializable");
    std::fs::write(&json_path, index).map_err(io_error(&json_path))?;
    let interior = (0..matrix.len()).filter(|&i| matrix.is_interior(i)).count();
    println!(
        "{} states ({interior} interior), {} entries -> {}, {}",
        matrix.len(),
        matrix.entries().count(),
        csv_path.display(),
        json_path.display()
    );
    Ok(())
}
