use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use casimir_core::cli::{
    figure_grid, run_points, write_csv, ConfigBuilder, Method, Origin, Point, RunSettings, EXIT_FATAL, EXIT_OK,
    EXIT_PARTIAL, EXIT_USAGE,
};
use clap::{Args, Parser, Subcommand};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (hbar c = 3.1615268e-26 J m)");

/// Casimir energy of a spherical plasma sheet in front of a planar one.
///
/// Lengths are in metres, plasma parameters in 1/m ("inf" for a perfect
/// conductor). Flags override values read from --config.
#[derive(Parser)]
#[command(name = "casimir", version = VERSION)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single geometry.
    Point,
    /// Evaluate a grid of radii and gaps (or centre distances).
    Sweep,
    /// Emit the data grid of figure N (1 to 6).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        n: u8,
    },
}

#[derive(Args)]
struct Flags {
    /// exact, pfa, asympt or all
    #[arg(long, global = true)]
    method: Option<String>,
    /// Sphere radius R
    #[arg(long, global = true)]
    radius: Option<String>,
    #[arg(long, global = true)]
    radius_end: Option<String>,
    #[arg(long, global = true)]
    radius_count: Option<String>,
    /// Closest separation d
    #[arg(long, global = true)]
    gap: Option<String>,
    #[arg(long, global = true)]
    gap_end: Option<String>,
    #[arg(long, global = true)]
    gap_count: Option<String>,
    /// Centre-to-plane distance L = R + d, instead of --gap
    #[arg(long, global = true)]
    distance: Option<String>,
    #[arg(long, global = true)]
    distance_end: Option<String>,
    #[arg(long, global = true)]
    distance_count: Option<String>,
    /// linear or log
    #[arg(long, global = true)]
    spacing: Option<String>,
    /// Sphere plasma parameter in 1/m, or inf
    #[arg(long, global = true)]
    omega_sphere: Option<String>,
    /// Plane plasma parameter in 1/m, or inf
    #[arg(long, global = true)]
    omega_plane: Option<String>,
    /// Multipole truncation, integer or auto
    #[arg(long, global = true)]
    lmax: Option<String>,
    /// Azimuthal truncation, integer or auto
    #[arg(long, global = true)]
    mmax: Option<String>,
    #[arg(long, global = true)]
    kappa_nodes: Option<String>,
    #[arg(long, global = true)]
    theta_nodes: Option<String>,
    #[arg(long, global = true)]
    rel_tol: Option<String>,
    #[arg(long, global = true)]
    abs_tol: Option<String>,
    /// CSV output path (standard output if absent)
    #[arg(long, global = true)]
    out: Option<String>,
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<String>,
    /// Worker threads
    #[arg(long, global = true)]
    threads: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("method", &self.method),
            ("radius", &self.radius),
            ("radius-end", &self.radius_end),
            ("radius-count", &self.radius_count),
            ("gap", &self.gap),
            ("gap-end", &self.gap_end),
            ("gap-count", &self.gap_count),
            ("distance", &self.distance),
            ("distance-end", &self.distance_end),
            ("distance-count", &self.distance_count),
            ("spacing", &self.spacing),
            ("omega-sphere", &self.omega_sphere),
            ("omega-plane", &self.omega_plane),
            ("lmax", &self.lmax),
            ("mmax", &self.mmax),
            ("kappa-nodes", &self.kappa_nodes),
            ("theta-nodes", &self.theta_nodes),
            ("rel-tol", &self.rel_tol),
            ("abs-tol", &self.abs_tol),
            ("out", &self.out),
            ("threads", &self.threads),
        ]
    }
}

enum Failure {
    Usage(String),
    Fatal(String),
}

fn builder(flags: &Flags) -> Result<ConfigBuilder, Failure> {
    let mut b = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read config {path}: {e}")))?;
            ConfigBuilder::from_text(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?
        }
        None => ConfigBuilder::new(),
    };
    for (name, value) in flags.pairs() {
        if let Some(v) = value {
            b.set(name, v, Origin::Flag(name)).map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(b)
}

fn plan(cli: &Cli) -> Result<(Vec<Method>, Vec<Point>, RunSettings), Failure> {
    let b = builder(&cli.flags)?;
    let usage = |e: casimir_core::cli::ConfigError| Failure::Usage(e.to_string());
    match cli.command {
        Command::Point | Command::Sweep => {
            let config = b.build().map_err(usage)?;
            let points = config.points();
            if matches!(cli.command, Command::Point) && points.len() != 1 {
                return Err(Failure::Usage("point takes a single radius and gap; use sweep for ranges".into()));
            }
            let run = RunSettings {
                numerics: config.numerics,
                out: config.out,
                threads: config.threads,
            };
            Ok((config.methods, points, run))
        }
        Command::Figure { n } => {
            let extra = b.geometry_keys();
            if !extra.is_empty() {
                return Err(Failure::Usage(format!(
                    "figure {n} fixes its own geometry and materials; remove {}",
                    extra.join(", ")
                )));
            }
            let (default_methods, points) = figure_grid(n).map_err(Failure::Usage)?;
            let methods = b.methods().map_err(usage)?.unwrap_or(default_methods);
            Ok((methods, points, b.run_settings().map_err(usage)?))
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let (methods, points, settings) = plan(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = settings.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Fatal(format!("cannot start worker pool: {e}")))?;
    let rows = pool.install(|| run_points(&points, &methods, &settings.numerics));
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();

    let summary = format!("{} rows, {} failed", rows.len(), failed);
    match &settings.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Fatal(format!("cannot write {}: {e}", path.display())))?;
            write_csv(&rows, BufWriter::new(file)).map_err(|e| Failure::Fatal(format!("{}: {e}", path.display())))?;
            println!("{summary}; written to {}", path.display());
        }
        None => {
            write_csv(&rows, io::stdout().lock()).map_err(|e| Failure::Fatal(e.to_string()))?;
            eprintln!("{summary}");
        }
    }
    Ok(if failed > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Fatal(message)) => {
            eprintln!("error: {message}");
            EXIT_FATAL
        }
    };
    ExitCode::from(code as u8)
}
