//! `itep`: wavenumber scans, exact disk eigenvalues, timing comparison and
//! pencil dumps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use itep_core::scan::{bench_csv, bench_table, FLAG_PROBE_FAILED};
use itep_core::{
    assemble_pencil, build_disk_mesh, find_eigenvalues, plot, probe, run_benchmark, run_scan, BaselineMethod,
    BenchConfig, BoundaryMesh, ComplexMatrix, DetectionRule, DiskSpec, Error, ProbeConfig, ProbeSolver, ScanConfig,
    ScanMode,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "itep",
    version,
    about = "Transmission eigenvalue detection by spectral projection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a wavenumber interval and report detected eigenvalues.
    Scan(ScanArgs),
    /// Exact transmission eigenvalues of a homogeneous disk.
    Oracle(OracleArgs),
    /// Time the probe against the full eigenvalue baseline.
    Bench(BenchArgs),
    /// Write the pencil at one wavenumber as matrix dumps.
    Pencil(PencilArgs),
    /// Run the probe on a pencil read from matrix dumps.
    Probe(ProbeArgs),
}

/// Probe settings shared by several subcommands.
#[derive(Args, Default)]
struct ProbeFlags {
    #[arg(long)]
    contour_radius: Option<f64>,
    #[arg(long)]
    quad_points: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// hessenberg or lu
    #[arg(long)]
    solver: Option<ProbeSolver>,
}

impl ProbeFlags {
    fn apply(&self, probe: &mut ProbeConfig) {
        set(&mut probe.contour_radius, self.contour_radius);
        set(&mut probe.quadrature_points, self.quad_points);
        set(&mut probe.threshold, self.threshold);
        set(&mut probe.seed, self.seed);
        set(&mut probe.solver, self.solver);
    }
}

#[derive(Args)]
struct ScanArgs {
    /// TOML file with any scan setting; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k_min: Option<f64>,
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    segments: Option<usize>,
    #[arg(long)]
    refraction: Option<f64>,
    #[arg(long)]
    disk_radius: Option<f64>,
    #[command(flatten)]
    probe: ProbeFlags,
    /// probe, baseline or both
    #[arg(long)]
    mode: Option<ScanMode>,
    /// full-spectrum or inverse-iteration
    #[arg(long)]
    baseline: Option<BaselineMethod>,
    /// run-center or max-indicator
    #[arg(long)]
    detection: Option<DetectionRule>,
    #[arg(long)]
    workers: Option<usize>,
    /// CSV destination; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG chart of log10 ||P^2 f|| against k.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    disk_radius: Option<f64>,
    #[arg(long)]
    refraction: Option<f64>,
    #[arg(long)]
    max_order: Option<u32>,
    #[arg(long)]
    k_max: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated segment counts.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    k_min: Option<f64>,
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    refraction: Option<f64>,
    #[command(flatten)]
    probe: ProbeFlags,
    #[arg(long)]
    baseline: Option<BaselineMethod>,
    /// CSV destination; the table always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PencilArgs {
    #[arg(long)]
    k: f64,
    #[arg(long, default_value_t = 16.0)]
    refraction: f64,
    /// Boundary polygon in mesh text format; a disk is used when absent.
    #[arg(long, conflicts_with_all = ["segments", "disk_radius"])]
    mesh: Option<PathBuf>,
    #[arg(long, default_value_t = 32)]
    segments: usize,
    #[arg(long, default_value_t = 0.5)]
    disk_radius: f64,
    #[arg(long)]
    out_a: PathBuf,
    #[arg(long)]
    out_b: PathBuf,
    /// Also write the polygon that was used.
    #[arg(long)]
    out_mesh: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[command(flatten)]
    probe: ProbeFlags,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_configuration() {
            EXIT_CONFIG
        } else {
            EXIT_NUMERICAL
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn scan(args: ScanArgs) -> Result<(), Failure> {
    let mut config = match &args.config {
        Some(path) => ScanConfig::from_toml_str(&read(path)?)?,
        None => ScanConfig::default(),
    };
    set(&mut config.k_min, args.k_min);
    set(&mut config.k_max, args.k_max);
    set(&mut config.steps, args.steps);
    set(&mut config.segments, args.segments);
    set(&mut config.refraction, args.refraction);
    set(&mut config.disk_radius, args.disk_radius);
    args.probe.apply(&mut config.probe);
    set(&mut config.mode, args.mode);
    set(&mut config.baseline.method, args.baseline);
    set(&mut config.detection, args.detection);
    set(&mut config.workers, args.workers);
    if args.out.is_some() {
        config.output_path = args.out;
    }
    if args.plot.is_some() {
        config.plot_path = args.plot;
    }
    config.validate()?;

    let result = run_scan(&config)?;
    let csv = result.to_csv();
    match &config.output_path {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &config.plot_path {
        write(path, &plot::render_svg(&result.records))?;
    }
    for d in &result.detections {
        eprintln!("detected k = {:.4} (indicator {:.3})", d.k, d.indicator);
    }
    if config.mode.runs_probe() && result.records.iter().all(|r| r.flag & FLAG_PROBE_FAILED != 0) {
        return Err(Failure {
            code: EXIT_NUMERICAL,
            message: "the probe failed at every wavenumber".into(),
        });
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), Failure> {
    let mut spec = match &args.config {
        Some(path) => DiskSpec::from_toml_str(&read(path)?)?,
        None => DiskSpec::default(),
    };
    set(&mut spec.radius, args.disk_radius);
    set(&mut spec.refraction, args.refraction);
    set(&mut spec.max_order, args.max_order);
    set(&mut spec.k_max, args.k_max);
    let roots = find_eigenvalues(&spec)?;
    println!("m, k");
    for r in roots {
        println!("{}, {:.6}", r.order, r.k);
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let mut config = match &args.config {
        Some(path) => BenchConfig::from_toml_str(&read(path)?)?,
        None => BenchConfig::default(),
    };
    set(&mut config.sizes, args.sizes);
    set(&mut config.steps, args.steps);
    set(&mut config.repeats, args.repeats);
    set(&mut config.k_min, args.k_min);
    set(&mut config.k_max, args.k_max);
    set(&mut config.refraction, args.refraction);
    args.probe.apply(&mut config.probe);
    set(&mut config.baseline.method, args.baseline);
    let rows = run_benchmark(&config)?;
    print!("{}", bench_table(&rows));
    if let Some(path) = &args.out {
        write(path, &bench_csv(&rows))?;
    }
    Ok(())
}

fn pencil(args: PencilArgs) -> Result<(), Failure> {
    let mesh = match &args.mesh {
        Some(path) => BoundaryMesh::parse_text(&read(path)?)?,
        None => build_disk_mesh(args.disk_radius, args.segments)?,
    };
    let pencil = assemble_pencil(&mesh, args.k, args.refraction)?;
    write(&args.out_a, &pencil.a.to_dump())?;
    write(&args.out_b, &pencil.b.to_dump())?;
    if let Some(path) = &args.out_mesh {
        write(path, &mesh.to_text())?;
    }
    Ok(())
}

fn probe_dumps(args: ProbeArgs) -> Result<(), Failure> {
    let a = ComplexMatrix::parse_dump(&read(&args.a)?)?;
    let b = ComplexMatrix::parse_dump(&read(&args.b)?)?;
    let mut config = ProbeConfig::default();
    args.probe.apply(&mut config);
    let outcome = probe(&a, &b, &config)?;
    println!("indicator {:.6e}", outcome.indicator);
    println!("decision {}", u8::from(outcome.decision));
    println!("proj1_norm {:.6e}", outcome.proj1_norm);
    println!("proj2_norm {:.6e}", outcome.proj2_norm);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan(args) => scan(args),
        Command::Oracle(args) => oracle(args),
        Command::Bench(args) => bench(args),
        Command::Pencil(args) => pencil(args),
        Command::Probe(args) => probe_dumps(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
