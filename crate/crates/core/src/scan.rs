//! Wavenumber sweeps, detection grouping, CSV output and timing comparison.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::baseline::BaselineConfig;
use crate::bem::assemble_pencil;
use crate::error::{Error, Result};
use crate::geometry::{build_disk_mesh, BoundaryMesh};
use crate::probe::{probe, ProbeConfig};

/// Flag bit: assembly or probe failed at this wavenumber.
pub const FLAG_PROBE_FAILED: u8 = 1;
/// Flag bit: the baseline eigenvalue could not be computed.
pub const FLAG_BASELINE_FAILED: u8 = 2;

/// Floor applied to `||P^2 f||` before taking the logarithm.
const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    #[default]
    Probe,
    Baseline,
    Both,
}

impl ScanMode {
    pub fn runs_probe(self) -> bool {
        matches!(self, ScanMode::Probe | ScanMode::Both)
    }

    pub fn runs_baseline(self) -> bool {
        matches!(self, ScanMode::Baseline | ScanMode::Both)
    }
}

impl std::str::FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "probe" => Ok(ScanMode::Probe),
            "baseline" => Ok(ScanMode::Baseline),
            "both" => Ok(ScanMode::Both),
            other => Err(Error::config(format!(
                "unknown mode {other:?} (expected probe, baseline or both)"
            ))),
        }
    }
}

/// Which grid point of a run of consecutive positive decisions is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionRule {
    /// Middle of the run (lower middle for even lengths). The eigenvalue of
    /// the pencil is smallest there.
    #[default]
    RunCenter,
    /// Largest indicator in the run. The filter peaks where the eigenvalue
    /// passes close to a quadrature node, which is usually near an end.
    MaxIndicator,
}

impl std::str::FromStr for DetectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "run-center" => Ok(DetectionRule::RunCenter),
            "max-indicator" => Ok(DetectionRule::MaxIndicator),
            other => Err(Error::config(format!(
                "unknown detection rule {other:?} (expected run-center or max-indicator)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub k_min: f64,
    pub k_max: f64,
    /// Number of subintervals; the grid has `steps + 1` points.
    pub steps: usize,
    pub segments: usize,
    pub refraction: f64,
    pub disk_radius: f64,
    pub probe: ProbeConfig,
    pub baseline: BaselineConfig,
    pub mode: ScanMode,
    pub detection: DetectionRule,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    pub output_path: Option<PathBuf>,
    pub plot_path: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            k_min: 1.5,
            k_max: 3.5,
            steps: 2000,
            segments: 32,
            refraction: 16.0,
            disk_radius: 0.5,
            probe: ProbeConfig::default(),
            baseline: BaselineConfig::default(),
            mode: ScanMode::Probe,
            detection: DetectionRule::RunCenter,
            workers: 0,
            output_path: None,
            plot_path: None,
        }
    }
}

impl ScanConfig {
    /// Parses a TOML document; missing keys keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_min > 0.0) || !self.k_max.is_finite() || !(self.k_min < self.k_max) {
            return Err(Error::config(format!(
                "need 0 < k_min < k_max, got {} and {}",
                self.k_min, self.k_max
            )));
        }
        if self.steps == 0 {
            return Err(Error::config("steps must be at least 1"));
        }
        if !(self.refraction > 1.0) || !self.refraction.is_finite() {
            return Err(Error::config(format!(
                "index of refraction must exceed 1, got {}",
                self.refraction
            )));
        }
        self.probe.validate()?;
        self.baseline.validate()?;
        self.mesh().map(|_| ())
    }

    pub fn mesh(&self) -> Result<BoundaryMesh> {
        build_disk_mesh(self.disk_radius, self.segments)
    }

    /// `k_j = k_min + j (k_max - k_min) / steps`, `j = 0..=steps`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        self.k_min + j as f64 * (self.k_max - self.k_min) / self.steps as f64
    }

    /// Seed of the random vector at grid index `j`.
    pub fn seed_for(&self, j: usize) -> u64 {
        self.probe.seed ^ splitmix64(j as u64)
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub k: f64,
    /// `||P^2 f|| / ||P f||`; NaN when the probe did not run.
    pub indicator: f64,
    /// `log10 ||P^2 f||`; NaN when the probe did not run or failed.
    pub log_proj2: f64,
    pub decision: bool,
    pub flag: u8,
    /// `1 / |lambda_min|`, when the baseline ran.
    pub inv_lambda_min: Option<f64>,
}

/// One group of consecutive positive grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    /// wavenumber of the reported grid point
    pub k: f64,
    /// indicator at the reported grid point
    pub indicator: f64,
    pub max_indicator: f64,
    pub first_index: usize,
    pub last_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub mode: ScanMode,
    pub records: Vec<ScanRecord>,
    pub detections: Vec<Detection>,
}

fn scan_point(config: &ScanConfig, mesh: &BoundaryMesh, j: usize) -> ScanRecord {
    let k = config.wavenumber(j);
    let mut record = ScanRecord {
        k,
        indicator: f64::NAN,
        log_proj2: f64::NAN,
        decision: false,
        flag: 0,
        inv_lambda_min: None,
    };
    let pencil = match assemble_pencil(mesh, k, config.refraction) {
        Ok(p) => p,
        Err(_) => {
            if config.mode.runs_probe() {
                record.indicator = 0.0;
                record.flag |= FLAG_PROBE_FAILED;
            }
            if config.mode.runs_baseline() {
                record.flag |= FLAG_BASELINE_FAILED;
                record.inv_lambda_min = Some(f64::NAN);
            }
            return record;
        }
    };
    if config.mode.runs_probe() {
        let probe_config = ProbeConfig {
            seed: config.seed_for(j),
            ..config.probe
        };
        match probe(&pencil.a, &pencil.b, &probe_config) {
            Ok(out) => {
                record.indicator = out.indicator;
                record.log_proj2 = out.proj2_norm.max(LOG_FLOOR).log10();
                record.decision = out.decision;
            }
            Err(_) => {
                record.indicator = 0.0;
                record.flag |= FLAG_PROBE_FAILED;
            }
        }
    }
    if config.mode.runs_baseline() {
        match config.baseline.min_eigenvalue(&pencil.a, &pencil.b) {
            Ok(lambda) => record.inv_lambda_min = Some(1.0 / lambda.norm()),
            Err(_) => {
                record.flag |= FLAG_BASELINE_FAILED;
                record.inv_lambda_min = Some(f64::NAN);
            }
        }
    }
    record
}

/// Runs the sweep. Per-wavenumber failures are recorded in the flag column;
/// only configuration errors abort.
pub fn run_scan(config: &ScanConfig) -> Result<ScanResult> {
    config.validate()?;
    let mesh = config.mesh()?;
    let work = || -> Vec<ScanRecord> {
        (0..=config.steps)
            .into_par_iter()
            .map(|j| scan_point(config, &mesh, j))
            .collect()
    };
    let records = if config.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?
            .install(work)
    };
    let detections = group_detections(&records, config.detection);
    Ok(ScanResult {
        mode: config.mode,
        records,
        detections,
    })
}

/// Groups runs of consecutive positive records into single detections.
pub fn group_detections(records: &[ScanRecord], rule: DetectionRule) -> Vec<Detection> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < records.len() {
        if !records[i].decision {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < records.len() && records[i + 1].decision {
            i += 1;
        }
        let run = &records[first..=i];
        let argmax = (0..run.len())
            .max_by(|&a, &b| run[a].indicator.total_cmp(&run[b].indicator).then(b.cmp(&a)))
            .unwrap_or(0);
        let pick = match rule {
            DetectionRule::RunCenter => (run.len() - 1) / 2,
            DetectionRule::MaxIndicator => argmax,
        };
        out.push(Detection {
            k: run[pick].k,
            indicator: run[pick].indicator,
            max_indicator: run[argmax].indicator,
            first_index: first,
            last_index: i,
        });
        i += 1;
    }
    out
}

fn push_float(out: &mut String, v: f64) {
    if v.is_nan() {
        out.push_str("nan");
    } else if v.is_infinite() {
        out.push_str(if v > 0.0 { "inf" } else { "-inf" });
    } else {
        let _ = write!(out, "{v:.16e}");
    }
}

impl ScanResult {
    pub const HEADER: &'static str = "k,indicator,log_proj2,decision,flag";

    /// CSV with 17 significant digits; the `inv_lambda_min` column is present
    /// whenever the baseline ran.
    pub fn to_csv(&self) -> String {
        let baseline = self.mode.runs_baseline();
        let mut out = String::with_capacity(96 * (self.records.len() + 1));
        out.push_str(Self::HEADER);
        if baseline {
            out.push_str(",inv_lambda_min");
        }
        out.push('\n');
        for r in &self.records {
            push_float(&mut out, r.k);
            out.push(',');
            push_float(&mut out, r.indicator);
            out.push(',');
            push_float(&mut out, r.log_proj2);
            let _ = write!(out, ",{},{}", u8::from(r.decision), r.flag);
            if baseline {
                out.push(',');
                push_float(&mut out, r.inv_lambda_min.unwrap_or(f64::NAN));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// Segment counts; the pencil dimension is twice the count.
    pub sizes: Vec<usize>,
    /// Wavenumbers timed per size.
    pub steps: usize,
    /// Each mode is timed this often per wavenumber and the fastest run
    /// kept, which filters out scheduler noise.
    pub repeats: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub refraction: f64,
    pub disk_radius: f64,
    pub probe: ProbeConfig,
    pub baseline: BaselineConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![32, 64, 128, 256],
            steps: 50,
            repeats: 3,
            k_min: 1.5,
            k_max: 3.5,
            refraction: 16.0,
            disk_radius: 0.5,
            probe: ProbeConfig::default(),
            baseline: BaselineConfig::default(),
        }
    }
}

impl BenchConfig {
    /// Parses a TOML document; missing keys keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.steps == 0 || self.repeats == 0 {
            return Err(Error::config("benchmark needs at least one size, step and repeat"));
        }
        if !(self.k_min > 0.0) || !self.k_max.is_finite() || !(self.k_min <= self.k_max) {
            return Err(Error::config(format!(
                "need 0 < k_min <= k_max, got {} and {}",
                self.k_min, self.k_max
            )));
        }
        if !(self.refraction > 1.0) || !self.refraction.is_finite() {
            return Err(Error::config(format!(
                "index of refraction must exceed 1, got {}",
                self.refraction
            )));
        }
        for &segments in &self.sizes {
            build_disk_mesh(self.disk_radius, segments)?;
        }
        self.probe.validate()?;
        self.baseline.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub segments: usize,
    pub dim: usize,
    /// seconds per wavenumber; assembly is shared by both modes and timed
    /// on its own
    pub assembly_seconds: f64,
    pub probe_seconds: f64,
    pub baseline_seconds: f64,
}

impl BenchRow {
    /// Per-wavenumber wall time of a baseline run over a probe run, both
    /// including assembly.
    pub fn ratio(&self) -> f64 {
        (self.assembly_seconds + self.baseline_seconds) / (self.assembly_seconds + self.probe_seconds)
    }

    /// Same ratio for the solve stage alone.
    pub fn solve_ratio(&self) -> f64 {
        self.baseline_seconds / self.probe_seconds
    }
}

fn fastest(repeats: usize, mut work: impl FnMut()) -> f64 {
    (0..repeats)
        .map(|_| {
            let start = Instant::now();
            work();
            start.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Times probe and baseline on the same wavenumbers, one thread, one size at
/// a time. Each pencil is assembled once and handed to both modes back to
/// back, so drift in machine load hits both alike.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.sizes.len());
    for &segments in &config.sizes {
        let mesh = build_disk_mesh(config.disk_radius, segments)?;
        let (mut assembly, mut probe_time, mut baseline_time) = (0.0, 0.0, 0.0);
        for j in 0..config.steps {
            let t = if config.steps == 1 {
                0.0
            } else {
                j as f64 / (config.steps - 1) as f64
            };
            let k = config.k_min + t * (config.k_max - config.k_min);
            let start = Instant::now();
            let pencil = assemble_pencil(&mesh, k, config.refraction)?;
            assembly += start.elapsed().as_secs_f64();
            let probe_config = ProbeConfig {
                seed: config.probe.seed ^ splitmix64(j as u64),
                ..config.probe
            };
            probe_time += fastest(config.repeats, || {
                let _ = probe(&pencil.a, &pencil.b, &probe_config);
            });
            baseline_time += fastest(config.repeats, || {
                let _ = config.baseline.min_eigenvalue(&pencil.a, &pencil.b);
            });
        }
        let steps = config.steps as f64;
        rows.push(BenchRow {
            segments,
            dim: 2 * segments,
            assembly_seconds: assembly / steps,
            probe_seconds: probe_time / steps,
            baseline_seconds: baseline_time / steps,
        });
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("segments,dim,assembly_seconds,probe_seconds,baseline_seconds,ratio,solve_ratio\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.6e},{:.6e},{:.6e},{:.4},{:.4}",
            r.segments,
            r.dim,
            r.assembly_seconds,
            r.probe_seconds,
            r.baseline_seconds,
            r.ratio(),
            r.solve_ratio()
        );
    }
    out
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:>8} {:>6} {:>12} {:>12} {:>12} {:>8} {:>8}\n",
        "segments", "dim", "assembly [s]", "probe [s]", "baseline [s]", "ratio", "solve"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>8} {:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>8.2} {:>8.2}",
            r.segments,
            r.dim,
            r.assembly_seconds,
            r.probe_seconds,
            r.baseline_seconds,
            r.ratio(),
            r.solve_ratio()
        );
    }
    out
}
