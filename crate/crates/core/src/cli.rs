//! Command-line front end: resolves a [`RunConfig`] from flags and an
//! optional JSON file, runs one computation and writes its artifacts.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{
    band_solve_real, bands_csv, branch_points_csv, complex_band_from_branch_point, find_branch_points, require_pt,
    BandPoint,
};
use crate::bound_states::{find_localized_states, localized_states_csv, SearchRect};
use crate::error::{Error, Result};
use crate::model::{build_pt_unit_cell, PhysicalParams, PiecewisePotential, PotentialDoc};
use crate::numerics::linspace;
use crate::output::{csv_string, fmt_g12, write_atomic};
use crate::scattering::{
    critical_strength, critical_strength_with, resonance_scan, threshold_by_transmission, transmission_table,
    BranchRule,
};
use crate::wavepacket::{evolve_direct_snapshots, DirectConfig, GaussianPacket, SnapshotManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Transmit,
    Resonances,
    Bound,
    Critical,
    Bands,
    Branch,
    Packet,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Transmit => "transmit",
            Command::Resonances => "resonances",
            Command::Bound => "bound",
            Command::Critical => "critical",
            Command::Bands => "bands",
            Command::Branch => "branch",
            Command::Packet => "packet",
        }
    }
}

#[derive(Debug, Parser, Default)]
#[command(
    name = "nhqm",
    version,
    about = "Non-Hermitian scattering, localized states, PT bands and wave packets in 1D"
)]
pub struct Cli {
    /// Computation to run; may come from --config instead.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Imaginary potential strength V0.
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Segment width a.
    #[arg(long)]
    pub a: Option<f64>,
    /// Real potential offset U0.
    #[arg(long, allow_negative_numbers = true)]
    pub u0: Option<f64>,
    /// Particle mass.
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub emin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub emax: Option<f64>,
    /// Energy grid points.
    #[arg(long)]
    pub n: Option<usize>,
    /// Bloch wavenumbers per band.
    #[arg(long)]
    pub kpoints: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Comma-separated snapshot times.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub times: Option<Vec<f64>>,
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved job description; also the sidecar JSON format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub v0: f64,
    pub a: f64,
    pub u0: f64,
    /// Explicit potential; replaces the (v0, a, u0) shorthand when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialDoc>,
    pub params: PhysicalParams,
    pub emin: f64,
    pub emax: f64,
    pub n: usize,
    pub kpoints: usize,
    pub x0: f64,
    pub p0: f64,
    pub b: f64,
    pub times: Vec<f64>,
    pub output_path: PathBuf,
}

/// Partial config as read from a JSON file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialConfig {
    command: Option<Command>,
    v0: Option<f64>,
    a: Option<f64>,
    u0: Option<f64>,
    potential: Option<PotentialDoc>,
    params: Option<PhysicalParams>,
    emin: Option<f64>,
    emax: Option<f64>,
    n: Option<usize>,
    kpoints: Option<usize>,
    x0: Option<f64>,
    p0: Option<f64>,
    b: Option<f64>,
    times: Option<Vec<f64>>,
    output_path: Option<PathBuf>,
}

struct Defaults {
    v0: f64,
    a: f64,
    u0: f64,
    emin: f64,
    emax: f64,
    n: usize,
}

fn defaults(cmd: Command) -> Defaults {
    match cmd {
        Command::Transmit | Command::Resonances => Defaults {
            v0: 40.0,
            a: 2.0,
            u0: 0.0,
            emin: 1.0,
            emax: 400.0,
            n: 4000,
        },
        Command::Bound => Defaults {
            v0: 5.0,
            a: 2.0,
            u0: 0.0,
            emin: 0.0,
            emax: 100.0,
            n: 0,
        },
        Command::Critical => Defaults {
            v0: 0.0,
            a: 1.0,
            u0: 50.0,
            emin: 0.0,
            emax: 500.0,
            n: 4000,
        },
        Command::Bands => Defaults {
            v0: 5.0,
            a: 1.0,
            u0: 0.0,
            emin: 0.05,
            emax: 25.0,
            n: 4000,
        },
        Command::Branch => Defaults {
            v0: 5.0,
            a: 1.0,
            u0: 0.0,
            emin: 0.5,
            emax: 110.0,
            n: 8000,
        },
        Command::Packet => Defaults {
            v0: 5.0,
            a: 2.0,
            u0: 0.0,
            emin: 0.0,
            emax: 0.0,
            n: 0,
        },
    }
}

impl RunConfig {
    /// Merges flags over the config file over per-command defaults.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file: PartialConfig = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str(&text)?
            }
            None => PartialConfig::default(),
        };
        let command = cli
            .command
            .or(file.command)
            .ok_or_else(|| Error::InvalidParameter("no command given (flag or config)".into()))?;
        let d = defaults(command);
        let mass = cli.m.or(file.params.map(|p| p.mass)).unwrap_or(0.5);
        let emin = cli.emin.or(file.emin).unwrap_or(d.emin);
        let emax = cli.emax.or(file.emax).unwrap_or(match command {
            Command::Critical => 10.0 * cli.u0.or(file.u0).unwrap_or(d.u0),
            Command::Bound => 20.0 * cli.v0.or(file.v0).unwrap_or(d.v0).abs(),
            _ => d.emax,
        });
        let cfg = RunConfig {
            command,
            v0: cli.v0.or(file.v0).unwrap_or(d.v0),
            a: cli.a.or(file.a).unwrap_or(d.a),
            u0: cli.u0.or(file.u0).unwrap_or(d.u0),
            potential: file.potential,
            params: PhysicalParams::new(mass)?,
            emin,
            emax,
            n: cli.n.or(file.n).unwrap_or(d.n),
            kpoints: cli.kpoints.or(file.kpoints).unwrap_or(101),
            x0: cli.x0.or(file.x0).unwrap_or(-10.0),
            p0: cli.p0.or(file.p0).unwrap_or(5.23),
            b: cli.b.or(file.b).unwrap_or(0.08),
            times: cli.times.clone().or(file.times).unwrap_or_else(|| vec![0.0, 2.0, 5.0]),
            output_path: cli
                .out
                .clone()
                .or(file.output_path)
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", command.name()))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        for (name, v) in [
            ("v0", self.v0),
            ("a", self.a),
            ("u0", self.u0),
            ("emin", self.emin),
            ("emax", self.emax),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if !(self.a > 0.0) {
            return bad(format!("a must be > 0, got {}", self.a));
        }
        let needs_window = !matches!(self.command, Command::Packet);
        if needs_window && !(self.emax > self.emin) {
            return bad(format!("empty range: emin = {} >= emax = {}", self.emin, self.emax));
        }
        let needs_grid = matches!(
            self.command,
            Command::Transmit | Command::Resonances | Command::Critical | Command::Bands | Command::Branch
        );
        if needs_grid && self.n < 2 {
            return bad(format!("grid size n must be >= 2, got {}", self.n));
        }
        if matches!(self.command, Command::Bands) && self.kpoints < 2 {
            return bad(format!("kpoints must be >= 2, got {}", self.kpoints));
        }
        if matches!(self.command, Command::Packet) {
            if self.times.is_empty() || self.times.windows(2).any(|w| w[1] < w[0]) || self.times[0] < 0.0 {
                return bad("times must be a nonempty ascending list of values >= 0".into());
            }
            GaussianPacket::new(self.x0, self.p0, self.b)?;
        }
        Ok(())
    }

    /// Single-segment `U0 + iV0` on `[0, a]`, unless a potential was given.
    pub fn barrier(&self) -> Result<PiecewisePotential> {
        match &self.potential {
            Some(doc) => doc.clone().try_into(),
            None => PiecewisePotential::single(0.0, self.a, Complex64::new(self.u0, self.v0)),
        }
    }

    /// PT unit cell `[U0 + iV0][U0 − iV0]`, unless a potential was given.
    pub fn cell(&self) -> Result<PiecewisePotential> {
        match &self.potential {
            Some(doc) => doc.clone().try_into(),
            None => build_pt_unit_cell(self.v0, self.a, self.u0),
        }
    }

    pub fn sidecar_path(&self) -> PathBuf {
        sibling(&self.output_path, "config.json")
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// `<dir>/<stem>.<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    path.with_file_name(format!("{}.{suffix}", stem(path)))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

fn check_writable(path: &Path) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    tempfile::NamedTempFile::new_in(dir)?;
    Ok(())
}

/// Outcome of a run: artifact files and a one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    check_writable(&cfg.output_path)?;
    let mut artifacts: Vec<(PathBuf, String)> = Vec::new();
    let out = cfg.output_path.clone();
    let summary = match cfg.command {
        Command::Transmit => {
            let rows = transmission_table(&cfg.barrier()?, &cfg.params, cfg.emin, cfg.emax, cfg.n)?;
            let peak = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
            let csv = csv_string(
                &["E", "T2", "R2"],
                rows.iter().map(|r| vec![fmt_g12(r.0), fmt_g12(r.1), fmt_g12(r.2)]),
            );
            artifacts.push((out.clone(), csv));
            format!("transmit: {} energies, max |t|^2 = {}", rows.len(), fmt_g12(peak))
        }
        Command::Resonances => {
            let peaks = resonance_scan(&cfg.barrier()?, &cfg.params, cfg.emin, cfg.emax, cfg.n)?;
            let csv = csv_string(
                &["E", "T2", "n"],
                peaks
                    .iter()
                    .map(|p| vec![fmt_g12(p.energy), fmt_g12(p.peak_t2), fmt_g12(p.n_index)]),
            );
            artifacts.push((out.clone(), csv));
            format!(
                "resonances: {} peaks in [{}, {}]",
                peaks.len(),
                fmt_g12(cfg.emin),
                fmt_g12(cfg.emax)
            )
        }
        Command::Bound => {
            let mut rect = SearchRect::default_for(cfg.v0);
            rect.re_min = cfg.emin;
            rect.re_max = cfg.emax;
            let states = find_localized_states(cfg.v0, cfg.a, &cfg.params, Some(rect))?;
            artifacts.push((out.clone(), localized_states_csv(&states)));
            format!("bound: {} localized states", states.len())
        }
        Command::Critical => {
            let continuous = critical_strength(cfg.u0, cfg.a, &cfg.params)?;
            let principal = critical_strength_with(cfg.u0, cfg.a, &cfg.params, BranchRule::Principal);
            let by_t = threshold_by_transmission(cfg.u0, cfg.a, &cfg.params, cfg.emax);
            let cell = |r: &Result<f64>| match r {
                Ok(v) => fmt_g12(*v),
                Err(_) => "nan".into(),
            };
            let csv = csv_string(
                &["method", "V0"],
                vec![
                    vec!["ratio_continuous_branch".into(), fmt_g12(continuous)],
                    vec!["ratio_principal_branch".into(), cell(&principal)],
                    vec!["transmission_exceeds_one".into(), cell(&by_t)],
                ],
            );
            artifacts.push((out.clone(), csv));
            format!(
                "critical: V0* = {} (ratio), {} (transmission)",
                fmt_g12(continuous),
                cell(&by_t)
            )
        }
        Command::Bands => {
            let cell = cfg.cell()?;
            let d = cell.width();
            let ks = linspace(-std::f64::consts::PI / d, std::f64::consts::PI / d, cfg.kpoints);
            let mut points: Vec<BandPoint> = band_solve_real(&cell, &cfg.params, &ks, (cfg.emin, cfg.emax))?;
            if !cell.is_real() && require_pt(&cell).is_ok() {
                let found = find_branch_points(&cell, &cfg.params, (cfg.emin, cfg.emax))?;
                for bp in &found.branch_points {
                    for (up, down) in complex_band_from_branch_point(&cell, &cfg.params, bp, &ks)? {
                        points.push(up);
                        points.push(down);
                    }
                }
            }
            points.sort_by(|a, b| a.band_index.cmp(&b.band_index).then(a.k.total_cmp(&b.k)));
            let complex = points.iter().filter(|p| p.energy.im != 0.0).count();
            artifacts.push((out.clone(), bands_csv(&points)));
            format!("bands: {} band points ({} complex)", points.len(), complex)
        }
        Command::Branch => {
            let cell = cfg.cell()?;
            require_pt(&cell)?;
            let found = find_branch_points(&cell, &cfg.params, (cfg.emin, cfg.emax))?;
            artifacts.push((out.clone(), branch_points_csv(&found.branch_points)));
            format!(
                "branch: {} branch points, {} band edges",
                found.branch_points.len(),
                found.band_edges.len()
            )
        }
        Command::Packet => {
            let packet = GaussianPacket::new(cfg.x0, cfg.p0, cfg.b)?;
            let fields = evolve_direct_snapshots(
                &packet,
                &cfg.barrier()?,
                &cfg.params,
                &cfg.times,
                &DirectConfig::default(),
            )?;
            for f in &fields {
                let name = format!("{}_t{}.csv", stem(&out), fmt_g12(f.time));
                artifacts.push((out.with_file_name(name), f.to_csv()));
            }
            let manifest = serde_json::to_string(&SnapshotManifest::from_fields(&fields))? + "\n";
            artifacts.push((out.with_file_name(format!("{}_manifest.json", stem(&out))), manifest));
            let last = fields.last().expect("nonempty times");
            format!(
                "packet: {} snapshots, norm {} at t = {}",
                fields.len(),
                fmt_g12(last.norm),
                fmt_g12(last.time)
            )
        }
    };
    artifacts.push((cfg.sidecar_path(), cfg.to_json()?));
    let mut files = Vec::with_capacity(artifacts.len());
    for (path, contents) in artifacts {
        write_atomic(&path, contents.as_bytes())?;
        files.push(path);
    }
    Ok(RunReport { files, summary })
}

/// Runs the CLI and maps failures to exit codes: 2 for bad arguments,
/// configuration or I/O, 3 for numerical failures.
pub fn main_with(cli: Cli) -> i32 {
    let cfg = match RunConfig::resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("nhqm: {e}");
            return 2;
        }
    };
    match run(&cfg) {
        Ok(report) => {
            println!("{}", report.summary);
            0
        }
        Err(e) => {
            eprintln!("nhqm {}: {e}", cfg.command.name());
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}
