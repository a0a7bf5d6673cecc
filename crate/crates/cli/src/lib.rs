//! Command implementations behind the `qtime` binary.
//!
//! Every command reads the spectrum/state JSON document, runs one analysis
//! and writes its artifacts into the output directory. Exit codes: 0 on
//! success, 2 for unreadable or malformed input (and I/O failures), 3 when
//! the physics layer rejects the input.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use qtime_core::canonical::{covariance_record, density_table};
use qtime_core::claims::ClaimsSettings;
use qtime_core::denseness::convergence_table;
use qtime_core::io::{write_csv, write_series_csv, Cell, InputDocument};
use qtime_core::zeroset::paley_wiener_record;
use qtime_core::{
    build_hamiltonian, build_t_g, commutator, sublevel_measure, verify_claims, weak_commutator,
    CanonicalDensity, EnergySpectrum, QtError, QuantumState, StateSampler, TrigSignal,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Tg,
    Canonical,
    Cauchy,
    Zeroset,
    Claims,
}

/// Fully resolved options for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub output_path: PathBuf,
    pub grid: usize,
    pub tau_max: f64,
    pub epsilons: Vec<f64>,
    pub seed: u64,
    pub target: usize,
}

pub const DEFAULT_EPSILONS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Physics(#[from] QtError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Physics(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(CliError::Input(format!(
                "--grid must be at least 2, got {}",
                self.grid
            )));
        }
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return Err(CliError::Input(format!(
                "--tau-max must be positive, got {}",
                self.tau_max
            )));
        }
        if let Some(bad) = self.epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(CliError::Input(format!(
                "--eps must be positive, got {bad}"
            )));
        }
        Ok(())
    }

    fn epsilons(&self) -> Vec<f64> {
        if self.epsilons.is_empty() {
            DEFAULT_EPSILONS.to_vec()
        } else {
            self.epsilons.clone()
        }
    }
}

/// Reads and validates the input document.
pub fn load_input(path: &Path) -> Result<(EnergySpectrum, Option<QuantumState>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let doc = InputDocument::from_json(&text).map_err(|e| {
        let context = text
            .lines()
            .nth(e.line().saturating_sub(1))
            .unwrap_or("")
            .trim();
        CliError::Input(format!("{}: {e}\n  | {context}", path.display()))
    })?;
    Ok(doc.build()?)
}

fn require_input(config: &RunConfig) -> Result<(EnergySpectrum, Option<QuantumState>)> {
    match &config.input_path {
        Some(p) => load_input(p),
        None => Err(CliError::Input(
            "--input is required for this command".into(),
        )),
    }
}

struct OutputDir<'a>(&'a Path);

impl OutputDir<'_> {
    fn create(path: &Path) -> Result<OutputDir<'_>> {
        fs::create_dir_all(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(OutputDir(path))
    }

    fn write_with(
        &self,
        name: &str,
        body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
    ) -> Result<()> {
        let path = self.0.join(name);
        let io_err = |source| CliError::Io {
            path: path.clone(),
            source,
        };
        let file = fs::File::create(&path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        body(&mut out).map_err(io_err)?;
        out.flush().map_err(io_err)
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("records serialize");
        self.write_with(name, |out| writeln!(out, "{text}"))
    }
}

fn linspace(end: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|i| end * i as f64 / last).collect()
}

/// Input state if present, else a seeded random state (projected onto S when
/// `in_s` is set).
fn state_or_random(
    state: Option<QuantumState>,
    n: usize,
    seed: u64,
    in_s: bool,
) -> Result<QuantumState> {
    if let Some(psi) = state {
        return Ok(psi);
    }
    let mut rng = StateSampler::new(seed);
    Ok(if in_s { rng.s_state(n)? } else { rng.state(n)? })
}

#[derive(Serialize)]
struct TgDiagnostics {
    n: usize,
    hbar: f64,
    spectral_norm: f64,
    hermiticity_error: f64,
    weak_exact_max_diff: f64,
    max_abs_diagonal: f64,
    s_states_checked: usize,
    max_s_residual: f64,
}

fn run_tg(config: &RunConfig, out: &OutputDir) -> Result<()> {
    let (spectrum, _) = require_input(config)?;
    let t_g = build_t_g(&spectrum);
    let comm = commutator(&t_g, &build_hamiltonian(&spectrum))?;
    let weak = weak_commutator(&spectrum);
    let n = spectrum.len();
    let i_hbar = qtime_core::Complex64::new(0.0, spectrum.hbar());
    let mut rng = StateSampler::new(config.seed);
    let checks = 100;
    let mut max_resid = 0.0f64;
    for _ in 0..checks {
        let psi = rng.s_state(n)?;
        let image = comm.apply(psi.coeffs())?;
        let resid = image
            .iter()
            .zip(psi.coeffs())
            .map(|(a, c)| (a - i_hbar * c).norm_sqr())
            .sum::<f64>()
            .sqrt();
        max_resid = max_resid.max(resid);
    }
    let diag = TgDiagnostics {
        n,
        hbar: spectrum.hbar(),
        spectral_norm: t_g.spectral_norm(),
        hermiticity_error: t_g.hermiticity_error(),
        weak_exact_max_diff: comm.max_abs_diff(&weak)?,
        max_abs_diagonal: (0..n).map(|j| comm.get(j, j).norm()).fold(0.0, f64::max),
        s_states_checked: checks,
        max_s_residual: max_resid,
    };
    out.json("t_g.json", &t_g.to_record())?;
    out.json("commutator.json", &comm.to_record())?;
    out.json("diagnostics.json", &diag)
}

fn run_canonical(config: &RunConfig, out: &OutputDir) -> Result<()> {
    let (spectrum, state) = require_input(config)?;
    let psi = state_or_random(state, spectrum.len(), config.seed, false)?;
    let density = CanonicalDensity::new(&spectrum, &psi)?;
    let table = density_table(&density, config.tau_max, config.grid)?;
    out.write_with("density.csv", |w| {
        write_csv(
            w,
            &["t", "p"],
            table.iter().map(|&(t, p)| vec![t.into(), p.into()]),
        )
    })?;
    let record = covariance_record(
        &spectrum,
        &psi,
        config.tau_max,
        &linspace(config.tau_max, config.grid),
    )?;
    out.json("covariance.json", &record)
}

fn run_cauchy(config: &RunConfig, out: &OutputDir) -> Result<()> {
    let rows = convergence_table(config.grid, config.target)?;
    out.write_with("cauchy.csv", |w| {
        write_csv(
            w,
            &["N", "c0", "distance"],
            rows.iter()
                .map(|&(n, c, d)| vec![Cell::from(n), c.into(), d.into()]),
        )
    })
}

fn run_zeroset(config: &RunConfig, out: &OutputDir) -> Result<()> {
    let (spectrum, state) = require_input(config)?;
    let psi = state_or_random(state, spectrum.len(), config.seed, true)?;
    let signal = TrigSignal::from_state(&spectrum, &psi)?;
    let base_grid = config.grid.max(1000);
    let reports = config
        .epsilons()
        .into_iter()
        .map(|eps| sublevel_measure(&signal, eps, config.tau_max, base_grid))
        .collect::<qtime_core::Result<Vec<_>>>()?;
    out.write_with("measure.csv", |w| {
        write_csv(
            w,
            &["epsilon", "measure", "error_bound"],
            reports
                .iter()
                .map(|r| vec![r.epsilon.into(), r.measure.into(), r.error_bound.into()]),
        )
    })?;
    let panels = config.grid.max(100);
    out.json(
        "paley_wiener.json",
        &paley_wiener_record(&signal, config.tau_max, panels)?,
    )
}

fn run_claims(config: &RunConfig, out: &OutputDir) -> Result<()> {
    let (spectrum, state) = require_input(config)?;
    let psi = match state {
        Some(psi) => qtime_core::project_onto_s(&psi)?,
        None => state_or_random(None, spectrum.len(), config.seed, true)?,
    };
    let settings = ClaimsSettings {
        grid: config.grid,
        tau_max: config.tau_max,
        epsilons: config.epsilons(),
    };
    let run = verify_claims(&spectrum, &psi, &settings)?;
    out.write_with("deviation.csv", |w| write_series_csv(w, &run.deviation))?;
    out.write_with("s_membership.csv", |w| write_series_csv(w, &run.membership))?;
    out.json("summary.json", &run.summary)
}

/// Runs one command, writing its artifacts under `config.output_path`.
pub fn run(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let out = OutputDir::create(&config.output_path)?;
    match config.command {
        Command::Tg => run_tg(config, &out),
        Command::Canonical => run_canonical(config, &out),
        Command::Cauchy => run_cauchy(config, &out),
        Command::Zeroset => run_zeroset(config, &out),
        Command::Claims => run_claims(config, &out),
    }
}
