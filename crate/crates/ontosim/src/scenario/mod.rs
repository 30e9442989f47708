//! Declarative scenarios: the canonical experiments behind one config format.
//!
//! A [`ScenarioSpec`] names a grid, a potential family, an initial-state
//! family, a dynamics mode and its parameters. Specs load from a flat
//! key-value config file with `[section]` headers, build into
//! `(psi0, V, masses)` via [`build_initial_state`] and friends, and run
//! through [`run_scenario`], which writes data files plus a JSON
//! [`RunManifest`] echoing the full spec for bitwise reproduction.
//!
//! Four modes share each scenario: `schrodinger` (pure unitary evolution),
//! `bohm` (trajectory ensemble), `grwm` (jump process read out as matter
//! density), and `grwf` (jump process read out as flashes).

mod builders;
mod config;
mod engine;

pub use builders::{
    build_double_slit, build_einstein_box, build_entangled_pair, build_initial_state,
    fringe_analysis, FringeReport,
};
pub use engine::{run_scenario, RunManifest, RunStatus};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bohmian::BohmError;
use crate::grid::{GridError, GridSpec, PotentialFamily};
use crate::grw::GrwError;
use crate::ontology::OntologyError;
use crate::schrodinger::PropagationError;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for {field}: {message}")]
    Validation { field: String, message: String },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Bohm(#[from] BohmError),
    #[error(transparent)]
    Grw(#[from] GrwError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Dump(#[from] crate::io::DumpError),
    #[error(transparent)]
    Stats(#[from] crate::stats::StatsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ScenarioError {
    /// Configuration / input problems (CLI exit 2) versus runtime engine
    /// failures (CLI exit 3).
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            ScenarioError::Parse { .. }
                | ScenarioError::Validation { .. }
                | ScenarioError::InvalidGeometry(_)
                | ScenarioError::Grid(_)
        )
    }
}

/// Which dynamics reads out the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Schrodinger,
    Bohm,
    Grwm,
    Grwf,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "schrodinger" => Some(Mode::Schrodinger),
            "bohm" => Some(Mode::Bohm),
            "grwm" => Some(Mode::Grwm),
            "grwf" => Some(Mode::Grwf),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Schrodinger => "schrodinger",
            Mode::Bohm => "bohm",
            Mode::Grwm => "grwm",
            Mode::Grwf => "grwf",
        }
    }
}

/// Initial-state families. Lengths in natural units; `momentum` is the
/// common carrier wavenumber where it applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InitialState {
    /// Single Gaussian packet.
    Gaussian {
        center: f64,
        width: f64,
        momentum: f64,
    },
    /// Two coherent packets at `+- separation/2` behind a double slit,
    /// sharing the forward phase `exp(i momentum x)`; `relative_phase` and
    /// per-packet amplitudes set the interference character.
    DoubleSlit {
        separation: f64,
        width: f64,
        momentum: f64,
        relative_phase: f64,
        amplitude_left: f64,
        amplitude_right: f64,
    },
    /// Equal-weight packets with disjoint supports at `+- separation/2`
    /// (a box split in two half-boxes).
    DoublePacket { separation: f64, width: f64 },
    /// Two particles in the symmetrized state `f(x1)g(x2) + g(x1)f(x2)`
    /// with `f`, `g` packets at `-+ separation/2` carrying opposite
    /// momenta.
    EntangledPair {
        separation: f64,
        width: f64,
        momentum: f64,
    },
}

/// Time stepping and output cadence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_every: usize,
}

/// Ensemble size for `bohm` mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohmParams {
    pub n_trajectories: usize,
}

/// Collapse parameters for `grwm`/`grwf` modes, plus an optional scheduled
/// measurement (a forced collapse).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrwScenarioParams {
    pub lambda: f64,
    pub sigma: f64,
    pub measurement_time: Option<f64>,
    pub measurement_particle: Option<usize>,
}

/// A full experiment description: everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub mode: Mode,
    pub seed: u64,
    pub grid: GridSpec,
    pub potential: PotentialFamily,
    pub initial_state: InitialState,
    pub dynamics: DynamicsParams,
    pub mass: f64,
    pub bohm: Option<BohmParams>,
    pub grw: Option<GrwScenarioParams>,
}

impl ScenarioSpec {
    pub fn from_config_str(text: &str) -> Result<ScenarioSpec, ScenarioError> {
        config::spec_from_config(text)
    }

    pub fn from_config_path(path: &std::path::Path) -> Result<ScenarioSpec, ScenarioError> {
        let text = std::fs::read_to_string(path)?;
        config::spec_from_config(&text)
    }

    /// Re-check every invariant. Needed after deserializing a manifest echo,
    /// which bypasses the constructors.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        // Rebuild the grid through its constructor.
        GridSpec::new_1d(
            self.grid.n_particles(),
            self.grid.extent_min(),
            self.grid.extent_max(),
            self.grid.points_per_axis(),
        )?;
        self.potential.validate()?;
        let field = |f: &str, m: String| ScenarioError::Validation {
            field: f.into(),
            message: m,
        };
        if !(self.mass > 0.0) {
            return Err(field(
                "masses.mass",
                format!("must be > 0, got {}", self.mass),
            ));
        }
        if !(self.dynamics.dt > 0.0) {
            return Err(field(
                "dynamics.dt",
                format!("must be > 0, got {}", self.dynamics.dt),
            ));
        }
        if !(self.dynamics.t_final >= 0.0) {
            return Err(field(
                "dynamics.t_final",
                format!("must be >= 0, got {}", self.dynamics.t_final),
            ));
        }
        if self.dynamics.snapshot_every == 0 {
            return Err(field("dynamics.snapshot_every", "must be >= 1".into()));
        }
        match self.mode {
            Mode::Bohm => {
                let b = self.bohm.ok_or_else(|| {
                    field("bohm.n_trajectories", "required for mode = bohm".into())
                })?;
                if b.n_trajectories == 0 {
                    return Err(field("bohm.n_trajectories", "must be >= 1".into()));
                }
            }
            Mode::Grwm | Mode::Grwf => {
                let g = self
                    .grw
                    .ok_or_else(|| field("grw.lambda", "required for grw modes".into()))?;
                if !(g.lambda > 0.0) {
                    return Err(field(
                        "grw.lambda",
                        format!("must be > 0, got {}", g.lambda),
                    ));
                }
                if !(g.sigma > 0.0) {
                    return Err(field("grw.sigma", format!("must be > 0, got {}", g.sigma)));
                }
                if let Some(t) = g.measurement_time {
                    if !(0.0..=self.dynamics.t_final).contains(&t) {
                        return Err(field(
                            "grw.measurement_time",
                            format!("must lie in [0, t_final], got {t}"),
                        ));
                    }
                }
                if let Some(p) = g.measurement_particle {
                    if p >= self.grid.n_particles() {
                        return Err(field(
                            "grw.measurement_particle",
                            format!(
                                "particle {p} out of range for {} particles",
                                self.grid.n_particles()
                            ),
                        ));
                    }
                }
            }
            Mode::Schrodinger => {}
        }
        builders::validate_geometry(&self.grid, &self.initial_state)?;
        Ok(())
    }
}
