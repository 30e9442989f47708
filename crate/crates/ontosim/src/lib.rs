//! Grid-based nonrelativistic quantum dynamics with three primitive
//! ontologies on top of one shared propagator.
//!
//! The crate simulates a fixed number of spinless particles in one spatial
//! dimension per particle. A split-operator spectral scheme evolves the wave
//! function; on top of that sit
//!
//! - [`bohmian`]: particle trajectories following the guiding equation, with
//!   quantum-equilibrium initial sampling and equivariance checking,
//! - [`grw`]: the spontaneous-localization jump process (exponential waiting
//!   times at rate N*lambda, Gaussian localization operators),
//! - [`ontology`]: the matter-density field and flash-event readouts derived
//!   from simulation state, plus tails and delocation analyzers.
//!
//! [`scenario`] bundles the canonical experiments (double slit, box split in
//! two halves, entangled pair) behind declarative config files, [`stats`]
//! provides the reproducible PRNG and goodness-of-fit machinery, and
//! [`verify`] runs the acceptance checklist. See the `examples/` directory
//! for one runnable program per capability; the thin `ontosim` binary
//! exposes `run`, `verify`, and `convert` subcommands over the same code.
//!
//! Natural units `hbar = 1` throughout; SI values for the collapse
//! parameters enter only through [`grw::units`].

// Parameter validation uses `!(x > 0.0)` so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bohmian;
pub mod cli;
pub mod fourier;
pub mod grid;
pub mod grw;
pub mod io;
pub mod ontology;
pub mod scenario;
pub mod schrodinger;
pub mod stats;
pub mod verify;

pub use grid::{
    expectation_energy, GridSpec, Masses, PotentialFamily, PotentialField, WaveFunction,
};
pub use schrodinger::{
    analytic_coherent_state, analytic_free_gaussian, evolve, Propagator, PropagatorConfig,
};
