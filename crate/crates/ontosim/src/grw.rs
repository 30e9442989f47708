//! The spontaneous-localization jump process.
//!
//! The wave function follows the ordinary Schrödinger evolution between
//! jumps. Jumps arrive at total rate `N * lambda` (exponential waiting
//! times); at a jump a particle k is selected uniformly, a collapse center x
//! is drawn from `p(x) = ||L_x^{1/2} psi||^2`, and the state is multiplied by
//! the square root of the Gaussian localization operator
//! `L_x = (2 pi sigma^2)^{-D/2} exp(-(x_k - x)^2 / (2 sigma^2))`
//! and renormalized. `D` is the per-particle space dimension (1 here).
//!
//! Uniform particle selection is the unique rule giving each particle an
//! individual rate of `lambda` while keeping the total at `N * lambda`.
//! Collapse times snap to the nearest propagation step boundary; scenario
//! step sizes are chosen so the snapping error is negligible against the
//! mean waiting time (`dt <= 1/(50 N lambda)`).
//!
//! Physical (SI) values of `lambda` and `sigma` produce no events in any
//! feasible desk run; see [`units`] for the conversion layer. Runs meant to
//! show statistics use scaled-up rates, documented per scenario.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{expectation_energy, GridError, GridSpec, Masses, PotentialField, WaveFunction};
use crate::schrodinger::{PropagationError, Propagator};
use crate::stats::RngStream;

pub mod units;

#[derive(Debug, Error)]
pub enum GrwError {
    #[error("lambda_rate must be > 0, got {0}")]
    BadRate(f64),
    #[error("sigma must be > 0, got {0}")]
    BadSigma(f64),
    #[error("collapse center incompatible with the state at t={time}: ||L^1/2 psi||^2 = {weight:.3e} (particle {particle}, center {center})")]
    ZeroOverlap {
        time: f64,
        particle: usize,
        center: f64,
        weight: f64,
    },
    #[error("forced collapse time {0} outside [0, t_final]")]
    BadForcedTime(f64),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

/// Collapse-process parameters in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrwParams {
    lambda_rate: f64,
    sigma: f64,
    pub seed: u64,
}

impl GrwParams {
    pub fn new(lambda_rate: f64, sigma: f64, seed: u64) -> Result<Self, GrwError> {
        if !(lambda_rate > 0.0) || !lambda_rate.is_finite() {
            return Err(GrwError::BadRate(lambda_rate));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(GrwError::BadSigma(sigma));
        }
        Ok(GrwParams {
            lambda_rate,
            sigma,
            seed,
        })
    }

    pub fn lambda_rate(&self) -> f64 {
        self.lambda_rate
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// One localization event. `time` is the step boundary where the jump was
/// applied; `pre_collapse_weight` is the sampled density value `p(center)`.
#[derive(Debug, Clone, Serialize)]
pub struct CollapseEvent {
    pub time: f64,
    pub particle_index: usize,
    pub center: f64,
    pub pre_collapse_weight: f64,
}

/// Exponential waiting time to the next jump for `n_particles` at
/// per-particle rate `lambda_rate` (total rate `N * lambda`).
pub fn next_jump_interval(n_particles: usize, lambda_rate: f64, rng: &mut RngStream) -> f64 {
    assert!(n_particles >= 1);
    rng.exponential(n_particles as f64 * lambda_rate)
}

/// Uniformly selected collapsing particle.
pub fn pick_collapsing_particle(n_particles: usize, rng: &mut RngStream) -> usize {
    assert!(n_particles >= 1);
    rng.index(n_particles)
}

/// The localization operator evaluated over the configuration grid:
/// `(2 pi sigma^2)^{-1/2} exp(-(x_k - center)^2 / (2 sigma^2))`, a function
/// of particle k's coordinate only.
pub fn localization_weights(
    grid: &GridSpec,
    particle: usize,
    center: f64,
    sigma: f64,
) -> Result<Vec<f64>, GrwError> {
    if particle >= grid.n_particles() {
        return Err(GrwError::Grid(GridError::IndexOutOfRange {
            index: particle,
            n_particles: grid.n_particles(),
        }));
    }
    if !(sigma > 0.0) {
        return Err(GrwError::BadSigma(sigma));
    }
    let m = grid.points_per_axis();
    let norm = 1.0 / (2.0 * std::f64::consts::PI * sigma * sigma).sqrt();
    let axis: Vec<f64> = (0..m)
        .map(|i| {
            let d = grid.axis_coordinate(i) - center;
            norm * (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let stride = grid.stride(particle);
    Ok((0..grid.len())
        .map(|flat| axis[(flat / stride) % m])
        .collect())
}

/// Probability density of the collapse center on particle k's axis: the
/// marginal `|psi|^2` convolved with the localization Gaussian, then
/// normalized over the grid (the continuum density integrates to 1 over all
/// of space; the grid restriction renormalizes the boundary tails away).
pub fn collapse_center_distribution(
    psi: &WaveFunction,
    particle: usize,
    sigma: f64,
) -> Result<Vec<f64>, GrwError> {
    if !(sigma > 0.0) {
        return Err(GrwError::BadSigma(sigma));
    }
    let grid = psi.grid();
    let rho = psi.marginal_density(particle)?;
    let m = grid.points_per_axis();
    let dx = grid.spacing();
    let norm = 1.0 / (2.0 * std::f64::consts::PI * sigma * sigma).sqrt();
    // Kernel over all lattice offsets, reused for every center.
    let kernel: Vec<f64> = (0..m)
        .map(|d| {
            let r = d as f64 * dx;
            norm * (-r * r / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let mut p: Vec<f64> = (0..m)
        .map(|i| {
            let mut acc = 0.0;
            for (j, &r) in rho.iter().enumerate() {
                acc += kernel[i.abs_diff(j)] * r;
            }
            acc * dx
        })
        .collect();
    let total: f64 = p.iter().sum::<f64>() * dx;
    for v in &mut p {
        *v /= total;
    }
    Ok(p)
}

/// Draw a collapse center from a discretized axis density by inverse CDF.
/// Returns `(center, p(center))`; centers land on grid nodes (exact at grid
/// resolution, no rejection sampling).
pub fn sample_collapse_center(grid: &GridSpec, density: &[f64], rng: &mut RngStream) -> (f64, f64) {
    debug_assert_eq!(density.len(), grid.points_per_axis());
    let mut cdf = Vec::with_capacity(density.len());
    let mut acc = 0.0;
    for &p in density {
        acc += p;
        cdf.push(acc);
    }
    let u = rng.uniform() * acc;
    let idx = cdf.partition_point(|&c| c <= u).min(density.len() - 1);
    (grid.axis_coordinate(idx), density[idx])
}

/// Apply one instantaneous collapse: multiply by `L^{1/2}` centered at
/// `center` in particle k's coordinate and renormalize. The multiplier is
/// real and positive, so the local phase of the state is untouched.
pub fn apply_collapse(
    psi: &WaveFunction,
    particle: usize,
    center: f64,
    sigma: f64,
) -> Result<WaveFunction, GrwError> {
    if particle >= psi.grid().n_particles() {
        return Err(GrwError::Grid(GridError::IndexOutOfRange {
            index: particle,
            n_particles: psi.grid().n_particles(),
        }));
    }
    if !(sigma > 0.0) {
        return Err(GrwError::BadSigma(sigma));
    }
    let grid = psi.grid();
    let m = grid.points_per_axis();
    let quarter_norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    let axis: Vec<f64> = (0..m)
        .map(|i| {
            let d = grid.axis_coordinate(i) - center;
            quarter_norm * (-d * d / (4.0 * sigma * sigma)).exp()
        })
        .collect();
    let stride = grid.stride(particle);
    let mut out = psi.clone();
    for (flat, a) in out.amplitudes_mut().iter_mut().enumerate() {
        *a *= axis[(flat / stride) % m];
    }
    let weight = out.norm_squared();
    if !(weight > 1e-300) {
        return Err(GrwError::ZeroOverlap {
            time: psi.time(),
            particle,
            center,
            weight,
        });
    }
    out.normalize_in_place()?;
    Ok(out)
}

/// A scheduled measurement, modeled as a collapse whose time is fixed rather
/// than drawn from the exponential clock. `particle: None` selects uniformly
/// like a spontaneous jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcedCollapse {
    pub time: f64,
    pub particle: Option<usize>,
}

/// Run settings for [`run_grw`].
#[derive(Debug, Clone)]
pub struct GrwRunConfig {
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_every: usize,
    pub forced: Vec<ForcedCollapse>,
}

impl GrwRunConfig {
    pub fn new(dt: f64, t_final: f64, snapshot_every: usize) -> Self {
        GrwRunConfig {
            dt,
            t_final,
            snapshot_every,
            forced: Vec::new(),
        }
    }
}

/// Output of a jump-process run: snapshots at the configured cadence, the
/// chronological event list, and the energy series at snapshot times.
pub struct GrwRun {
    pub snapshots: Vec<WaveFunction>,
    pub events: Vec<CollapseEvent>,
    pub energies: Vec<(f64, f64)>,
    pub seed: u64,
}

/// Alternate Schrödinger evolution with exponentially scheduled collapses.
///
/// Events are applied at the propagation step boundary nearest their
/// scheduled time; an event scheduled at or before `t_final` is always
/// applied, so the per-run event count is exactly the Poisson process count
/// over `[0, t_final]`. With no events the output is bit-identical to the
/// pure Schrödinger run at the same `dt` and cadence. Deterministic per seed.
pub fn run_grw(
    psi0: &WaveFunction,
    potential: &PotentialField,
    masses: &Masses,
    params: &GrwParams,
    config: &GrwRunConfig,
) -> Result<GrwRun, GrwError> {
    let n = psi0.grid().n_particles();
    let steps = (config.t_final / config.dt).round() as usize;
    let snapshot_every = config.snapshot_every.max(1);
    let prop = Propagator::new(potential, masses, config.dt)?;
    // The caller provides a normalized state; renormalizing here would
    // perturb the last ulp and break the bitwise no-event contract against
    // the pure Schrödinger run.
    let mut psi = psi0.clone();
    let t0 = psi.time();
    let mut rng = RngStream::labeled(params.seed, "grw-events", 0);

    let mut forced = config.forced.clone();
    for f in &forced {
        if !(0.0..=config.t_final).contains(&f.time) {
            return Err(GrwError::BadForcedTime(f.time));
        }
    }
    forced.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite forced times"));
    let mut forced_iter = forced.into_iter().peekable();

    let mut next_spontaneous = next_jump_interval(n, params.lambda_rate, &mut rng);
    let snap_step = |t: f64| -> usize { ((t / config.dt).round() as usize).min(steps) };

    let mut events = Vec::new();
    let mut snapshots = Vec::new();
    let mut energies = Vec::new();

    for boundary in 0..=steps {
        // Apply every event snapped to this boundary, in scheduled order
        // (spontaneous and forced interleave).
        loop {
            let spont_due =
                next_spontaneous <= config.t_final && snap_step(next_spontaneous) == boundary;
            let forced_due = forced_iter
                .peek()
                .is_some_and(|f| snap_step(f.time) == boundary);
            let take_forced = match (spont_due, forced_due) {
                (false, false) => break,
                (true, false) => false,
                (false, true) => true,
                (true, true) => forced_iter.peek().unwrap().time <= next_spontaneous,
            };
            let particle = if take_forced {
                let f = forced_iter.next().unwrap();
                match f.particle {
                    Some(k) => k,
                    None => pick_collapsing_particle(n, &mut rng),
                }
            } else {
                pick_collapsing_particle(n, &mut rng)
            };
            let density = collapse_center_distribution(&psi, particle, params.sigma)?;
            let (center, weight) = sample_collapse_center(psi.grid(), &density, &mut rng);
            let time = t0 + boundary as f64 * config.dt;
            psi = apply_collapse(&psi, particle, center, params.sigma)?;
            events.push(CollapseEvent {
                time,
                particle_index: particle,
                center,
                pre_collapse_weight: weight,
            });
            if !take_forced {
                next_spontaneous += next_jump_interval(n, params.lambda_rate, &mut rng);
            }
        }

        if boundary % snapshot_every == 0 || boundary == steps {
            snapshots.push(psi.clone());
            energies.push((psi.time(), expectation_energy(&psi, potential, masses)?));
        }
        if boundary < steps {
            prop.step(&mut psi);
        }
    }

    Ok(GrwRun {
        snapshots,
        events,
        energies,
        seed: params.seed,
    })
}
