//! Particle trajectories guided by the wave function.
//!
//! The velocity of particle k is `v_k = Im[psi* d_k psi / |psi|^2] / m_k`,
//! evaluated at the full configuration, so every particle's velocity depends
//! on where all the others are. Gradients are precomputed spectrally per
//! wave snapshot ([`GuidingField`]); values at off-grid configurations come
//! from multilinear interpolation consistent with the periodic boundary.
//!
//! Trajectories integrate with classical RK4 against wave snapshots at
//! `t`, `t + dt/2` and `t + dt`. Near wave-function nodes (interpolated
//! `|psi|^2` below 1e-12 of its grid maximum) the velocity is undefined at
//! working precision; [`GuidingField::velocity`] signals
//! [`BohmError::NodeRegion`] and the ensemble driver falls back to freezing
//! the last finite velocity for that step, counting the event in the run
//! report rather than hiding it.
//!
//! Initial positions are drawn from `|psi_0|^2` (quantum equilibrium) by
//! inverse CDF over the flattened grid plus a uniform jitter inside the
//! cell, one independent stream per trajectory index.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fourier::{spectral_gradient_with, SpectralTransform};
use crate::grid::{GridError, GridSpec, Masses, PotentialField, WaveFunction};
use crate::schrodinger::{PropagationError, Propagator};
use crate::stats::{chi_square_gof, equal_bin_edges, histogram, GofReport, RngStream, StatsError};

/// Interpolated `|psi|^2` below this fraction of the grid maximum counts as
/// a node region.
pub const NODE_DENSITY_FLOOR_REL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum BohmError {
    #[error("velocity undefined in node region at {position:?}: |psi|^2 = {density:.3e} < floor {floor:.3e}")]
    NodeRegion {
        position: Vec<f64>,
        density: f64,
        floor: f64,
    },
    #[error("ensemble needs at least one trajectory")]
    NoTrajectories,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Positions of all particles at one instant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParticleConfiguration {
    pub positions: Vec<f64>,
    pub time: f64,
}

/// One particle history: configuration samples at increasing times, plus the
/// sampling seed and the number of node-region fallback steps.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<ParticleConfiguration>,
    pub seed: u64,
    pub index: u64,
    pub node_fallbacks: u64,
}

impl Trajectory {
    pub fn final_configuration(&self) -> &ParticleConfiguration {
        self.samples
            .last()
            .expect("trajectory has at least the initial sample")
    }
}

/// A wave snapshot prepared for velocity evaluation: amplitudes plus
/// spectral gradients along every configuration axis.
pub struct GuidingField {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
    gradients: Vec<Vec<Complex64>>,
    node_floor: f64,
    time: f64,
}

impl GuidingField {
    pub fn new(psi: &WaveFunction) -> Self {
        let transform = SpectralTransform::new(psi.grid());
        Self::with_transform(psi, &transform)
    }

    /// Build reusing prepared FFT plans (the ensemble driver calls this once
    /// per half step).
    pub fn with_transform(psi: &WaveFunction, transform: &SpectralTransform) -> Self {
        let grid = psi.grid().clone();
        let gradients = (0..grid.dim())
            .map(|axis| spectral_gradient_with(&grid, transform, psi.amplitudes(), axis))
            .collect();
        let max_density = psi
            .amplitudes()
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0, f64::max);
        GuidingField {
            amplitudes: psi.amplitudes().to_vec(),
            gradients,
            node_floor: NODE_DENSITY_FLOOR_REL * max_density,
            time: psi.time(),
            grid,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Multilinear periodic interpolation of a complex field at an arbitrary
    /// configuration point.
    fn interpolate(&self, values: &[Complex64], positions: &[f64]) -> Complex64 {
        let m = self.grid.points_per_axis();
        let dx = self.grid.spacing();
        let dim = self.grid.dim();
        debug_assert_eq!(positions.len(), dim);
        debug_assert!(dim <= 8);

        let mut base = [0usize; 8];
        let mut frac = [0.0f64; 8];
        for a in 0..dim {
            let u = (positions[a] - self.grid.extent_min()) / dx;
            let f = u.floor();
            base[a] = (f.rem_euclid(m as f64)) as usize % m;
            frac[a] = u - f;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << dim) {
            let mut w = 1.0;
            let mut flat = 0usize;
            for a in 0..dim {
                let hi = (corner >> a) & 1 == 1;
                w *= if hi { frac[a] } else { 1.0 - frac[a] };
                let idx = if hi { (base[a] + 1) % m } else { base[a] };
                flat = flat * m + idx;
            }
            acc += w * values[flat];
        }
        acc
    }

    /// Velocity of every particle at configuration `positions`.
    pub fn velocity(&self, positions: &[f64], masses: &Masses) -> Result<Vec<f64>, BohmError> {
        let psi = self.interpolate(&self.amplitudes, positions);
        let density = psi.norm_sqr();
        if density < self.node_floor {
            return Err(BohmError::NodeRegion {
                position: positions.to_vec(),
                density,
                floor: self.node_floor,
            });
        }
        let mut v = Vec::with_capacity(self.grid.dim());
        for (axis, grad) in self.gradients.iter().enumerate() {
            let dpsi = self.interpolate(grad, positions);
            v.push((psi.conj() * dpsi).im / (density * masses.get(axis)));
        }
        Ok(v)
    }
}

/// Velocity field at one configuration (the guiding law as a pure function).
/// Builds the gradients on the fly; ensemble integration holds a
/// [`GuidingField`] instead.
pub fn velocity_field(
    psi: &WaveFunction,
    q: &ParticleConfiguration,
    masses: &Masses,
) -> Result<Vec<f64>, BohmError> {
    GuidingField::new(psi).velocity(&q.positions, masses)
}

/// One RK4 step of the guiding ODE using wave snapshots at `t`, `t + dt/2`
/// and `t + dt`. Node-region errors propagate with the offending stage
/// position attached; the caller decides the fallback.
pub fn advance_configuration(
    field_t: &GuidingField,
    field_mid: &GuidingField,
    field_next: &GuidingField,
    q: &ParticleConfiguration,
    dt: f64,
    masses: &Masses,
) -> Result<ParticleConfiguration, BohmError> {
    let grid = field_t.grid();
    let dim = grid.dim();
    let k1 = field_t.velocity(&q.positions, masses)?;
    let mut stage = vec![0.0; dim];
    for a in 0..dim {
        stage[a] = q.positions[a] + 0.5 * dt * k1[a];
    }
    let k2 = field_mid.velocity(&stage, masses)?;
    for a in 0..dim {
        stage[a] = q.positions[a] + 0.5 * dt * k2[a];
    }
    let k3 = field_mid.velocity(&stage, masses)?;
    for a in 0..dim {
        stage[a] = q.positions[a] + dt * k3[a];
    }
    let k4 = field_next.velocity(&stage, masses)?;
    let positions = (0..dim)
        .map(|a| {
            grid.wrap_position(
                q.positions[a] + dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]),
            )
        })
        .collect();
    Ok(ParticleConfiguration {
        positions,
        time: q.time + dt,
    })
}

/// Draw `count` configurations i.i.d. from `|psi0|^2`.
///
/// Sample `i` uses the stream `(seed, "bohm-init", i)`: one uniform picks a
/// grid cell by inverse CDF over the flattened `|psi|^2`, then one uniform
/// per axis jitters the position inside the cell (avoiding lattice artifacts
/// in histograms). Reproducible for a fixed seed, independent of threading.
pub fn sample_initial_positions(
    psi0: &WaveFunction,
    count: usize,
    seed: u64,
) -> Vec<ParticleConfiguration> {
    let cdf = density_cdf(psi0);
    (0..count)
        .map(|i| {
            let mut rng = RngStream::labeled(seed, "bohm-init", i as u64);
            sample_one(psi0.grid(), &cdf, &mut rng, psi0.time())
        })
        .collect()
}

fn density_cdf(psi: &WaveFunction) -> Vec<f64> {
    let mut cdf = Vec::with_capacity(psi.amplitudes().len());
    let mut acc = 0.0;
    for a in psi.amplitudes() {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    cdf
}

fn sample_one(
    grid: &GridSpec,
    cdf: &[f64],
    rng: &mut RngStream,
    time: f64,
) -> ParticleConfiguration {
    let total = *cdf.last().expect("nonempty grid");
    let u = rng.uniform() * total;
    let flat = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
    let dim = grid.dim();
    let m = grid.points_per_axis();
    let dx = grid.spacing();
    let mut positions = vec![0.0; dim];
    let mut rest = flat;
    for a in (0..dim).rev() {
        positions[a] = grid.axis_coordinate(rest % m);
        rest /= m;
    }
    for p in positions.iter_mut() {
        *p += rng.uniform() * dx;
    }
    ParticleConfiguration { positions, time }
}

/// Ensemble run settings. `sample_every` is the trajectory/wave snapshot
/// cadence in full steps.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleConfig {
    pub dt: f64,
    pub t_final: f64,
    pub n_trajectories: usize,
    pub seed: u64,
    pub sample_every: usize,
}

/// Result of [`run_ensemble`]: trajectories plus the wave snapshots they
/// were integrated against, at the same cadence.
pub struct EnsembleRun {
    pub trajectories: Vec<Trajectory>,
    pub wave_snapshots: Vec<WaveFunction>,
    pub node_fallback_total: u64,
    pub seed: u64,
}

impl EnsembleRun {
    /// Positions of one particle across trajectories at sample index `at`.
    pub fn positions_at(&self, particle: usize, at: usize) -> Vec<f64> {
        self.trajectories
            .iter()
            .map(|t| t.samples[at].positions[particle])
            .collect()
    }

    pub fn final_positions(&self, particle: usize) -> Vec<f64> {
        self.trajectories
            .iter()
            .map(|t| t.final_configuration().positions[particle])
            .collect()
    }

    pub fn n_samples(&self) -> usize {
        self.wave_snapshots.len()
    }
}

/// Integrate `n_trajectories` Bohmian trajectories against one shared wave
/// evolution.
///
/// The wave advances in half steps of `dt/2` so each full trajectory step
/// sees consistent snapshots at `t`, `t + dt/2`, `t + dt`; trajectories are
/// advanced in parallel (they never interact) and the result is bitwise
/// deterministic for a fixed `(seed, n_trajectories)` regardless of thread
/// schedule. Node-region steps freeze the last finite velocity and are
/// counted per trajectory.
pub fn run_ensemble(
    psi0: &WaveFunction,
    potential: &PotentialField,
    masses: &Masses,
    config: EnsembleConfig,
) -> Result<EnsembleRun, BohmError> {
    if config.n_trajectories == 0 {
        return Err(BohmError::NoTrajectories);
    }
    let psi0 = psi0.normalized()?;
    let grid = psi0.grid().clone();
    let steps = (config.t_final / config.dt).round() as usize;
    let sample_every = config.sample_every.max(1);
    let dt = config.dt;

    struct State {
        q: ParticleConfiguration,
        last_velocity: Vec<f64>,
        node_fallbacks: u64,
        samples: Vec<ParticleConfiguration>,
    }

    let initial = sample_initial_positions(&psi0, config.n_trajectories, config.seed);
    let mut states: Vec<State> = initial
        .into_iter()
        .map(|q| State {
            samples: vec![q.clone()],
            last_velocity: vec![0.0; grid.dim()],
            node_fallbacks: 0,
            q,
        })
        .collect();

    let transform = SpectralTransform::new(&grid);
    let half_prop = Propagator::new(potential, masses, 0.5 * dt)?;
    let mut psi = psi0.clone();
    let mut wave_snapshots = vec![psi.clone()];
    let mut field_prev = GuidingField::with_transform(&psi, &transform);

    for s in 0..steps {
        half_prop.step(&mut psi);
        let field_mid = GuidingField::with_transform(&psi, &transform);
        half_prop.step(&mut psi);
        let field_next = GuidingField::with_transform(&psi, &transform);

        let record = (s + 1) % sample_every == 0 || s + 1 == steps;
        let t_next = (s + 1) as f64 * dt;
        states.par_iter_mut().for_each(|st| {
            match advance_configuration(&field_prev, &field_mid, &field_next, &st.q, dt, masses) {
                Ok(mut q) => {
                    for a in 0..q.positions.len() {
                        st.last_velocity[a] = (q.positions[a] - st.q.positions[a]) / dt;
                    }
                    q.time = t_next;
                    st.q = q;
                }
                Err(BohmError::NodeRegion { .. }) => {
                    st.node_fallbacks += 1;
                    let positions: Vec<f64> =
                        st.q.positions
                            .iter()
                            .zip(&st.last_velocity)
                            .map(|(&x, &v)| grid.wrap_position(x + v * dt))
                            .collect();
                    st.q = ParticleConfiguration {
                        positions,
                        time: t_next,
                    };
                }
                Err(_) => unreachable!("velocity evaluation only fails with NodeRegion"),
            }
            if record {
                st.samples.push(st.q.clone());
            }
        });
        if record {
            wave_snapshots.push(psi.clone());
        }
        field_prev = field_next;
    }

    let node_fallback_total = states.iter().map(|s| s.node_fallbacks).sum();
    let trajectories = states
        .into_iter()
        .enumerate()
        .map(|(i, s)| Trajectory {
            samples: s.samples,
            seed: config.seed,
            index: i as u64,
            node_fallbacks: s.node_fallbacks,
        })
        .collect();
    Ok(EnsembleRun {
        trajectories,
        wave_snapshots,
        node_fallback_total,
        seed: config.seed,
    })
}

/// Chi-square test of sampled positions against one particle's marginal
/// `|psi|^2`, on `bins` equal bins aligned to grid cells (`bins` must divide
/// the axis size).
pub fn equivariance_report(
    positions: &[f64],
    psi: &WaveFunction,
    particle: usize,
    bins: usize,
) -> Result<GofReport, BohmError> {
    let grid = psi.grid();
    let m = grid.points_per_axis();
    assert!(
        bins >= 2 && m.is_multiple_of(bins),
        "bins must divide the axis size"
    );
    let rho = psi.marginal_density(particle)?;
    let cells_per_bin = m / bins;
    let dx = grid.spacing();
    let mut probs: Vec<f64> = (0..bins)
        .map(|b| {
            rho[b * cells_per_bin..(b + 1) * cells_per_bin]
                .iter()
                .sum::<f64>()
                * dx
        })
        .collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let edges = equal_bin_edges(grid.extent_min(), grid.extent_max(), bins);
    let h = histogram(positions, &edges)?;
    Ok(chi_square_gof(&h.counts, &probs)?)
}
