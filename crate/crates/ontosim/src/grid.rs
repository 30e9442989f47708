//! Discretized configuration space and wave-function storage.
//!
//! A [`GridSpec`] describes a uniform periodic grid over the configuration
//! space of `N` particles, each living in a 1-dimensional physical space, so
//! the full grid has `M^N` points. Amplitudes are stored flat in row-major
//! order: the coordinate of the last particle varies fastest, and the flat
//! index of the tuple `(i_0, ..., i_{N-1})` is
//! `((i_0 * M + i_1) * M + ...) + i_{N-1}`.
//!
//! All quadrature is the rectangle rule on cell nodes, `sum * dx^N`, which is
//! spectrally accurate for the smooth periodic states used here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier::{wavenumbers, SpectralTransform};

/// Default cap on the total number of grid points (2^26).
pub const DEFAULT_MAX_GRID_POINTS: usize = 1 << 26;

/// Relative floor below which a squared norm counts as numerically zero.
pub const ZERO_NORM_FLOOR: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("points_per_axis must be a power of two, got {0}")]
    NotPowerOfTwo(usize),
    #[error("points_per_axis must be at least 8, got {0}")]
    TooFewPoints(usize),
    #[error("need extent_max > extent_min, got [{min}, {max})")]
    BadExtent { min: f64, max: f64 },
    #[error("grid needs {requested} points, exceeding the cap of {cap}")]
    MemoryCap { requested: usize, cap: usize },
    #[error("n_particles must be at least 1")]
    NoParticles,
    #[error("amplitude buffer has length {got}, grid has {expected} points")]
    LengthMismatch { got: usize, expected: usize },
    #[error("wave function norm is numerically zero")]
    ZeroNorm,
    #[error("particle index {index} out of range for {n_particles} particles")]
    IndexOutOfRange { index: usize, n_particles: usize },
    #[error("non-finite value at flat index {0}")]
    NonFinite(usize),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("potential parameter out of range: {0}")]
    BadPotential(String),
    #[error("grids do not match")]
    GridMismatch,
}

/// Uniform periodic grid over N-particle configuration space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n_particles: usize,
    space_dim: usize,
    extent_min: f64,
    extent_max: f64,
    points_per_axis: usize,
}

impl GridSpec {
    /// 1-dimensional physical space per particle, default memory cap.
    pub fn new_1d(
        n_particles: usize,
        extent_min: f64,
        extent_max: f64,
        points_per_axis: usize,
    ) -> Result<Self, GridError> {
        Self::with_max_points(
            n_particles,
            extent_min,
            extent_max,
            points_per_axis,
            DEFAULT_MAX_GRID_POINTS,
        )
    }

    pub fn with_max_points(
        n_particles: usize,
        extent_min: f64,
        extent_max: f64,
        points_per_axis: usize,
        max_points: usize,
    ) -> Result<Self, GridError> {
        if n_particles == 0 {
            return Err(GridError::NoParticles);
        }
        if points_per_axis < 8 {
            return Err(GridError::TooFewPoints(points_per_axis));
        }
        if !points_per_axis.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo(points_per_axis));
        }
        if !(extent_max > extent_min) || !extent_min.is_finite() || !extent_max.is_finite() {
            return Err(GridError::BadExtent {
                min: extent_min,
                max: extent_max,
            });
        }
        let mut total: usize = 1;
        for _ in 0..n_particles {
            total = total
                .checked_mul(points_per_axis)
                .ok_or(GridError::MemoryCap {
                    requested: usize::MAX,
                    cap: max_points,
                })?;
            if total > max_points {
                return Err(GridError::MemoryCap {
                    requested: total,
                    cap: max_points,
                });
            }
        }
        Ok(GridSpec {
            n_particles,
            space_dim: 1,
            extent_min,
            extent_max,
            points_per_axis,
        })
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// Physical dimensions per particle (always 1 for full-grid runs).
    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn extent_min(&self) -> f64 {
        self.extent_min
    }

    pub fn extent_max(&self) -> f64 {
        self.extent_max
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Grid spacing along every axis.
    pub fn spacing(&self) -> f64 {
        (self.extent_max - self.extent_min) / self.points_per_axis as f64
    }

    pub fn axis_length(&self) -> f64 {
        self.extent_max - self.extent_min
    }

    /// Number of configuration-space axes, `n_particles * space_dim`.
    pub fn dim(&self) -> usize {
        self.n_particles * self.space_dim
    }

    /// Total number of grid points, `M^dim`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of one cell, `dx^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim() as i32)
    }

    /// Node coordinate along one axis.
    pub fn axis_coordinate(&self, i: usize) -> f64 {
        self.extent_min + self.spacing() * i as f64
    }

    pub fn axis_coordinates(&self) -> Vec<f64> {
        (0..self.points_per_axis)
            .map(|i| self.axis_coordinate(i))
            .collect()
    }

    /// Stride of the given axis in the flat row-major layout.
    pub fn stride(&self, axis: usize) -> usize {
        self.points_per_axis.pow((self.dim() - 1 - axis) as u32)
    }

    /// Per-axis index of a flat index along one axis.
    pub fn axis_index(&self, flat: usize, axis: usize) -> usize {
        (flat / self.stride(axis)) % self.points_per_axis
    }

    pub fn indices_to_flat(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.dim());
        indices
            .iter()
            .fold(0, |acc, &i| acc * self.points_per_axis + i)
    }

    /// Coordinates of the node at a flat index, one per axis.
    pub fn flat_to_coordinates(&self, flat: usize) -> Vec<f64> {
        (0..self.dim())
            .map(|a| self.axis_coordinate(self.axis_index(flat, a)))
            .collect()
    }

    /// Wrap a position into `[extent_min, extent_max)` consistently with the
    /// periodic boundary.
    pub fn wrap_position(&self, x: f64) -> f64 {
        let len = self.axis_length();
        let mut y = (x - self.extent_min).rem_euclid(len) + self.extent_min;
        // rem_euclid can return len on the boundary after rounding.
        if y >= self.extent_max {
            y -= len;
        }
        y
    }

    /// The single-particle grid over physical space (same axis, N = 1).
    pub fn axis_projection(&self) -> GridSpec {
        GridSpec {
            n_particles: 1,
            ..self.clone()
        }
    }
}

/// Per-particle masses, all strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Masses(Vec<f64>);

impl Masses {
    pub fn new(values: Vec<f64>) -> Result<Self, GridError> {
        if values.is_empty() {
            return Err(GridError::NoParticles);
        }
        for &m in &values {
            if !(m > 0.0) || !m.is_finite() {
                return Err(GridError::NonPositiveMass(m));
            }
        }
        Ok(Masses(values))
    }

    pub fn uniform(n_particles: usize, mass: f64) -> Result<Self, GridError> {
        Self::new(vec![mass; n_particles])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, particle: usize) -> f64 {
        self.0[particle]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Named analytic potential shapes, evaluated per particle coordinate and
/// summed over particles: `V(x_1..x_N) = sum_k v(x_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialFamily {
    Free,
    /// `v(x) = 0.5 * omega^2 * (x - center)^2` (unit mass convention).
    Harmonic {
        omega: f64,
        center: f64,
    },
    /// Two harmonic branches with minima at `center +- separation/2`:
    /// `v(x) = 0.5 * omega^2 * (|x - center| - separation/2)^2`.
    DoubleWell {
        omega: f64,
        separation: f64,
        center: f64,
    },
    /// Rectangular barrier of `height` and `thickness` centered at `center`,
    /// pierced by two slits of width `slit_width` whose centers sit
    /// `slit_separation` apart.
    BarrierWithSlits {
        height: f64,
        center: f64,
        thickness: f64,
        slit_separation: f64,
        slit_width: f64,
    },
}

impl PotentialFamily {
    pub fn validate(&self) -> Result<(), GridError> {
        let bad = |msg: String| Err(GridError::BadPotential(msg));
        match *self {
            PotentialFamily::Free => Ok(()),
            PotentialFamily::Harmonic { omega, center } => {
                if !(omega > 0.0) || !center.is_finite() {
                    return bad(format!("harmonic omega must be > 0, got {omega}"));
                }
                Ok(())
            }
            PotentialFamily::DoubleWell {
                omega,
                separation,
                center,
            } => {
                if !(omega > 0.0) || !(separation > 0.0) || !center.is_finite() {
                    return bad(format!("double-well needs omega > 0 and separation > 0, got omega={omega} separation={separation}"));
                }
                Ok(())
            }
            PotentialFamily::BarrierWithSlits {
                height,
                thickness,
                slit_separation,
                slit_width,
                center,
            } => {
                if !(height > 0.0)
                    || !(thickness > 0.0)
                    || !(slit_width > 0.0)
                    || !center.is_finite()
                {
                    return bad(format!("barrier needs positive height/thickness/slit_width, got {height}/{thickness}/{slit_width}"));
                }
                if slit_separation < slit_width {
                    return bad(format!("slit_separation ({slit_separation}) must be at least slit_width ({slit_width})"));
                }
                Ok(())
            }
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match *self {
            PotentialFamily::Free => 0.0,
            PotentialFamily::Harmonic { omega, center } => {
                let d = x - center;
                0.5 * omega * omega * d * d
            }
            PotentialFamily::DoubleWell {
                omega,
                separation,
                center,
            } => {
                let d = (x - center).abs() - 0.5 * separation;
                0.5 * omega * omega * d * d
            }
            PotentialFamily::BarrierWithSlits {
                height,
                center,
                thickness,
                slit_separation,
                slit_width,
            } => {
                let d = x - center;
                if d.abs() > 0.5 * thickness {
                    return 0.0;
                }
                let in_slit = (d.abs() - 0.5 * slit_separation).abs() <= 0.5 * slit_width;
                if in_slit {
                    0.0
                } else {
                    height
                }
            }
        }
    }
}

/// Real potential tabulated over the configuration grid.
#[derive(Debug, Clone)]
pub struct PotentialField {
    grid: GridSpec,
    values: Vec<f64>,
    family: Option<PotentialFamily>,
}

impl PotentialField {
    /// Tabulate an analytic family, summed over particle coordinates.
    pub fn from_family(grid: &GridSpec, family: PotentialFamily) -> Result<Self, GridError> {
        family.validate()?;
        let m = grid.points_per_axis();
        let axis: Vec<f64> = grid
            .axis_coordinates()
            .iter()
            .map(|&x| family.evaluate(x))
            .collect();
        let dim = grid.dim();
        let mut values = vec![0.0; grid.len()];
        for (flat, v) in values.iter_mut().enumerate() {
            let mut acc = 0.0;
            let mut rest = flat;
            for _ in 0..dim {
                acc += axis[rest % m];
                rest /= m;
            }
            *v = acc;
        }
        Ok(PotentialField {
            grid: grid.clone(),
            values,
            family: Some(family),
        })
    }

    pub fn free(grid: &GridSpec) -> Self {
        PotentialField {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
            family: Some(PotentialFamily::Free),
        }
    }

    pub fn from_values(grid: &GridSpec, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                got: values.len(),
                expected: grid.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        Ok(PotentialField {
            grid: grid.clone(),
            values,
            family: None,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn family(&self) -> Option<&PotentialFamily> {
        self.family.as_ref()
    }

    /// Shift by a constant (used by the energy-linearity tests).
    pub fn shifted(&self, c: f64) -> Self {
        PotentialField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
            family: None,
        }
    }
}

/// Complex amplitude field over a configuration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl WaveFunction {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>, time: f64) -> Result<Self, GridError> {
        if amplitudes.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                got: amplitudes.len(),
                expected: grid.len(),
            });
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(GridError::NonFinite(i));
        }
        Ok(WaveFunction {
            grid,
            amplitudes,
            time,
        })
    }

    /// Tabulate `f(coordinates)` over the grid (not normalized).
    pub fn from_fn(grid: &GridSpec, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let dim = grid.dim();
        let m = grid.points_per_axis();
        let axis = grid.axis_coordinates();
        let mut coords = vec![0.0; dim];
        let amplitudes = (0..grid.len())
            .map(|flat| {
                let mut rest = flat;
                for a in (0..dim).rev() {
                    coords[a] = axis[rest % m];
                    rest /= m;
                }
                f(&coords)
            })
            .collect();
        WaveFunction {
            grid: grid.clone(),
            amplitudes,
            time: 0.0,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Squared L2 norm, `sum |psi_i|^2 dx^dim`.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// Rescale to unit norm by a single positive real factor.
    pub fn normalize_in_place(&mut self) -> Result<f64, GridError> {
        let n2 = self.norm_squared();
        if !(n2 > ZERO_NORM_FLOOR) {
            return Err(GridError::ZeroNorm);
        }
        let scale = 1.0 / n2.sqrt();
        for a in &mut self.amplitudes {
            *a *= scale;
        }
        Ok(scale)
    }

    pub fn normalized(&self) -> Result<WaveFunction, GridError> {
        let mut out = self.clone();
        out.normalize_in_place()?;
        Ok(out)
    }

    /// `|psi|^2` per grid point (a density with respect to dx^dim).
    pub fn probability_density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Position density of one particle: `|psi|^2` summed over all other
    /// coordinates, normalized so that `sum rho dx = 1` for a unit-norm state.
    pub fn marginal_density(&self, particle: usize) -> Result<Vec<f64>, GridError> {
        let n = self.grid.n_particles();
        if particle >= n {
            return Err(GridError::IndexOutOfRange {
                index: particle,
                n_particles: n,
            });
        }
        let m = self.grid.points_per_axis();
        let stride = self.grid.stride(particle);
        let weight = self.grid.cell_volume() / self.grid.spacing();
        let mut rho = vec![0.0; m];
        for (flat, a) in self.amplitudes.iter().enumerate() {
            rho[(flat / stride) % m] += a.norm_sqr();
        }
        for r in &mut rho {
            *r *= weight;
        }
        Ok(rho)
    }

    /// `<a|b>` with the grid quadrature weight.
    pub fn inner_product(&self, other: &WaveFunction) -> Result<Complex64, GridError> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        let s: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.grid.cell_volume())
    }

    /// L2 distance to another state on the same grid.
    pub fn l2_distance(&self, other: &WaveFunction) -> Result<f64, GridError> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        let s: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.grid.cell_volume()).sqrt())
    }

    /// Mean and standard deviation of one particle's position density.
    pub fn position_moments(&self, particle: usize) -> Result<(f64, f64), GridError> {
        let rho = self.marginal_density(particle)?;
        let dx = self.grid.spacing();
        let mut mean = 0.0;
        let mut total = 0.0;
        for (i, &r) in rho.iter().enumerate() {
            let x = self.grid.axis_coordinate(i);
            mean += x * r * dx;
            total += r * dx;
        }
        mean /= total;
        let mut var = 0.0;
        for (i, &r) in rho.iter().enumerate() {
            let d = self.grid.axis_coordinate(i) - mean;
            var += d * d * r * dx;
        }
        var /= total;
        Ok((mean, var.sqrt()))
    }
}

/// Total energy `<psi|H|psi>` with the kinetic part evaluated spectrally.
///
/// Returns the real part; the imaginary part of the quadratic form vanishes
/// to rounding for any state.
pub fn expectation_energy(
    psi: &WaveFunction,
    potential: &PotentialField,
    masses: &Masses,
) -> Result<f64, GridError> {
    let grid = psi.grid();
    if potential.grid() != grid {
        return Err(GridError::GridMismatch);
    }
    if masses.len() != grid.n_particles() {
        return Err(GridError::LengthMismatch {
            got: masses.len(),
            expected: grid.n_particles(),
        });
    }

    let potential_term: f64 = psi
        .amplitudes()
        .iter()
        .zip(potential.values())
        .map(|(a, &v)| a.norm_sqr() * v)
        .sum::<f64>()
        * grid.cell_volume();

    // Kinetic term: sum over modes of |psi_hat|^2 * sum_a k_a^2 / (2 m_a),
    // with Parseval weight dx^dim / M^dim for the unnormalized transform.
    let transform = SpectralTransform::new(grid);
    let mut hat = psi.amplitudes().to_vec();
    transform.forward(&mut hat);
    let k = wavenumbers(grid.points_per_axis(), grid.axis_length());
    let dim = grid.dim();
    let m = grid.points_per_axis();
    let mut kinetic = 0.0;
    for (flat, a) in hat.iter().enumerate() {
        let mut t = 0.0;
        let mut rest = flat;
        for axis in (0..dim).rev() {
            let kj = k[rest % m];
            rest /= m;
            t += kj * kj / (2.0 * masses.get(axis));
        }
        kinetic += a.norm_sqr() * t;
    }
    kinetic *= grid.cell_volume() / grid.len() as f64;

    Ok(kinetic + potential_term)
}
