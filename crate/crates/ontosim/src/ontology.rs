//! The three primitive-ontology readouts, extracted from simulation state.
//!
//! - Matter density (GRWm): `m(x) = sum_k m_k rho_k(x)` over physical space,
//!   where `rho_k` is particle k's marginal `|psi|^2`. Piecewise continuous
//!   in time, with instantaneous jumps at collapse events.
//! - Flashes (GRWf): one space-time point per collapse event, at the event's
//!   center. The particle index is carried as bookkeeping for cross-checks;
//!   the flash history itself has no persisting particles and there may be
//!   no flashes at all in a run.
//! - Bohmian configurations pass through unchanged from the trajectory
//!   engine; this module adds the region analyzers used to compare all
//!   three.
//!
//! The analyzers make the tails discussion quantitative: after a collapse,
//! [`region_masses`] shows the suppressed region keeping a strictly positive
//! sliver of matter (bare tails), and [`structured_tails_report`] shows that
//! sliver still shaped like the original branch (structured tails) by
//! correlating mass-normalized restrictions of the field.

use serde::Serialize;
use thiserror::Error;

use crate::grid::{GridError, GridSpec, Masses, WaveFunction};
use crate::grw::CollapseEvent;

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("region '{name}' has before-weight {weight:.3e}, below the 1e-12 floor")]
    DegenerateRegion { name: String, weight: f64 },
    #[error("regions must be disjoint and cover the extent: {0}")]
    BadPartition(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Non-negative matter density over physical space (one axis), in mass per
/// unit length.
#[derive(Debug, Clone, Serialize)]
pub struct MatterDensityField {
    axis: GridSpec,
    values: Vec<f64>,
    time: f64,
}

impl MatterDensityField {
    pub fn axis(&self) -> &GridSpec {
        &self.axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Integral of the field over space; equals the total mass.
    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.axis.spacing()
    }
}

/// Matter density over physical space: each particle contributes its mass
/// times its position marginal.
pub fn matter_density(
    psi: &WaveFunction,
    masses: &Masses,
) -> Result<MatterDensityField, OntologyError> {
    let grid = psi.grid();
    if masses.len() != grid.n_particles() {
        return Err(OntologyError::Grid(GridError::LengthMismatch {
            got: masses.len(),
            expected: grid.n_particles(),
        }));
    }
    let m = grid.points_per_axis();
    let mut values = vec![0.0; m];
    for k in 0..grid.n_particles() {
        let rho = psi.marginal_density(k)?;
        let mk = masses.get(k);
        for (v, r) in values.iter_mut().zip(&rho) {
            *v += mk * r;
        }
    }
    Ok(MatterDensityField {
        axis: grid.axis_projection(),
        values,
        time: psi.time(),
    })
}

/// An isolated space-time event. `particle_index` is bookkeeping only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlashEvent {
    pub time: f64,
    pub position: f64,
    pub particle_index: usize,
}

/// One flash per collapse, at the collapse center. Order preserved; an
/// empty event list gives an empty flash history.
pub fn flashes_from_events(events: &[CollapseEvent]) -> Vec<FlashEvent> {
    events
        .iter()
        .map(|e| FlashEvent {
            time: e.time,
            position: e.center,
            particle_index: e.particle_index,
        })
        .collect()
}

/// A named half-open interval `[lo, hi)` of physical space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

/// Disjoint named intervals covering the grid extent exactly.
#[derive(Debug, Clone, Serialize)]
pub struct RegionPartition {
    regions: Vec<Region>,
}

impl RegionPartition {
    pub fn new(axis: &GridSpec, mut regions: Vec<Region>) -> Result<Self, OntologyError> {
        if regions.is_empty() {
            return Err(OntologyError::BadPartition("no regions".into()));
        }
        regions.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite region bounds"));
        let tol = 1e-12 * axis.axis_length();
        if (regions[0].lo - axis.extent_min()).abs() > tol {
            return Err(OntologyError::BadPartition(format!(
                "first region starts at {}, extent at {}",
                regions[0].lo,
                axis.extent_min()
            )));
        }
        if (regions[regions.len() - 1].hi - axis.extent_max()).abs() > tol {
            return Err(OntologyError::BadPartition(format!(
                "last region ends at {}, extent at {}",
                regions[regions.len() - 1].hi,
                axis.extent_max()
            )));
        }
        for w in regions.windows(2) {
            if (w[0].hi - w[1].lo).abs() > tol {
                return Err(OntologyError::BadPartition(format!(
                    "gap or overlap between '{}' and '{}'",
                    w[0].name, w[1].name
                )));
            }
        }
        for r in &regions {
            if !(r.hi > r.lo) {
                return Err(OntologyError::BadPartition(format!(
                    "region '{}' is empty",
                    r.name
                )));
            }
        }
        Ok(RegionPartition { regions })
    }

    /// Split the extent at its midpoint into "left" and "right".
    pub fn halves(axis: &GridSpec) -> Self {
        let mid = 0.5 * (axis.extent_min() + axis.extent_max());
        RegionPartition {
            regions: vec![
                Region {
                    name: "left".into(),
                    lo: axis.extent_min(),
                    hi: mid,
                },
                Region {
                    name: "right".into(),
                    lo: mid,
                    hi: axis.extent_max(),
                },
            ],
        }
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    fn region_of(&self, x: f64) -> usize {
        // Last region whose lo <= x; boundaries belong to the upper region.
        self.regions
            .iter()
            .rposition(|r| r.lo <= x)
            .unwrap_or_default()
    }
}

/// Integral of the matter density over each region. The per-region values
/// sum to the field's total mass exactly up to rounding, since every grid
/// cell lands in exactly one region.
pub fn region_masses(
    field: &MatterDensityField,
    partition: &RegionPartition,
) -> Vec<(String, f64)> {
    let dx = field.axis().spacing();
    let mut masses = vec![0.0; partition.regions().len()];
    for (i, &v) in field.values().iter().enumerate() {
        let x = field.axis().axis_coordinate(i);
        masses[partition.region_of(x)] += v * dx;
    }
    partition
        .regions()
        .iter()
        .zip(masses)
        .map(|(r, m)| (r.name.clone(), m))
        .collect()
}

/// Per-region before/after comparison of a matter-density field.
#[derive(Debug, Clone, Serialize)]
pub struct RegionTails {
    pub name: String,
    pub weight_before: f64,
    pub weight_after: f64,
    pub weight_ratio: f64,
    pub shape_correlation: f64,
}

/// Quantify bare and structured tails: for each region, the weight ratio
/// `after/before` and the Pearson correlation of the mass-normalized field
/// restrictions. A suppressed branch shows a tiny weight ratio next to a
/// shape correlation near 1.
pub fn structured_tails_report(
    before: &MatterDensityField,
    after: &MatterDensityField,
    partition: &RegionPartition,
) -> Result<Vec<RegionTails>, OntologyError> {
    if before.axis() != after.axis() {
        return Err(OntologyError::GridMismatch);
    }
    let dx = before.axis().spacing();
    let n_regions = partition.regions().len();
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); n_regions];
    for i in 0..before.values().len() {
        cells[partition.region_of(before.axis().axis_coordinate(i))].push(i);
    }

    let mut out = Vec::with_capacity(n_regions);
    for (r, idx) in partition.regions().iter().zip(&cells) {
        let w_before: f64 = idx.iter().map(|&i| before.values()[i]).sum::<f64>() * dx;
        let w_after: f64 = idx.iter().map(|&i| after.values()[i]).sum::<f64>() * dx;
        if w_before < 1e-12 {
            return Err(OntologyError::DegenerateRegion {
                name: r.name.clone(),
                weight: w_before,
            });
        }
        let a: Vec<f64> = idx.iter().map(|&i| before.values()[i] / w_before).collect();
        let b: Vec<f64> = idx
            .iter()
            .map(|&i| after.values()[i] / w_after.max(1e-300))
            .collect();
        out.push(RegionTails {
            name: r.name.clone(),
            weight_before: w_before,
            weight_after: w_after,
            weight_ratio: w_after / w_before,
            shape_correlation: pearson(&a, &b),
        });
    }
    Ok(out)
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        num += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    let denom = (va * vb).sqrt();
    if denom == 0.0 {
        // Both restrictions constant: identical shapes correlate perfectly.
        let equal = a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        return if equal { 1.0 } else { 0.0 };
    }
    num / denom
}
