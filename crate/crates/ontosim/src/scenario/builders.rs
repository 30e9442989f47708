//! Initial-state constructors for the canonical scenarios.
//!
//! Every packet is the standard Gaussian
//! `(2 pi w^2)^{-1/4} exp(-(x-c)^2/(4 w^2) + i k (x-c))`. Builders check the
//! boundary-margin rule (supports at least five widths away from the
//! periodic boundary) and the per-family geometry constraints, and return
//! `(psi0, V, masses)` ready for any mode's engine.
//!
//! The double slit is realized in one dimension as the post-slit state: two
//! coherent packets with a common forward phase. Their free interference
//! develops fringes with spacing `2 pi t / (m d)` at time `t` for slit
//! separation `d`, which is what the screen histogram samples.

use num_complex::Complex64;
use serde::Serialize;

use super::{InitialState, ScenarioError};
use crate::grid::{GridSpec, Masses, PotentialFamily, PotentialField, WaveFunction};

fn packet(x: f64, center: f64, width: f64, momentum: f64) -> Complex64 {
    let d = x - center;
    let norm = (2.0 * std::f64::consts::PI * width * width).powf(-0.25);
    norm * Complex64::new(-d * d / (4.0 * width * width), momentum * d).exp()
}

fn margin_check(grid: &GridSpec, center: f64, width: f64) -> Result<(), ScenarioError> {
    if center - 5.0 * width < grid.extent_min() || center + 5.0 * width > grid.extent_max() {
        return Err(ScenarioError::InvalidGeometry(format!(
            "packet at {center} with width {width} comes within 5 widths of the boundary [{}, {})",
            grid.extent_min(),
            grid.extent_max()
        )));
    }
    Ok(())
}

/// Overlap of two unit-norm packets separated by `d` with common width `w`:
/// `exp(-d^2 / (8 w^2))`.
fn packet_overlap(separation: f64, width: f64) -> f64 {
    (-separation * separation / (8.0 * width * width)).exp()
}

pub(super) fn validate_geometry(
    grid: &GridSpec,
    state: &InitialState,
) -> Result<(), ScenarioError> {
    match *state {
        InitialState::Gaussian { center, width, .. } => {
            positive_width(width)?;
            margin_check(grid, center, width)
        }
        InitialState::DoubleSlit {
            separation, width, ..
        } => {
            positive_width(width)?;
            if separation <= 0.0 {
                return Err(ScenarioError::InvalidGeometry(format!(
                    "separation must be > 0, got {separation}"
                )));
            }
            margin_check(grid, -0.5 * separation, width)?;
            margin_check(grid, 0.5 * separation, width)?;
            let overlap = packet_overlap(separation, width);
            if overlap > 0.1 {
                return Err(ScenarioError::InvalidGeometry(format!(
                    "slit packets overlap at {overlap:.3} of unit mass (limit 0.1); widen the separation"
                )));
            }
            Ok(())
        }
        InitialState::DoublePacket { separation, width } => {
            positive_width(width)?;
            margin_check(grid, -0.5 * separation, width)?;
            margin_check(grid, 0.5 * separation, width)?;
            let overlap = packet_overlap(separation, width);
            if overlap > 1e-3 {
                return Err(ScenarioError::InvalidGeometry(format!(
                    "half-box supports overlap at {overlap:.3e} (limit 1e-3); they must be disjoint"
                )));
            }
            Ok(())
        }
        InitialState::EntangledPair {
            separation, width, ..
        } => {
            if grid.n_particles() != 2 {
                return Err(ScenarioError::InvalidGeometry(format!(
                    "entangled pair needs a 2-particle grid, got N = {}",
                    grid.n_particles()
                )));
            }
            positive_width(width)?;
            margin_check(grid, -0.5 * separation, width)?;
            margin_check(grid, 0.5 * separation, width)?;
            Ok(())
        }
    }
}

fn positive_width(width: f64) -> Result<(), ScenarioError> {
    if !(width > 0.0) {
        return Err(ScenarioError::InvalidGeometry(format!(
            "packet width must be > 0, got {width}"
        )));
    }
    Ok(())
}

/// Build the initial state for any family; the grid must match the family's
/// particle count.
pub fn build_initial_state(
    grid: &GridSpec,
    state: &InitialState,
) -> Result<WaveFunction, ScenarioError> {
    validate_geometry(grid, state)?;
    let psi = match *state {
        InitialState::Gaussian {
            center,
            width,
            momentum,
        } => {
            require_particles(grid, 1)?;
            WaveFunction::from_fn(grid, |x| packet(x[0], center, width, momentum))
        }
        InitialState::DoubleSlit {
            separation,
            width,
            momentum,
            relative_phase,
            amplitude_left,
            amplitude_right,
        } => {
            require_particles(grid, 1)?;
            let a = 0.5 * separation;
            let phase = Complex64::from_polar(1.0, relative_phase);
            WaveFunction::from_fn(grid, |x| {
                let carrier = Complex64::new(0.0, momentum * x[0]).exp();
                carrier
                    * (amplitude_left * packet(x[0], -a, width, 0.0)
                        + amplitude_right * phase * packet(x[0], a, width, 0.0))
            })
        }
        InitialState::DoublePacket { separation, width } => {
            require_particles(grid, 1)?;
            let a = 0.5 * separation;
            WaveFunction::from_fn(grid, |x| {
                packet(x[0], -a, width, 0.0) + packet(x[0], a, width, 0.0)
            })
        }
        InitialState::EntangledPair {
            separation,
            width,
            momentum,
        } => {
            require_particles(grid, 2)?;
            let a = 0.5 * separation;
            WaveFunction::from_fn(grid, |x| {
                let f = |y: f64| packet(y, -a, width, momentum);
                let g = |y: f64| packet(y, a, width, -momentum);
                f(x[0]) * g(x[1]) + g(x[0]) * f(x[1])
            })
        }
    };
    Ok(psi.normalized()?)
}

fn require_particles(grid: &GridSpec, n: usize) -> Result<(), ScenarioError> {
    if grid.n_particles() != n {
        return Err(ScenarioError::InvalidGeometry(format!(
            "initial-state family needs N = {n}, grid has N = {}",
            grid.n_particles()
        )));
    }
    Ok(())
}

/// Post-slit interference scenario: two coherent packets, free flight
/// downstream, unit mass.
pub fn build_double_slit(
    grid: &GridSpec,
    separation: f64,
    width: f64,
    momentum: f64,
    relative_phase: f64,
) -> Result<(WaveFunction, PotentialField, Masses), ScenarioError> {
    let state = InitialState::DoubleSlit {
        separation,
        width,
        momentum,
        relative_phase,
        amplitude_left: 1.0,
        amplitude_right: 1.0,
    };
    let psi = build_initial_state(grid, &state)?;
    Ok((psi, PotentialField::free(grid), Masses::uniform(1, 1.0)?))
}

/// A box split in two half-boxes: equal packets of width `w` held at
/// `+- separation/2` by a double well whose branches have `w` as their
/// ground-state width (`omega = 1/(2 m w^2)`), so the halves stay put.
pub fn build_einstein_box(
    grid: &GridSpec,
    separation: f64,
    width: f64,
) -> Result<(WaveFunction, PotentialField, Masses), ScenarioError> {
    let state = InitialState::DoublePacket { separation, width };
    let psi = build_initial_state(grid, &state)?;
    let omega = 1.0 / (2.0 * width * width);
    let v = PotentialField::from_family(
        grid,
        PotentialFamily::DoubleWell {
            omega,
            separation,
            center: 0.0,
        },
    )?;
    Ok((psi, v, Masses::uniform(1, 1.0)?))
}

/// Spatially entangled pair flying together: `f(x1)g(x2) + g(x1)f(x2)` with
/// opposite boosts, free potential, unit masses.
pub fn build_entangled_pair(
    grid: &GridSpec,
    separation: f64,
    width: f64,
    momentum: f64,
) -> Result<(WaveFunction, PotentialField, Masses), ScenarioError> {
    let state = InitialState::EntangledPair {
        separation,
        width,
        momentum,
    };
    let psi = build_initial_state(grid, &state)?;
    Ok((psi, PotentialField::free(grid), Masses::uniform(2, 1.0)?))
}

/// Peak/valley structure of a density profile inside a window.
#[derive(Debug, Clone, Serialize)]
pub struct FringeReport {
    /// Mean spacing between adjacent interior maxima, if at least two exist.
    pub spacing: Option<f64>,
    /// `(mean peak - mean valley) / (mean peak + mean valley)`; 0 for a
    /// unimodal profile.
    pub contrast: f64,
    pub n_peaks: usize,
}

/// Locate interior local maxima/minima of `density` over `[lo, hi)` and
/// summarize them. Used to check fringe spacing against the two-source
/// formula and to quantify "no fringes" for single-packet controls.
pub fn fringe_analysis(axis: &GridSpec, density: &[f64], lo: f64, hi: f64) -> FringeReport {
    let m = axis.points_per_axis();
    debug_assert_eq!(density.len(), m);
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    let mut valleys: Vec<f64> = Vec::new();
    for i in 1..m - 1 {
        let x = axis.axis_coordinate(i);
        if x < lo || x >= hi {
            continue;
        }
        let (a, b, c) = (density[i - 1], density[i], density[i + 1]);
        if b > a && b > c {
            peaks.push((x, b));
        } else if b < a && b < c {
            valleys.push(b);
        }
    }
    let spacing = if peaks.len() >= 2 {
        let total: f64 = peaks.windows(2).map(|w| w[1].0 - w[0].0).sum();
        Some(total / (peaks.len() - 1) as f64)
    } else {
        None
    };
    let contrast = if peaks.is_empty() || valleys.is_empty() {
        0.0
    } else {
        let p = peaks.iter().map(|&(_, v)| v).sum::<f64>() / peaks.len() as f64;
        let v = valleys.iter().sum::<f64>() / valleys.len() as f64;
        (p - v) / (p + v)
    };
    FringeReport {
        spacing,
        contrast,
        n_peaks: peaks.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::expectation_energy;
    use crate::schrodinger::{evolve, PropagatorConfig};

    fn slit_grid() -> GridSpec {
        GridSpec::new_1d(1, -32.0, 32.0, 1024).unwrap()
    }

    #[test]
    fn double_slit_fringes_match_the_two_source_formula() {
        // Fringe spacing at the screen time t is 2 pi t / (m d).
        let grid = slit_grid();
        let (psi, v, masses) = build_double_slit(&grid, 6.0, 0.3, 1.0, 0.0).unwrap();
        let t = 2.0;
        let snaps = evolve(
            &psi,
            &v,
            &masses,
            t,
            PropagatorConfig::new(1e-3, 2000).unwrap(),
        )
        .unwrap();
        let last = snaps.last().unwrap();
        let density = last.probability_density();
        // Window around the moving envelope center (drift k0 t / m = 2).
        let report = fringe_analysis(&grid, &density, 2.0 - 6.0, 2.0 + 6.0);
        let expected = 2.0 * std::f64::consts::PI * t / 6.0;
        let spacing = report.spacing.expect("interference fringes exist");
        assert!(
            (spacing - expected).abs() < 0.05 * expected,
            "spacing {spacing} vs {expected}"
        );
        assert!(report.contrast > 0.5, "contrast {}", report.contrast);
    }

    #[test]
    fn opposite_phase_darkens_the_central_fringe() {
        let grid = slit_grid();
        let (psi, v, masses) =
            build_double_slit(&grid, 6.0, 0.3, 0.0, std::f64::consts::PI).unwrap();
        let t = 2.0;
        let snaps = evolve(
            &psi,
            &v,
            &masses,
            t,
            PropagatorConfig::new(1e-3, 2000).unwrap(),
        )
        .unwrap();
        let density = snaps.last().unwrap().probability_density();
        // Antisymmetric state: exact node at the center for all t.
        let center = 512;
        let max = density.iter().cloned().fold(0.0, f64::max);
        assert!(
            density[center] < 0.05 * max,
            "central fringe not dark: {} vs max {max}",
            density[center]
        );
    }

    #[test]
    fn single_open_slit_shows_no_fringes() {
        let grid = slit_grid();
        let state = InitialState::DoubleSlit {
            separation: 6.0,
            width: 0.3,
            momentum: 0.0,
            relative_phase: 0.0,
            amplitude_left: 0.0,
            amplitude_right: 1.0,
        };
        let psi = build_initial_state(&grid, &state).unwrap();
        let v = PotentialField::free(&grid);
        let masses = Masses::uniform(1, 1.0).unwrap();
        let snaps = evolve(
            &psi,
            &v,
            &masses,
            2.0,
            PropagatorConfig::new(1e-3, 2000).unwrap(),
        )
        .unwrap();
        let density = snaps.last().unwrap().probability_density();
        let report = fringe_analysis(&grid, &density, -6.0, 12.0);
        assert!(report.contrast < 0.05, "contrast {}", report.contrast);
    }

    #[test]
    fn overlapping_slit_packets_are_rejected() {
        let grid = slit_grid();
        match build_double_slit(&grid, 0.5, 0.3, 1.0, 0.0) {
            Err(ScenarioError::InvalidGeometry(msg)) => assert!(msg.contains("overlap")),
            other => panic!("expected InvalidGeometry, got {other:?}"),
        }
    }

    #[test]
    fn boundary_margin_is_enforced() {
        let grid = GridSpec::new_1d(1, -4.0, 4.0, 64).unwrap();
        let state = InitialState::Gaussian {
            center: 3.5,
            width: 0.5,
            momentum: 0.0,
        };
        assert!(matches!(
            build_initial_state(&grid, &state),
            Err(ScenarioError::InvalidGeometry(_))
        ));
    }

    #[test]
    fn einstein_box_packets_stay_put_under_schrodinger() {
        // Each half is near the ground state of its well branch, so the
        // half masses hold at 1/2 for the whole run.
        let grid = GridSpec::new_1d(1, -16.0, 16.0, 512).unwrap();
        let (psi, v, masses) = build_einstein_box(&grid, 12.0, 0.5).unwrap();
        assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
        let snaps = evolve(
            &psi,
            &v,
            &masses,
            2.0,
            PropagatorConfig::new(1e-3, 500).unwrap(),
        )
        .unwrap();
        let dx = grid.spacing();
        for s in &snaps {
            let left: f64 = s.amplitudes()[..256]
                .iter()
                .map(|a| a.norm_sqr())
                .sum::<f64>()
                * dx;
            assert!(
                (left - 0.5).abs() < 1e-8,
                "left mass {left} at t = {}",
                s.time()
            );
        }
        // Held packets also keep their energy constant.
        let e0 = expectation_energy(&snaps[0], &v, &masses).unwrap();
        let e1 = expectation_energy(snaps.last().unwrap(), &v, &masses).unwrap();
        assert!(((e1 - e0) / e0).abs() < 1e-8);
    }

    #[test]
    fn einstein_box_rejects_overlapping_halves() {
        let grid = GridSpec::new_1d(1, -16.0, 16.0, 512).unwrap();
        assert!(matches!(
            build_einstein_box(&grid, 2.0, 0.5),
            Err(ScenarioError::InvalidGeometry(_))
        ));
    }

    #[test]
    fn entangled_pair_is_exchange_symmetric() {
        let grid = GridSpec::new_1d(2, -8.0, 8.0, 64).unwrap();
        let (psi, _, _) = build_entangled_pair(&grid, 6.0, 0.8, 2.0).unwrap();
        let m = 64;
        for i in 0..m {
            for j in 0..m {
                let a = psi.amplitudes()[i * m + j];
                let b = psi.amplitudes()[j * m + i];
                assert!((a - b).norm() < 1e-12, "asymmetry at ({i},{j})");
            }
        }
        assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entangled_pair_requires_two_particles() {
        let grid = GridSpec::new_1d(1, -8.0, 8.0, 64).unwrap();
        assert!(matches!(
            build_entangled_pair(&grid, 6.0, 0.8, 2.0),
            Err(ScenarioError::InvalidGeometry(_))
        ));
    }
}
