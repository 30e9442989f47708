//! The acceptance checklist: every release-gating property as one runnable
//! criterion with its tolerance pinned in code.
//!
//! `Suite::Fast` runs the ten core criteria; `Suite::Full` adds the deeper
//! property checks (null calibration, stream independence, reversibility,
//! integrator orders, fringe geometry, physical-rate sparseness). Each
//! criterion prints one pass/fail line; statistical criteria run on three
//! fixed seeds and pass on two of three, guarding against legitimate
//! 1%-tail failures without weakening the thresholds.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bohmian::{
    advance_configuration, equivariance_report, run_ensemble, velocity_field, EnsembleConfig,
    GuidingField, ParticleConfiguration,
};
use crate::fourier::wavenumbers;
use crate::grid::{
    expectation_energy, GridSpec, Masses, PotentialFamily, PotentialField, WaveFunction,
};
use crate::grw::{
    apply_collapse, collapse_center_distribution, next_jump_interval, run_grw,
    sample_collapse_center, units, ForcedCollapse, GrwParams, GrwRunConfig,
};
use crate::ontology::{matter_density, region_masses, structured_tails_report, RegionPartition};
use crate::scenario::{
    build_double_slit, build_einstein_box, build_entangled_pair, fringe_analysis,
};
use crate::schrodinger::{analytic_coherent_state, analytic_free_gaussian, Propagator};
use crate::stats::{
    chi_square_gof, equal_bin_edges, histogram, ks_test, poisson_count_test, sign_test_positive,
    RngStream,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "fast" => Some(Suite::Fast),
            "full" => Some(Suite::Full),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:<28} ({:6.1}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.seconds,
            self.detail
        )
    }
}

type CriterionFn = fn() -> (bool, String);

const FAST_CRITERIA: &[(&str, CriterionFn)] = &[
    ("unitarity-conservation", unitarity_conservation),
    ("analytic-propagation", analytic_propagation),
    ("equivariance", equivariance),
    ("guiding-identities", guiding_identities),
    ("collapse-rules", collapse_rules),
    ("jump-statistics", jump_statistics),
    ("einstein-box-contrast", einstein_box_contrast),
    ("tails", tails),
    ("energy-increase", energy_increase),
    ("reproducibility", reproducibility),
];

const FULL_EXTRAS: &[(&str, CriterionFn)] = &[
    ("full-null-calibration", full_null_calibration),
    ("full-stream-independence", full_stream_independence),
    ("full-time-reversal", full_time_reversal),
    ("full-rk4-order", full_rk4_order),
    ("full-fringe-geometry", full_fringe_geometry),
    ("full-physical-rate-silence", full_physical_rate_silence),
    (
        "full-superposition-suppression",
        full_superposition_suppression,
    ),
];

/// Criterion names in run order, without running anything.
pub fn criterion_ids(suite: Suite) -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = FAST_CRITERIA.iter().map(|&(id, _)| id).collect();
    if suite == Suite::Full {
        ids.extend(FULL_EXTRAS.iter().map(|&(id, _)| id));
    }
    ids
}

/// Run a statistical check on three fixed seeds; two of three must pass.
fn two_of_three(mut check: impl FnMut(u64) -> (bool, String)) -> (bool, String) {
    let seeds = [101u64, 102, 103];
    let mut passes = 0;
    let mut details = Vec::new();
    for &s in &seeds {
        let (ok, d) = check(s);
        passes += usize::from(ok);
        details.push(format!("seed {s}: {d}"));
    }
    (
        passes >= 2,
        format!("{passes}/3 seeds passed [{}]", details.join("; ")),
    )
}

pub fn run_suite(suite: Suite) -> Vec<CriterionResult> {
    let mut entries: Vec<(&str, CriterionFn)> = FAST_CRITERIA.to_vec();
    if suite == Suite::Full {
        entries.extend_from_slice(FULL_EXTRAS);
    }
    entries
        .into_iter()
        .map(|(id, f)| {
            let start = Instant::now();
            let (passed, detail) = f();
            CriterionResult {
                id: id.to_string(),
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

// 1. Over 1e4 split steps on the double-well state the norm holds to 1e-10
//    and the energy to 1e-8 relative, inside 30 s.
fn unitarity_conservation() -> (bool, String) {
    let start = Instant::now();
    let grid = GridSpec::new_1d(1, -16.0, 16.0, 512).expect("grid");
    let (psi0, v, masses) = build_einstein_box(&grid, 12.0, 0.5).expect("builder");
    let e0 = expectation_energy(&psi0, &v, &masses).expect("energy");
    let prop = Propagator::new(&v, &masses, 1e-3).expect("propagator");
    let mut psi = psi0;
    prop.step_n(&mut psi, 10_000);
    let norm_err = (psi.norm_squared().sqrt() - 1.0).abs();
    let e1 = expectation_energy(&psi, &v, &masses).expect("energy");
    let drift = ((e1 - e0) / e0).abs();
    let elapsed = start.elapsed().as_secs_f64();
    (
        norm_err < 1e-10 && drift < 1e-8 && elapsed < 30.0,
        format!("|norm-1| = {norm_err:.2e} (<1e-10), |dE/E| = {drift:.2e} (<1e-8), {elapsed:.1}s (<30s)"),
    )
}

// 2. Free-Gaussian width at t = 2 matches sqrt(2) to 1e-4; halving dt cuts
//    the L2 error against the closed form by 3.5x-4.5x. The order is
//    measured in the harmonic trap (coherent state): with V = 0 the split
//    is exact and the ratio would be meaningless noise, which the free
//    check below also pins at machine precision.
fn analytic_propagation() -> (bool, String) {
    let grid = GridSpec::new_1d(1, -20.0, 20.0, 512).expect("grid");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let free = PotentialField::free(&grid);
    let psi0 = analytic_free_gaussian(&grid, 0.0, 0.0, 1.0, 1.0, 0.0).expect("oracle");
    let prop = Propagator::new(&free, &masses, 1e-3).expect("propagator");
    let mut psi = psi0;
    prop.step_n(&mut psi, 2000);
    let (_, width) = psi.position_moments(0).expect("moments");
    let width_err = (width - 2.0f64.sqrt()).abs();
    let free_exact = psi
        .l2_distance(&analytic_free_gaussian(&grid, 0.0, 0.0, 1.0, 1.0, 2.0).expect("oracle"))
        .expect("distance");

    let trap_grid = GridSpec::new_1d(1, -16.0, 16.0, 256).expect("grid");
    let v = PotentialField::from_family(
        &trap_grid,
        PotentialFamily::Harmonic {
            omega: 1.0,
            center: 0.0,
        },
    )
    .expect("potential");
    let s0 = 0.5f64.sqrt();
    let start = analytic_free_gaussian(&trap_grid, 2.0, 0.0, s0, 1.0, 0.0).expect("oracle");
    let reference = analytic_coherent_state(&trap_grid, 2.0, 1.0, 1.0, 1.0).expect("oracle");
    let err_for = |dt: f64| {
        let mut p = start.clone();
        let prop = Propagator::new(&v, &masses, dt).expect("propagator");
        prop.step_n(&mut p, (1.0 / dt).round() as usize);
        p.l2_distance(&reference).expect("distance")
    };
    let ratio = err_for(4e-3) / err_for(2e-3);

    (
        width_err < 1e-4 && (3.5..=4.5).contains(&ratio) && free_exact < 1e-10,
        format!(
            "width err {width_err:.2e} (<1e-4), dt-halving ratio {ratio:.2} (in [3.5,4.5]), V=0 exactness {free_exact:.2e}"
        ),
    )
}

// 3. Double-slit ensemble: final positions of 1e4 trajectories match the
//    |psi_T|^2 marginal (32 bins, chi-square p > 0.01) on 2 of 3 seeds,
//    inside 3 minutes.
fn equivariance() -> (bool, String) {
    let start = Instant::now();
    // The fine grid keeps the multilinear velocity interpolation bias well
    // below the statistical resolution of 1e4 samples.
    let grid = GridSpec::new_1d(1, -32.0, 32.0, 8192).expect("grid");
    let (psi0, v, masses) = build_double_slit(&grid, 6.0, 0.3, 1.0, 0.0).expect("builder");
    let (ok, detail) = two_of_three(|seed| {
        let run = run_ensemble(
            &psi0,
            &v,
            &masses,
            EnsembleConfig {
                dt: 2e-3,
                t_final: 2.0,
                n_trajectories: 10_000,
                seed,
                sample_every: 250,
            },
        )
        .expect("ensemble");
        let report = equivariance_report(
            &run.final_positions(0),
            run.wave_snapshots.last().expect("snap"),
            0,
            32,
        )
        .expect("report");
        (report.p_value > 0.01, format!("p = {:.4}", report.p_value))
    });
    let elapsed = start.elapsed().as_secs_f64();
    (
        ok && elapsed < 180.0,
        format!("{detail}, {elapsed:.1}s (<180s)"),
    )
}

// 4. Guiding-law identities: plane-wave velocity, real-state rest, product
//    decoupling, entangled nonlocality.
fn guiding_identities() -> (bool, String) {
    let grid = GridSpec::new_1d(1, -10.0, 10.0, 256).expect("grid");
    let masses1 = Masses::uniform(1, 1.0).expect("masses");
    let k0 = wavenumbers(256, 20.0)[8];
    let plane = WaveFunction::from_fn(&grid, |x| Complex64::new(0.0, k0 * x[0]).exp())
        .normalized()
        .expect("normalize");
    let plane_err = [-7.3, -0.4, 2.9, 8.8]
        .iter()
        .map(|&x| {
            let q = ParticleConfiguration {
                positions: vec![x],
                time: 0.0,
            };
            (velocity_field(&plane, &q, &masses1).expect("velocity")[0] - k0).abs()
        })
        .fold(0.0, f64::max);

    let real = WaveFunction::from_fn(&grid, |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0))
        .normalized()
        .expect("normalize");
    let real_err = [-2.0, 0.1, 1.7]
        .iter()
        .map(|&x| {
            let q = ParticleConfiguration {
                positions: vec![x],
                time: 0.0,
            };
            velocity_field(&real, &q, &masses1).expect("velocity")[0].abs()
        })
        .fold(0.0, f64::max);

    let grid2 = GridSpec::new_1d(2, -8.0, 8.0, 64).expect("grid");
    let masses2 = Masses::uniform(2, 1.0).expect("masses");
    let product = WaveFunction::from_fn(&grid2, |x| {
        Complex64::new(-(x[0] + 1.0) * (x[0] + 1.0) / 1.4, 1.3 * x[0]).exp()
            * Complex64::new(-(x[1] - 1.5) * (x[1] - 1.5) / 2.0, -0.7 * x[1]).exp()
    })
    .normalized()
    .expect("normalize");
    let field = GuidingField::new(&product);
    let v_ref = field.velocity(&[-0.8, 0.1], &masses2).expect("velocity")[0];
    let product_var = (0..40)
        .map(|i| {
            let b = -1.5 + 0.08 * i as f64;
            (field.velocity(&[-0.8, b], &masses2).expect("velocity")[0] - v_ref).abs()
        })
        .fold(0.0, f64::max);

    let (entangled, _, _) = build_entangled_pair(&grid2, 4.0, 1.0, 2.0).expect("builder");
    let efield = GuidingField::new(&entangled);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..60 {
        let b = -3.0 + 0.1 * i as f64;
        let v = efield.velocity(&[0.0, b], &masses2).expect("velocity")[0];
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let entangled_var = hi - lo;

    (
        plane_err < 1e-8 && real_err < 1e-10 && product_var < 1e-9 && entangled_var > 1e-3,
        format!(
            "plane {plane_err:.2e} (<1e-8), real {real_err:.2e} (<1e-10), product {product_var:.2e} (<1e-9), entangled {entangled_var:.2e} (>1e-3)"
        ),
    )
}

// 5. Collapse rule: unit norm after 1e3 random collapses; sampled centers
//    match the analytic density (2 of 3 seeds); broad-sigma collapse is the
//    pointwise identity.
fn collapse_rules() -> (bool, String) {
    let grid2 = GridSpec::new_1d(2, -8.0, 8.0, 32).expect("grid");
    let mut rng = RngStream::new(55, 0);
    let mut worst_norm = 0.0f64;
    for _ in 0..1000 {
        let psi = WaveFunction::from_fn(&grid2, |_| {
            Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)
        })
        .normalized()
        .expect("normalize");
        let out = apply_collapse(
            &psi,
            rng.index(2),
            rng.uniform_in(-6.0, 6.0),
            rng.uniform_in(0.5, 3.0),
        )
        .expect("collapse");
        worst_norm = worst_norm.max((out.norm_squared().sqrt() - 1.0).abs());
    }

    let grid = GridSpec::new_1d(1, -16.0, 16.0, 512).expect("grid");
    let frozen = WaveFunction::from_fn(&grid, |x| {
        let l = (-(x[0] + 5.0) * (x[0] + 5.0) / (2.0 * 0.25)).exp();
        let r = (-(x[0] - 5.0) * (x[0] - 5.0) / (2.0 * 0.25)).exp();
        Complex64::new(l + r, 0.0)
    })
    .normalized()
    .expect("normalize");
    let sigma = 0.8;
    let density = collapse_center_distribution(&frozen, 0, sigma).expect("density");
    let cells = 512 / 32;
    let mut probs: Vec<f64> = (0..32)
        .map(|b| density[b * cells..(b + 1) * cells].iter().sum())
        .collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    let (sampler_ok, sampler_detail) = two_of_three(|seed| {
        let mut rng = RngStream::labeled(seed, "verify-centers", 0);
        let centers: Vec<f64> = (0..10_000)
            .map(|_| sample_collapse_center(frozen.grid(), &density, &mut rng).0)
            .collect();
        let h = histogram(&centers, &equal_bin_edges(-16.0, 16.0, 32)).expect("histogram");
        let report = chi_square_gof(&h.counts, &probs).expect("chi-square");
        (report.p_value > 0.01, format!("p = {:.4}", report.p_value))
    });

    let packet = analytic_free_gaussian(&grid, -1.0, 1.3, 0.8, 1.0, 0.0).expect("oracle");
    let broad = apply_collapse(&packet, 0, 3.0, 32.0 * 1e5).expect("collapse");
    let identity_err = packet
        .amplitudes()
        .iter()
        .zip(broad.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    (
        worst_norm < 1e-12 && sampler_ok && identity_err < 1e-8,
        format!(
            "worst |norm-1| = {worst_norm:.2e} (<1e-12), centers {sampler_detail}, broad-sigma identity {identity_err:.2e} (<1e-8)"
        ),
    )
}

// 6. Event counts over 200 seeded runs at a scaled rate pass the Poisson
//    mean/variance test on 2 of 3 meta-seeds.
fn jump_statistics() -> (bool, String) {
    let lambda = 10.0;
    let t_final = 5.0;
    let dt = 1.0 / (50.0 * lambda);
    let grid = GridSpec::new_1d(1, -32.0, 32.0, 128).expect("grid");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let v = PotentialField::free(&grid);
    let psi = analytic_free_gaussian(&grid, 0.0, 0.0, 1.0, 1.0, 0.0).expect("oracle");
    two_of_three(|meta| {
        let counts: Vec<u64> = (0..200u64)
            .into_par_iter()
            .map(|i| {
                let params = GrwParams::new(lambda, 2.0, meta * 100_000 + i).expect("params");
                let cfg = GrwRunConfig::new(dt, t_final, usize::MAX);
                run_grw(&psi, &v, &masses, &params, &cfg)
                    .expect("run")
                    .events
                    .len() as u64
            })
            .collect();
        let report = poisson_count_test(&counts, lambda * t_final);
        (report.p_value > 0.01, format!("p = {:.4}", report.p_value))
    })
}

// 7. The split box: every Bohmian trajectory keeps its half; a measured
//    GRWm box puts >0.999 of the mass in one half with 0.5 +- 3 sigma
//    outcome frequencies over 200 seeds and a >0.4 single-interval mass
//    jump. Inside 5 minutes.
fn einstein_box_contrast() -> (bool, String) {
    let start = Instant::now();
    let grid = GridSpec::new_1d(1, -16.0, 16.0, 512).expect("grid");
    let (psi0, v, masses) = build_einstein_box(&grid, 12.0, 0.5).expect("builder");

    let run = run_ensemble(
        &psi0,
        &v,
        &masses,
        EnsembleConfig {
            dt: 1e-3,
            t_final: 1.0,
            n_trajectories: 1000,
            seed: 301,
            sample_every: 100,
        },
    )
    .expect("ensemble");
    let violations = run
        .trajectories
        .iter()
        .filter(|t| {
            let side = t.samples[0].positions[0] >= 0.0;
            t.samples.iter().any(|s| (s.positions[0] >= 0.0) != side)
        })
        .count();

    let halves = RegionPartition::halves(&grid.axis_projection());
    let outcomes: Vec<(bool, f64, f64)> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let params = GrwParams::new(1e-30, 1.0, seed).expect("params");
            let mut cfg = GrwRunConfig::new(1e-3, 0.2, 10);
            cfg.forced.push(ForcedCollapse {
                time: 0.1,
                particle: Some(0),
            });
            let run = run_grw(&psi0, &v, &masses, &params, &cfg).expect("run");
            let mut max_jump = 0.0f64;
            let mut prev = None;
            let mut left_final = 0.0;
            for snap in &run.snapshots {
                let field = matter_density(snap, &masses).expect("density");
                let left = region_masses(&field, &halves)[0].1;
                if let Some(p) = prev {
                    max_jump = f64::max(max_jump, f64::abs(left - p));
                }
                prev = Some(left);
                left_final = left;
            }
            let dominant = left_final.max(1.0 - left_final);
            (left_final > 0.5, dominant, max_jump)
        })
        .collect();
    let left_wins = outcomes.iter().filter(|o| o.0).count();
    let min_dominant = outcomes.iter().map(|o| o.1).fold(f64::INFINITY, f64::min);
    let max_jump = outcomes.iter().map(|o| o.2).fold(0.0, f64::max);
    // 3 sigma of Binomial(200, 1/2) is 21.2.
    let freq_ok = (100.0f64 - left_wins as f64).abs() <= 21.2;
    let elapsed = start.elapsed().as_secs_f64();
    (
        violations == 0 && min_dominant > 0.999 && freq_ok && max_jump > 0.4 && elapsed < 300.0,
        format!(
            "violations {violations}/1000 (=0), min dominant {min_dominant:.6} (>0.999), left wins {left_wins}/200 (in [79,121]), max jump {max_jump:.3} (>0.4), {elapsed:.1}s (<300s)"
        ),
    )
}

// 8. Bare and structured tails: the suppressed half keeps strictly positive
//    mass below 1e-4 of the total, with shape correlation above 0.99.
fn tails() -> (bool, String) {
    let grid = GridSpec::new_1d(1, -20.0, 20.0, 2048).expect("grid");
    let a = 10.0;
    let s = 0.1;
    let sigma = 12.0f64.sqrt();
    let psi = WaveFunction::from_fn(&grid, |x| {
        let l = (-(x[0] + a) * (x[0] + a) / (4.0 * s * s)).exp();
        let r = (-(x[0] - a) * (x[0] - a) / (4.0 * s * s)).exp();
        Complex64::new(l + r, 0.0)
    })
    .normalized()
    .expect("normalize");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let before = matter_density(&psi, &masses).expect("density");
    let collapsed = apply_collapse(&psi, 0, a, sigma).expect("collapse");
    let after = matter_density(&collapsed, &masses).expect("density");
    let halves = RegionPartition::halves(before.axis());
    let report = structured_tails_report(&before, &after, &halves).expect("report");
    let left = &report[0];
    let total = after.total_mass();
    let frac = left.weight_after / total;
    (
        left.weight_after > 0.0 && frac < 1e-4 && left.shape_correlation > 0.99,
        format!(
            "suppressed mass {:.3e} of total (>0, <1e-4), shape correlation {:.4} (>0.99)",
            frac, left.shape_correlation
        ),
    )
}

// 9. Seed-averaged energy under the jump process trends upward (one-sided
//    sign test on successive differences, p < 0.05).
fn energy_increase() -> (bool, String) {
    let grid = GridSpec::new_1d(1, -16.0, 16.0, 128).expect("grid");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let v = PotentialField::free(&grid);
    let psi = analytic_free_gaussian(&grid, 0.0, 0.0, 1.0, 1.0, 0.0).expect("oracle");
    let lambda = 20.0;
    let dt = 1.0 / (50.0 * lambda);
    let series: Vec<Vec<f64>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let params = GrwParams::new(lambda, 1.0, seed).expect("params");
            let cfg = GrwRunConfig::new(dt, 2.0, 100);
            run_grw(&psi, &v, &masses, &params, &cfg)
                .expect("run")
                .energies
                .iter()
                .map(|&(_, e)| e)
                .collect()
        })
        .collect();
    let n_points = series[0].len();
    let mean: Vec<f64> = (0..n_points)
        .map(|i| series.iter().map(|s| s[i]).sum::<f64>() / series.len() as f64)
        .collect();
    let ups = mean.windows(2).filter(|w| w[1] > w[0]).count();
    let p = sign_test_positive(ups, n_points - 1);
    (
        p < 0.05,
        format!(
            "sign test p = {p:.2e} (<0.05) with {ups}/{} mean-energy increases",
            n_points - 1
        ),
    )
}

// 10. Identical spec and seed reproduce every output file byte for byte.
fn reproducibility() -> (bool, String) {
    use crate::scenario::{run_scenario, ScenarioSpec};
    let cfg = r#"
[scenario]
name = repro
mode = grwm
seed = 99

[grid]
extent_min = -16.0
extent_max = 16.0
points_per_axis = 256

[potential]
family = double_well
omega = 2.0
separation = 12.0

[initial_state]
family = double_packet
separation = 12.0
width = 0.5

[dynamics]
dt = 0.001
t_final = 0.1
snapshot_every = 20

[grw]
lambda = 1e-30
sigma = 1.0
measurement_time = 0.05
"#;
    let spec = ScenarioSpec::from_config_str(cfg).expect("spec");
    let base = std::env::temp_dir().join(format!("ontosim-verify-repro-{}", std::process::id()));
    let dir1 = base.join("run1");
    let dir2 = base.join("run2");
    let _ = std::fs::remove_dir_all(&base);
    let m1 = run_scenario(&spec, &dir1).expect("run 1");
    let _m2 = run_scenario(&spec, &dir2).expect("run 2");
    let mut identical = true;
    let mut first_diff = String::new();
    for name in &m1.outputs {
        let a = std::fs::read(dir1.join(name)).expect("read");
        let b = std::fs::read(dir2.join(name)).expect("read");
        if a != b {
            identical = false;
            first_diff = name.clone();
            break;
        }
    }
    let n = m1.outputs.len();
    let _ = std::fs::remove_dir_all(&base);
    (
        identical,
        if identical {
            format!("{n} output files bitwise identical across reruns")
        } else {
            format!("file {first_diff} differs between reruns")
        },
    )
}

fn full_null_calibration() -> (bool, String) {
    // Chi-square p-values under the null are uniform (KS p > 0.01).
    let probs = [0.1, 0.2, 0.3, 0.15, 0.15, 0.1];
    let mut rng = RngStream::new(1234, 7);
    let mut cdf = vec![0.0];
    for &p in &probs {
        cdf.push(cdf.last().unwrap() + p);
    }
    let mut p_values = Vec::with_capacity(1000);
    for _ in 0..1000 {
        let mut counts = vec![0u64; probs.len()];
        for _ in 0..2000 {
            let u = rng.uniform();
            let k = cdf.partition_point(|&c| c <= u) - 1;
            counts[k.min(probs.len() - 1)] += 1;
        }
        p_values.push(chi_square_gof(&counts, &probs).expect("chi-square").p_value);
    }
    let r = ks_test(&p_values, |x| x.clamp(0.0, 1.0));
    (r.p_value > 0.01, format!("KS p = {:.4} (>0.01)", r.p_value))
}

fn full_stream_independence() -> (bool, String) {
    let mut a = RngStream::new(5, 100);
    let mut b = RngStream::new(5, 101);
    let n = 1_000_000;
    let mut acc = 0.0;
    for _ in 0..n {
        acc += (a.uniform() - 0.5) * (b.uniform() - 0.5);
    }
    let corr = acc / n as f64 / (1.0 / 12.0);
    let bound = 4.0 / (n as f64).sqrt();
    (
        corr.abs() < bound,
        format!("corr = {corr:.2e} (|corr| < {bound:.2e})"),
    )
}

fn full_time_reversal() -> (bool, String) {
    let grid = GridSpec::new_1d(1, -12.0, 12.0, 256).expect("grid");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let v = PotentialField::from_family(
        &grid,
        PotentialFamily::Harmonic {
            omega: 1.0,
            center: 0.0,
        },
    )
    .expect("potential");
    let psi0 = analytic_free_gaussian(&grid, 1.2, 0.7, 0.9, 1.0, 0.0).expect("oracle");
    let prop = Propagator::new(&v, &masses, 1e-3).expect("propagator");
    let mut psi = psi0.clone();
    prop.step_n(&mut psi, 1000);
    for a in psi.amplitudes_mut() {
        *a = a.conj();
    }
    prop.step_n(&mut psi, 1000);
    for a in psi.amplitudes_mut() {
        *a = a.conj();
    }
    let err = psi.l2_distance(&psi0).expect("distance");
    (err < 1e-9, format!("round-trip L2 error {err:.2e} (<1e-9)"))
}

fn full_rk4_order() -> (bool, String) {
    let grid = GridSpec::new_1d(1, -24.0, 24.0, 8192).expect("grid");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let fields = |t: f64, dt: f64| {
        let f = |tt: f64| {
            GuidingField::new(
                &analytic_free_gaussian(&grid, 0.0, 0.0, 1.0, 1.0, tt).expect("oracle"),
            )
        };
        (f(t), f(t + 0.5 * dt), f(t + dt))
    };
    let run = |dt: f64| {
        let steps = (2.0 / dt).round() as usize;
        let mut q = ParticleConfiguration {
            positions: vec![1.1],
            time: 0.0,
        };
        for s in 0..steps {
            let (f0, fm, f1) = fields(s as f64 * dt, dt);
            q = advance_configuration(&f0, &fm, &f1, &q, dt, &masses).expect("step");
        }
        q.positions[0]
    };
    let reference = run(1.0 / 128.0);
    let ratio = (run(0.5) - reference).abs() / (run(0.25) - reference).abs();
    (
        (10.0..24.0).contains(&ratio),
        format!("dt-halving ratio {ratio:.1} (in [10,24])"),
    )
}

fn full_fringe_geometry() -> (bool, String) {
    let grid = GridSpec::new_1d(1, -32.0, 32.0, 1024).expect("grid");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let t = 2.0;

    let (psi, v, _) = build_double_slit(&grid, 6.0, 0.3, 1.0, 0.0).expect("builder");
    let prop = Propagator::new(&v, &masses, 1e-3).expect("propagator");
    let mut p = psi;
    prop.step_n(&mut p, 2000);
    let report = fringe_analysis(&grid, &p.probability_density(), -4.0, 8.0);
    let expected = 2.0 * std::f64::consts::PI * t / 6.0;
    let spacing_ok = report
        .spacing
        .map(|s| (s - expected).abs() < 0.05 * expected)
        .unwrap_or(false);

    let (dark, v2, _) =
        build_double_slit(&grid, 6.0, 0.3, 0.0, std::f64::consts::PI).expect("builder");
    let prop2 = Propagator::new(&v2, &masses, 1e-3).expect("propagator");
    let mut d = dark;
    prop2.step_n(&mut d, 2000);
    let dd = d.probability_density();
    let center_dark = dd[512] < 0.05 * dd.iter().cloned().fold(0.0, f64::max);

    let single = crate::scenario::build_initial_state(
        &grid,
        &crate::scenario::InitialState::DoubleSlit {
            separation: 6.0,
            width: 0.3,
            momentum: 0.0,
            relative_phase: 0.0,
            amplitude_left: 0.0,
            amplitude_right: 1.0,
        },
    )
    .expect("builder");
    let mut s = single;
    prop2.step_n(&mut s, 2000);
    let single_report = fringe_analysis(&grid, &s.probability_density(), -6.0, 12.0);
    let single_ok = single_report.contrast < 0.05;

    (
        spacing_ok && center_dark && single_ok,
        format!(
            "spacing {:?} vs {expected:.3} (5%), dark center {center_dark}, single-slit contrast {:.3} (<0.05)",
            report.spacing, single_report.contrast
        ),
    )
}

fn full_physical_rate_silence() -> (bool, String) {
    let scale = units::UnitScale::new(1e-7, 1.0);
    let expected = scale.expected_si_events(2, 1e4);
    let lambda = scale.rate_to_natural(units::GRW_LAMBDA_SI);
    let mut rng = RngStream::new(8, 0);
    let mean: f64 = (0..10_000)
        .map(|_| next_jump_interval(1, lambda, &mut rng))
        .sum::<f64>()
        / 1e4;
    let grid = GridSpec::new_1d(1, -16.0, 16.0, 64).expect("grid");
    let masses = Masses::uniform(1, 1.0).expect("masses");
    let v = PotentialField::free(&grid);
    let psi = analytic_free_gaussian(&grid, 0.0, 0.0, 1.0, 1.0, 0.0).expect("oracle");
    let params =
        GrwParams::new(lambda, scale.length_to_natural(units::GRW_SIGMA_SI), 1).expect("params");
    let run = run_grw(
        &psi,
        &v,
        &masses,
        &params,
        &GrwRunConfig::new(1e-2, 10.0, 1000),
    )
    .expect("run");
    (
        expected < 1e-10 && run.events.is_empty() && mean > 1e15,
        format!(
            "expected events {expected:.2e} (<1e-10), observed 0, mean waiting {mean:.2e}s (astronomical)"
        ),
    )
}

fn full_superposition_suppression() -> (bool, String) {
    // One collapse on a two-packet state drives one branch weight past
    // 1 - 1e-4; on the entangled pair it also moves the partner marginal.
    let grid = GridSpec::new_1d(1, -16.0, 16.0, 512).expect("grid");
    let psi = WaveFunction::from_fn(&grid, |x| {
        let l = (-(x[0] + 5.0) * (x[0] + 5.0) / (4.0 * 0.25)).exp();
        let r = (-(x[0] - 5.0) * (x[0] - 5.0) / (4.0 * 0.25)).exp();
        Complex64::new(l + r, 0.0)
    })
    .normalized()
    .expect("normalize");
    let density = collapse_center_distribution(&psi, 0, 1.0).expect("density");
    let mut rng = RngStream::new(17, 0);
    let (center, _) = sample_collapse_center(psi.grid(), &density, &mut rng);
    let out = apply_collapse(&psi, 0, center, 1.0).expect("collapse");
    let dx = grid.spacing();
    let left: f64 = out.amplitudes()[..256]
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        * dx;
    let dominant = left.max(1.0 - left);

    let grid2 = GridSpec::new_1d(2, -8.0, 8.0, 64).expect("grid");
    let (pair, _, _) = build_entangled_pair(&grid2, 6.0, 0.8, 0.0).expect("builder");
    let before = pair.marginal_density(1).expect("marginal");
    let dx2 = grid2.spacing();
    let before_right: f64 = before[32..].iter().sum::<f64>() * dx2;
    let collapsed = apply_collapse(&pair, 0, -3.0, 0.5).expect("collapse");
    let after = collapsed.marginal_density(1).expect("marginal");
    let after_right: f64 = after[32..].iter().sum::<f64>() * dx2;
    let shift = (after_right - before_right).abs();

    (
        dominant > 1.0 - 1e-4 && shift > 0.1,
        format!(
            "dominant branch {dominant:.6} (>1-1e-4), partner marginal shift {shift:.3} (>0.1)"
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    // The full acceptance gate lives in tests/acceptance.rs. Here: the
    // cheap plumbing of the suite itself.

    #[test]
    fn suite_names_are_unique_and_fast_is_a_prefix() {
        let fast = criterion_ids(Suite::Fast);
        let full = criterion_ids(Suite::Full);
        assert_eq!(fast.len(), 10);
        assert!(full.len() > fast.len());
        assert_eq!(&full[..fast.len()], &fast[..]);
        let mut sorted = full.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), full.len());
    }

    #[test]
    fn suite_parsing() {
        assert_eq!(Suite::parse("fast"), Some(Suite::Fast));
        assert_eq!(Suite::parse("full"), Some(Suite::Full));
        assert_eq!(Suite::parse("extreme"), None);
    }

    #[test]
    fn result_lines_are_one_per_criterion() {
        let r = CriterionResult {
            id: "x".into(),
            passed: true,
            detail: "ok".into(),
            seconds: 0.5,
        };
        assert!(r.line().starts_with("PASS x"));
        let r = CriterionResult {
            id: "y".into(),
            passed: false,
            detail: "broken".into(),
            seconds: 1.0,
        };
        assert!(r.line().starts_with("FAIL y"));
    }
}
