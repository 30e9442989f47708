//! Property tests for the structural invariants: quantities that must hold
//! for arbitrary states, not just the handpicked ones in the unit tests.

use num_complex::Complex64;
use proptest::prelude::*;

use ontosim::fourier::SpectralTransform;
use ontosim::grid::{
    expectation_energy, GridSpec, Masses, PotentialFamily, PotentialField, WaveFunction,
};
use ontosim::grw::apply_collapse;
use ontosim::stats::{histogram, RngStream};

/// Random normalized state on a small two-particle grid, seeded from a u64
/// so shrinking stays meaningful.
fn random_state(seed: u64, n_particles: usize, m: usize) -> WaveFunction {
    let grid = GridSpec::new_1d(n_particles, -4.0, 4.0, m).unwrap();
    let mut rng = RngStream::labeled(seed, "proptest-state", 0);
    WaveFunction::from_fn(&grid, |_| {
        Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)
    })
    .normalized()
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn marginals_sum_to_one_for_any_normalized_state(seed in any::<u64>(), two in any::<bool>()) {
        let n = if two { 2 } else { 1 };
        let psi = random_state(seed, n, 16);
        for k in 0..n {
            let rho = psi.marginal_density(k).unwrap();
            let total: f64 = rho.iter().sum::<f64>() * psi.grid().spacing();
            prop_assert!((total - 1.0).abs() < 1e-10);
            prop_assert!(rho.iter().all(|&r| r >= 0.0));
        }
    }

    #[test]
    fn spectral_round_trip_preserves_the_state(seed in any::<u64>()) {
        let psi = random_state(seed, 2, 16);
        let t = SpectralTransform::new(psi.grid());
        let mut data = psi.amplitudes().to_vec();
        t.forward(&mut data);
        t.inverse(&mut data);
        let back = WaveFunction::new(psi.grid().clone(), data, 0.0).unwrap();
        prop_assert!(psi.l2_distance(&back).unwrap() < 1e-12);
    }

    #[test]
    fn energy_ignores_the_global_phase(seed in any::<u64>(), theta in 0.0..std::f64::consts::TAU) {
        let psi = random_state(seed, 1, 32);
        let v = PotentialField::from_family(psi.grid(), PotentialFamily::Harmonic { omega: 1.0, center: 0.0 }).unwrap();
        let masses = Masses::uniform(1, 1.0).unwrap();
        let e0 = expectation_energy(&psi, &v, &masses).unwrap();
        let mut rotated = psi.clone();
        let phase = Complex64::from_polar(1.0, theta);
        for a in rotated.amplitudes_mut() {
            *a *= phase;
        }
        let e1 = expectation_energy(&rotated, &v, &masses).unwrap();
        prop_assert!((e0 - e1).abs() < 1e-10);
    }

    #[test]
    fn normalization_scales_by_a_positive_real_constant(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let psi = random_state(seed, 1, 32);
        let mut stretched = psi.clone();
        for a in stretched.amplitudes_mut() {
            *a *= scale;
        }
        let back = stretched.normalized().unwrap();
        prop_assert!((back.norm_squared() - 1.0).abs() < 1e-12);
        for (a, b) in psi.amplitudes().iter().zip(back.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn collapse_always_returns_a_unit_norm_state(
        seed in any::<u64>(),
        particle in 0usize..2,
        center in -3.0f64..3.0,
        sigma in 0.3f64..3.0,
    ) {
        let psi = random_state(seed, 2, 16);
        let out = apply_collapse(&psi, particle, center, sigma).unwrap();
        prop_assert!((out.norm_squared() - 1.0).abs() < 1e-12);
        // The multiplier never rotates the phase.
        for (a, b) in psi.amplitudes().iter().zip(out.amplitudes()) {
            if a.norm() > 1e-9 {
                let ratio = b / a;
                prop_assert!(ratio.re > 0.0 && ratio.im.abs() < 1e-9 * ratio.norm());
            }
        }
    }

    #[test]
    fn histogram_accounts_for_every_sample(samples in prop::collection::vec(-10.0f64..10.0, 0..200)) {
        let edges = ontosim::stats::equal_bin_edges(-5.0, 5.0, 8);
        let h = histogram(&samples, &edges).unwrap();
        let total = h.below + h.above + h.counts.iter().sum::<u64>();
        prop_assert_eq!(total as usize, samples.len());
    }

    #[test]
    fn wrap_position_lands_in_the_extent(x in -1e4f64..1e4) {
        let grid = GridSpec::new_1d(1, -3.0, 5.0, 16).unwrap();
        let w = grid.wrap_position(x);
        prop_assert!((-3.0..5.0).contains(&w));
        // Wrapping is idempotent.
        prop_assert_eq!(grid.wrap_position(w), w);
    }

    #[test]
    fn rng_streams_replay_exactly(seed in any::<u64>(), label in any::<u64>()) {
        let mut a = RngStream::new(seed, label);
        let mut b = RngStream::new(seed, label);
        for _ in 0..64 {
            prop_assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
