//! Free Gaussian spreading: the measured width of the evolving packet
//! against the closed form s(t) = s0 sqrt(1 + (t/(2 m s0^2))^2).
//!
//!     cargo run --release --example free_gaussian_spreading

use ontosim::grid::{GridSpec, Masses, PotentialField};
use ontosim::schrodinger::{analytic_free_gaussian, Propagator};

fn main() {
    let grid = GridSpec::new_1d(1, -20.0, 20.0, 512).unwrap();
    let masses = Masses::uniform(1, 1.0).unwrap();
    let v = PotentialField::free(&grid);
    let s0 = 1.0;
    let mut psi = analytic_free_gaussian(&grid, 0.0, 0.0, s0, 1.0, 0.0).unwrap();
    let dt = 1e-3;
    let prop = Propagator::new(&v, &masses, dt).unwrap();

    println!(
        "{:>6} {:>12} {:>12} {:>10}",
        "t", "width", "s(t)", "rel err"
    );
    for step in 0..=20 {
        if step > 0 {
            prop.step_n(&mut psi, 100);
        }
        let t = psi.time();
        let (_, width) = psi.position_moments(0).unwrap();
        let exact = s0 * (1.0 + (t / (2.0 * s0 * s0)).powi(2)).sqrt();
        println!(
            "{t:6.2} {width:12.8} {exact:12.8} {:10.2e}",
            (width - exact).abs() / exact
        );
    }
    println!(
        "\nnorm after {} steps: {:.15}",
        2000,
        psi.norm_squared().sqrt()
    );
}
