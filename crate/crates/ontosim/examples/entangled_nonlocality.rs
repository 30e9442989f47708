//! Nonlocality in the guiding law and in the collapse law, on one
//! spatially entangled pair.
//!
//! Guiding law: particle 1's velocity at a fixed point swings as particle
//! 2's position scans its support -- while for a product state it does not
//! move at all. Collapse law: localizing particle 0 on one branch instantly
//! reshapes particle 1's marginal into the correlated packet.
//!
//!     cargo run --release --example entangled_nonlocality

use num_complex::Complex64;
use ontosim::bohmian::GuidingField;
use ontosim::grid::{GridSpec, Masses, WaveFunction};
use ontosim::grw::apply_collapse;
use ontosim::scenario::build_entangled_pair;

fn main() {
    let grid = GridSpec::new_1d(2, -8.0, 8.0, 64).unwrap();
    let masses = Masses::uniform(2, 1.0).unwrap();
    let (entangled, _, _) = build_entangled_pair(&grid, 4.0, 1.0, 2.0).unwrap();

    // Product-state control: same packets, no symmetrization.
    let f = |x: f64| Complex64::new(-(x + 2.0) * (x + 2.0) / 4.0, 2.0 * x).exp();
    let g = |x: f64| Complex64::new(-(x - 2.0) * (x - 2.0) / 4.0, -2.0 * x).exp();
    let product = WaveFunction::from_fn(&grid, |x| f(x[0]) * g(x[1]))
        .normalized()
        .unwrap();

    let e_field = GuidingField::new(&entangled);
    let p_field = GuidingField::new(&product);
    println!("velocity of particle 1 at x1 = 0, as particle 2 scans:");
    println!("{:>6} {:>14} {:>14}", "x2", "entangled", "product");
    for i in 0..13 {
        let b = -3.0 + 0.5 * i as f64;
        let ve = e_field.velocity(&[0.0, b], &masses).unwrap()[0];
        let vp = p_field.velocity(&[0.0, b], &masses).unwrap()[0];
        println!("{b:6.1} {ve:14.6} {vp:14.6}");
    }

    // Collapse side: localize particle 0 near the left packet.
    let dx = grid.spacing();
    let before = entangled.marginal_density(1).unwrap();
    let before_right: f64 = before[32..].iter().sum::<f64>() * dx;
    let collapsed = apply_collapse(&entangled, 0, -2.0, 0.5).unwrap();
    let after = collapsed.marginal_density(1).unwrap();
    let after_right: f64 = after[32..].iter().sum::<f64>() * dx;
    println!("\ncollapse on particle 0 at x = -2 (left branch):");
    println!("  particle 1 right-half mass: {before_right:.6} -> {after_right:.6}");
    println!("  the partner marginal snapped into the correlated packet.");
}
