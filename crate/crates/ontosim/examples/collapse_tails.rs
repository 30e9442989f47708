//! Bare and structured tails, made quantitative. One localization on a
//! two-branch superposition drives one branch's weight toward 1; the other
//! branch keeps a strictly positive weight (bare tail) and, for a
//! localization width broad against the branch's internal structure, keeps
//! its shape almost perfectly (structured tail): a faithful low-density
//! copy of the suppressed outcome survives in the matter density.
//!
//!     cargo run --release --example collapse_tails

use num_complex::Complex64;
use ontosim::grid::{GridSpec, Masses, WaveFunction};
use ontosim::grw::apply_collapse;
use ontosim::ontology::{matter_density, region_masses, structured_tails_report, RegionPartition};

fn main() {
    let grid = GridSpec::new_1d(1, -20.0, 20.0, 2048).unwrap();
    let a = 10.0;
    let s = 0.1;
    let psi = WaveFunction::from_fn(&grid, |x| {
        let l = (-(x[0] + a) * (x[0] + a) / (4.0 * s * s)).exp();
        let r = (-(x[0] - a) * (x[0] - a) / (4.0 * s * s)).exp();
        Complex64::new(l + r, 0.0)
    })
    .normalized()
    .unwrap();
    let masses = Masses::uniform(1, 1.0).unwrap();
    let before = matter_density(&psi, &masses).unwrap();
    let halves = RegionPartition::halves(before.axis());

    println!(
        "{:>8} {:>14} {:>14} {:>12}",
        "sigma", "left weight", "weight ratio", "shape corr"
    );
    for sigma in [1.0, 2.0, 12.0f64.sqrt(), 5.0] {
        let collapsed = apply_collapse(&psi, 0, a, sigma).unwrap();
        let after = matter_density(&collapsed, &masses).unwrap();
        let report = structured_tails_report(&before, &after, &halves).unwrap();
        let left = &report[0];
        println!(
            "{sigma:8.3} {:14.3e} {:14.3e} {:12.6}",
            left.weight_after, left.weight_ratio, left.shape_correlation
        );
    }

    println!("\nnarrow sigma suppresses harder but tilts the surviving shape;");
    println!("broad sigma suppresses less but leaves a near-perfect replica.");

    let collapsed = apply_collapse(&psi, 0, a, 12.0f64.sqrt()).unwrap();
    let after = matter_density(&collapsed, &masses).unwrap();
    let rm = region_masses(&after, &halves);
    println!(
        "\nafter collapse at sigma = sqrt(12): left mass {:.3e}, right mass {:.9}",
        rm[0].1, rm[1].1
    );
    println!(
        "the left branch is still there, at one part in {:.0e}",
        1.0 / rm[0].1
    );
}
