//! The flash ontology: one space-time point per localization event, and
//! nothing else. At a scaled-up rate the flash history of a single packet
//! is a sparse scatter of dots; at the physical rate the same run contains
//! no flash at all -- there can be stretches of time with nothing anywhere.
//!
//!     cargo run --release --example flash_history

use ontosim::grid::{GridSpec, Masses, PotentialField};
use ontosim::grw::{run_grw, units, GrwParams, GrwRunConfig};
use ontosim::ontology::flashes_from_events;
use ontosim::schrodinger::analytic_free_gaussian;

fn main() {
    let grid = GridSpec::new_1d(1, -16.0, 16.0, 128).unwrap();
    let masses = Masses::uniform(1, 1.0).unwrap();
    let v = PotentialField::free(&grid);
    let psi = analytic_free_gaussian(&grid, 0.0, 0.0, 1.0, 1.0, 0.0).unwrap();

    // Scaled rate: flashes actually show up.
    let params = GrwParams::new(8.0, 1.0, 12).unwrap();
    let cfg = GrwRunConfig::new(1.0 / (50.0 * 8.0), 3.0, 500);
    let run = run_grw(&psi, &v, &masses, &params, &cfg).unwrap();
    let flashes = flashes_from_events(&run.events);
    println!(
        "scaled rate {} per particle, T = 3: {} flashes",
        params.lambda_rate(),
        flashes.len()
    );
    println!("{:>10} {:>10}", "t", "x");
    for f in &flashes {
        println!("{:10.4} {:10.4}", f.time, f.position);
    }

    // Physical rate: silence.
    let scale = units::UnitScale::new(1e-7, 1.0);
    let lambda_si = scale.rate_to_natural(units::GRW_LAMBDA_SI);
    let sigma_si = scale.length_to_natural(units::GRW_SIGMA_SI);
    let params = GrwParams::new(lambda_si, sigma_si, 12).unwrap();
    let run = run_grw(
        &psi,
        &v,
        &masses,
        &params,
        &GrwRunConfig::new(1e-2, 10.0, 1000),
    )
    .unwrap();
    println!(
        "\nphysical rate {:.1e} per natural time: {} flashes in T = 10",
        lambda_si,
        run.events.len()
    );
    println!(
        "expected flashes for N = 2 over T = 1e4: {:.1e} (a single particle waits ~1e16 s between jumps)",
        scale.expected_si_events(2, 1e4)
    );
}
