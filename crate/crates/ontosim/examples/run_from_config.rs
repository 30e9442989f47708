//! Drive a bundled scenario config through the same engine the CLI uses,
//! then read results back out of the manifest.
//!
//!     cargo run --release --example run_from_config [config] [out_dir]

use std::path::PathBuf;

use ontosim::scenario::{run_scenario, ScenarioSpec};

fn main() {
    let config = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/../../scenarios/einstein_box_grwm.cfg"
            ))
        });
    let out = std::env::args()
        .nth(2)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/example-out/run_from_config"));

    let spec = ScenarioSpec::from_config_path(&config).expect("config loads");
    println!(
        "scenario '{}', mode {}, seed {}",
        spec.name,
        spec.mode.as_str(),
        spec.seed
    );
    let manifest = run_scenario(&spec, &out).expect("run completes");

    println!("outputs in {}:", out.display());
    for name in &manifest.outputs {
        println!("  {name}");
    }
    println!("reports:");
    for (key, value) in &manifest.reports {
        println!("  {key}: {value}");
    }
}
