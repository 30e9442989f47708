//! Every bundled scenario config must validate, and the quick ones must run
//! to completion inside their documented budgets. The heavyweight
//! double-slit ensemble run is exercised end to end in tests/cli.rs.

use std::path::{Path, PathBuf};

use ontosim::scenario::{run_scenario, ScenarioSpec};

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn all_bundled_configs_validate() {
    let mut found = 0;
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            found += 1;
            let spec = ScenarioSpec::from_config_path(&path)
                .unwrap_or_else(|e| panic!("{} fails to validate: {e}", path.display()));
            assert!(!spec.name.is_empty());
        }
    }
    assert!(
        found >= 8,
        "expected the bundled scenario set, found {found}"
    );
}

#[test]
fn light_bundled_scenarios_run_to_completion() {
    let names = [
        "free_gaussian.cfg",
        "grw_flashes.cfg",
        "einstein_box_schrodinger.cfg",
        "einstein_box_grwm.cfg",
        "entangled_pair_grwm.cfg",
    ];
    let base = std::env::temp_dir().join(format!("ontosim-scenarios-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&base);
    for name in names {
        let spec = ScenarioSpec::from_config_path(&scenario_dir().join(name)).unwrap();
        let start = std::time::Instant::now();
        let manifest =
            run_scenario(&spec, &base.join(name)).unwrap_or_else(|e| panic!("{name} failed: {e}"));
        assert!(manifest.outputs.contains(&"manifest.json".to_string()));
        // Documented budget: each of these completes within a minute.
        assert!(start.elapsed().as_secs() < 60, "{name} exceeded its budget");
    }
    let _ = std::fs::remove_dir_all(&base);
}
