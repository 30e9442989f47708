//! Command implementations behind the `ontosim` binary.
//!
//! Exit-code contract: 0 success, 1 verification failure, 2 usage or config
//! error, 3 runtime failure. Commands never write outside the `--out`
//! directory, and every command is deterministic given its flags, config
//! and seed. `ONTOSIM_THREADS` caps internal parallelism.

use std::path::Path;
use std::sync::OnceLock;

use crate::io::{read_csv, read_dump, write_csv, write_dump, DumpError};
use crate::scenario::{run_scenario, Mode, RunManifest, ScenarioSpec};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Apply `ONTOSIM_THREADS` to the global thread pool, once.
pub fn init_threads() {
    static INIT: OnceLock<()> = OnceLock::new();
    INIT.get_or_init(|| {
        if let Ok(v) = std::env::var("ONTOSIM_THREADS") {
            if let Ok(n) = v.parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    });
}

/// Load a scenario (config file or a previous run's `manifest.json`), apply
/// overrides, run it into `out`, and report.
pub fn cmd_run(config: &Path, out: &Path, seed: Option<u64>, mode: Option<&str>) -> i32 {
    init_threads();
    let mut spec = match load_spec(config) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(m) = mode {
        match Mode::parse(m) {
            Some(parsed) => spec.mode = parsed,
            None => {
                eprintln!(
                    "error: unknown mode {m:?} for --mode (expected schrodinger|bohm|grwm|grwf)"
                );
                return EXIT_USAGE;
            }
        }
    }
    match run_scenario(&spec, out) {
        Ok(manifest) => {
            println!(
                "completed scenario '{}' (mode {}, seed {}): {} outputs in {}",
                spec.name,
                spec.mode.as_str(),
                spec.seed,
                manifest.outputs.len(),
                out.display()
            );
            EXIT_OK
        }
        Err(e) if e.is_config_error() => {
            eprintln!("config error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("runtime error: {e} (failure state recorded in manifest)");
            EXIT_RUNTIME
        }
    }
}

fn load_spec(config: &Path) -> Result<ScenarioSpec, i32> {
    let is_manifest = config.extension().is_some_and(|e| e == "json");
    if is_manifest {
        match RunManifest::load(config) {
            Ok(m) => Ok(m.scenario),
            Err(e) => {
                eprintln!(
                    "config error: cannot load manifest {}: {e}",
                    config.display()
                );
                Err(EXIT_USAGE)
            }
        }
    } else {
        match ScenarioSpec::from_config_path(config) {
            Ok(s) => Ok(s),
            Err(e) => {
                eprintln!("config error: {e}");
                Err(EXIT_USAGE)
            }
        }
    }
}

/// Run the acceptance checklist, one pass/fail line per criterion.
pub fn cmd_verify(suite_name: &str) -> i32 {
    init_threads();
    let suite = match Suite::parse(suite_name) {
        Some(s) => s,
        None => {
            eprintln!("error: unknown suite {suite_name:?} (expected fast|full)");
            return EXIT_USAGE;
        }
    };
    let results = run_suite(suite);
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.as_str())
        .collect();
    if failed.is_empty() {
        println!("all {} criteria passed", results.len());
        EXIT_OK
    } else {
        println!(
            "{} of {} criteria failed: {}",
            failed.len(),
            results.len(),
            failed.join(", ")
        );
        EXIT_VERIFY_FAILED
    }
}

/// Convert between the binary dump and CSV, losslessly in both directions.
pub fn cmd_convert(input: &Path, format: &str, out: &Path) -> i32 {
    let result = match format {
        "csv" => read_dump(input).and_then(|psi| write_csv(out, &psi)),
        "dump" => read_csv(input).and_then(|psi| write_dump(out, &psi)),
        other => {
            eprintln!("error: unknown --format {other:?} (expected csv|dump)");
            return EXIT_USAGE;
        }
    };
    match result {
        Ok(()) => {
            println!("wrote {}", out.display());
            EXIT_OK
        }
        Err(
            e @ (DumpError::BadMagic { .. }
            | DumpError::UnsupportedVersion(_)
            | DumpError::Truncated { .. }
            | DumpError::TrailingData { .. }
            | DumpError::Csv { .. }
            | DumpError::Grid(_)),
        ) => {
            eprintln!("input error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("io error: {e}");
            EXIT_RUNTIME
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::schrodinger::analytic_free_gaussian;

    fn tmpdir(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("ontosim-cli-{name}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn convert_round_trip_is_bitwise() {
        let dir = tmpdir("convert");
        let grid = GridSpec::new_1d(1, -8.0, 8.0, 64).unwrap();
        let psi = analytic_free_gaussian(&grid, 0.2, 1.0, 0.8, 1.0, 0.1).unwrap();
        let dump1 = dir.join("a.bin");
        write_dump(&dump1, &psi).unwrap();
        let csv = dir.join("a.csv");
        assert_eq!(cmd_convert(&dump1, "csv", &csv), EXIT_OK);
        let dump2 = dir.join("b.bin");
        assert_eq!(cmd_convert(&csv, "dump", &dump2), EXIT_OK);
        let a = std::fs::read(&dump1).unwrap();
        let b = std::fs::read(&dump2).unwrap();
        assert_eq!(a[36..], b[36..], "amplitude payloads differ");
    }

    #[test]
    fn convert_rejects_bad_magic_with_usage_exit() {
        let dir = tmpdir("badmagic");
        let bad = dir.join("bad.bin");
        std::fs::write(&bad, b"GARBAGE!").unwrap();
        assert_eq!(cmd_convert(&bad, "csv", &dir.join("x.csv")), EXIT_USAGE);
        assert_eq!(cmd_convert(&bad, "nope", &dir.join("x.csv")), EXIT_USAGE);
    }

    #[test]
    fn run_rejects_bad_configs_with_usage_exit() {
        let dir = tmpdir("badcfg");
        let cfg = dir.join("bad.cfg");
        std::fs::write(&cfg, "[scenario]\nmode = warp\n").unwrap();
        assert_eq!(cmd_run(&cfg, &dir.join("out"), None, None), EXIT_USAGE);
        assert_eq!(
            cmd_run(&dir.join("missing.cfg"), &dir.join("out"), None, None),
            EXIT_USAGE
        );
    }

    #[test]
    fn run_executes_a_small_scenario_and_honors_seed_override() {
        let dir = tmpdir("run");
        let cfg = dir.join("box.cfg");
        std::fs::write(
            &cfg,
            r#"
[scenario]
name = smoke
mode = schrodinger
seed = 1

[grid]
extent_min = -16.0
extent_max = 16.0
points_per_axis = 128

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
t_final = 0.02
snapshot_every = 10
"#,
        )
        .unwrap();
        let out = dir.join("out");
        assert_eq!(cmd_run(&cfg, &out, Some(77), None), EXIT_OK);
        let manifest = RunManifest::load(&out.join("manifest.json")).unwrap();
        assert_eq!(manifest.seed, 77);
        assert_eq!(manifest.scenario.seed, 77);
        // Rerun from the manifest reproduces the data files bit for bit.
        let out2 = dir.join("out2");
        assert_eq!(
            cmd_run(&out.join("manifest.json"), &out2, None, None),
            EXIT_OK
        );
        for name in &manifest.outputs {
            let a = std::fs::read(out.join(name)).unwrap();
            let b = std::fs::read(out2.join(name)).unwrap();
            assert_eq!(a, b, "{name} differs");
        }
    }

    #[test]
    fn verify_rejects_unknown_suite() {
        assert_eq!(cmd_verify("extreme"), EXIT_USAGE);
    }
}
