//! Scenario execution and the run manifest.
//!
//! [`run_scenario`] validates the spec, builds the initial state, dispatches
//! to the mode's engine, and writes every output under the chosen directory:
//! binary dumps of the initial and final states, CSV series, a
//! gnuplot-ready histogram for ensemble runs, and `manifest.json` echoing
//! the full spec. All floats print at 17 significant digits and all maps
//! are ordered, so a rerun with the same spec and seed reproduces every
//! file byte for byte. A failed run still writes a manifest recording the
//! failure before the error propagates.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::builders::build_initial_state;
use super::{Mode, ScenarioError, ScenarioSpec};
use crate::bohmian::{equivariance_report, run_ensemble, EnsembleConfig, EnsembleRun};
use crate::grid::{expectation_energy, Masses, PotentialField, WaveFunction};
use crate::grw::{run_grw, ForcedCollapse, GrwParams, GrwRun, GrwRunConfig};
use crate::io::{format_f64, write_csv, write_dump};
use crate::ontology::{flashes_from_events, matter_density, region_masses, RegionPartition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Failed { error: String },
}

/// Everything needed to audit and reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub scenario: ScenarioSpec,
    pub seed: u64,
    pub status: RunStatus,
    pub outputs: Vec<String>,
    pub reports: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<RunManifest, ScenarioError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Execute a scenario into `out_dir`. Returns the manifest that was written
/// there; on engine failure the manifest still lands on disk with a
/// `failed` status before the error is returned.
pub fn run_scenario(spec: &ScenarioSpec, out_dir: &Path) -> Result<RunManifest, ScenarioError> {
    spec.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let mut manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: spec.clone(),
        seed: spec.seed,
        status: RunStatus::Completed,
        outputs: Vec::new(),
        reports: BTreeMap::new(),
    };
    match execute(spec, out_dir, &mut manifest) {
        Ok(()) => {
            write_manifest(out_dir, &mut manifest)?;
            Ok(manifest)
        }
        Err(e) => {
            manifest.status = RunStatus::Failed {
                error: e.to_string(),
            };
            // Best effort: the manifest must record the failure state.
            let _ = write_manifest(out_dir, &mut manifest);
            Err(e)
        }
    }
}

fn write_manifest(out_dir: &Path, manifest: &mut RunManifest) -> Result<(), ScenarioError> {
    if !manifest.outputs.contains(&"manifest.json".to_string()) {
        manifest.outputs.push("manifest.json".to_string());
    }
    manifest.outputs.sort();
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    std::fs::write(out_dir.join("manifest.json"), text)?;
    Ok(())
}

fn execute(
    spec: &ScenarioSpec,
    out: &Path,
    manifest: &mut RunManifest,
) -> Result<(), ScenarioError> {
    let grid = &spec.grid;
    let psi0 = build_initial_state(grid, &spec.initial_state)?;
    let potential = PotentialField::from_family(grid, spec.potential.clone())?;
    let masses = Masses::uniform(grid.n_particles(), spec.mass)?;

    write_dump(&out.join("psi_initial.bin"), &psi0)?;
    manifest.outputs.push("psi_initial.bin".into());

    let e0 = expectation_energy(&psi0, &potential, &masses)?;
    manifest.reports.insert("energy_initial".into(), json!(e0));

    let final_psi = match spec.mode {
        Mode::Schrodinger => run_schrodinger(spec, &psi0, &potential, &masses, out, manifest)?,
        Mode::Bohm => run_bohm(spec, &psi0, &potential, &masses, out, manifest)?,
        Mode::Grwm | Mode::Grwf => run_grw_mode(spec, &psi0, &potential, &masses, out, manifest)?,
    };

    let ef = expectation_energy(&final_psi, &potential, &masses)?;
    manifest.reports.insert("energy_final".into(), json!(ef));
    manifest
        .reports
        .insert("norm_final".into(), json!(final_psi.norm_squared()));

    write_dump(&out.join("psi_final.bin"), &final_psi)?;
    manifest.outputs.push("psi_final.bin".into());
    write_csv(&out.join("psi_final.csv"), &final_psi)?;
    manifest.outputs.push("psi_final.csv".into());
    Ok(())
}

fn run_schrodinger(
    spec: &ScenarioSpec,
    psi0: &WaveFunction,
    potential: &PotentialField,
    masses: &Masses,
    out: &Path,
    manifest: &mut RunManifest,
) -> Result<WaveFunction, ScenarioError> {
    let config =
        crate::schrodinger::PropagatorConfig::new(spec.dynamics.dt, spec.dynamics.snapshot_every)?;
    let snapshots =
        crate::schrodinger::evolve(psi0, potential, masses, spec.dynamics.t_final, config)?;
    write_common_series(&snapshots, potential, masses, out, manifest)?;
    Ok(snapshots.into_iter().last().expect("at least one snapshot"))
}

fn run_bohm(
    spec: &ScenarioSpec,
    psi0: &WaveFunction,
    potential: &PotentialField,
    masses: &Masses,
    out: &Path,
    manifest: &mut RunManifest,
) -> Result<WaveFunction, ScenarioError> {
    let bohm = spec.bohm.expect("validated");
    let run: EnsembleRun = run_ensemble(
        psi0,
        potential,
        masses,
        EnsembleConfig {
            dt: spec.dynamics.dt,
            t_final: spec.dynamics.t_final,
            n_trajectories: bohm.n_trajectories,
            seed: spec.seed,
            sample_every: spec.dynamics.snapshot_every,
        },
    )?;

    write_common_series(&run.wave_snapshots, potential, masses, out, manifest)?;

    // Trajectory sample (full ensembles are large; the first 200 show the
    // flow, the final positions carry the statistics).
    let dim = spec.grid.dim();
    let mut rows = Vec::new();
    for t in run.trajectories.iter().take(200) {
        for s in &t.samples {
            let mut row = format!("{},{}", t.index, format_f64(s.time));
            for a in 0..dim {
                row.push(',');
                row.push_str(&format_f64(s.positions[a]));
            }
            rows.push(row);
        }
    }
    let mut header = "trajectory,t".to_string();
    for a in 0..dim {
        header.push_str(&format!(",q{a}"));
    }
    write_lines(&out.join("trajectories.csv"), &header, &rows)?;
    manifest.outputs.push("trajectories.csv".into());

    let mut rows = Vec::new();
    for t in &run.trajectories {
        let mut row = format!("{}", t.index);
        for a in 0..dim {
            row.push(',');
            row.push_str(&format_f64(t.final_configuration().positions[a]));
        }
        rows.push(row);
    }
    let mut header = "trajectory".to_string();
    for a in 0..dim {
        header.push_str(&format!(",q{a}"));
    }
    write_lines(&out.join("final_positions.csv"), &header, &rows)?;
    manifest.outputs.push("final_positions.csv".into());

    manifest
        .reports
        .insert("node_fallbacks".into(), json!(run.node_fallback_total));
    manifest
        .reports
        .insert("n_trajectories".into(), json!(run.trajectories.len()));

    // Equivariance check at the final snapshot, with the gnuplot histogram.
    let final_psi = run
        .wave_snapshots
        .last()
        .expect("snapshots nonempty")
        .clone();
    let bins = 32;
    if spec.grid.points_per_axis().is_multiple_of(bins) {
        let positions = run.final_positions(0);
        let report = equivariance_report(&positions, &final_psi, 0, bins)?;
        manifest
            .reports
            .insert("equivariance".into(), serde_json::to_value(&report)?);
        write_position_histogram(&out.join("histogram.dat"), &positions, &final_psi, bins)?;
        manifest.outputs.push("histogram.dat".into());
    }

    // For the split-box scenario, check that each trajectory keeps to its
    // half for the whole run.
    if matches!(spec.initial_state, super::InitialState::DoublePacket { .. }) {
        let mid = 0.5 * (spec.grid.extent_min() + spec.grid.extent_max());
        let violations = run
            .trajectories
            .iter()
            .filter(|t| {
                let side = t.samples[0].positions[0] >= mid;
                t.samples.iter().any(|s| (s.positions[0] >= mid) != side)
            })
            .count();
        manifest
            .reports
            .insert("half_box_violations".into(), json!(violations));
    }

    Ok(final_psi)
}

fn run_grw_mode(
    spec: &ScenarioSpec,
    psi0: &WaveFunction,
    potential: &PotentialField,
    masses: &Masses,
    out: &Path,
    manifest: &mut RunManifest,
) -> Result<WaveFunction, ScenarioError> {
    let grw = spec.grw.expect("validated");
    let params = GrwParams::new(grw.lambda, grw.sigma, spec.seed)?;
    let mut config = GrwRunConfig::new(
        spec.dynamics.dt,
        spec.dynamics.t_final,
        spec.dynamics.snapshot_every,
    );
    if let Some(time) = grw.measurement_time {
        config.forced.push(ForcedCollapse {
            time,
            particle: grw.measurement_particle,
        });
    }
    let run: GrwRun = run_grw(psi0, potential, masses, &params, &config)?;

    write_common_series(&run.snapshots, potential, masses, out, manifest)?;

    let rows: Vec<String> = run
        .events
        .iter()
        .map(|e| {
            format!(
                "{},{},{},{}",
                format_f64(e.time),
                e.particle_index,
                format_f64(e.center),
                format_f64(e.pre_collapse_weight)
            )
        })
        .collect();
    write_lines(&out.join("events.csv"), "t,particle,center,weight", &rows)?;
    manifest.outputs.push("events.csv".into());
    manifest
        .reports
        .insert("event_count".into(), json!(run.events.len()));
    manifest.reports.insert(
        "expected_event_count".into(),
        json!(spec.grid.n_particles() as f64 * grw.lambda * spec.dynamics.t_final),
    );
    manifest.reports.insert(
        "energy_series".into(),
        json!(run.energies.iter().map(|&(t, e)| json!([t, e])).collect::<Vec<_>>()),
    );

    match spec.mode {
        Mode::Grwf => {
            let flashes = flashes_from_events(&run.events);
            let rows: Vec<String> = flashes
                .iter()
                .map(|f| format!("{},{}", format_f64(f.time), format_f64(f.position)))
                .collect();
            write_lines(&out.join("flashes.csv"), "t,x", &rows)?;
            manifest.outputs.push("flashes.csv".into());
            manifest
                .reports
                .insert("flash_count".into(), json!(flashes.len()));
        }
        Mode::Grwm => {
            // Delocation signature: the largest single-interval change of a
            // half-region mass.
            let halves = RegionPartition::halves(&spec.grid.axis_projection());
            let mut max_jump = 0.0f64;
            let mut prev: Option<Vec<f64>> = None;
            let mut final_masses = Vec::new();
            for snap in &run.snapshots {
                let field = matter_density(snap, masses)?;
                let rm: Vec<f64> = region_masses(&field, &halves)
                    .into_iter()
                    .map(|(_, v)| v)
                    .collect();
                if let Some(p) = &prev {
                    for (a, b) in rm.iter().zip(p) {
                        max_jump = max_jump.max((a - b).abs());
                    }
                }
                final_masses = rm.clone();
                prev = Some(rm);
            }
            manifest
                .reports
                .insert("max_region_mass_jump".into(), json!(max_jump));
            manifest.reports.insert(
                "region_masses_final".into(),
                json!({ "left": final_masses[0], "right": final_masses[1] }),
            );
        }
        _ => unreachable!(),
    }

    Ok(run
        .snapshots
        .into_iter()
        .last()
        .expect("snapshots nonempty"))
}

/// Series shared by every mode: energy, half-region masses, and the matter
/// density at each snapshot.
fn write_common_series(
    snapshots: &[WaveFunction],
    potential: &PotentialField,
    masses: &Masses,
    out: &Path,
    manifest: &mut RunManifest,
) -> Result<(), ScenarioError> {
    let grid = snapshots[0].grid();
    let halves = RegionPartition::halves(&grid.axis_projection());

    let mut energy_rows = Vec::with_capacity(snapshots.len());
    let mut region_rows = Vec::with_capacity(snapshots.len());
    let mut density_rows = Vec::new();
    for snap in snapshots {
        let e = expectation_energy(snap, potential, masses)?;
        energy_rows.push(format!("{},{}", format_f64(snap.time()), format_f64(e)));
        let field = matter_density(snap, masses)?;
        let rm = region_masses(&field, &halves);
        region_rows.push(format!(
            "{},{},{}",
            format_f64(snap.time()),
            format_f64(rm[0].1),
            format_f64(rm[1].1)
        ));
        for (i, &v) in field.values().iter().enumerate() {
            density_rows.push(format!(
                "{},{},{}",
                format_f64(snap.time()),
                format_f64(field.axis().axis_coordinate(i)),
                format_f64(v)
            ));
        }
    }
    write_lines(&out.join("energy.csv"), "t,energy", &energy_rows)?;
    manifest.outputs.push("energy.csv".into());
    write_lines(&out.join("region_masses.csv"), "t,left,right", &region_rows)?;
    manifest.outputs.push("region_masses.csv".into());
    write_lines(
        &out.join("matter_density_series.csv"),
        "t,x,density",
        &density_rows,
    )?;
    manifest.outputs.push("matter_density_series.csv".into());
    Ok(())
}

fn write_position_histogram(
    path: &Path,
    positions: &[f64],
    psi: &WaveFunction,
    bins: usize,
) -> Result<(), ScenarioError> {
    let grid = psi.grid();
    let m = grid.points_per_axis();
    let cells = m / bins;
    let rho = psi.marginal_density(0)?;
    let dx = grid.spacing();
    let edges = crate::stats::equal_bin_edges(grid.extent_min(), grid.extent_max(), bins);
    let hist = crate::stats::histogram(positions, &edges)?;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# center count expected")?;
    let n = positions.len() as f64;
    for b in 0..bins {
        let center = 0.5 * (edges[b] + edges[b + 1]);
        let prob: f64 = rho[b * cells..(b + 1) * cells].iter().sum::<f64>() * dx;
        writeln!(
            w,
            "{} {} {}",
            format_f64(center),
            hist.counts[b],
            format_f64(prob * n)
        )?;
    }
    w.flush()?;
    Ok(())
}

fn write_lines(path: &Path, header: &str, rows: &[String]) -> Result<(), ScenarioError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}
