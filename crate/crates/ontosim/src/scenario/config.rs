//! The scenario config format: flat `key = value` pairs under `[section]`
//! headers, `#` comments, blank lines ignored. Unknown sections or keys are
//! errors, and every validation message names the offending `section.key`.

use std::collections::BTreeMap;

use super::{
    BohmParams, DynamicsParams, GrwScenarioParams, InitialState, Mode, ScenarioError, ScenarioSpec,
};
use crate::grid::{GridSpec, PotentialFamily};

struct RawConfig {
    // section -> key -> (line, value)
    sections: BTreeMap<String, BTreeMap<String, (usize, String)>>,
}

fn parse_raw(text: &str) -> Result<RawConfig, ScenarioError> {
    let mut sections: BTreeMap<String, BTreeMap<String, (usize, String)>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or(ScenarioError::Parse {
                    line: line_no,
                    message: "unterminated section header".into(),
                })?
                .trim()
                .to_string();
            if name.is_empty() {
                return Err(ScenarioError::Parse {
                    line: line_no,
                    message: "empty section name".into(),
                });
            }
            sections.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ScenarioError::Parse {
            line: line_no,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        let section = current.clone().ok_or(ScenarioError::Parse {
            line: line_no,
            message: "key outside any [section]".into(),
        })?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(ScenarioError::Parse {
                line: line_no,
                message: "empty key".into(),
            });
        }
        let entry = sections.get_mut(&section).expect("section exists");
        if entry
            .insert(key.clone(), (line_no, value.trim().to_string()))
            .is_some()
        {
            return Err(ScenarioError::Parse {
                line: line_no,
                message: format!("duplicate key `{section}.{key}`"),
            });
        }
    }
    Ok(RawConfig { sections })
}

struct Section<'a> {
    name: &'a str,
    entries: Option<&'a BTreeMap<String, (usize, String)>>,
    used: Vec<String>,
}

impl<'a> Section<'a> {
    fn get_str(&mut self, key: &str) -> Option<&'a str> {
        self.used.push(key.to_string());
        self.entries
            .and_then(|e| e.get(key))
            .map(|(_, v)| v.as_str())
    }

    fn require_str(&mut self, key: &str) -> Result<&'a str, ScenarioError> {
        self.get_str(key).ok_or_else(|| ScenarioError::Validation {
            field: format!("{}.{}", self.name, key),
            message: "missing required key".into(),
        })
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str, value: &str) -> Result<T, ScenarioError>
    where
        T::Err: std::fmt::Display,
    {
        value.parse::<T>().map_err(|e| ScenarioError::Validation {
            field: format!("{}.{}", self.name, key),
            message: format!("cannot parse {value:?}: {e}"),
        })
    }

    fn get_f64(&mut self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        match self.get_str(key) {
            Some(v) => self.parse(key, v),
            None => Ok(default),
        }
    }

    fn require_f64(&mut self, key: &str) -> Result<f64, ScenarioError> {
        let v = self.require_str(key)?;
        self.parse(key, v)
    }

    fn get_usize(&mut self, key: &str, default: usize) -> Result<usize, ScenarioError> {
        match self.get_str(key) {
            Some(v) => self.parse(key, v),
            None => Ok(default),
        }
    }

    fn require_usize(&mut self, key: &str) -> Result<usize, ScenarioError> {
        let v = self.require_str(key)?;
        self.parse(key, v)
    }

    fn get_u64(&mut self, key: &str, default: u64) -> Result<u64, ScenarioError> {
        match self.get_str(key) {
            Some(v) => self.parse(key, v),
            None => Ok(default),
        }
    }

    /// Reject keys nobody consumed (typo protection).
    fn finish(self) -> Result<(), ScenarioError> {
        if let Some(entries) = self.entries {
            for (key, (line, _)) in entries {
                if !self.used.contains(key) {
                    return Err(ScenarioError::Parse {
                        line: *line,
                        message: format!("unknown key `{}.{}`", self.name, key),
                    });
                }
            }
        }
        Ok(())
    }
}

pub(super) fn spec_from_config(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let raw = parse_raw(text)?;
    let known = [
        "scenario",
        "grid",
        "potential",
        "initial_state",
        "dynamics",
        "masses",
        "bohm",
        "grw",
    ];
    for name in raw.sections.keys() {
        if !known.contains(&name.as_str()) {
            return Err(ScenarioError::Validation {
                field: name.clone(),
                message: "unknown section".into(),
            });
        }
    }
    let section = |name: &'static str| Section {
        name,
        entries: raw.sections.get(name),
        used: Vec::new(),
    };

    let mut s = section("scenario");
    let name = s.get_str("name").unwrap_or("unnamed").to_string();
    let mode_str = s.require_str("mode")?;
    let mode = Mode::parse(mode_str).ok_or_else(|| ScenarioError::Validation {
        field: "scenario.mode".into(),
        message: format!("unknown mode {mode_str:?} (expected schrodinger|bohm|grwm|grwf)"),
    })?;
    let seed = s.get_u64("seed", 0)?;
    s.finish()?;

    let mut g = section("grid");
    let n_particles = g.get_usize("n_particles", 1)?;
    let extent_min = g.require_f64("extent_min")?;
    let extent_max = g.require_f64("extent_max")?;
    let points = g.require_usize("points_per_axis")?;
    g.finish()?;
    let grid = GridSpec::new_1d(n_particles, extent_min, extent_max, points)?;

    let mut p = section("potential");
    let family = p.require_str("family")?;
    let potential = match family {
        "free" => PotentialFamily::Free,
        "harmonic" => PotentialFamily::Harmonic {
            omega: p.require_f64("omega")?,
            center: p.get_f64("center", 0.0)?,
        },
        "double_well" => PotentialFamily::DoubleWell {
            omega: p.require_f64("omega")?,
            separation: p.require_f64("separation")?,
            center: p.get_f64("center", 0.0)?,
        },
        "barrier_with_slits" => PotentialFamily::BarrierWithSlits {
            height: p.require_f64("height")?,
            center: p.get_f64("center", 0.0)?,
            thickness: p.require_f64("thickness")?,
            slit_separation: p.require_f64("slit_separation")?,
            slit_width: p.require_f64("slit_width")?,
        },
        other => {
            return Err(ScenarioError::Validation {
                field: "potential.family".into(),
                message: format!("unknown family {other:?}"),
            })
        }
    };
    p.finish()?;

    let mut i = section("initial_state");
    let ifamily = i.require_str("family")?;
    let initial_state = match ifamily {
        "gaussian" => InitialState::Gaussian {
            center: i.get_f64("center", 0.0)?,
            width: i.require_f64("width")?,
            momentum: i.get_f64("momentum", 0.0)?,
        },
        "double_slit" => InitialState::DoubleSlit {
            separation: i.require_f64("separation")?,
            width: i.require_f64("width")?,
            momentum: i.get_f64("momentum", 0.0)?,
            relative_phase: i.get_f64("relative_phase", 0.0)?,
            amplitude_left: i.get_f64("amplitude_left", 1.0)?,
            amplitude_right: i.get_f64("amplitude_right", 1.0)?,
        },
        "double_packet" => InitialState::DoublePacket {
            separation: i.require_f64("separation")?,
            width: i.require_f64("width")?,
        },
        "entangled_pair" => InitialState::EntangledPair {
            separation: i.require_f64("separation")?,
            width: i.require_f64("width")?,
            momentum: i.get_f64("momentum", 0.0)?,
        },
        other => {
            return Err(ScenarioError::Validation {
                field: "initial_state.family".into(),
                message: format!("unknown family {other:?}"),
            })
        }
    };
    i.finish()?;

    let mut d = section("dynamics");
    let dynamics = DynamicsParams {
        dt: d.get_f64("dt", 1e-3)?,
        t_final: d.require_f64("t_final")?,
        snapshot_every: d.get_usize("snapshot_every", 100)?,
    };
    d.finish()?;

    let mut m = section("masses");
    let mass = m.get_f64("mass", 1.0)?;
    m.finish()?;

    let mut b = section("bohm");
    let bohm = if raw.sections.contains_key("bohm") {
        let n_trajectories = b.require_usize("n_trajectories")?;
        Some(BohmParams { n_trajectories })
    } else {
        None
    };
    b.finish()?;

    let mut w = section("grw");
    let grw = if raw.sections.contains_key("grw") {
        let lambda = w.require_f64("lambda")?;
        let sigma = w.require_f64("sigma")?;
        let measurement_time = match w.get_str("measurement_time") {
            Some(v) => Some(w.parse::<f64>("measurement_time", v)?),
            None => None,
        };
        let measurement_particle = match w.get_str("measurement_particle") {
            Some(v) => Some(w.parse::<usize>("measurement_particle", v)?),
            None => None,
        };
        Some(GrwScenarioParams {
            lambda,
            sigma,
            measurement_time,
            measurement_particle,
        })
    } else {
        None
    };
    w.finish()?;

    let spec = ScenarioSpec {
        name,
        mode,
        seed,
        grid,
        potential,
        initial_state,
        dynamics,
        mass,
        bohm,
        grw,
    };
    spec.validate()?;
    Ok(spec)
}
