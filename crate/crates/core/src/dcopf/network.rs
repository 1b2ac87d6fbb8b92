use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Domain, GeometryError};

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing section [{0}]")]
    MissingSection(&'static str),
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> NetworkError {
    NetworkError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub id: u32,
    pub bus: u32,
    /// Cost per unit of output.
    pub cost: f64,
    pub p_min: f64,
    pub p_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub from: u32,
    pub to: u32,
    /// Series susceptance `b_ij` in per-unit; flow is `-b_ij (θ_i - θ_j)`.
    pub susceptance: f64,
    /// Symmetric flow limit; `inf` for an unconstrained line.
    pub flow_limit: f64,
    /// Bounds on `θ_i - θ_j` in radians.
    pub angle_min: f64,
    pub angle_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Load {
    pub bus: u32,
    pub p_d: f64,
}

/// A generator whose output is an externally fixed parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewableSlot {
    pub generator: u32,
    pub rating: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub metadata: BTreeMap<String, String>,
    pub buses: Vec<u32>,
    pub generators: Vec<Generator>,
    pub lines: Vec<Line>,
    pub loads: Vec<Load>,
    /// The two parameter-controlled injections, in (x, y) order.
    pub renewable_slots: [RenewableSlot; 2],
}

impl Network {
    pub fn name(&self) -> &str {
        self.metadata
            .get("name")
            .map(String::as_str)
            .unwrap_or("network")
    }

    pub fn is_renewable(&self, generator: u32) -> bool {
        self.renewable_slots
            .iter()
            .any(|s| s.generator == generator)
    }

    pub fn dispatchable(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(|g| !self.is_renewable(g.id))
    }

    pub fn generator(&self, id: u32) -> Option<&Generator> {
        self.generators.iter().find(|g| g.id == id)
    }

    /// `[0, rating_x] × [0, rating_y]`.
    pub fn injection_domain(&self) -> Result<Domain, GeometryError> {
        Domain::new(
            0.0,
            self.renewable_slots[0].rating,
            0.0,
            self.renewable_slots[1].rating,
        )
    }

    /// Lowest-numbered bus hosting a dispatchable generator; its angle is
    /// pinned to zero.
    pub fn reference_bus(&self) -> u32 {
        self.dispatchable().map(|g| g.bus).min().unwrap_or_else(|| {
            *self
                .buses
                .iter()
                .min()
                .expect("validated network has buses")
        })
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.buses.is_empty() {
            return Err(invalid("buses", "no buses"));
        }
        let mut buses = HashSet::new();
        for &b in &self.buses {
            if !buses.insert(b) {
                return Err(invalid(format!("bus {b}"), "duplicate bus id"));
            }
        }
        let mut generator_ids = HashSet::new();
        for g in &self.generators {
            let field = format!("generator {}", g.id);
            if !generator_ids.insert(g.id) {
                return Err(invalid(field, "duplicate generator id"));
            }
            if !buses.contains(&g.bus) {
                return Err(invalid(field, format!("references unknown bus {}", g.bus)));
            }
            if !(g.p_min.is_finite() && g.p_max.is_finite() && g.cost.is_finite()) {
                return Err(invalid(field, "non-finite cost or limits"));
            }
            if g.p_min > g.p_max {
                return Err(invalid(
                    field,
                    format!("p_min {} exceeds p_max {}", g.p_min, g.p_max),
                ));
            }
        }
        for (k, l) in self.lines.iter().enumerate() {
            let field = format!("line {} ({}-{})", k + 1, l.from, l.to);
            for bus in [l.from, l.to] {
                if !buses.contains(&bus) {
                    return Err(invalid(field, format!("references unknown bus {bus}")));
                }
            }
            if l.from == l.to {
                return Err(invalid(field, "connects a bus to itself"));
            }
            if !l.susceptance.is_finite() || l.susceptance == 0.0 {
                return Err(invalid(field, "susceptance must be finite and non-zero"));
            }
            if l.flow_limit.is_nan() || l.flow_limit <= 0.0 {
                return Err(invalid(field, "flow limit must be positive"));
            }
            if l.angle_min.is_nan() || l.angle_max.is_nan() || l.angle_min > l.angle_max {
                return Err(invalid(field, "angle bounds are inverted"));
            }
        }
        for l in &self.loads {
            if !buses.contains(&l.bus) {
                return Err(invalid(
                    format!("load at bus {}", l.bus),
                    "references unknown bus",
                ));
            }
            if !l.p_d.is_finite() {
                return Err(invalid(
                    format!("load at bus {}", l.bus),
                    "non-finite demand",
                ));
            }
        }
        let [a, b] = &self.renewable_slots;
        if a.generator == b.generator {
            return Err(invalid(
                "renewable_slots",
                "both slots name the same generator",
            ));
        }
        for s in [a, b] {
            let field = format!("renewable slot {}", s.generator);
            if self.generator(s.generator).is_none() {
                return Err(invalid(field, "references unknown generator"));
            }
            if !(s.rating.is_finite() && s.rating > 0.0) {
                return Err(invalid(field, "rating must be positive"));
            }
        }
        Ok(())
    }
}

pub fn load_network(path: impl AsRef<Path>) -> Result<Network, NetworkError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| NetworkError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_network(&text)
}

const SECTIONS: [&str; 5] = ["buses", "generators", "lines", "loads", "renewable_slots"];

fn columns(section: &str) -> usize {
    match section {
        "buses" => 1,
        "generators" => 5,
        "lines" => 6,
        "loads" => 2,
        "renewable_slots" => 2,
        _ => unreachable!("section names are checked on entry"),
    }
}

/// Parses the sectioned network text format.
///
/// `#` starts a comment. `key = value` lines outside any section are kept
/// as metadata. Each `[section]` holds whitespace-separated rows.
pub fn parse_network(text: &str) -> Result<Network, NetworkError> {
    let mut metadata = BTreeMap::new();
    let mut rows: BTreeMap<&'static str, Vec<(usize, Vec<f64>)>> = BTreeMap::new();
    let mut section: Option<&'static str> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim();
            let known =
                SECTIONS
                    .iter()
                    .find(|&&s| s == name)
                    .ok_or_else(|| NetworkError::Parse {
                        line: line_no,
                        message: format!("unknown section [{name}]"),
                    })?;
            if rows.contains_key(known) {
                return Err(NetworkError::Parse {
                    line: line_no,
                    message: format!("section [{name}] appears twice"),
                });
            }
            rows.insert(known, Vec::new());
            section = Some(known);
            continue;
        }
        match section {
            None => {
                let (key, value) = line.split_once('=').ok_or_else(|| NetworkError::Parse {
                    line: line_no,
                    message: format!("expected `key = value` or a [section], found `{line}`"),
                })?;
                metadata.insert(key.trim().to_owned(), value.trim().to_owned());
            }
            Some(name) => {
                let values = line
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<f64>().map_err(|_| NetworkError::Parse {
                            line: line_no,
                            message: format!("`{tok}` is not a number"),
                        })
                    })
                    .collect::<Result<Vec<f64>, _>>()?;
                if values.len() != columns(name) {
                    return Err(NetworkError::Parse {
                        line: line_no,
                        message: format!(
                            "[{name}] rows have {} columns, found {}",
                            columns(name),
                            values.len()
                        ),
                    });
                }
                rows.get_mut(name)
                    .expect("section registered")
                    .push((line_no, values));
            }
        }
    }

    let mut take = |name: &'static str| rows.remove(name).ok_or(NetworkError::MissingSection(name));
    let bus_rows = take("buses")?;
    let gen_rows = take("generators")?;
    let line_rows = take("lines")?;
    let load_rows = take("loads")?;
    let slot_rows = take("renewable_slots")?;

    let buses = bus_rows
        .iter()
        .map(|(line, v)| as_id(v[0], *line))
        .collect::<Result<Vec<_>, _>>()?;
    let generators = gen_rows
        .iter()
        .map(|(line, v)| {
            Ok(Generator {
                id: as_id(v[0], *line)?,
                bus: as_id(v[1], *line)?,
                cost: v[2],
                p_min: v[3],
                p_max: v[4],
            })
        })
        .collect::<Result<Vec<_>, NetworkError>>()?;
    let lines = line_rows
        .iter()
        .map(|(line, v)| {
            Ok(Line {
                from: as_id(v[0], *line)?,
                to: as_id(v[1], *line)?,
                susceptance: v[2],
                flow_limit: v[3],
                angle_min: v[4],
                angle_max: v[5],
            })
        })
        .collect::<Result<Vec<_>, NetworkError>>()?;
    let loads = load_rows
        .iter()
        .map(|(line, v)| {
            Ok(Load {
                bus: as_id(v[0], *line)?,
                p_d: v[1],
            })
        })
        .collect::<Result<Vec<_>, NetworkError>>()?;
    let slots = slot_rows
        .iter()
        .map(|(line, v)| {
            Ok(RenewableSlot {
                generator: as_id(v[0], *line)?,
                rating: v[1],
            })
        })
        .collect::<Result<Vec<_>, NetworkError>>()?;
    let renewable_slots: [RenewableSlot; 2] = slots.try_into().map_err(|s: Vec<_>| {
        invalid(
            "renewable_slots",
            format!("expected exactly 2 slots, found {}", s.len()),
        )
    })?;

    let net = Network {
        metadata,
        buses,
        generators,
        lines,
        loads,
        renewable_slots,
    };
    net.validate()?;
    Ok(net)
}

fn as_id(v: f64, line: usize) -> Result<u32, NetworkError> {
    if v.fract() == 0.0 && v >= 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(NetworkError::Parse {
            line,
            message: format!("`{v}` is not a valid id"),
        })
    }
}
