//! Artifact files. Floats are written with Rust's shortest round-trip
//! formatting, so re-reading a file reproduces every coordinate exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use epsedge_core::{Label, Point2};
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::compare::CompareRow;
use crate::run::RunOutcome;
use crate::{svg, CliError};

pub const POINTS_HEADER: &str = "x,y,label,order";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRow {
    pub point: Point2,
    pub label: Label,
    pub order: usize,
}

impl PointRow {
    pub fn new(point: Point2, label: Label, order: usize) -> Self {
        Self {
            point,
            label,
            order,
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let mut tmp = NamedTempFile::new_in(dir)
        .map_err(|e| CliError::io(format!("temp file in {}", dir.display()), e))?;
    tmp.write_all(contents)
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(format!("renaming into {}", path.display()), e.error))?;
    Ok(())
}

pub fn points_csv(rows: &[PointRow]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(POINTS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.point.x,
            r.point.y,
            u8::from(r.label),
            r.order
        ));
    }
    out
}

pub fn parse_points_csv(text: &str) -> Result<Vec<PointRow>, CliError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == POINTS_HEADER => {}
        _ => {
            return Err(CliError::Input(format!(
                "points file must start with '{POINTS_HEADER}'"
            )))
        }
    }
    let mut rows = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| CliError::Input(format!("points line {}: {what}", n + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [x, y, label, order] = fields[..] else {
            return Err(bad("expected 4 columns"));
        };
        let coord = |v: &str| v.parse::<f64>().map_err(|_| bad("bad coordinate"));
        let label = match label {
            "1" => true,
            "0" => false,
            _ => return Err(bad("label must be 0 or 1")),
        };
        let order = order.parse::<usize>().map_err(|_| bad("bad order index"))?;
        rows.push(PointRow::new(
            Point2::new(coord(x)?, coord(y)?),
            label,
            order,
        ));
    }
    Ok(rows)
}

/// Splits rows back into inner and outer sets, each in order-index order.
pub fn split_sets(rows: &[PointRow]) -> (Vec<Point2>, Vec<Point2>) {
    let mut sorted = rows.to_vec();
    sorted.sort_by_key(|r| r.order);
    let inner = sorted.iter().filter(|r| r.label).map(|r| r.point).collect();
    let outer = sorted
        .iter()
        .filter(|r| !r.label)
        .map(|r| r.point)
        .collect();
    (inner, outer)
}

pub fn queries_csv(queries: &[(Point2, Label)]) -> String {
    let rows: Vec<PointRow> = queries
        .iter()
        .enumerate()
        .map(|(k, &(p, label))| PointRow::new(p, label, k))
        .collect();
    points_csv(&rows)
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub const TABLE_HEADER: &str = "classifier,method,epsilon,asd,total_queries,wall_time,termination";

pub fn table_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let asd = r.asd.map(|a| a.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.classifier, r.method, r.epsilon, asd, r.total_queries, r.wall_time, r.termination
        ));
    }
    out
}

/// Writes points.csv, report.json and, on request, plot.svg and
/// queries.csv into `dir`, recording the paths in the report.
pub fn write_run(outcome: &mut RunOutcome, dir: &Path, plot: bool) -> Result<(), CliError> {
    let points = dir.join("points.csv");
    write_atomic(&points, points_csv(&outcome.points).as_bytes())?;
    outcome.report.outputs.points = Some(points);
    if !outcome.queries.is_empty() {
        let queries = dir.join("queries.csv");
        write_atomic(&queries, queries_csv(&outcome.queries).as_bytes())?;
        outcome.report.outputs.queries = Some(queries);
    }
    if plot {
        // The full query log when there is one, else the estimate itself.
        let shown: Vec<(Point2, Label)> = if outcome.queries.is_empty() {
            outcome.points.iter().map(|r| (r.point, r.label)).collect()
        } else {
            outcome.queries.clone()
        };
        let r = &outcome.report;
        let title = format!("{} {} ε={}", r.method, r.classifier, r.epsilon);
        let path = dir.join("plot.svg");
        write_atomic(
            &path,
            svg::render(&title, outcome.domain, &shown, outcome.reference.as_ref()).as_bytes(),
        )?;
        outcome.report.outputs.plot = Some(path);
    }
    let report = dir.join("report.json");
    outcome.report.outputs.report = Some(report.clone());
    write_atomic(&report, json(&outcome.report).as_bytes())?;
    Ok(())
}
