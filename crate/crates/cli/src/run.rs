use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use epsedge_core::{
    asd_two_sided, grid_sample, run_edge, Domain, EdgeConfig, Label, Point2, ReferenceBoundary,
};
use serde::{Deserialize, Serialize};

use crate::output::PointRow;
use crate::target::{Loaded, Target};
use crate::{exit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Edge,
    Grid,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Edge => "edge",
            Method::Grid => "grid",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge" => Ok(Method::Edge),
            "grid" => Ok(Method::Grid),
            _ => Err(format!("unknown method '{s}' (expected edge or grid)")),
        }
    }
}

/// Parses `x,y`.
pub fn parse_point(s: &str) -> Result<Point2, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,y (got '{s}')"))?;
    let coord = |v: &str| {
        v.trim()
            .parse::<f64>()
            .ok()
            .filter(|c| c.is_finite())
            .ok_or_else(|| format!("'{v}' is not a finite number"))
    };
    Ok(Point2::new(coord(x)?, coord(y)?))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub epsilon: f64,
    /// Interior and exterior seeds; EDGE searches for a pair when absent.
    pub seeds: Option<(Point2, Point2)>,
    pub max_queries: Option<u64>,
    /// Reference resolution; ε/10 when absent.
    pub reference_cell: Option<f64>,
    pub log_queries: bool,
}

impl RunOptions {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    pub fn reference_cell(&self) -> f64 {
        self.reference_cell.unwrap_or(self.epsilon / 10.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub points: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub queries: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceInfo {
    pub cell: f64,
    pub slack: f64,
    pub vertices: usize,
}

/// Machine-readable summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub method: Method,
    pub classifier: String,
    pub epsilon: f64,
    pub asd: Option<f64>,
    pub reference: Option<ReferenceInfo>,
    pub total_queries: u64,
    pub wall_time: f64,
    pub termination: String,
    pub inner_points: usize,
    pub outer_points: usize,
    pub outputs: OutputPaths,
}

impl RunReport {
    /// 0 for a closed loop or a completed grid, otherwise the code for the
    /// way the walk stopped.
    pub fn exit_code(&self) -> i32 {
        match self.termination.as_str() {
            "closed_loop" | "complete" => exit::SUCCESS,
            "budget_exhausted" => exit::BUDGET_EXHAUSTED,
            _ => exit::GEOMETRY,
        }
    }
}

pub struct RunOutcome {
    pub report: RunReport,
    pub domain: Domain,
    pub inner: Vec<Point2>,
    pub outer: Vec<Point2>,
    /// Estimate points in walk order (EDGE) or inner then outer (grid).
    pub points: Vec<PointRow>,
    /// Every classifier query in issue order, when logging was requested.
    pub queries: Vec<(Point2, Label)>,
    pub reference: Option<ReferenceBoundary>,
}

impl RunOutcome {
    /// Scores the estimate against `reference`.
    pub fn score(&mut self, reference: ReferenceBoundary, cell: f64) -> Result<(), CliError> {
        self.report.asd = Some(asd_two_sided(&self.inner, &self.outer, &reference)?);
        self.report.reference = Some(ReferenceInfo {
            cell,
            slack: reference.slack,
            vertices: reference.vertices().len(),
        });
        self.reference = Some(reference);
        Ok(())
    }
}

/// Runs the estimator without scoring it. The wall time covers the
/// estimation call only.
pub fn estimate(
    loaded: &Loaded,
    target: &Target,
    method: Method,
    opts: &RunOptions,
) -> Result<RunOutcome, CliError> {
    let mut classifier = loaded.classifier()?;
    if opts.log_queries {
        classifier = classifier.with_query_log();
    }
    let domain = *classifier.domain();
    let (inner, outer, points, wall_time, termination) = match method {
        Method::Edge => {
            let mut config = EdgeConfig::new(opts.epsilon);
            config.max_queries = opts.max_queries;
            if let Some((a, b)) = opts.seeds {
                config = config.with_seeds(a, b);
            }
            config.validate(&domain)?;
            let started = Instant::now();
            let est = run_edge(&classifier, &config)?;
            let wall = started.elapsed().as_secs_f64();
            let points = est
                .sets
                .walk_order()
                .enumerate()
                .map(|(order, (p, label))| PointRow::new(p, label, order))
                .collect();
            let termination = est.termination;
            (
                est.sets.inner,
                est.sets.outer,
                points,
                wall,
                termination.as_str().to_owned(),
            )
        }
        Method::Grid => {
            if opts.seeds.is_some() || opts.max_queries.is_some() {
                return Err(CliError::Input(
                    "seeds and --max-queries only apply to edge".into(),
                ));
            }
            let started = Instant::now();
            let g = grid_sample(&classifier, &domain, opts.epsilon)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let wall = started.elapsed().as_secs_f64();
            let points = g
                .inner
                .iter()
                .map(|&p| (p, true))
                .chain(g.outer.iter().map(|&p| (p, false)))
                .enumerate()
                .map(|(order, (p, label))| PointRow::new(p, label, order))
                .collect();
            (g.inner, g.outer, points, wall, "complete".to_owned())
        }
    };
    let report = RunReport {
        method,
        classifier: target.to_string(),
        epsilon: opts.epsilon,
        asd: None,
        reference: None,
        total_queries: classifier.query_count(),
        wall_time,
        termination,
        inner_points: inner.len(),
        outer_points: outer.len(),
        outputs: OutputPaths::default(),
    };
    Ok(RunOutcome {
        report,
        domain,
        inner,
        outer,
        points,
        queries: classifier.query_log(),
        reference: None,
    })
}

/// Estimates and scores against the target's reference boundary.
pub fn execute(
    loaded: &Loaded,
    target: &Target,
    method: Method,
    opts: &RunOptions,
) -> Result<RunOutcome, CliError> {
    let mut outcome = estimate(loaded, target, method, opts)?;
    let cell = opts.reference_cell();
    let reference = loaded.reference(opts.epsilon, cell, opts.seeds)?;
    outcome.score(reference, cell)?;
    Ok(outcome)
}
