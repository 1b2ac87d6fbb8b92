use serde::{Deserialize, Serialize};

use crate::run::{estimate, Method, RunOptions};
use crate::target::{Loaded, Target};
use crate::CliError;

/// One (method, ε) cell of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub classifier: String,
    pub method: Method,
    pub epsilon: f64,
    pub asd: Option<f64>,
    pub total_queries: u64,
    pub wall_time: f64,
    pub termination: String,
}

/// Runs EDGE and the grid at each ε and scores both against one shared
/// reference per ε. `base` supplies seeds, budget and reference cell.
pub fn compare(
    loaded: &Loaded,
    target: &Target,
    epsilons: &[f64],
    base: &RunOptions,
) -> Result<Vec<CompareRow>, CliError> {
    if epsilons.is_empty() {
        return Err(CliError::Input("no epsilons given".into()));
    }
    let mut rows = Vec::with_capacity(2 * epsilons.len());
    for &epsilon in epsilons {
        let opts = RunOptions {
            epsilon,
            log_queries: false,
            ..base.clone()
        };
        let cell = opts.reference_cell();
        let reference = loaded.reference(epsilon, cell, opts.seeds)?;
        for method in [Method::Edge, Method::Grid] {
            let opts = match method {
                Method::Edge => opts.clone(),
                Method::Grid => RunOptions {
                    seeds: None,
                    max_queries: None,
                    ..opts.clone()
                },
            };
            let mut outcome = estimate(loaded, target, method, &opts)?;
            outcome.score(reference.clone(), cell)?;
            let r = outcome.report;
            rows.push(CompareRow {
                classifier: r.classifier,
                method,
                epsilon,
                asd: r.asd,
                total_queries: r.total_queries,
                wall_time: r.wall_time,
                termination: r.termination,
            });
        }
    }
    Ok(rows)
}

/// Fixed-width text table of the rows.
pub fn render_table(rows: &[CompareRow]) -> String {
    let header = [
        "classifier",
        "method",
        "epsilon",
        "ASD",
        "samples",
        "time (s)",
        "termination",
    ];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.classifier.clone(),
                r.method.to_string(),
                r.epsilon.to_string(),
                r.asd
                    .map(|a| format!("{a:.4}"))
                    .unwrap_or_else(|| "-".into()),
                r.total_queries.to_string(),
                format!("{:.4}", r.wall_time),
                r.termination.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |fields: &[String]| {
        let mut out = String::new();
        for (k, (f, w)) in fields.iter().zip(widths).enumerate() {
            if k > 0 {
                out.push_str("  ");
            }
            // Text left-aligned, numbers right-aligned.
            if (2..=5).contains(&k) {
                out.push_str(&format!("{f:>w$}"));
            } else {
                out.push_str(&format!("{f:<w$}"));
            }
        }
        out.trim_end().to_owned() + "\n"
    };
    let mut out = line(&header.map(String::from));
    out.push_str(&line(&widths.map(|w| "-".repeat(w))));
    for row in &cells {
        out.push_str(&line(row));
    }
    out
}
