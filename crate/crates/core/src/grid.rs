//! Naïve ε-spaced lattice sampler, the baseline that shares the ε-guarantee.

use rayon::prelude::*;
use thiserror::Error;

use crate::classifier::{Classifier, Label};
use crate::geometry::{Domain, Point2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("epsilon must be positive and finite (got {0})")]
    InvalidEpsilon(f64),
}

/// Labels of every lattice node plus the detected boundary points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub nx: usize,
    pub ny: usize,
    pub epsilon: f64,
    pub origin: Point2,
    /// Row-major labels, `labels[j * nx + i]` for node `(i, j)`.
    pub labels: Vec<Label>,
    pub inner: Vec<Point2>,
    pub outer: Vec<Point2>,
    pub total_queries: u64,
}

impl GridResult {
    pub fn node(&self, i: usize, j: usize) -> Point2 {
        lattice_node(self.origin, self.epsilon, i, j)
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[j * self.nx + i]
    }
}

/// Number of ε-spaced nodes covering `[lo, hi]` inclusive of both ends.
///
/// A side that is a multiple of ε up to round-off counts as exact.
pub fn lattice_count(lo: f64, hi: f64, epsilon: f64) -> usize {
    let cells = (hi - lo) / epsilon;
    let nearest = cells.round();
    let cells = if (cells - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        cells.floor()
    };
    cells as usize + 1
}

fn lattice_node(origin: Point2, epsilon: f64, i: usize, j: usize) -> Point2 {
    Point2::new(origin.x + i as f64 * epsilon, origin.y + j as f64 * epsilon)
}

/// Queries every node of the ε-lattice anchored at the lower-left corner and
/// flags nodes with an opposite-label 4-neighbour.
pub fn grid_sample(c: &Classifier, domain: &Domain, epsilon: f64) -> Result<GridResult, GridError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(GridError::InvalidEpsilon(epsilon));
    }
    let nx = lattice_count(domain.x_min, domain.x_max, epsilon);
    let ny = lattice_count(domain.y_min, domain.y_max, epsilon);
    let origin = Point2::new(domain.x_min, domain.y_min);
    let start = c.query_count();

    let labels: Vec<Label> = (0..nx * ny)
        .into_par_iter()
        .map(|k| c.query(lattice_node(origin, epsilon, k % nx, k / nx)))
        .collect();

    let at = |i: usize, j: usize| labels[j * nx + i];
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let here = at(i, j);
            let transition = (i > 0 && at(i - 1, j) != here)
                || (i + 1 < nx && at(i + 1, j) != here)
                || (j > 0 && at(i, j - 1) != here)
                || (j + 1 < ny && at(i, j + 1) != here);
            if transition {
                let p = lattice_node(origin, epsilon, i, j);
                if here {
                    inner.push(p);
                } else {
                    outer.push(p);
                }
            }
        }
    }

    Ok(GridResult {
        nx,
        ny,
        epsilon,
        origin,
        labels,
        inner,
        outer,
        total_queries: c.query_count() - start,
    })
}
