//! Reference boundaries and the average symmetric surface distance (ASD).

mod index;
mod marching;

use rayon::prelude::*;
use thiserror::Error;

use crate::classifier::Classifier;
use crate::edge::{run_edge, EdgeConfig, EdgeError};
use crate::geometry::{distance, Domain, Point2};

pub use index::PointIndex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("the level set is empty inside the domain")]
    EmptyContour,
    #[error("ASD needs non-empty point sets")]
    EmptySet,
    #[error("reference epsilon {reference} must be at most a tenth of the evaluated epsilon {evaluated}")]
    ReferenceTooCoarse { reference: f64, evaluated: f64 },
    #[error("reference cell must be positive and finite (got {0})")]
    InvalidCell(f64),
    #[error(transparent)]
    Edge(#[from] EdgeError),
}

/// A dense polyline approximation of the true decision boundary.
#[derive(Debug, Clone)]
pub struct ReferenceBoundary {
    polylines: Vec<Polyline>,
    /// Largest gap between consecutive vertices of a polyline.
    pub spacing: f64,
    /// Bound on the distance from any vertex to the true boundary.
    pub slack: f64,
    // Vertex k of the flattened set sits at polylines[owner[k].0][owner[k].1].
    owner: Vec<(usize, usize)>,
    index: PointIndex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point2>,
    pub closed: bool,
}

impl ReferenceBoundary {
    pub fn from_polylines(polylines: Vec<Polyline>, slack: f64) -> Result<Self, MetricsError> {
        let polylines: Vec<Polyline> = polylines
            .into_iter()
            .filter(|p| !p.points.is_empty())
            .collect();
        if polylines.is_empty() {
            return Err(MetricsError::EmptyContour);
        }
        let mut spacing: f64 = 0.0;
        let mut owner = Vec::new();
        let mut flat = Vec::new();
        for (pi, poly) in polylines.iter().enumerate() {
            for w in poly.points.windows(2) {
                spacing = spacing.max(distance(w[0], w[1]));
            }
            if poly.closed && poly.points.len() > 2 {
                spacing = spacing.max(distance(poly.points[0], *poly.points.last().unwrap()));
            }
            for (k, &p) in poly.points.iter().enumerate() {
                owner.push((pi, k));
                flat.push(p);
            }
        }
        Ok(Self {
            index: PointIndex::new(&flat),
            polylines,
            spacing,
            slack,
            owner,
        })
    }

    pub fn polylines(&self) -> &[Polyline] {
        &self.polylines
    }

    /// All polyline vertices; this is the finite stand-in for the boundary
    /// in the ASD sums.
    pub fn vertices(&self) -> &[Point2] {
        self.index.points()
    }

    pub fn vertex_index(&self) -> &PointIndex {
        &self.index
    }

    /// Total polyline length.
    pub fn length(&self) -> f64 {
        self.polylines
            .iter()
            .map(|p| {
                let open: f64 = p.points.windows(2).map(|w| distance(w[0], w[1])).sum();
                let closing = if p.closed && p.points.len() > 2 {
                    distance(p.points[0], *p.points.last().unwrap())
                } else {
                    0.0
                };
                open + closing
            })
            .sum()
    }

    /// Euclidean distance from `p` to the polyline (segments, not just vertices).
    pub fn distance_to(&self, p: Point2) -> f64 {
        let (_, dv) = self.index.nearest(p);
        let mut best = dv;
        for k in self.index.within(p, dv + self.spacing) {
            let (pi, vi) = self.owner[k];
            let poly = &self.polylines[pi];
            let n = poly.points.len();
            let a = poly.points[vi];
            let next = if vi + 1 < n {
                Some(poly.points[vi + 1])
            } else if poly.closed && n > 2 {
                Some(poly.points[0])
            } else {
                None
            };
            if let Some(b) = next {
                best = best.min(point_segment_distance(p, a, b));
            }
            if vi > 0 {
                best = best.min(point_segment_distance(p, poly.points[vi - 1], a));
            }
        }
        best
    }
}

fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return distance(p, a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    distance(p, a + ab * t)
}

/// Marching-squares contour of `f = threshold` on a lattice of spacing at
/// most `cell`, with linear interpolation along lattice edges. The declared
/// slack is `cell`.
pub fn reference_from_scalar<F>(
    f: F,
    threshold: f64,
    domain: &Domain,
    cell: f64,
) -> Result<ReferenceBoundary, MetricsError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    scalar_reference(f, threshold, domain, cell, false)
}

/// Like [`reference_from_scalar`], plus the stretches of the domain
/// perimeter where the level set is interior, so the reference traces the
/// whole boundary of the interior region clipped to the domain.
pub fn region_reference_from_scalar<F>(
    f: F,
    threshold: f64,
    domain: &Domain,
    cell: f64,
) -> Result<ReferenceBoundary, MetricsError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    scalar_reference(f, threshold, domain, cell, true)
}

fn scalar_reference<F>(
    f: F,
    threshold: f64,
    domain: &Domain,
    cell: f64,
    with_perimeter: bool,
) -> Result<ReferenceBoundary, MetricsError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if !(cell.is_finite() && cell > 0.0) {
        return Err(MetricsError::InvalidCell(cell));
    }
    let grid = marching::ScalarGrid::sample(f, threshold, domain, cell);
    let mut pieces = grid.contours();
    if with_perimeter {
        pieces.extend(grid.perimeter_runs());
    }
    let polylines = pieces
        .into_iter()
        .map(|(points, closed)| Polyline { points, closed })
        .collect();
    ReferenceBoundary::from_polylines(polylines, cell)
}

/// Reference from a fine EDGE run on the classifier itself: the midpoints
/// of interior/exterior brackets no longer than `ε_ref`. Breaks the polyline
/// wherever consecutive midpoints are more than `2 ε_ref` apart (stretches
/// spent walking the domain perimeter). The declared slack is `ε_ref`.
pub fn reference_from_blackbox(
    c: &Classifier,
    config: &EdgeConfig,
    evaluated_epsilon: f64,
) -> Result<ReferenceBoundary, MetricsError> {
    let reference = config.epsilon;
    if reference > evaluated_epsilon / 10.0 * (1.0 + 1e-9) {
        return Err(MetricsError::ReferenceTooCoarse {
            reference,
            evaluated: evaluated_epsilon,
        });
    }
    let estimate = run_edge(c, config)?;
    let mids = estimate.bracket_midpoints(reference * (1.0 + 1e-9));
    let mut polylines: Vec<Polyline> = Vec::new();
    let mut current: Vec<Point2> = Vec::new();
    for p in mids {
        if let Some(&last) = current.last() {
            if distance(last, p) > 2.0 * reference {
                polylines.push(Polyline {
                    points: std::mem::take(&mut current),
                    closed: false,
                });
            }
        }
        current.push(p);
    }
    polylines.push(Polyline {
        points: current,
        closed: false,
    });
    ReferenceBoundary::from_polylines(polylines, reference)
}

/// One-sided term of the ASD: nearest-vertex distances from every estimate
/// point to the reference plus from every reference vertex to the estimate,
/// divided by the combined point count.
pub fn asd_one_sided(
    estimate: &[Point2],
    reference: &ReferenceBoundary,
) -> Result<f64, MetricsError> {
    if estimate.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let estimate_index = PointIndex::new(estimate);
    let to_reference: Vec<f64> = estimate
        .par_iter()
        .map(|&p| reference.vertex_index().nearest(p).1)
        .collect();
    let to_estimate: Vec<f64> = reference
        .vertices()
        .par_iter()
        .map(|&q| estimate_index.nearest(q).1)
        .collect();
    let total: f64 = to_reference.iter().sum::<f64>() + to_estimate.iter().sum::<f64>();
    Ok(total / (estimate.len() + reference.vertices().len()) as f64)
}

/// Sum of the one-sided ASD of the outer and the inner set.
pub fn asd_two_sided(
    inner: &[Point2],
    outer: &[Point2],
    reference: &ReferenceBoundary,
) -> Result<f64, MetricsError> {
    Ok(asd_one_sided(outer, reference)? + asd_one_sided(inner, reference)?)
}
