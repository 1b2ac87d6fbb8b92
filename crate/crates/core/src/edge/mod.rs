//! ε-neighborhood boundary estimation.
//!
//! A run bisects between an interior and an exterior seed until the bracket
//! is shorter than ε, then walks the decision boundary by repeatedly
//! stepping to the intersection of the two ε-circles centred on the latest
//! interior and exterior points. Where the boundary leaves the domain the
//! walk follows the domain perimeter in ε steps until it finds an exterior
//! point again.

mod bisect;
mod domain_walk;
mod seed;
mod walk;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{Classifier, Label};
use crate::geometry::{distance, Domain, Point2};

pub use bisect::{bisect, BisectionTrace};
pub use domain_walk::{domain_boundary_walk, DomainWalkError};
pub use seed::find_seeds;
pub use walk::{decision_boundary_walk, MIN_CLOSURE_STEPS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EdgeError {
    #[error("epsilon must be positive and smaller than both domain sides (got {0})")]
    InvalidEpsilon(f64),
    #[error("non-finite point {0}")]
    NonFinite(Point2),
    #[error("seed {point} was expected to be {expected} but the classifier disagrees")]
    InvalidSeed {
        point: Point2,
        expected: &'static str,
    },
    #[error("query budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error(
        "no decision boundary found: every one of {queries} lattice queries returned label {label}"
    )]
    NoBoundaryFound { queries: u64, label: u8 },
}

/// Why a walk stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The walk came back within ε of its starting pair.
    ClosedLoop,
    BudgetExhausted,
    Failed(WalkFailure),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkFailure {
    /// The same test point was produced twice in a row.
    Stalled,
    /// The domain walk went all the way round without meeting an exterior point.
    PerimeterTraversed,
    /// No usable circle intersection even after re-bisecting the bracket.
    Degenerate,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ClosedLoop => "closed_loop",
            Termination::BudgetExhausted => "budget_exhausted",
            Termination::Failed(WalkFailure::Stalled) => "failed_stalled",
            Termination::Failed(WalkFailure::PerimeterTraversed) => "failed_perimeter_traversed",
            Termination::Failed(WalkFailure::Degenerate) => "failed_degenerate",
        }
    }
}

/// Inner and outer point sets in the order the walk appended them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundarySets {
    pub inner: Vec<Point2>,
    pub outer: Vec<Point2>,
    /// Label of the k-th appended point, across both sets.
    pub order: Vec<Label>,
}

impl BoundarySets {
    pub fn new(inner_start: Point2, outer_start: Point2) -> Self {
        Self {
            inner: vec![inner_start],
            outer: vec![outer_start],
            order: vec![true, false],
        }
    }

    pub fn push(&mut self, p: Point2, label: Label) {
        if label {
            self.inner.push(p);
        } else {
            self.outer.push(p);
        }
        self.order.push(label);
    }

    /// Latest interior point.
    ///
    /// # Panics
    /// If the inner set is empty, which [`BoundarySets::new`] rules out.
    pub fn inner_end(&self) -> Point2 {
        *self.inner.last().expect("inner set is never empty")
    }

    pub fn outer_end(&self) -> Point2 {
        *self.outer.last().expect("outer set is never empty")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Points in append order with their labels.
    pub fn walk_order(&self) -> impl Iterator<Item = (Point2, Label)> + '_ {
        let (mut i, mut o) = (0, 0);
        self.order.iter().map(move |&label| {
            if label {
                i += 1;
                (self.inner[i - 1], true)
            } else {
                o += 1;
                (self.outer[o - 1], false)
            }
        })
    }

    /// Appended points from position `from` (in append order) onward.
    pub(crate) fn tail_from(&self, from: usize) -> impl Iterator<Item = Point2> + '_ {
        let tail = &self.order[from.min(self.order.len())..];
        let tail_inner = tail.iter().filter(|&&label| label).count();
        let mut i = self.inner.len() - tail_inner;
        let mut o = self.outer.len() - (tail.len() - tail_inner);
        tail.iter().map(move |&label| {
            if label {
                i += 1;
                self.inner[i - 1]
            } else {
                o += 1;
                self.outer[o - 1]
            }
        })
    }
}

/// The result of a run: inner and outer approximating sets plus accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEstimate {
    pub sets: BoundarySets,
    pub epsilon: f64,
    pub total_queries: u64,
    pub termination: Termination,
}

impl BoundaryEstimate {
    pub fn inner(&self) -> &[Point2] {
        &self.sets.inner
    }

    pub fn outer(&self) -> &[Point2] {
        &self.sets.outer
    }

    /// Midpoints of consecutive interior/exterior brackets no longer than
    /// `max_gap`, in walk order. Each lies within `max_gap / 2` of the
    /// boundary.
    pub fn bracket_midpoints(&self, max_gap: f64) -> Vec<Point2> {
        let mut last_in: Option<Point2> = None;
        let mut last_out: Option<Point2> = None;
        let mut mids = Vec::new();
        for (p, label) in self.sets.walk_order() {
            if label {
                last_in = Some(p);
            } else {
                last_out = Some(p);
            }
            if let (Some(a), Some(b)) = (last_in, last_out) {
                if distance(a, b) <= max_gap {
                    mids.push(a.midpoint(b));
                }
            }
        }
        mids
    }
}

/// Run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeConfig {
    pub epsilon: f64,
    /// Query budget for the whole run; defaults to `10 · perimeter / ε`.
    pub max_queries: Option<u64>,
    pub seed_interior: Option<Point2>,
    pub seed_exterior: Option<Point2>,
}

impl EdgeConfig {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            max_queries: None,
            seed_interior: None,
            seed_exterior: None,
        }
    }

    pub fn with_seeds(mut self, interior: Point2, exterior: Point2) -> Self {
        self.seed_interior = Some(interior);
        self.seed_exterior = Some(exterior);
        self
    }

    pub fn with_max_queries(mut self, max_queries: u64) -> Self {
        self.max_queries = Some(max_queries);
        self
    }

    pub fn validate(&self, domain: &Domain) -> Result<(), EdgeError> {
        let eps = self.epsilon;
        if !(eps.is_finite() && eps > 0.0 && eps < domain.width().min(domain.height())) {
            return Err(EdgeError::InvalidEpsilon(eps));
        }
        for p in [self.seed_interior, self.seed_exterior]
            .into_iter()
            .flatten()
        {
            if !p.is_finite() {
                return Err(EdgeError::NonFinite(p));
            }
        }
        Ok(())
    }

    pub fn budget(&self, domain: &Domain) -> u64 {
        self.max_queries
            .unwrap_or_else(|| default_budget(domain, self.epsilon))
    }
}

pub fn default_budget(domain: &Domain, epsilon: f64) -> u64 {
    (10.0 * domain.perimeter() / epsilon).ceil() as u64
}

/// Caps the number of classifier queries issued through it.
pub(crate) struct Budget<'a> {
    classifier: &'a Classifier,
    limit: u64,
    granted: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted;

impl<'a> Budget<'a> {
    pub(crate) fn new(classifier: &'a Classifier, max_queries: u64) -> Self {
        Self {
            classifier,
            limit: classifier.query_count().saturating_add(max_queries),
            granted: max_queries,
        }
    }

    pub(crate) fn classifier(&self) -> &'a Classifier {
        self.classifier
    }

    pub(crate) fn query(&self, p: Point2) -> Result<Label, Exhausted> {
        if self.classifier.query_count() >= self.limit {
            return Err(Exhausted);
        }
        Ok(self.classifier.query(p))
    }

    pub(crate) fn granted(&self) -> u64 {
        self.granted
    }
}

/// Seeds, bisects and walks. `total_queries` covers every query of the run,
/// including the seed search and the bisection.
pub fn run_edge(c: &Classifier, config: &EdgeConfig) -> Result<BoundaryEstimate, EdgeError> {
    let domain = *c.domain();
    config.validate(&domain)?;
    let start = c.query_count();
    let budget = Budget::new(c, config.budget(&domain));

    let (seed_in, seed_out) =
        seed::find_seeds_with(&budget, config.seed_interior, config.seed_exterior)?;
    let trace = bisect::bisect_with(&budget, seed_in, seed_out, config.epsilon)?;
    let mut estimate = walk::walk_with(&budget, &trace, config.epsilon);
    estimate.total_queries = c.query_count() - start;
    Ok(estimate)
}
